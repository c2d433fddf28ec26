//! Experiment harness around the self-similar reference solution u = -x/t.
//!
//! A run integrates that initial profile with exact-solution boundaries
//! and reports per-layer max-norm errors; a sweep repeats the run across a
//! list of tau or h0 values (at fixed final time, respectively fixed
//! domain) and fits the log-log error slope.  Results are written as CSV
//! plus a plot script for an external plotting tool, with deterministic
//! byte-for-byte output for identical run parameters.

use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{FieldLayer, MIN_LAYER_NODES};
use crate::schemes::{log_log_slope, SchemeKind};
use crate::solver::{self, BoundaryClosure, StepConfig, Trajectory};

/// Final errors at or below this are reported as the exact regime, where
/// the scheme reproduces the reference solution to solver precision and
/// slopes carry no information.
pub const EXACT_REGIME_FLOOR: f64 = 1e-8;

/// The reference solution u = -x/t.
pub fn exact_solution(x: f64, t: f64) -> Result<f64> {
    if t == 0.0 {
        return Err(Error::SingularTime);
    }
    Ok(-x / t)
}

/// Max-norm error of a field layer against the reference solution.
/// Lengths must already agree; `t` must be nonzero.
pub fn linf_error(field: &FieldLayer, xs: &[f64], t: f64) -> f64 {
    debug_assert_eq!(field.len(), xs.len());
    field
        .values
        .iter()
        .zip(xs)
        .map(|(u, x)| (u + x / t).abs())
        .fold(0.0, f64::max)
}

/// Which parameter a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParameter {
    Tau,
    H0,
}

impl SweepParameter {
    pub fn label(&self) -> &'static str {
        match self {
            SweepParameter::Tau => "tau",
            SweepParameter::H0 => "h0",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
}

/// Everything a run needs.  Defaults reproduce the reference experiment:
/// t0 = 1, x in [-1, 1], h0 = tau = 0.1, ten steps, so |sigma/tau| <= 1
/// and the solution stays order one.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub scheme: SchemeKind,
    pub t0: f64,
    pub tau: f64,
    pub h0: f64,
    pub x0: f64,
    pub nodes: usize,
    pub steps: usize,
    pub sweep: Option<SweepSpec>,
    /// Output path prefix; `None` suppresses file emission.
    pub out_prefix: Option<PathBuf>,
    pub newton_tol: f64,
}

impl RunSpec {
    pub fn new(scheme: SchemeKind) -> Self {
        RunSpec {
            scheme,
            t0: 1.0,
            tau: 0.1,
            h0: 0.1,
            x0: -1.0,
            nodes: 21,
            steps: 10,
            sweep: None,
            out_prefix: None,
            newton_tol: solver::DEFAULT_NEWTON_TOL,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.t0 == 0.0 {
            return Err(Error::SingularTime);
        }
        if !(self.tau > 0.0) {
            return Err(Error::NonPositiveTimeStep(self.tau));
        }
        if !(self.h0 > 0.0) {
            return Err(Error::NonPositiveSpacing(self.h0));
        }
        if self.nodes < MIN_LAYER_NODES {
            return Err(Error::TooFewPoints { min: MIN_LAYER_NODES, got: self.nodes });
        }
        if self.steps == 0 {
            return Err(Error::TooFewPoints { min: 1, got: 0 });
        }
        Ok(())
    }
}

/// One sweep table row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub value: f64,
    /// NaN when the member run failed.
    pub final_linf: f64,
    /// Slope against the previous row; NaN for the first row and around
    /// failures.
    pub window_slope: f64,
}

/// Collated error data for a run or a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    /// Max-norm error per layer, initial layer included (runs only).
    pub per_step: Vec<f64>,
    /// Error on the last completed layer (runs), or of the last successful
    /// sweep member.
    pub final_linf: f64,
    /// Least-squares log-log slope across a sweep.
    pub slope: Option<f64>,
    pub sweep_points: Vec<SweepPoint>,
    /// All reported errors sit at or below [`EXACT_REGIME_FLOOR`].
    pub exact_regime: bool,
    /// (parameter value, error) per failed run; failures stop a run but
    /// not a sweep.
    pub failures: Vec<(f64, Error)>,
}

/// Report plus the raw trajectory of a single run.
#[derive(Debug)]
pub struct RunOutput {
    pub report: ErrorReport,
    pub trajectory: Trajectory,
}

fn prefixed(prefix: &Path, suffix: &str) -> PathBuf {
    PathBuf::from(format!("{}{}", prefix.display(), suffix))
}

fn csv_num(v: f64) -> String {
    if v.is_finite() {
        format!("{v}")
    } else {
        "nan".to_string()
    }
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    std::fs::write(path, text)?;
    Ok(())
}

fn write_solution_csv(tr: &Trajectory, path: &Path) -> Result<()> {
    let mut s = String::from("m,n,t,x,u,u_exact,abs_err\n");
    for m in 0..tr.mesh.num_layers() {
        let t = tr.mesh.times()[m];
        for (n, (&x, &u)) in tr.mesh.layer(m).iter().zip(&tr.fields[m].values).enumerate() {
            let ue = -x / t;
            s.push_str(&format!(
                "{m},{n},{},{},{},{},{}\n",
                csv_num(t),
                csv_num(x),
                csv_num(u),
                csv_num(ue),
                csv_num((u - ue).abs())
            ));
        }
    }
    write_text(path, &s)
}

fn write_mesh_csv(tr: &Trajectory, path: &Path) -> Result<()> {
    let mut s = String::from("m,n,t,x\n");
    for m in 0..tr.mesh.num_layers() {
        let t = tr.mesh.times()[m];
        for (n, &x) in tr.mesh.layer(m).iter().enumerate() {
            s.push_str(&format!("{m},{n},{},{}\n", csv_num(t), csv_num(x)));
        }
    }
    write_text(path, &s)
}

fn write_error_csv(points: &[SweepPoint], path: &Path) -> Result<()> {
    let mut s = String::from("param_value,final_linf,slope_window\n");
    for p in points {
        s.push_str(&format!(
            "{},{},{}\n",
            csv_num(p.value),
            csv_num(p.final_linf),
            csv_num(p.window_slope)
        ));
    }
    write_text(path, &s)
}

fn file_stem(prefix: &Path) -> String {
    prefix
        .file_name()
        .map(|f| f.to_string_lossy().into_owned())
        .unwrap_or_else(|| prefix.display().to_string())
}

fn write_run_plot(prefix: &Path, final_layer: usize) -> Result<()> {
    let stem = file_stem(prefix);
    let s = format!(
        "# Final-layer profile against the reference solution.\n\
         # Usage: gnuplot {stem}_plot.gp (from the directory holding the CSVs)\n\
         set datafile separator ','\n\
         set xlabel 'x'\n\
         set ylabel 'u'\n\
         set key left top\n\
         plot '{stem}_solution.csv' skip 1 using (column(1)=={final_layer}?column(4):1/0):5 \
         with points pointtype 7 title 'computed', \\\n     \
         '{stem}_solution.csv' skip 1 using (column(1)=={final_layer}?column(4):1/0):6 \
         with lines title 'exact'\n"
    );
    write_text(&prefixed(prefix, "_plot.gp"), &s)
}

fn write_sweep_plot(prefix: &Path, parameter: SweepParameter) -> Result<()> {
    let stem = file_stem(prefix);
    let label = parameter.label();
    let s = format!(
        "# Final error against {label}, log-log.\n\
         # Usage: gnuplot {stem}_plot.gp (from the directory holding the CSVs)\n\
         set datafile separator ','\n\
         set logscale xy\n\
         set xlabel '{label}'\n\
         set ylabel 'final max-norm error'\n\
         plot '{stem}_error.csv' skip 1 using 1:2 with linespoints pointtype 7 title 'error'\n"
    );
    write_text(&prefixed(prefix, "_plot.gp"), &s)
}

/// Integrates the reference initial data with the scheme and boundary
/// closure of the reference experiment, collates per-layer errors, and
/// emits the CSV and plot artifacts when an output prefix is set.
pub fn run(spec: &RunSpec) -> Result<RunOutput> {
    spec.validate()?;
    let cfg = StepConfig {
        scheme: spec.scheme,
        tau: spec.tau,
        newton_tol: spec.newton_tol,
        newton_max_iters: solver::DEFAULT_NEWTON_MAX_ITERS,
    };
    let t0 = spec.t0;
    let trajectory = solver::integrate(
        |x| -x / t0,
        spec.x0,
        spec.h0,
        spec.nodes,
        t0,
        spec.steps,
        &cfg,
        &BoundaryClosure::ramp(),
    )?;
    let per_step: Vec<f64> = (0..trajectory.mesh.num_layers())
        .map(|m| {
            linf_error(
                &trajectory.fields[m],
                trajectory.mesh.layer(m),
                trajectory.mesh.times()[m],
            )
        })
        .collect();
    let final_linf = *per_step.last().expect("at least the initial layer");
    let mut failures = Vec::new();
    if let Some(e) = &trajectory.failure {
        failures.push((spec.tau, e.clone()));
    }
    let report = ErrorReport {
        exact_regime: failures.is_empty() && final_linf <= EXACT_REGIME_FLOOR,
        per_step,
        final_linf,
        slope: None,
        sweep_points: Vec::new(),
        failures,
    };
    if let Some(prefix) = &spec.out_prefix {
        write_solution_csv(&trajectory, &prefixed(prefix, "_solution.csv"))?;
        write_mesh_csv(&trajectory, &prefixed(prefix, "_mesh.csv"))?;
        let row = SweepPoint {
            value: spec.tau,
            final_linf: report.final_linf,
            window_slope: f64::NAN,
        };
        write_error_csv(&[row], &prefixed(prefix, "_error.csv"))?;
        write_run_plot(prefix, trajectory.mesh.num_layers() - 1)?;
    }
    Ok(RunOutput { report, trajectory })
}

/// One run per sweep value, in parallel.  Tau sweeps hold the final time
/// fixed by adjusting the step count; h0 sweeps hold the domain fixed by
/// adjusting the node count.  Member failures are recorded and the sweep
/// continues.
pub fn sweep(spec: &RunSpec) -> Result<ErrorReport> {
    let sw = spec.sweep.as_ref().ok_or(Error::InsufficientSweepValues(0))?;
    if sw.values.len() < 3 {
        return Err(Error::InsufficientSweepValues(sw.values.len()));
    }
    let t_end_offset = spec.steps as f64 * spec.tau;
    let span = (spec.nodes - 1) as f64 * spec.h0;
    let members: Vec<RunSpec> = sw
        .values
        .iter()
        .enumerate()
        .map(|(idx, &v)| {
            let mut m = spec.clone();
            m.sweep = None;
            m.out_prefix = spec
                .out_prefix
                .as_ref()
                .map(|p| PathBuf::from(format!("{}_run{idx}", p.display())));
            match sw.parameter {
                SweepParameter::Tau => {
                    m.tau = v;
                    m.steps = ((t_end_offset / v).round() as usize).max(1);
                }
                SweepParameter::H0 => {
                    m.h0 = v;
                    m.nodes = ((span / v).round() as usize + 1).max(MIN_LAYER_NODES);
                }
            }
            m
        })
        .collect();

    let outcomes: Vec<std::result::Result<f64, Error>> = members
        .par_iter()
        .map(|m| match run(m) {
            Ok(out) if out.report.failures.is_empty() => Ok(out.report.final_linf),
            Ok(out) => Err(out.report.failures[0].1.clone()),
            Err(e) => Err(e),
        })
        .collect();

    let mut sweep_points = Vec::with_capacity(sw.values.len());
    let mut failures = Vec::new();
    for (&v, outcome) in sw.values.iter().zip(&outcomes) {
        let final_linf = match outcome {
            Ok(e) => *e,
            Err(err) => {
                failures.push((v, err.clone()));
                f64::NAN
            }
        };
        sweep_points.push(SweepPoint { value: v, final_linf, window_slope: f64::NAN });
    }
    for i in 1..sweep_points.len() {
        let (a, b) = (sweep_points[i - 1], sweep_points[i]);
        if a.final_linf.is_finite()
            && b.final_linf.is_finite()
            && a.final_linf > 0.0
            && b.final_linf > 0.0
        {
            sweep_points[i].window_slope =
                (b.final_linf / a.final_linf).ln() / (b.value / a.value).ln();
        }
    }

    let fitted: (Vec<f64>, Vec<f64>) = sweep_points
        .iter()
        .filter(|p| p.final_linf.is_finite())
        .map(|p| (p.value, p.final_linf))
        .unzip();
    let slope = if fitted.0.len() >= 2 {
        Some(log_log_slope(&fitted.0, &fitted.1))
    } else {
        None
    };
    let finite_finals: Vec<f64> = fitted.1.clone();
    let exact_regime =
        !finite_finals.is_empty() && finite_finals.iter().all(|&e| e <= EXACT_REGIME_FLOOR);
    let final_linf = *finite_finals.last().unwrap_or(&f64::NAN);

    if let Some(prefix) = &spec.out_prefix {
        write_error_csv(&sweep_points, &prefixed(prefix, "_error.csv"))?;
        write_sweep_plot(prefix, sw.parameter)?;
    }
    Ok(ErrorReport {
        per_step: Vec::new(),
        final_linf,
        slope,
        sweep_points,
        exact_regime,
        failures,
    })
}
