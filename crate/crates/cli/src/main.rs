//! Command-line driver: single runs, parameter sweeps, certification, and
//! invariant counting.
//!
//! Exit codes: 0 when every requested check passes, 1 for domain failures
//! (bad geometry, divergence, failed certification), 2 for usage errors
//! (unparseable flags, config, or stencil text).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use symkdv::experiments::{run, sweep, RunSpec, SweepParameter, SweepSpec};
use symkdv::stencil::STENCIL_DIM;
use symkdv::symmetry::invariant_count;
use symkdv::verify::{self, DEFAULT_SEED};
use symkdv::{SchemeKind, Stencil};

#[derive(Parser)]
#[command(
    name = "symkdv",
    version,
    about = "Symmetry-preserving finite-difference schemes for u_t = u u_x + u_xxx"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the reference experiment once and write CSV artifacts.
    Run(RunArgs),
    /// Repeat the run across tau or h0 values and fit the error slope.
    Sweep(RunArgs),
    /// Run the certification checks and print one verdict per claim.
    Verify(VerifyArgs),
    /// Print the prolonged-generator rank and invariant count at a stencil.
    CountInvariants(CountArgs),
}

/// Flags shared by `run` and `sweep`.  Every flag may instead come from a
/// `key = value` config file; an explicit flag wins over the file.
#[derive(Args, Debug, Default)]
struct RunArgs {
    /// Config file with `key = value` lines mirroring these flags.
    #[arg(long)]
    config: Option<PathBuf>,
    /// uniform-evolutive, uniform-orthogonal, or lagrangian.
    #[arg(long)]
    scheme: Option<String>,
    /// Initial time (nonzero; the reference solution is singular at 0).
    #[arg(long)]
    t0: Option<f64>,
    /// Time step.
    #[arg(long)]
    tau: Option<f64>,
    /// Initial node spacing.
    #[arg(long)]
    h0: Option<f64>,
    /// Leftmost initial node.
    #[arg(long)]
    x0: Option<f64>,
    /// Node count of the initial layer (at least 5).
    #[arg(long)]
    nodes: Option<usize>,
    /// Number of time steps.
    #[arg(long)]
    steps: Option<usize>,
    /// Sweep parameter, tau or h0 (sweep subcommand only).
    #[arg(long)]
    sweep: Option<String>,
    /// Comma-separated sweep values, at least three.
    #[arg(long)]
    values: Option<String>,
    /// Output path prefix for the CSV and plot artifacts.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Absolute Newton tolerance on the interior residual max-norm.
    #[arg(long)]
    newton_tol: Option<f64>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Seed for the sampled stencils and states.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Args, Debug)]
struct CountArgs {
    /// Seed for a randomly sampled stencil in general position.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Explicit stencil instead: fourteen comma-separated coordinates in
    /// the order x, t, u, xh_mm, xh_m, xh, xh_p, xh_pp, th, uh_mm, uh_m,
    /// uh, uh_p, uh_pp.
    #[arg(long)]
    stencil: Option<String>,
}

enum Failure {
    /// Unusable input: exit code 2.
    Usage(String),
    /// The computation itself failed or a check did not pass: exit code 1.
    Domain(String),
}

impl From<symkdv::Error> for Failure {
    fn from(e: symkdv::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

type CliResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(args) => run_command(&args),
        Command::Sweep(args) => sweep_command(&args),
        Command::Verify(args) => verify_command(&args),
        Command::CountInvariants(args) => count_command(&args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

const CONFIG_KEYS: [&str; 11] = [
    "scheme", "t0", "tau", "h0", "x0", "nodes", "steps", "sweep", "values", "out", "newton-tol",
];

fn read_config(path: &Path) -> Result<BTreeMap<String, String>, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read config {}: {e}", path.display())))?;
    let mut map = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Failure::Usage(format!("config line {}: `{raw}` is not key = value", idx + 1))
        })?;
        let key = key.trim();
        if !CONFIG_KEYS.contains(&key) {
            return Err(Failure::Usage(format!(
                "unknown config key `{key}` on line {}",
                idx + 1
            )));
        }
        map.insert(key.to_string(), value.trim().to_string());
    }
    Ok(map)
}

fn parsed<T: FromStr>(file: &BTreeMap<String, String>, key: &str) -> Result<Option<T>, Failure>
where
    T::Err: std::fmt::Display,
{
    match file.get(key) {
        None => Ok(None),
        Some(text) => text
            .parse::<T>()
            .map(Some)
            .map_err(|e| Failure::Usage(format!("config key `{key}`: {e}"))),
    }
}

fn parse_values(text: &str) -> Result<Vec<f64>, Failure> {
    text.split(',')
        .map(str::trim)
        .map(|v| {
            v.parse::<f64>()
                .map_err(|e| Failure::Usage(format!("sweep value `{v}`: {e}")))
        })
        .collect()
}

/// Flags merged over the config file, with the default output prefix
/// `symkdv` when neither supplies one.
fn build_spec(args: &RunArgs, want_sweep: bool) -> Result<RunSpec, Failure> {
    let file = match &args.config {
        Some(path) => read_config(path)?,
        None => BTreeMap::new(),
    };
    let scheme_text = args.scheme.clone().or_else(|| file.get("scheme").cloned());
    let scheme = match scheme_text {
        Some(text) => SchemeKind::from_str(&text).map_err(Failure::Usage)?,
        None => {
            return Err(Failure::Usage(
                "missing --scheme (or a `scheme` config entry)".into(),
            ))
        }
    };
    let mut spec = RunSpec::new(scheme);
    if let Some(v) = args.t0.map_or(parsed(&file, "t0")?, Some) {
        spec.t0 = v;
    }
    if let Some(v) = args.tau.map_or(parsed(&file, "tau")?, Some) {
        spec.tau = v;
    }
    if let Some(v) = args.h0.map_or(parsed(&file, "h0")?, Some) {
        spec.h0 = v;
    }
    if let Some(v) = args.x0.map_or(parsed(&file, "x0")?, Some) {
        spec.x0 = v;
    }
    if let Some(v) = args.nodes.map_or(parsed(&file, "nodes")?, Some) {
        spec.nodes = v;
    }
    if let Some(v) = args.steps.map_or(parsed(&file, "steps")?, Some) {
        spec.steps = v;
    }
    if let Some(v) = args.newton_tol.map_or(parsed(&file, "newton-tol")?, Some) {
        spec.newton_tol = v;
    }
    let out = args
        .out
        .clone()
        .or_else(|| file.get("out").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("symkdv"));
    spec.out_prefix = Some(out);

    let sweep_text = args.sweep.clone().or_else(|| file.get("sweep").cloned());
    let values_text = args.values.clone().or_else(|| file.get("values").cloned());
    if want_sweep {
        let parameter = match sweep_text.as_deref() {
            Some("tau") => SweepParameter::Tau,
            Some("h0") => SweepParameter::H0,
            Some(other) => {
                return Err(Failure::Usage(format!(
                    "unknown sweep parameter `{other}`; expected tau or h0"
                )))
            }
            None => {
                return Err(Failure::Usage(
                    "sweep needs --sweep tau or --sweep h0 (or a `sweep` config entry)".into(),
                ))
            }
        };
        let values = parse_values(&values_text.ok_or_else(|| {
            Failure::Usage("sweep needs --values a,b,c (or a `values` config entry)".into())
        })?)?;
        spec.sweep = Some(SweepSpec { parameter, values });
    } else if args.sweep.is_some() || args.values.is_some() {
        return Err(Failure::Usage(
            "run takes no --sweep or --values; use the sweep subcommand".into(),
        ));
    }
    Ok(spec)
}

fn artifact_line(prefix: &Path, with_solution: bool) -> String {
    let p = prefix.display();
    if with_solution {
        format!("wrote {p}_solution.csv, {p}_mesh.csv, {p}_error.csv, {p}_plot.gp")
    } else {
        format!("wrote {p}_error.csv, {p}_plot.gp, and per-member {p}_run<i>_* files")
    }
}

fn run_command(args: &RunArgs) -> CliResult {
    let spec = build_spec(args, false)?;
    let out = run(&spec)?;
    let report = &out.report;
    println!(
        "scheme {}: {} steps of tau = {} from t0 = {}, {} nodes spaced {} from x0 = {}",
        spec.scheme, spec.steps, spec.tau, spec.t0, spec.nodes, spec.h0, spec.x0
    );
    println!(
        "final max-norm error {:.3e}{}",
        report.final_linf,
        if report.exact_regime { " (exact regime: at solver precision)" } else { "" }
    );
    let prefix = spec.out_prefix.as_ref().expect("run always has a prefix");
    println!("{}", artifact_line(prefix, true));
    if let Some((_, e)) = report.failures.first() {
        return Err(Failure::Domain(format!(
            "run stopped after {} layers: {e}",
            report.per_step.len()
        )));
    }
    Ok(())
}

fn sweep_command(args: &RunArgs) -> CliResult {
    let spec = build_spec(args, true)?;
    let report = sweep(&spec)?;
    let sw = spec.sweep.as_ref().expect("sweep spec was just built");
    let label = sw.parameter.label();
    println!("sweep over {label} with {} members", sw.values.len());
    for p in &report.sweep_points {
        let windowed = if p.window_slope.is_finite() {
            format!(", window slope {:.3}", p.window_slope)
        } else {
            String::new()
        };
        if p.final_linf.is_finite() {
            println!("  {label} = {}: final error {:.3e}{windowed}", p.value, p.final_linf);
        } else {
            println!("  {label} = {}: failed", p.value);
        }
    }
    if let Some(slope) = report.slope {
        println!("log-log slope {slope:.3}");
    }
    if report.exact_regime {
        println!("all members sit in the exact regime; the slope carries no information");
    }
    let prefix = spec.out_prefix.as_ref().expect("sweep always has a prefix");
    println!("{}", artifact_line(prefix, false));
    if !report.failures.is_empty() {
        let lines: Vec<String> = report
            .failures
            .iter()
            .map(|(v, e)| format!("{label} = {v}: {e}"))
            .collect();
        return Err(Failure::Domain(format!(
            "{} of {} members failed: {}",
            report.failures.len(),
            sw.values.len(),
            lines.join("; ")
        )));
    }
    Ok(())
}

fn verify_command(args: &VerifyArgs) -> CliResult {
    let checks = verify::run_all(args.seed);
    for c in &checks {
        let verdict = if c.passed { "PASS" } else { "FAIL" };
        println!("{:<20} {verdict}  {}", c.name, c.details);
    }
    let passed = checks.iter().filter(|c| c.passed).count();
    println!("{passed}/{} checks passed", checks.len());
    if verify::all_passed(&checks) {
        Ok(())
    } else {
        Err(Failure::Domain("certification failed".into()))
    }
}

fn parse_stencil(text: &str) -> Result<Stencil, Failure> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != STENCIL_DIM {
        return Err(Failure::Usage(format!(
            "--stencil needs {STENCIL_DIM} comma-separated coordinates, got {}",
            parts.len()
        )));
    }
    let mut c = [0.0; STENCIL_DIM];
    for (slot, part) in c.iter_mut().zip(&parts) {
        *slot = part
            .parse::<f64>()
            .map_err(|e| Failure::Usage(format!("stencil coordinate `{part}`: {e}")))?;
    }
    Ok(Stencil::from_coordinates(c))
}

fn count_command(args: &CountArgs) -> CliResult {
    let z = match &args.stencil {
        Some(text) => parse_stencil(text)?,
        None => verify::seeded_generic_stencil(args.seed),
    };
    let n = invariant_count(&z);
    println!("prolonged-generator rank: {}", n.rank);
    println!("independent invariants: {}", n.count);
    println!(
        "general position: {}",
        if n.is_generic() { "yes" } else { "no" }
    );
    Ok(())
}
