//! Numerical certification of the crate's central claims.
//!
//! Each check exercises one published property end to end: exact
//! invariance of the ten stencil quantities, the invariant count and its
//! degeneration, the factorisation of the invariant-form residual, exact
//! reproduction of the self-similar solution, the accuracy gap between the
//! static and the moving mesh, equivariance of the advected scheme under a
//! finite boost, the implicit solver, and preservation of flat time
//! layers.  `run_all` collects the verdicts; the CLI `verify` subcommand
//! and the acceptance tests are thin wrappers around it.

use std::time::Instant;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::experiments::{run, sweep, RunSpec, SweepParameter, SweepSpec};
use crate::lattice;
use crate::schemes::{self, SchemeKind};
use crate::solver::{self, banded::BandedSystem, BoundaryClosure, StepConfig};
use crate::stencil::{I6Variant, Stencil};
use crate::symmetry::{self, Generator, GroupElement, Point};

/// Seed used when the caller does not supply one.
pub const DEFAULT_SEED: u64 = 7;

/// Stencils sampled by the finite-move and defect check.
pub const STRONG_INVARIANCE_SAMPLES: usize = 1000;

/// Finite group moves must leave each invariant fixed to this, relative
/// to `1 + |I_k|`.
pub const STRONG_INVARIANCE_RTOL: f64 = 1e-9;

/// Bound on the central-difference defect of each invariant along each
/// subgroup orbit.
pub const DEFECT_TOL: f64 = 1e-6;

/// Wall-clock budget for the invariance check, seconds.
pub const STRONG_INVARIANCE_BUDGET_SECS: f64 = 5.0;

/// Stencils sampled by the invariant-count check.
pub const COUNT_SAMPLES: usize = 100;

/// Uniform-layer stencils sampled by the factorisation check.
pub const FACTORIZATION_SAMPLES: usize = 1000;

/// The invariant-form residual must equal `h^2 tau` times the expanded
/// residual to this, relative to `1 + |rhs|`.
pub const FACTORIZATION_RTOL: f64 = 1e-12;

/// Final max-norm error bound for the exact-reproduction runs.
pub const EXACTNESS_TOL: f64 = 1e-9;

/// Layerwise agreement bound between the two exact-reproduction runs.
pub const TRAJECTORY_AGREEMENT_TOL: f64 = 1e-10;

/// Wall-clock budget for the exact-reproduction check, seconds.
pub const EXACTNESS_BUDGET_SECS: f64 = 1.0;

/// The static-mesh error must exceed the moving-mesh error by at least
/// this factor on the reference run.
pub const GAP_FACTOR: f64 = 10.0;

/// Time steps swept when fitting the static-mesh convergence order.
pub const GAP_SWEEP_VALUES: [f64; 4] = [0.1, 0.05, 0.025, 0.0125];

/// Admissible log-log slope window around first order.
pub const SLOPE_WINDOW: (f64, f64) = (0.9, 1.1);

/// Boost parameter for the equivariance check.
pub const BOOST_PARAMETER: f64 = 0.5;

/// Layerwise bound for the equivariance check.
pub const EQUIVARIANCE_TOL: f64 = 1e-9;

/// Field states sampled by the Jacobian check.
pub const JACOBIAN_STATES: usize = 100;

/// The analytic Jacobian must match central finite differences to this,
/// relative to `1 + |entry|`.
pub const JACOBIAN_RTOL: f64 = 1e-6;

/// Newton must converge within this many iterations on every reference
/// run.
pub const NEWTON_ITER_BUDGET: usize = 5;

/// Solution error bound for the banded solve on a known-solution system.
pub const BANDED_SOLVE_TOL: f64 = 1e-13;

/// One certification verdict.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub details: String,
}

impl Check {
    fn failed(name: &'static str, details: String) -> Self {
        Check { name, passed: false, details }
    }
}

/// True when every check passed.
pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.passed)
}

/// Stencil in general position: independent spacings, nonzero drift,
/// order-one coordinates.
pub fn random_generic_stencil(rng: &mut impl Rng) -> Stencil {
    let h_mm = rng.random_range(0.2..1.5);
    let h_m = rng.random_range(0.2..1.5);
    let h_p = rng.random_range(0.2..1.5);
    let h_pp = rng.random_range(0.2..1.5);
    let sigma = rng.random_range(-0.5..0.5);
    let tau = rng.random_range(0.1..1.0);
    let t = rng.random_range(0.5..2.0);
    let xh = rng.random_range(-1.0..1.0);
    Stencil {
        x: xh - sigma,
        t,
        u: rng.random_range(-2.0..2.0),
        xh_mm: xh - h_m - h_mm,
        xh_m: xh - h_m,
        xh,
        xh_p: xh + h_p,
        xh_pp: xh + h_p + h_pp,
        th: t + tau,
        uh_mm: rng.random_range(-2.0..2.0),
        uh_m: rng.random_range(-2.0..2.0),
        uh: rng.random_range(-2.0..2.0),
        uh_p: rng.random_range(-2.0..2.0),
        uh_pp: rng.random_range(-2.0..2.0),
    }
}

/// First stencil of the seeded generic stream, for callers without an RNG
/// of their own.
pub fn seeded_generic_stencil(seed: u64) -> Stencil {
    random_generic_stencil(&mut ChaCha8Rng::seed_from_u64(seed))
}

/// Like [`random_generic_stencil`] but with all four spacings equal, the
/// layer shape the uniform schemes require.
pub fn random_uniform_stencil(rng: &mut impl Rng) -> Stencil {
    let h = rng.random_range(0.2..1.5);
    let sigma = rng.random_range(-0.5..0.5);
    let tau = rng.random_range(0.1..1.0);
    let t = rng.random_range(0.5..2.0);
    let xh = rng.random_range(-1.0..1.0);
    Stencil {
        x: xh - sigma,
        t,
        u: rng.random_range(-2.0..2.0),
        xh_mm: xh - 2.0 * h,
        xh_m: xh - h,
        xh,
        xh_p: xh + h,
        xh_pp: xh + 2.0 * h,
        th: t + tau,
        uh_mm: rng.random_range(-2.0..2.0),
        uh_m: rng.random_range(-2.0..2.0),
        uh: rng.random_range(-2.0..2.0),
        uh_p: rng.random_range(-2.0..2.0),
        uh_pp: rng.random_range(-2.0..2.0),
    }
}

/// Finite group moves with parameters in [-1, 1] leave all ten invariants
/// fixed, and the central-difference defect along every orbit vanishes to
/// truncation.
pub fn certify_strong_invariance(seed: u64) -> Check {
    let name = "strong-invariance";
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_move = 0.0f64;
    let mut max_defect = 0.0f64;
    let outcome = (|| -> Result<()> {
        for _ in 0..STRONG_INVARIANCE_SAMPLES {
            let z = random_generic_stencil(&mut rng);
            let base = z.invariants()?.as_array();
            for generator in Generator::ALL {
                let e = rng.random_range(-1.0..1.0);
                let moved = GroupElement::new(generator, e)
                    .transform_stencil(&z)?
                    .invariants()?
                    .as_array();
                for k in 0..10 {
                    let dev = (moved[k] - base[k]).abs() / (1.0 + base[k].abs());
                    max_move = max_move.max(dev);
                    let d = symmetry::strong_invariance_defect(
                        |w| Ok(w.invariants()?.as_array()[k]),
                        generator,
                        &z,
                        symmetry::DEFAULT_DEFECT_STEP,
                    )?;
                    max_defect = max_defect.max(d.abs());
                }
            }
        }
        Ok(())
    })();
    let elapsed = started.elapsed().as_secs_f64();
    if let Err(e) = outcome {
        return Check::failed(name, format!("aborted: {e}"));
    }
    let passed = max_move <= STRONG_INVARIANCE_RTOL
        && max_defect <= DEFECT_TOL
        && elapsed < STRONG_INVARIANCE_BUDGET_SECS;
    Check {
        name,
        passed,
        details: format!(
            "{STRONG_INVARIANCE_SAMPLES} stencils, 4 subgroups: max finite-move deviation \
             {max_move:.2e} (tol {STRONG_INVARIANCE_RTOL:.0e}), max orbit defect {max_defect:.2e} \
             (tol {DEFECT_TOL:.0e}), {elapsed:.2}s"
        ),
    }
}

/// Generic stencils admit exactly ten independent invariants; at the
/// all-zero tuple the dilation row of the prolonged-generator matrix dies
/// while the translation and boost rows survive, leaving eleven.
pub fn certify_invariant_count(seed: u64) -> Check {
    let name = "invariant-count";
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut generic_ok = 0usize;
    for _ in 0..COUNT_SAMPLES {
        let n = symmetry::invariant_count(&random_generic_stencil(&mut rng));
        if n.rank == 4 && n.count == 10 && n.is_generic() {
            generic_ok += 1;
        }
    }
    let origin = Stencil {
        x: 0.0,
        t: 0.0,
        u: 0.0,
        xh_mm: 0.0,
        xh_m: 0.0,
        xh: 0.0,
        xh_p: 0.0,
        xh_pp: 0.0,
        th: 0.0,
        uh_mm: 0.0,
        uh_m: 0.0,
        uh: 0.0,
        uh_p: 0.0,
        uh_pp: 0.0,
    };
    let at_origin = symmetry::invariant_count(&origin);
    let origin_ok = at_origin.rank == 3 && at_origin.count == 11 && !at_origin.is_generic();
    Check {
        name,
        passed: generic_ok == COUNT_SAMPLES && origin_ok,
        details: format!(
            "{generic_ok}/{COUNT_SAMPLES} generic stencils at rank 4 with 10 invariants; \
             origin rank {} with {} invariants (the translation rows and the constant field \
             entries of the boost row survive at the origin, only the dilation row vanishes)",
            at_origin.rank, at_origin.count
        ),
    }
}

/// On uniform layers the invariant-form residual equals `h^2 tau` times
/// the expanded residual, for both choices of the sixth invariant.
pub fn certify_factorization(seed: u64) -> Check {
    let name = "factorization";
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_dev = 0.0f64;
    let outcome = (|| -> Result<()> {
        for _ in 0..FACTORIZATION_SAMPLES {
            let z = random_uniform_stencil(&mut rng);
            let s = z.spacings()?;
            for variant in [I6Variant::Center, I6Variant::Forward] {
                let lhs = schemes::residual_invariant_form(&z.invariants_with_i6(variant)?)?.value;
                let rhs =
                    s.h_p * s.h_p * s.tau * schemes::residual_uniform_with(&z, variant)?.value;
                max_dev = max_dev.max((lhs - rhs).abs() / (1.0 + rhs.abs()));
            }
        }
        Ok(())
    })();
    if let Err(e) = outcome {
        return Check::failed(name, format!("aborted: {e}"));
    }
    Check {
        name,
        passed: max_dev <= FACTORIZATION_RTOL,
        details: format!(
            "{FACTORIZATION_SAMPLES} uniform-layer stencils, both variants: max relative \
             factorisation defect {max_dev:.2e} (tol {FACTORIZATION_RTOL:.0e})"
        ),
    }
}

/// The advected and the moving-mesh uniform scheme both reproduce the
/// self-similar solution to solver precision, on the same lattice.
pub fn certify_exactness() -> Check {
    let name = "exact-reproduction";
    let started = Instant::now();
    let outcome = (|| -> Result<(f64, f64, f64)> {
        let lag = run(&RunSpec::new(SchemeKind::Lagrangian))?;
        let evo = run(&RunSpec::new(SchemeKind::UniformEvolutive))?;
        if let Some((_, e)) = lag.report.failures.first() {
            return Err(e.clone());
        }
        if let Some((_, e)) = evo.report.failures.first() {
            return Err(e.clone());
        }
        let mut gap = 0.0f64;
        for m in 0..lag.trajectory.mesh.num_layers() {
            for (a, b) in lag
                .trajectory
                .mesh
                .layer(m)
                .iter()
                .zip(evo.trajectory.mesh.layer(m))
            {
                gap = gap.max((a - b).abs());
            }
            for (a, b) in lag.trajectory.fields[m]
                .values
                .iter()
                .zip(&evo.trajectory.fields[m].values)
            {
                gap = gap.max((a - b).abs());
            }
        }
        Ok((lag.report.final_linf, evo.report.final_linf, gap))
    })();
    let elapsed = started.elapsed().as_secs_f64();
    let (lag_final, evo_final, gap) = match outcome {
        Ok(v) => v,
        Err(e) => return Check::failed(name, format!("aborted: {e}")),
    };
    let passed = lag_final <= EXACTNESS_TOL
        && evo_final <= EXACTNESS_TOL
        && gap <= TRAJECTORY_AGREEMENT_TOL
        && elapsed < EXACTNESS_BUDGET_SECS;
    Check {
        name,
        passed,
        details: format!(
            "final errors: advected {lag_final:.2e}, moving uniform {evo_final:.2e} \
             (tol {EXACTNESS_TOL:.0e}); layerwise trajectory gap {gap:.2e} \
             (tol {TRAJECTORY_AGREEMENT_TOL:.0e}); {elapsed:.2}s"
        ),
    }
}

/// The static mesh loses the symmetry and pays for it: at least a factor
/// [`GAP_FACTOR`] on the reference run, with the first-order convergence
/// its leading drift defect predicts.
pub fn certify_scheme_gap() -> Check {
    let name = "scheme-gap";
    let outcome = (|| -> Result<(f64, f64, f64)> {
        let evo = run(&RunSpec::new(SchemeKind::UniformEvolutive))?;
        let ortho = run(&RunSpec::new(SchemeKind::UniformOrthogonal))?;
        if let Some((_, e)) = evo.report.failures.first().or(ortho.report.failures.first()) {
            return Err(e.clone());
        }
        let mut spec = RunSpec::new(SchemeKind::UniformOrthogonal);
        spec.sweep = Some(SweepSpec {
            parameter: SweepParameter::Tau,
            values: GAP_SWEEP_VALUES.to_vec(),
        });
        let report = sweep(&spec)?;
        if let Some((_, e)) = report.failures.first() {
            return Err(e.clone());
        }
        let slope = report.slope.unwrap_or(f64::NAN);
        Ok((evo.report.final_linf, ortho.report.final_linf, slope))
    })();
    let (evo_final, ortho_final, slope) = match outcome {
        Ok(v) => v,
        Err(e) => return Check::failed(name, format!("aborted: {e}")),
    };
    let passed = ortho_final >= GAP_FACTOR * evo_final
        && slope >= SLOPE_WINDOW.0
        && slope <= SLOPE_WINDOW.1;
    Check {
        name,
        passed,
        details: format!(
            "static {ortho_final:.2e} vs moving {evo_final:.2e} (factor >= {GAP_FACTOR}); \
             static tau-sweep slope {slope:.3} (window [{}, {}])",
            SLOPE_WINDOW.0, SLOPE_WINDOW.1
        ),
    }
}

/// Boosting the initial data, the boundary closure, and the frame by a
/// finite Galilean element commutes with integrating the advected scheme,
/// layer by layer.
pub fn certify_boost_equivariance() -> Check {
    let name = "boost-equivariance";
    fn profile(x: f64) -> f64 {
        0.3 * (std::f64::consts::PI * x).sin()
    }
    // The short step keeps the advected mesh well away from folding over
    // the whole run; the initial profile is not boost-invariant, so the
    // comparison is not vacuous.
    let eps = BOOST_PARAMETER;
    let (t0, h0, x0, tau, nodes, steps) = (1.0, 0.1, -1.0, 0.02, 21usize, 10usize);
    let cfg = StepConfig::new(SchemeKind::Lagrangian, tau);
    let outcome = (|| -> Result<f64> {
        let base = solver::integrate(
            profile,
            x0,
            h0,
            nodes,
            t0,
            steps,
            &cfg,
            &BoundaryClosure::from_fn(|x, _| profile(x)),
        )?;
        let boosted = solver::integrate(
            |x| profile(x - eps * t0) - eps,
            x0 + eps * t0,
            h0,
            nodes,
            t0,
            steps,
            &cfg,
            &BoundaryClosure::from_fn(move |x, t| profile(x - eps * t) - eps),
        )?;
        if let Some(e) = base.failure.clone().or(boosted.failure.clone()) {
            return Err(e);
        }
        let mut gap = 0.0f64;
        for m in 0..base.mesh.num_layers() {
            let t = base.mesh.times()[m];
            for (a, b) in base.mesh.layer(m).iter().zip(boosted.mesh.layer(m)) {
                gap = gap.max((b - (a + eps * t)).abs());
            }
            for (a, b) in base.fields[m].values.iter().zip(&boosted.fields[m].values) {
                gap = gap.max((b - (a - eps)).abs());
            }
        }
        Ok(gap)
    })();
    let gap = match outcome {
        Ok(v) => v,
        Err(e) => return Check::failed(name, format!("aborted: {e}")),
    };
    Check {
        name,
        passed: gap <= EQUIVARIANCE_TOL,
        details: format!(
            "boost parameter {eps}: max layerwise gap between the boosted run and the \
             boosted trajectory {gap:.2e} (tol {EQUIVARIANCE_TOL:.0e})"
        ),
    }
}

/// The implicit machinery: analytic Jacobian against central differences,
/// the Newton budget on every reference run, and the banded solve on a
/// system with a known solution.
pub fn certify_solver(seed: u64) -> Check {
    let name = "implicit-solver";
    let outcome = (|| -> Result<(f64, usize, f64)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 11usize;
        let t = 1.0;
        let tau = 0.1;
        let xs = lattice::build_layer(-0.5, 0.1, n)?;
        let xh = lattice::advance_evolutive(&xs, t, tau)?;
        let boundary = [0usize, 1, n - 2, n - 1];
        let eps = 1e-6;
        let mut max_jac = 0.0f64;
        for _ in 0..JACOBIAN_STATES {
            let u: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let uh: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let sys =
                solver::uniform_newton_system(&xs, &xh, &uh, tau, &vec![0.0; n], &boundary);
            let residual_row = |uh: &[f64], i: usize| -> Result<f64> {
                let z = solver::stencil_at(&xs, t, &xh, t + tau, &u, uh, i);
                Ok(schemes::residual_uniform(&z)?.value)
            };
            for j in 0..n {
                let mut up = uh.clone();
                let mut dn = uh.clone();
                up[j] += eps;
                dn[j] -= eps;
                for i in 2..n - 2 {
                    let fd = (residual_row(&up, i)? - residual_row(&dn, i)?) / (2.0 * eps);
                    let an = sys.entry(i, j);
                    max_jac = max_jac.max((fd - an).abs() / (1.0 + an.abs()));
                }
            }
        }

        let bc = BoundaryClosure::ramp();
        let mut max_newton = 0usize;
        let mut reference = |scheme: SchemeKind, tau: f64, steps: usize| -> Result<()> {
            let cfg = StepConfig::new(scheme, tau);
            let tr = solver::integrate(|x| -x, -1.0, 0.1, 21, 1.0, steps, &cfg, &bc)?;
            if let Some(e) = tr.failure {
                return Err(e);
            }
            max_newton = max_newton.max(tr.newton_iters.iter().copied().max().unwrap_or(0));
            Ok(())
        };
        reference(SchemeKind::Lagrangian, 0.1, 10)?;
        reference(SchemeKind::UniformEvolutive, 0.1, 10)?;
        for &tau in &GAP_SWEEP_VALUES {
            let steps = (1.0 / tau).round() as usize;
            reference(SchemeKind::UniformOrthogonal, tau, steps)?;
        }

        let m = 40usize;
        let mut sys = BandedSystem::new(m);
        for i in 0..m {
            sys.set(i, i, 6.0);
            if i >= 1 {
                sys.set(i, i - 1, 1.5);
            }
            if i >= 2 {
                sys.set(i, i - 2, -1.0);
            }
            if i + 1 < m {
                sys.set(i, i + 1, -0.5);
            }
            if i + 2 < m {
                sys.set(i, i + 2, -1.0);
            }
        }
        let truth: Vec<f64> = (0..m).map(|i| (0.37 * i as f64).sin()).collect();
        let rhs = sys.multiply(&truth);
        for (i, v) in rhs.iter().enumerate() {
            sys.set_rhs(i, *v);
        }
        let solved = sys.solve()?;
        let max_solve = solved
            .iter()
            .zip(&truth)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        Ok((max_jac, max_newton, max_solve))
    })();
    let (max_jac, max_newton, max_solve) = match outcome {
        Ok(v) => v,
        Err(e) => return Check::failed(name, format!("aborted: {e}")),
    };
    let passed = max_jac <= JACOBIAN_RTOL
        && max_newton <= NEWTON_ITER_BUDGET
        && max_solve <= BANDED_SOLVE_TOL;
    Check {
        name,
        passed,
        details: format!(
            "Jacobian vs finite differences over {JACOBIAN_STATES} states: {max_jac:.2e} \
             (tol {JACOBIAN_RTOL:.0e}); worst Newton count {max_newton} \
             (budget {NEWTON_ITER_BUDGET}); banded known-solution error {max_solve:.2e} \
             (tol {BANDED_SOLVE_TOL:.0e})"
        ),
    }
}

/// Every layer of the reference trajectories stays flat under all four
/// group actions, and every mesh advancement rule maps it to another flat,
/// ordered layer.
pub fn certify_weak_invariance() -> Check {
    let name = "weak-invariance";
    let tau = 0.1;
    let bc = BoundaryClosure::ramp();
    let outcome = (|| -> Result<(usize, usize)> {
        let mut pairs = 0usize;
        let mut advances = 0usize;
        for scheme in [SchemeKind::Lagrangian, SchemeKind::UniformEvolutive] {
            let cfg = StepConfig::new(scheme, tau);
            let tr = solver::integrate(|x| -x, -1.0, 0.1, 21, 1.0, 10, &cfg, &bc)?;
            if let Some(e) = tr.failure {
                return Err(e);
            }
            for m in 0..tr.mesh.num_layers() {
                let t = tr.mesh.times()[m];
                let xs = tr.mesh.layer(m);
                let us = &tr.fields[m].values;
                for i in 0..xs.len() - 1 {
                    let a = Point { x: xs[i], t, u: us[i] };
                    let b = Point { x: xs[i + 1], t, u: us[i + 1] };
                    if !symmetry::flat_layers_preserved(a, b) {
                        return Ok((pairs, advances));
                    }
                    pairs += 1;
                }
                for rule in SchemeKind::ALL {
                    let next = solver::advance_for(rule, xs, t, &tr.fields[m], tau)?;
                    if !next.windows(2).all(|w| w[1] > w[0]) {
                        return Ok((pairs, advances));
                    }
                    advances += 1;
                }
            }
        }
        Ok((pairs, advances))
    })();
    let (pairs, advances) = match outcome {
        Ok(v) => v,
        Err(e) => return Check::failed(name, format!("aborted: {e}")),
    };
    let expected_pairs = 2 * 11 * 20;
    let expected_advances = 2 * 11 * 3;
    Check {
        name,
        passed: pairs == expected_pairs && advances == expected_advances,
        details: format!(
            "{pairs}/{expected_pairs} simultaneous node pairs stay simultaneous under all \
             generators and parameters; {advances}/{expected_advances} advancement images \
             stay flat and ordered"
        ),
    }
}

/// All checks with a shared seed, in a stable order.
pub fn run_all(seed: u64) -> Vec<Check> {
    vec![
        certify_strong_invariance(seed),
        certify_invariant_count(seed),
        certify_factorization(seed),
        certify_exactness(),
        certify_scheme_gap(),
        certify_boost_equivariance(),
        certify_solver(seed),
        certify_weak_invariance(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samplers_produce_valid_stencils() {
        let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
        for _ in 0..50 {
            assert!(random_generic_stencil(&mut rng).spacings().is_ok());
            let z = random_uniform_stencil(&mut rng);
            let s = z.spacings().unwrap();
            assert!((s.h_mm - s.h_p).abs() <= 1e-14);
            assert!((s.h_pp - s.h_p).abs() <= 1e-14);
        }
    }

    #[test]
    fn every_check_passes_with_the_default_seed() {
        let checks = run_all(DEFAULT_SEED);
        assert_eq!(checks.len(), 8);
        for c in &checks {
            assert!(c.passed, "{}: {}", c.name, c.details);
        }
        assert!(all_passed(&checks));
    }

    #[test]
    fn checks_are_deterministic_for_a_fixed_seed() {
        // The factorisation check carries no wall-clock reading, so its
        // details must be byte-identical across repeats.
        let a = certify_factorization(3);
        let b = certify_factorization(3);
        assert!(a.passed);
        assert_eq!(a.details, b.details);
    }
}
