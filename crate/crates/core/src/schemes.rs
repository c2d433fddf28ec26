//! Discretisations of u_t = u u_x + u_xxx on a six-point stencil.
//!
//! The invariant-form residual is written purely in the ten stencil
//! invariants, so it is pointwise invariant under the full symmetry group
//! by construction.  On a uniform upper layer it factors as
//!
//! ```text
//!   R_inv = h^2 tau * R_u
//! ```
//!
//! where `R_u` is the expanded residual
//!
//! ```text
//!   (uh - u)/tau = uh (uh_p - uh_m)/(2h)
//!                + (uh_pp - 2 uh_p + 2 uh_m - uh_mm)/(2h^3)
//!                + (sigma/tau)(uh_p - uh_m)/(2h),
//! ```
//!
//! the classical scheme plus a drift correction that accounts for the mesh
//! moving sideways between layers.  Dropping the drift term and pinning
//! sigma = 0 gives the standard scheme on a static mesh.  The advected
//! scheme instead moves each node with the flow, sigma = -tau u, and
//! discretises the remaining third derivative by divided differences that
//! are exact on cubics for arbitrary spacings.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::stencil::{I6Variant, InvariantVector, Stencil};

/// Relative tolerance deciding whether an upper layer counts as uniform.
pub const UNIFORM_LAYER_RTOL: f64 = 1e-12;

/// Relative tolerance on the advected-mesh constraint sigma = -tau u.
pub const ADVECTED_CONSTRAINT_RTOL: f64 = 1e-12;

/// Relative tolerance on sigma = 0 for the static-mesh scheme.
pub const STATIC_MESH_RTOL: f64 = 1e-12;

/// A scheme residual, signed as "left side minus right side" of the
/// update relation.  A root in the upper field values is one accepted
/// time step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residual {
    pub value: f64,
}

/// The three schemes the solver and the experiment harness know about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeKind {
    /// Expanded uniform-layer scheme on the self-similar moving mesh.
    UniformEvolutive,
    /// Classical scheme on a static mesh (sigma = 0, no drift term).
    UniformOrthogonal,
    /// Advected-mesh scheme: nodes move with the flow, cubic-exact third
    /// difference on the resulting non-uniform layer.
    Lagrangian,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 3] = [
        SchemeKind::UniformEvolutive,
        SchemeKind::UniformOrthogonal,
        SchemeKind::Lagrangian,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            SchemeKind::UniformEvolutive => "uniform-evolutive",
            SchemeKind::UniformOrthogonal => "uniform-orthogonal",
            SchemeKind::Lagrangian => "lagrangian",
        }
    }

    /// Residual of this scheme at a stencil.
    pub fn residual(&self, z: &Stencil) -> Result<Residual> {
        match self {
            SchemeKind::UniformEvolutive => residual_uniform(z),
            SchemeKind::UniformOrthogonal => residual_standard(z),
            SchemeKind::Lagrangian => residual_lagrangian(z),
        }
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for SchemeKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "uniform-evolutive" => Ok(SchemeKind::UniformEvolutive),
            "uniform-orthogonal" => Ok(SchemeKind::UniformOrthogonal),
            "lagrangian" => Ok(SchemeKind::Lagrangian),
            other => Err(format!(
                "unknown scheme `{other}`; expected uniform-evolutive, uniform-orthogonal, or lagrangian"
            )),
        }
    }
}

fn check_uniform_layer(z: &Stencil) -> Result<f64> {
    let s = z.spacings()?;
    let h = s.h_p;
    let deviation = [s.h_mm, s.h_m, s.h_pp]
        .iter()
        .fold(0.0f64, |acc, &v| acc.max((v / h - 1.0).abs()));
    if deviation > UNIFORM_LAYER_RTOL {
        return Err(Error::NotUniformLayer { deviation });
    }
    Ok(h)
}

/// Residual written in the invariants alone:
///
/// ```text
///   I6 - (1/2) [ (I6 + I5 I4)(I9 + I8) + (I10 - I9) - (I8 - I7) ]
/// ```
///
/// Requires a uniform upper layer (I1 = I2 = I3 = 1), which is where the
/// relation discretises the equation; elsewhere the same expression is
/// still invariant but approximates nothing.
pub fn residual_invariant_form(inv: &InvariantVector) -> Result<Residual> {
    let deviation = [inv.i1, inv.i2, inv.i3]
        .iter()
        .fold(0.0f64, |acc, &v| acc.max((v - 1.0).abs()));
    if deviation > UNIFORM_LAYER_RTOL {
        return Err(Error::NotUniformLayer { deviation });
    }
    let bracket = (inv.i6 + inv.i5 * inv.i4) * (inv.i9 + inv.i8) + (inv.i10 - inv.i9)
        - (inv.i8 - inv.i7);
    Ok(Residual { value: inv.i6 - 0.5 * bracket })
}

/// Expanded uniform-layer residual with the drift term, centre variant.
pub fn residual_uniform(z: &Stencil) -> Result<Residual> {
    residual_uniform_with(z, I6Variant::Center)
}

/// Expanded uniform-layer residual; the variant picks which upper node
/// carries the time increment and the convective factor, matching the
/// corresponding choice in the sixth invariant.
pub fn residual_uniform_with(z: &Stencil, variant: I6Variant) -> Result<Residual> {
    let h = check_uniform_layer(z)?;
    let s = z.spacings()?;
    let carrier = match variant {
        I6Variant::Center => z.uh,
        I6Variant::Forward => z.uh_p,
    };
    let central = (z.uh_p - z.uh_m) / (2.0 * h);
    let third = (z.uh_pp - 2.0 * z.uh_p + 2.0 * z.uh_m - z.uh_mm) / (2.0 * h.powi(3));
    let value = (carrier - z.u) / s.tau
        - carrier * central
        - third
        - (s.sigma / s.tau) * central;
    Ok(Residual { value })
}

/// Classical residual on a static mesh: requires sigma = 0 and carries no
/// drift term.
pub fn residual_standard(z: &Stencil) -> Result<Residual> {
    let h = check_uniform_layer(z)?;
    let s = z.spacings()?;
    if s.sigma.abs() > STATIC_MESH_RTOL * h {
        return Err(Error::NonZeroSigma { sigma: s.sigma });
    }
    let central = (z.uh_p - z.uh_m) / (2.0 * h);
    let third = (z.uh_pp - 2.0 * z.uh_p + 2.0 * z.uh_m - z.uh_mm) / (2.0 * h.powi(3));
    let value = (z.uh - z.u) / s.tau - z.uh * central - third;
    Ok(Residual { value })
}

/// Advected-mesh residual.  Along trajectories moving with speed -u the
/// convective term drops out and only the third derivative remains:
///
/// ```text
///   (uh - u)/tau = (6/S) [ d2+ - d2- ],    S = h_pp + 2h_p + 2h_m + h_mm,
/// ```
///
/// where `d2+`/`d2-` are the right and left second divided differences of
/// the upper field.  Requires sigma = -tau u.
pub fn residual_lagrangian(z: &Stencil) -> Result<Residual> {
    let s = z.spacings()?;
    let defect = (s.sigma + s.tau * z.u).abs();
    if defect > ADVECTED_CONSTRAINT_RTOL * (1.0 + s.sigma.abs() + (s.tau * z.u).abs()) {
        return Err(Error::LatticeConstraintViolated { defect });
    }
    let d = z.discrete_derivatives()?;
    let span = s.h_pp + 2.0 * s.h_p + 2.0 * s.h_m + s.h_mm;
    let d2_plus = (d.ux_pp - d.ux_p) / (s.h_pp + s.h_p);
    let d2_minus = (d.ux_m - d.ux_mm) / (s.h_m + s.h_mm);
    let value = (z.uh - z.u) / s.tau - 6.0 / span * (d2_plus - d2_minus);
    Ok(Residual { value })
}

/// A smooth field with enough derivatives to evaluate the equation's
/// defect pointwise.
pub trait ManufacturedSolution {
    fn u(&self, x: f64, t: f64) -> f64;
    fn u_t(&self, x: f64, t: f64) -> f64;
    fn u_x(&self, x: f64, t: f64) -> f64;
    fn u_xxx(&self, x: f64, t: f64) -> f64;

    /// u_t - u u_x - u_xxx; zero exactly on solutions.
    fn pde_residual(&self, x: f64, t: f64) -> f64 {
        self.u_t(x, t) - self.u(x, t) * self.u_x(x, t) - self.u_xxx(x, t)
    }
}

/// The self-similar ramp u = -x/t, an exact solution for t != 0.
#[derive(Debug, Clone, Copy)]
pub struct RampSolution;

impl ManufacturedSolution for RampSolution {
    fn u(&self, x: f64, t: f64) -> f64 {
        -x / t
    }
    fn u_t(&self, x: f64, t: f64) -> f64 {
        x / (t * t)
    }
    fn u_x(&self, _x: f64, t: f64) -> f64 {
        -1.0 / t
    }
    fn u_xxx(&self, _x: f64, _t: f64) -> f64 {
        0.0
    }
}

/// a e^{-t} sin(kx): smooth, not a solution, so its pde_residual is a
/// nontrivial target for consistency checks.
#[derive(Debug, Clone, Copy)]
pub struct DecayingSine {
    pub amplitude: f64,
    pub wavenumber: f64,
}

impl ManufacturedSolution for DecayingSine {
    fn u(&self, x: f64, t: f64) -> f64 {
        self.amplitude * (-t).exp() * (self.wavenumber * x).sin()
    }
    fn u_t(&self, x: f64, t: f64) -> f64 {
        -self.u(x, t)
    }
    fn u_x(&self, x: f64, t: f64) -> f64 {
        self.amplitude * self.wavenumber * (-t).exp() * (self.wavenumber * x).cos()
    }
    fn u_xxx(&self, x: f64, t: f64) -> f64 {
        -self.wavenumber.powi(2) * self.u_x(x, t)
    }
}

/// Stencil sampled from a smooth field: five equispaced upper nodes of
/// spacing `h` around the centre `xh` at time `th`, lower point `(x, t)`.
pub fn sample_uniform_stencil(
    f: &dyn ManufacturedSolution,
    x: f64,
    t: f64,
    xh: f64,
    h: f64,
    th: f64,
) -> Stencil {
    Stencil {
        x,
        t,
        u: f.u(x, t),
        xh_mm: xh - 2.0 * h,
        xh_m: xh - h,
        xh,
        xh_p: xh + h,
        xh_pp: xh + 2.0 * h,
        th,
        uh_mm: f.u(xh - 2.0 * h, th),
        uh_m: f.u(xh - h, th),
        uh: f.u(xh, th),
        uh_p: f.u(xh + h, th),
        uh_pp: f.u(xh + 2.0 * h, th),
    }
}

/// How the stencil centre drifts when sampling at ever finer resolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeshDrift {
    /// sigma = 0: static mesh.
    None,
    /// sigma = tau x / t: the self-similar mesh map, drift of order tau.
    Evolutive,
    /// sigma = -tau u(x, t): nodes advected with the flow.
    Advected,
    /// sigma held at a fixed value regardless of tau; the drift term then
    /// blows up as tau -> 0.
    Fixed(f64),
}

/// Verdict of a continuum-limit study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ContinuumVerdict {
    /// Deviations stay at round-off over all levels.
    Exact,
    /// Deviations shrink with the fitted log-log slope in `h`.
    Converging { slope: f64 },
    /// Deviations fail to shrink.
    Diverging { slope: f64 },
}

/// Deviation of the scheme residual from the pointwise equation defect
/// over a sequence of refinement levels.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuumLimitReport {
    /// Upper-layer spacing at each level, halved between levels.
    pub spacings: Vec<f64>,
    /// |scheme residual - pde residual| at each level.
    pub deviations: Vec<f64>,
    pub verdict: ContinuumVerdict,
}

/// Deviations below this floor count as exact reproduction.
pub const EXACT_FLOOR: f64 = 1e-8;

/// Fitted slopes above this count as convergence.
pub const CONVERGING_SLOPE_MIN: f64 = 0.5;

pub(crate) fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.max(f64::MIN_POSITIVE).ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let num: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let den: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    num / den
}

/// Samples the scheme on stencils drawn from `f` at `levels` spacings
/// `h0, h0/2, h0/4, ...` with the time step slaved to the spacing through
/// the fixed anisotropy ratio `i4 = h^3 / tau`, and classifies how the
/// residual approaches the pointwise equation defect at `(x, t)`.
#[allow(clippy::too_many_arguments)]
pub fn continuum_limit_check(
    scheme: SchemeKind,
    f: &dyn ManufacturedSolution,
    x: f64,
    t: f64,
    h0: f64,
    levels: usize,
    i4: f64,
    drift: MeshDrift,
) -> Result<ContinuumLimitReport> {
    if levels < 2 {
        return Err(Error::TooFewPoints { min: 2, got: levels });
    }
    let target = f.pde_residual(x, t);
    let mut spacings = Vec::with_capacity(levels);
    let mut deviations = Vec::with_capacity(levels);
    for level in 0..levels {
        let h = h0 / 2f64.powi(level as i32);
        let tau = h.powi(3) / i4;
        let sigma = match drift {
            MeshDrift::None => 0.0,
            MeshDrift::Evolutive => tau * x / t,
            MeshDrift::Advected => -tau * f.u(x, t),
            MeshDrift::Fixed(s) => s,
        };
        let z = sample_uniform_stencil(f, x, t, x + sigma, h, t + tau);
        let r = scheme.residual(&z)?;
        spacings.push(h);
        deviations.push((r.value - target).abs());
    }
    let verdict = if deviations.iter().all(|&d| d <= EXACT_FLOOR) {
        ContinuumVerdict::Exact
    } else {
        let slope = log_log_slope(&spacings, &deviations);
        if slope >= CONVERGING_SLOPE_MIN {
            ContinuumVerdict::Converging { slope }
        } else {
            ContinuumVerdict::Diverging { slope }
        }
    };
    Ok(ContinuumLimitReport { spacings, deviations, verdict })
}
