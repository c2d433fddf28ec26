//! Point symmetries of u_t = u u_x + u_xxx and their discrete prolongation.
//!
//! The equation admits a four-parameter group generated by space and time
//! translations, the Galilean boost, and an anisotropic dilation.  Each
//! generator acts on a stencil by moving all six points with the same flow;
//! its prolonged action is the corresponding tangent vector in the
//! 14-dimensional stencil space.  The rank of the matrix stacking the four
//! prolonged rows decides how many functionally independent invariants the
//! stencil supports: `14 - rank`, which is 10 at points in general position.

use crate::error::Result;
use crate::stencil::{Stencil, STENCIL_DIM};

/// A point of the base space the group acts on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub t: f64,
    pub u: f64,
}

/// Infinitesimal action at a point: xi moves x, tau_coef moves t, phi
/// moves u.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentVector {
    pub xi: f64,
    pub tau_coef: f64,
    pub phi: f64,
}

/// The four one-parameter subgroups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Generator {
    /// d/dx
    SpaceTranslation,
    /// d/dt
    TimeTranslation,
    /// t d/dx - d/du
    GalileanBoost,
    /// x d/dx + 3t d/dt - 2u d/du
    Dilation,
}

impl Generator {
    pub const ALL: [Generator; 4] = [
        Generator::SpaceTranslation,
        Generator::TimeTranslation,
        Generator::GalileanBoost,
        Generator::Dilation,
    ];

    /// The generator's coefficient functions evaluated at `p`.
    pub fn tangent(self, p: Point) -> TangentVector {
        match self {
            Generator::SpaceTranslation => TangentVector { xi: 1.0, tau_coef: 0.0, phi: 0.0 },
            Generator::TimeTranslation => TangentVector { xi: 0.0, tau_coef: 1.0, phi: 0.0 },
            Generator::GalileanBoost => TangentVector { xi: p.t, tau_coef: 0.0, phi: -1.0 },
            Generator::Dilation => {
                TangentVector { xi: p.x, tau_coef: 3.0 * p.t, phi: -2.0 * p.u }
            }
        }
    }
}

/// One finite group element: a generator together with a flow parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupElement {
    pub generator: Generator,
    pub parameter: f64,
}

impl GroupElement {
    pub fn new(generator: Generator, parameter: f64) -> Self {
        GroupElement { generator, parameter }
    }

    /// The exactly integrated flow of the generator through `p`.
    pub fn apply(&self, p: Point) -> Point {
        let e = self.parameter;
        match self.generator {
            Generator::SpaceTranslation => Point { x: p.x + e, ..p },
            Generator::TimeTranslation => Point { t: p.t + e, ..p },
            Generator::GalileanBoost => Point { x: p.x + e * p.t, t: p.t, u: p.u - e },
            Generator::Dilation => Point {
                x: e.exp() * p.x,
                t: (3.0 * e).exp() * p.t,
                u: (-2.0 * e).exp() * p.u,
            },
        }
    }

    /// Moves every stencil point with the flow.  The image is validated:
    /// all four flows preserve the ordering of a valid stencil and keep the
    /// two layers separated, so failure here means the input was already
    /// degenerate.
    pub fn transform_stencil(&self, z: &Stencil) -> Result<Stencil> {
        let lower = self.apply(Point { x: z.x, t: z.t, u: z.u });
        let up = |x: f64, u: f64| self.apply(Point { x, t: z.th, u });
        let mm = up(z.xh_mm, z.uh_mm);
        let m = up(z.xh_m, z.uh_m);
        let c = up(z.xh, z.uh);
        let p = up(z.xh_p, z.uh_p);
        let pp = up(z.xh_pp, z.uh_pp);
        let out = Stencil {
            x: lower.x,
            t: lower.t,
            u: lower.u,
            xh_mm: mm.x,
            xh_m: m.x,
            xh: c.x,
            xh_p: p.x,
            xh_pp: pp.x,
            th: c.t,
            uh_mm: mm.u,
            uh_m: m.u,
            uh: c.u,
            uh_p: p.u,
            uh_pp: pp.u,
        };
        out.spacings()?;
        Ok(out)
    }
}

/// Prolonged action of a generator on the stencil coordinates, in the
/// canonical order of [`Stencil::coordinates`]: the xi components at the
/// lower point and the five upper points, the tau component at each layer,
/// and the phi components at the six field slots.
pub fn prolonged_action(generator: Generator, z: &Stencil) -> [f64; STENCIL_DIM] {
    let low = generator.tangent(Point { x: z.x, t: z.t, u: z.u });
    let at = |x: f64, u: f64| generator.tangent(Point { x, t: z.th, u });
    let mm = at(z.xh_mm, z.uh_mm);
    let m = at(z.xh_m, z.uh_m);
    let c = at(z.xh, z.uh);
    let p = at(z.xh_p, z.uh_p);
    let pp = at(z.xh_pp, z.uh_pp);
    [
        low.xi,
        low.tau_coef,
        low.phi,
        mm.xi,
        m.xi,
        c.xi,
        p.xi,
        pp.xi,
        c.tau_coef,
        mm.phi,
        m.phi,
        c.phi,
        p.phi,
        pp.phi,
    ]
}

/// Relative pivot threshold for the rank decision: a pivot counts as zero
/// when its magnitude falls below this fraction of the largest entry.
pub const RANK_PIVOT_RTOL: f64 = 1e-10;

/// The four prolonged generator rows stacked over the stencil coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZMatrix {
    pub rows: [[f64; STENCIL_DIM]; 4],
}

impl ZMatrix {
    /// Rank by Gaussian elimination with partial pivoting; pivots below
    /// `RANK_PIVOT_RTOL` times the largest entry of the original matrix are
    /// treated as zero.
    #[allow(clippy::needless_range_loop)]
    pub fn rank(&self) -> usize {
        let mut a = self.rows;
        let scale = a
            .iter()
            .flatten()
            .fold(0.0f64, |acc, &v| acc.max(v.abs()));
        if scale == 0.0 {
            return 0;
        }
        let tol = RANK_PIVOT_RTOL * scale;
        let mut rank = 0;
        let mut col = 0;
        while rank < 4 && col < STENCIL_DIM {
            let mut piv = rank;
            for r in rank + 1..4 {
                if a[r][col].abs() > a[piv][col].abs() {
                    piv = r;
                }
            }
            if a[piv][col].abs() <= tol {
                col += 1;
                continue;
            }
            a.swap(rank, piv);
            for r in rank + 1..4 {
                let f = a[r][col] / a[rank][col];
                for c in col..STENCIL_DIM {
                    a[r][c] -= f * a[rank][c];
                }
            }
            rank += 1;
            col += 1;
        }
        rank
    }
}

/// Evaluates all four prolonged generators at the stencil.  Pure
/// evaluation: the stencil may be degenerate as geometry, the matrix is
/// still defined.
pub fn z_matrix(z: &Stencil) -> ZMatrix {
    let mut rows = [[0.0; STENCIL_DIM]; 4];
    for (row, generator) in rows.iter_mut().zip(Generator::ALL) {
        *row = prolonged_action(generator, z);
    }
    ZMatrix { rows }
}

/// Number of functionally independent difference invariants at a stencil.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InvariantCount {
    pub rank: usize,
    pub count: usize,
}

impl InvariantCount {
    /// True when the stencil sits in general position, where the four
    /// prolonged rows are independent and exactly ten invariants survive.
    pub fn is_generic(&self) -> bool {
        self.rank == 4
    }
}

/// `14 - rank` of the stacked prolonged generators at the stencil.
pub fn invariant_count(z: &Stencil) -> InvariantCount {
    let rank = z_matrix(z).rank();
    InvariantCount { rank, count: STENCIL_DIM - rank }
}

/// Step used by the central-difference invariance defect.
pub const DEFAULT_DEFECT_STEP: f64 = 1e-4;

/// Central-difference derivative of a stencil function along a group
/// orbit at parameter zero.  Vanishes (to truncation) precisely when the
/// function is infinitesimally invariant under the generator.
pub fn strong_invariance_defect<F>(
    invariant: F,
    generator: Generator,
    z: &Stencil,
    step: f64,
) -> Result<f64>
where
    F: Fn(&Stencil) -> Result<f64>,
{
    let forward = GroupElement::new(generator, step).transform_stencil(z)?;
    let backward = GroupElement::new(generator, -step).transform_stencil(z)?;
    Ok((invariant(&forward)? - invariant(&backward)?) / (2.0 * step))
}

/// Flow parameters swept by the weak (mesh-compatibility) check.
pub const WEAK_CHECK_PARAMETERS: [f64; 4] = [-1.0, -0.1, 0.1, 1.0];

/// Whether the group element keeps two simultaneous points simultaneous.
/// Points on distinct layers are unconstrained.
pub fn preserves_equal_times(g: GroupElement, a: Point, b: Point) -> bool {
    if a.t != b.t {
        return true;
    }
    g.apply(a).t == g.apply(b).t
}

/// Weak invariance of flat time layers: every generator, at every swept
/// parameter, maps simultaneous points to simultaneous points.  This holds
/// identically because no flow moves t by an x- or u-dependent amount.
pub fn flat_layers_preserved(a: Point, b: Point) -> bool {
    Generator::ALL.iter().all(|&generator| {
        WEAK_CHECK_PARAMETERS
            .iter()
            .all(|&e| preserves_equal_times(GroupElement::new(generator, e), a, b))
    })
}
