//! Six-point implicit stencil and its difference invariants.
//!
//! The stencil couples one point `(x, t, u)` on the current time layer to
//! five consecutive points on the next layer, all sharing the advanced time
//! `th`:
//!
//! ```text
//!   xh_mm    xh_m     xh      xh_p    xh_pp      (layer th = t + tau)
//!     *-------*-------*-------*-------*
//!                 \
//!                  * (x, t, u)                   (layer t)
//! ```
//!
//! Geometry is summarised by the four upper spacings, the horizontal drift
//! `sigma = xh - x`, and the time step `tau = th - t`.  Ten combinations of
//! stencil coordinates are invariant under the full four-parameter point
//! symmetry group of u_t = u u_x + u_xxx; every scheme in this crate is a
//! relation among them.

use crate::error::{Error, Result};

/// Number of coordinates carried by a stencil: (x, t, u), five upper
/// abscissas, the upper time, and five upper field values.
pub const STENCIL_DIM: usize = 14;

/// One six-point stencil.  Field names mirror the geometry: `h` marks the
/// upper ("hatted") layer, `mm`/`m`/`p`/`pp` count two left, one left, one
/// right, two right of the centre `xh`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stencil {
    pub x: f64,
    pub t: f64,
    pub u: f64,
    pub xh_mm: f64,
    pub xh_m: f64,
    pub xh: f64,
    pub xh_p: f64,
    pub xh_pp: f64,
    pub th: f64,
    pub uh_mm: f64,
    pub uh_m: f64,
    pub uh: f64,
    pub uh_p: f64,
    pub uh_pp: f64,
}

/// Spacings and offsets extracted from a stencil.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spacings {
    /// `xh_m - xh_mm`
    pub h_mm: f64,
    /// `xh - xh_m`
    pub h_m: f64,
    /// `xh_p - xh`
    pub h_p: f64,
    /// `xh_pp - xh_p`
    pub h_pp: f64,
    /// Horizontal drift of the centre, `xh - x`.
    pub sigma: f64,
    /// Time step, `th - t`.
    pub tau: f64,
}

/// Forward difference quotients of the upper-layer field, one per spacing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscreteDerivatives {
    /// `(uh_m - uh_mm) / h_mm`
    pub ux_mm: f64,
    /// `(uh - uh_m) / h_m`
    pub ux_m: f64,
    /// `(uh_p - uh) / h_p`
    pub ux_p: f64,
    /// `(uh_pp - uh_p) / h_pp`
    pub ux_pp: f64,
}

/// The ten strong invariants of the stencil.
///
/// I1..I3 are spacing ratios, I4 fixes the anisotropic scaling weight
/// h^3 / tau, I5 is the Galilean-corrected drift, I6 the scaled time
/// increment of the field, and I7..I10 are tau-weighted difference
/// quotients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantVector {
    pub i1: f64,
    pub i2: f64,
    pub i3: f64,
    pub i4: f64,
    pub i5: f64,
    pub i6: f64,
    pub i7: f64,
    pub i8: f64,
    pub i9: f64,
    pub i10: f64,
}

impl InvariantVector {
    pub fn as_array(&self) -> [f64; 10] {
        [
            self.i1, self.i2, self.i3, self.i4, self.i5, self.i6, self.i7, self.i8, self.i9,
            self.i10,
        ]
    }
}

/// Which field value enters the sixth invariant `h_p^2 (uhat - u)`.
///
/// `Center` takes the value above the stencil centre and is the form whose
/// scheme expands to the classical pentadiagonal discretisation; `Forward`
/// takes the value one node to the right and is kept as a documented
/// variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum I6Variant {
    Center,
    Forward,
}

impl Stencil {
    /// Unit stencil: spacings 1, time step 1, no drift, zero field,
    /// lower layer at t = 1.
    pub fn unit_uniform() -> Self {
        Stencil {
            x: 0.0,
            t: 1.0,
            u: 0.0,
            xh_mm: -2.0,
            xh_m: -1.0,
            xh: 0.0,
            xh_p: 1.0,
            xh_pp: 2.0,
            th: 2.0,
            uh_mm: 0.0,
            uh_m: 0.0,
            uh: 0.0,
            uh_p: 0.0,
            uh_pp: 0.0,
        }
    }

    /// All fourteen coordinates in canonical order:
    /// x, t, u, xh_mm..xh_pp, th, uh_mm..uh_pp.
    pub fn coordinates(&self) -> [f64; STENCIL_DIM] {
        [
            self.x, self.t, self.u, self.xh_mm, self.xh_m, self.xh, self.xh_p, self.xh_pp,
            self.th, self.uh_mm, self.uh_m, self.uh, self.uh_p, self.uh_pp,
        ]
    }

    /// Inverse of [`Stencil::coordinates`].  No geometry validation; call
    /// [`Stencil::spacings`] for that.
    pub fn from_coordinates(c: [f64; STENCIL_DIM]) -> Self {
        Stencil {
            x: c[0],
            t: c[1],
            u: c[2],
            xh_mm: c[3],
            xh_m: c[4],
            xh: c[5],
            xh_p: c[6],
            xh_pp: c[7],
            th: c[8],
            uh_mm: c[9],
            uh_m: c[10],
            uh: c[11],
            uh_p: c[12],
            uh_pp: c[13],
        }
    }

    /// Validates the geometry and returns spacings, drift, and time step.
    ///
    /// Fails with [`Error::NonMonotoneStencil`] if any upper spacing is not
    /// strictly positive and [`Error::NonPositiveTimeStep`] if `th <= t`.
    pub fn spacings(&self) -> Result<Spacings> {
        let s = Spacings {
            h_mm: self.xh_m - self.xh_mm,
            h_m: self.xh - self.xh_m,
            h_p: self.xh_p - self.xh,
            h_pp: self.xh_pp - self.xh_p,
            sigma: self.xh - self.x,
            tau: self.th - self.t,
        };
        if !(s.h_mm > 0.0 && s.h_m > 0.0 && s.h_p > 0.0 && s.h_pp > 0.0) {
            return Err(Error::NonMonotoneStencil);
        }
        if !(s.tau > 0.0) {
            return Err(Error::NonPositiveTimeStep(s.tau));
        }
        Ok(s)
    }

    /// Forward difference quotients of the upper field over each spacing.
    pub fn discrete_derivatives(&self) -> Result<DiscreteDerivatives> {
        let s = self.spacings()?;
        Ok(DiscreteDerivatives {
            ux_mm: (self.uh_m - self.uh_mm) / s.h_mm,
            ux_m: (self.uh - self.uh_m) / s.h_m,
            ux_p: (self.uh_p - self.uh) / s.h_p,
            ux_pp: (self.uh_pp - self.uh_p) / s.h_pp,
        })
    }

    /// The ten strong invariants, with the sixth in its centre form.
    pub fn invariants(&self) -> Result<InvariantVector> {
        self.invariants_with_i6(I6Variant::Center)
    }

    /// The ten strong invariants with an explicit choice for the sixth.
    pub fn invariants_with_i6(&self, variant: I6Variant) -> Result<InvariantVector> {
        let s = self.spacings()?;
        let d = self.discrete_derivatives()?;
        let i6_field = match variant {
            I6Variant::Center => self.uh,
            I6Variant::Forward => self.uh_p,
        };
        Ok(InvariantVector {
            i1: s.h_p / s.h_m,
            i2: s.h_pp / s.h_p,
            i3: s.h_m / s.h_mm,
            i4: s.h_p.powi(3) / s.tau,
            i5: (s.sigma + s.tau * self.u) / s.h_p,
            i6: s.h_p.powi(2) * (i6_field - self.u),
            i7: s.tau * d.ux_mm,
            i8: s.tau * d.ux_m,
            i9: s.tau * d.ux_p,
            i10: s.tau * d.ux_pp,
        })
    }
}
