//! Pentadiagonal systems and their direct solution.
//!
//! Each interior scheme equation couples five consecutive upper-layer
//! values, so every linear solve in this crate is pentadiagonal.  The
//! factorisation is banded LU with partial pivoting: row swaps stay within
//! the band, which widens the upper triangle by the lower bandwidth, so
//! working rows carry seven entries.

use crate::error::{Error, Result};

/// Bandwidth on each side of the main diagonal.
pub const BANDWIDTH: usize = 2;

/// Relative pivot tolerance: a pivot below this fraction of the largest
/// initial entry flags the system as singular.
pub const PIVOT_RTOL: f64 = 1e-14;

/// A pentadiagonal system `A x = b` stored by diagonals.  `sub2[i]` is
/// `A[i][i-2]`, `sup1[i]` is `A[i][i+1]`, and so on; entries hanging off
/// the matrix corners are kept at zero and never read.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedSystem {
    n: usize,
    sub2: Vec<f64>,
    sub1: Vec<f64>,
    diag: Vec<f64>,
    sup1: Vec<f64>,
    sup2: Vec<f64>,
    rhs: Vec<f64>,
}

impl BandedSystem {
    pub fn new(n: usize) -> Self {
        assert!(n > 0, "system must have at least one unknown");
        BandedSystem {
            n,
            sub2: vec![0.0; n],
            sub1: vec![0.0; n],
            diag: vec![0.0; n],
            sup1: vec![0.0; n],
            sup2: vec![0.0; n],
            rhs: vec![0.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn band_mut(&mut self, i: usize, j: usize) -> &mut f64 {
        assert!(i < self.n && j < self.n, "entry ({i},{j}) out of range");
        match j as isize - i as isize {
            -2 => &mut self.sub2[i],
            -1 => &mut self.sub1[i],
            0 => &mut self.diag[i],
            1 => &mut self.sup1[i],
            2 => &mut self.sup2[i],
            _ => panic!("entry ({i},{j}) lies outside the pentadiagonal band"),
        }
    }

    /// Matrix entry, zero outside the band.
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        match j as isize - i as isize {
            -2 => self.sub2[i],
            -1 => self.sub1[i],
            0 => self.diag[i],
            1 => self.sup1[i],
            2 => self.sup2[i],
            _ => 0.0,
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        *self.band_mut(i, j) = v;
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        *self.band_mut(i, j) += v;
    }

    pub fn set_rhs(&mut self, i: usize, v: f64) {
        self.rhs[i] = v;
    }

    pub fn rhs(&self, i: usize) -> f64 {
        self.rhs[i]
    }

    /// Clears row `i` to the identity equation `x_i = value`.
    pub fn set_identity_row(&mut self, i: usize, value: f64) {
        self.sub2[i] = 0.0;
        self.sub1[i] = 0.0;
        self.diag[i] = 1.0;
        self.sup1[i] = 0.0;
        self.sup2[i] = 0.0;
        self.rhs[i] = value;
    }

    /// `A x`, for residual verification.
    pub fn multiply(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(BANDWIDTH);
                let hi = (i + BANDWIDTH).min(self.n - 1);
                (lo..=hi).map(|j| self.entry(i, j) * x[j]).sum()
            })
            .collect()
    }

    /// Solves the system by banded LU with partial pivoting.
    ///
    /// Row `i` of the working storage covers columns `i-2 ..= i+4`; the two
    /// extra upper slots absorb fill-in from row swaps.
    pub fn solve(&self) -> Result<Vec<f64>> {
        let n = self.n;
        let width = 2 * BANDWIDTH + BANDWIDTH + 1; // kl + (kl + ku) + 1 slots
        let offset = |i: usize, j: usize| -> usize {
            (j + BANDWIDTH) - i // j - (i - kl), callers guarantee j >= i - kl
        };
        let mut band = vec![[0.0f64; 7]; n];
        debug_assert_eq!(width, 7);
        let mut scale = 0.0f64;
        for i in 0..n {
            let lo = i.saturating_sub(BANDWIDTH);
            let hi = (i + BANDWIDTH).min(n - 1);
            for j in lo..=hi {
                let v = self.entry(i, j);
                band[i][offset(i, j)] = v;
                scale = scale.max(v.abs());
            }
        }
        if scale == 0.0 {
            return Err(Error::SingularSystem(0));
        }
        let tol = PIVOT_RTOL * scale;
        let mut x = self.rhs.clone();

        for k in 0..n {
            let rmax = (k + BANDWIDTH).min(n - 1);
            let mut piv = k;
            let mut pmag = band[k][offset(k, k)].abs();
            for r in k + 1..=rmax {
                let mag = band[r][offset(r, k)].abs();
                if mag > pmag {
                    piv = r;
                    pmag = mag;
                }
            }
            if pmag <= tol {
                return Err(Error::SingularSystem(k));
            }
            if piv != k {
                let jmax = (k + 2 * BANDWIDTH).min(n - 1);
                for j in k..=jmax {
                    let a = band[k][offset(k, j)];
                    band[k][offset(k, j)] = band[piv][offset(piv, j)];
                    band[piv][offset(piv, j)] = a;
                }
                x.swap(k, piv);
            }
            let pivot = band[k][offset(k, k)];
            for r in k + 1..=rmax {
                let m = band[r][offset(r, k)] / pivot;
                band[r][offset(r, k)] = 0.0;
                if m != 0.0 {
                    let jmax = (k + 2 * BANDWIDTH).min(n - 1);
                    for j in k + 1..=jmax {
                        band[r][offset(r, j)] -= m * band[k][offset(k, j)];
                    }
                    x[r] -= m * x[k];
                }
            }
        }

        for i in (0..n).rev() {
            let jmax = (i + 2 * BANDWIDTH).min(n - 1);
            let mut s = x[i];
            for j in i + 1..=jmax {
                s -= band[i][offset(i, j)] * x[j];
            }
            x[i] = s / band[i][offset(i, i)];
        }
        Ok(x)
    }
}

/// Free-function form of [`BandedSystem::solve`].
pub fn solve_banded(system: &BandedSystem) -> Result<Vec<f64>> {
    system.solve()
}
