//! Eigenvalues of real symmetric tridiagonal matrices by Sturm-count
//! bisection: the number of negative pivots of the `LDL^T` factorization
//! of `T - x I` counts eigenvalues below `x`, and each eigenvalue is
//! located independently by binary search on that count.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fmath;

#[derive(Debug, Clone)]
pub struct SymTridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
    pivmin: f64,
}

impl SymTridiagonal {
    /// Matrix with the given diagonal and first off-diagonal
    /// (`off.len() == diag.len() - 1`).
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || off.len() + 1 != diag.len() {
            return Err(Error::SizeMismatch { left: diag.len(), right: off.len() });
        }
        if diag.iter().chain(off.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter { name: "matrix entries" });
        }
        let bmax2 = off.iter().fold(0.0f64, |m, &b| m.max(b * b));
        // Smallest pivot magnitude the recurrence may divide by; scaled
        // so b^2 / pivmin stays finite.
        let pivmin = bmax2.max(1.0) * 1e-292;
        Ok(Self { diag, off, pivmin })
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    /// Number of eigenvalues strictly below `x` (Sturm count).
    pub fn count_below(&self, x: f64) -> usize {
        let mut count = 0usize;
        let mut d = self.diag[0] - x;
        if fmath::abs(d) < self.pivmin {
            d = -self.pivmin;
        }
        if d < 0.0 {
            count += 1;
        }
        for i in 1..self.diag.len() {
            let b = self.off[i - 1];
            d = (self.diag[i] - x) - b * b / d;
            if fmath::abs(d) < self.pivmin {
                d = -self.pivmin;
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// All eigenvalues in ascending order, each located to absolute
    /// tolerance `tol` by bisection inside the Gershgorin interval.
    pub fn eigenvalues(&self, tol: f64) -> Result<Vec<f64>> {
        if !(tol > 0.0) {
            return Err(Error::InvalidParameter { name: "tol" });
        }
        let n = self.n();
        let mut glo = f64::INFINITY;
        let mut ghi = f64::NEG_INFINITY;
        for i in 0..n {
            let bl = if i > 0 { fmath::abs(self.off[i - 1]) } else { 0.0 };
            let br = if i + 1 < n { fmath::abs(self.off[i]) } else { 0.0 };
            glo = glo.min(self.diag[i] - bl - br);
            ghi = ghi.max(self.diag[i] + bl + br);
        }
        let margin = 1e-10 * (1.0 + fmath::abs(glo) + fmath::abs(ghi));
        glo -= margin;
        ghi += margin;
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let mut lo = glo;
            let mut hi = ghi;
            let mut iters = 0;
            while hi - lo > tol + 4.0 * f64::EPSILON * fmath::abs(lo).max(fmath::abs(hi)) {
                iters += 1;
                if iters > 200 {
                    return Err(Error::EigensolverFailure { residual: hi - lo });
                }
                let mid = 0.5 * (lo + hi);
                if self.count_below(mid) <= k {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            out.push(0.5 * (lo + hi));
        }
        out.sort_by(f64::total_cmp);
        Ok(out)
    }
}
