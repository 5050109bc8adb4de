//! Point configurations on the line: windows, gap enumerations,
//! discrepancy, and process-level transforms (restrict, translate,
//! paste, translation averaging, fluctuation bounds).

use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::fmath;
use crate::summation::Accumulator;

/// Closed interval `[lo, hi]` with positive length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    lo: f64,
    hi: f64,
}

impl Window {
    /// Creates `[lo, hi]`; endpoints must be finite with `lo < hi`.
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidWindow { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    /// The symmetric window `[-r, r]`.
    pub fn centered(r: f64) -> Result<Self> {
        Self::new(-r, r)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    /// Closed-interval membership.
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// Intersection, when it has positive length.
    pub fn intersect(&self, other: &Window) -> Option<Window> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        if lo < hi {
            Some(Window { lo, hi })
        } else {
            None
        }
    }

    /// The window under the translation `p -> p - u`.
    pub fn translate(&self, u: f64) -> Window {
        Window { lo: self.lo - u, hi: self.hi - u }
    }
}

/// Finite sorted multiset of positions with a carrier window.
///
/// Points are sorted on construction; duplicates are allowed in storage
/// but rejected by the enumeration operations, which require a simple
/// configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct PointConfiguration {
    points: Vec<f64>,
    carrier: Window,
}

impl PointConfiguration {
    /// Builds a configuration, sorting `points`; every point must lie in
    /// the carrier (closed interval) and be finite.
    pub fn new(mut points: Vec<f64>, carrier: Window) -> Result<Self> {
        for &p in &points {
            if !p.is_finite() || !carrier.contains(p) {
                return Err(Error::OutOfWindow { value: p, lo: carrier.lo, hi: carrier.hi });
            }
        }
        points.sort_by(f64::total_cmp);
        Ok(Self { points, carrier })
    }

    /// The empty configuration on `carrier`.
    pub fn empty(carrier: Window) -> Self {
        Self { points: Vec::new(), carrier }
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn carrier(&self) -> Window {
        self.carrier
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// True when the points are strictly increasing.
    pub fn is_simple(&self) -> bool {
        self.points.windows(2).all(|w| w[0] < w[1])
    }

    /// Number of points in the closed window `w`.
    pub fn count_in(&self, w: Window) -> usize {
        count_in_closed(&self.points, w.lo, w.hi)
    }

    /// Restriction to `w`: the points inside `w`, carried on `w`.
    pub fn restrict(&self, w: Window) -> PointConfiguration {
        let lo = self.points.partition_point(|&p| p < w.lo);
        let hi = self.points.partition_point(|&p| p <= w.hi);
        PointConfiguration { points: self.points[lo..hi].to_vec(), carrier: w }
    }

    /// The translation `p -> p - u` of points and carrier.
    pub fn translate(&self, u: f64) -> PointConfiguration {
        PointConfiguration {
            points: self.points.iter().map(|p| p - u).collect(),
            carrier: self.carrier.translate(u),
        }
    }

    /// Point count in `w` minus the length of `w`.
    pub fn discrepancy(&self, w: Window) -> f64 {
        self.count_in(w) as f64 - w.length()
    }

    /// Both gap enumerations; requires a simple configuration.
    pub fn gaps(&self) -> Result<GapView> {
        GapView::new(self)
    }

    /// The index `m` with `x_0(c - u) = x_m(c)` in the origin enumeration:
    /// how far the first point at or right of `u` sits from the first
    /// point at or right of 0.
    pub fn position_after_translation(&self, u: f64) -> Result<i64> {
        if let Some(w) = self.points.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::MultiplePoint { position: w[0] });
        }
        let j = self.points.partition_point(|&p| p < u);
        if j == self.points.len() {
            return Err(Error::NoPointRight { threshold: u });
        }
        let origin = self.points.partition_point(|&p| p < 0.0);
        Ok(j as i64 - origin as i64)
    }
}

/// Count of points of a sorted slice inside the closed interval
/// `[lo, hi]`; tolerates `lo == hi`.
fn count_in_closed(points: &[f64], lo: f64, hi: f64) -> usize {
    let a = points.partition_point(|&p| p < lo);
    let b = points.partition_point(|&p| p <= hi);
    b.saturating_sub(a)
}

/// Gap enumerations of a simple configuration.
///
/// The origin enumeration is `... x_{-1} < 0 <= x_0 < x_1 ...` with gaps
/// `gamma_k = x_{k+1} - x_k`, set to `+inf` once either endpoint walks
/// off the configuration in either direction. The left enumeration is
/// `z_1 < ... < z_n` (1-based) with gaps `g_i = z_{i+1} - z_i`.
#[derive(Debug, Clone)]
pub struct GapView {
    points: Vec<f64>,
    origin: usize,
}

impl GapView {
    fn new(c: &PointConfiguration) -> Result<Self> {
        if let Some(w) = c.points.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::MultiplePoint { position: w[0] });
        }
        let origin = c.points.partition_point(|&p| p < 0.0);
        Ok(Self { points: c.points.clone(), origin })
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    /// Number of negative points, which is the array index of `x_0`.
    pub fn negative_count(&self) -> usize {
        self.origin
    }

    fn origin_slot(&self, k: i64) -> Option<usize> {
        let idx = self.origin as i64 + k;
        if idx >= 0 && (idx as usize) < self.points.len() {
            Some(idx as usize)
        } else {
            None
        }
    }

    /// The point `x_k` of the origin enumeration.
    pub fn origin_point(&self, k: i64) -> Result<f64> {
        self.origin_slot(k)
            .map(|i| self.points[i])
            .ok_or(Error::IndexOutOfRange { index: k })
    }

    /// The gap `gamma_k = x_{k+1} - x_k`, `+inf` out of range.
    pub fn origin_gap(&self, k: i64) -> f64 {
        match (self.origin_slot(k), self.origin_slot(k + 1)) {
            (Some(i), Some(j)) => self.points[j] - self.points[i],
            _ => f64::INFINITY,
        }
    }

    /// The point `z_i` of the left enumeration (1-based).
    pub fn left_point(&self, i: usize) -> Result<f64> {
        if (1..=self.points.len()).contains(&i) {
            Ok(self.points[i - 1])
        } else {
            Err(Error::IndexOutOfRange { index: i as i64 })
        }
    }

    /// The gap `g_i = z_{i+1} - z_i` (defined for `1 <= i <= n-1`).
    pub fn left_gap(&self, i: usize) -> Result<f64> {
        if i >= 1 && i < self.points.len() {
            Ok(self.points[i] - self.points[i - 1])
        } else {
            Err(Error::IndexOutOfRange { index: i as i64 })
        }
    }
}

/// Pastes copies carried on `[-r, r]` onto adjacent tiles going left:
/// copy `i` is translated by `-2ri` onto the tile `[-r, r] - 2ri`.
pub fn paste(copies: &[PointConfiguration], r: u32) -> Result<PointConfiguration> {
    if r == 0 {
        return Err(Error::InvalidParameter { name: "r" });
    }
    let rf = r as f64;
    let lambda = Window::new(-rf, rf)?;
    for c in copies {
        if c.carrier() != lambda {
            return Err(Error::CarrierMismatch {
                expected_lo: -rf,
                expected_hi: rf,
                found_lo: c.carrier().lo,
                found_hi: c.carrier().hi,
            });
        }
    }
    let mut points = Vec::new();
    for (i, c) in copies.iter().enumerate() {
        let u = 2.0 * rf * i as f64;
        points.extend(c.points().iter().map(|p| p - u));
    }
    points.sort_by(f64::total_cmp);
    let tiles = copies.len().max(1) as f64;
    let carrier = Window::new(-rf - 2.0 * rf * (tiles - 1.0), rf)?;
    Ok(PointConfiguration { points, carrier })
}

/// One draw of the translation average: `c - t` with `t` uniform on `[-r, r]`.
pub fn average_translate_sample<R: Rng + ?Sized>(
    c: &PointConfiguration,
    r: f64,
    rng: &mut R,
) -> PointConfiguration {
    let t = rng.gen_range(-r..=r);
    c.translate(t)
}

/// Piecewise-linear sampled function together with a caller-supplied
/// bound on its derivative sup-norm.
#[derive(Debug, Clone)]
pub struct SampledFunction {
    xs: Vec<f64>,
    ys: Vec<f64>,
    deriv_sup: f64,
}

impl SampledFunction {
    /// Breakpoints must be strictly increasing with at least two entries.
    pub fn new(xs: Vec<f64>, ys: Vec<f64>, deriv_sup: f64) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::SizeMismatch { left: xs.len(), right: ys.len() });
        }
        if xs.len() < 2 {
            return Err(Error::InsufficientPoints { needed: 2, found: xs.len() });
        }
        if !xs.windows(2).all(|w| w[0] < w[1]) || !xs.iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidParameter { name: "xs" });
        }
        if !(deriv_sup >= 0.0 && deriv_sup.is_finite()) || !ys.iter().all(|y| y.is_finite()) {
            return Err(Error::InvalidParameter { name: "deriv_sup" });
        }
        Ok(Self { xs, ys, deriv_sup })
    }

    /// Samples `f` on a uniform grid of `panels` panels over `[a, b]`.
    pub fn from_fn(
        a: f64,
        b: f64,
        panels: usize,
        f: impl Fn(f64) -> f64,
        deriv_sup: f64,
    ) -> Result<Self> {
        if panels == 0 || !(a < b) {
            return Err(Error::InvalidParameter { name: "panels" });
        }
        let n = panels + 1;
        let xs: Vec<f64> = (0..n)
            .map(|i| a + (b - a) * i as f64 / panels as f64)
            .collect();
        let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
        Self::new(xs, ys, deriv_sup)
    }

    pub fn domain(&self) -> Window {
        Window { lo: self.xs[0], hi: *self.xs.last().unwrap() }
    }

    /// Linear interpolation, clamped to the boundary values outside
    /// the domain.
    pub fn eval(&self, x: f64) -> f64 {
        if x <= self.xs[0] {
            return self.ys[0];
        }
        if x >= *self.xs.last().unwrap() {
            return *self.ys.last().unwrap();
        }
        let i = self.xs.partition_point(|&t| t <= x) - 1;
        let (x0, x1) = (self.xs[i], self.xs[i + 1]);
        let t = (x - x0) / (x1 - x0);
        self.ys[i] * (1.0 - t) + self.ys[i + 1] * t
    }

    /// Exact integral of the piecewise-linear interpolant over `[lo, hi]`
    /// (clipped to the domain).
    pub fn integral_over(&self, lo: f64, hi: f64) -> f64 {
        let lo = lo.max(self.xs[0]);
        let hi = hi.min(*self.xs.last().unwrap());
        if lo >= hi {
            return 0.0;
        }
        let mut acc = Accumulator::new();
        let mut x_prev = lo;
        let mut y_prev = self.eval(lo);
        for (&x, &y) in self.xs.iter().zip(&self.ys) {
            if x <= lo {
                continue;
            }
            if x >= hi {
                break;
            }
            acc.add(0.5 * (y_prev + y) * (x - x_prev));
            x_prev = x;
            y_prev = y;
        }
        let y_hi = self.eval(hi);
        acc.add(0.5 * (y_prev + y_hi) * (hi - x_prev));
        acc.total()
    }

    /// Max of the sampled `|values|`.
    pub fn sup_norm(&self) -> f64 {
        self.ys.iter().fold(0.0, |m, &y| m.max(fmath::abs(y)))
    }

    pub fn deriv_sup(&self) -> f64 {
        self.deriv_sup
    }
}

/// Fluctuation integral of `g` against `dC - dx` on `w`, and its
/// discrepancy bound.
///
/// Returns `(lhs, rhs)`: `lhs = sum_{p in C cap w} g(p) - int_w g`, and
/// `rhs` sums `deriv_sup * (|D_[a,k]| + |D_[k,k+1]| + 1)` over integers
/// `k` with `[k, k+1]` inside `w = [a, b]`, plus `sup|g| * |D_[a,b]|`,
/// writing `D_I` for the discrepancy on `I`.
pub fn fluctuation_bound(
    g: &SampledFunction,
    c: &PointConfiguration,
    w: Window,
) -> Result<(f64, f64)> {
    let d = g.domain();
    if d.lo > w.lo + 1e-12 || d.hi < w.hi - 1e-12 {
        return Err(Error::OutOfWindow { value: w.lo, lo: d.lo, hi: d.hi });
    }
    let (a, b) = (w.lo, w.hi);

    let mut lhs = Accumulator::new();
    let inside = c.restrict(w);
    for &p in inside.points() {
        lhs.add(g.eval(p));
    }
    lhs.add(-g.integral_over(a, b));

    let discr = |lo: f64, hi: f64| {
        count_in_closed(c.points(), lo, hi) as f64 - (hi - lo)
    };
    let mut rhs = Accumulator::new();
    let mut k = fmath::ceil(a);
    while k + 1.0 <= b + 1e-12 {
        rhs.add(g.deriv_sup() * (fmath::abs(discr(a, k)) + fmath::abs(discr(k, k + 1.0)) + 1.0));
        k += 1.0;
    }
    rhs.add(g.sup_norm() * fmath::abs(discr(a, b)));
    Ok((lhs.total(), rhs.total()))
}
