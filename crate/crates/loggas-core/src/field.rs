//! Planar electric field generated by point charges on the axis against
//! a uniform background segment, in closed form: charge terms are
//! Coulomb gradients, background terms use the log/arctan antiderivatives
//! of the segment kernel. Supports disc truncation around charges, flux
//! integrals along segments, and field-energy quadrature over rectangles.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fmath;
use crate::pointconf::{PointConfiguration, Window};
use crate::quad::{self, Rect};

const FLUX_BUDGET: usize = 2_000_000;
const ENERGY_BUDGET: usize = 6_000_000;

/// Evaluator of the field of `source` (unit charges on the axis) plus a
/// uniform negative background on `background`, with charges omitted
/// inside discs of radius `eta` around them (the disc-averaged charge
/// field vanishes there, so omission is the exact truncated field).
#[derive(Debug, Clone)]
pub struct FieldEvaluator {
    source: PointConfiguration,
    background: Option<Window>,
    eta: f64,
}

impl FieldEvaluator {
    /// Field of charges with an optional background segment, untruncated.
    pub fn new(source: PointConfiguration, background: Option<Window>) -> Self {
        Self { source, background, eta: 0.0 }
    }

    /// The standard construction: charges of `c` against the background
    /// filling the carrier of `c`.
    pub fn local(c: &PointConfiguration) -> Self {
        Self::new(c.clone(), Some(c.carrier()))
    }

    /// Same sources with truncation radius `eta` in `(0, 1)`.
    pub fn truncate(&self, eta: f64) -> Result<Self> {
        if !(eta > 0.0 && eta < 1.0) {
            return Err(Error::InvalidParameter { name: "eta" });
        }
        Ok(Self { source: self.source.clone(), background: self.background, eta })
    }

    pub fn source(&self) -> &PointConfiguration {
        &self.source
    }

    pub fn background(&self) -> Option<&Window> {
        self.background.as_ref()
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Field value, rejecting evaluation exactly at a singular point
    /// (an untruncated charge, or a background endpoint).
    pub fn eval(&self, x: f64, y: f64) -> Result<[f64; 2]> {
        if self.eta == 0.0 && y == 0.0 && self.source.points().iter().any(|&p| p == x) {
            return Err(Error::Singularity { x, y });
        }
        if let Some(w) = &self.background {
            if y == 0.0 && (x == w.lo() || x == w.hi()) {
                return Err(Error::Singularity { x, y });
            }
        }
        Ok(self.eval_raw(x, y))
    }

    /// Field value without singularity checks; quadrature callers keep
    /// nodes off the singular set via panel cuts.
    fn eval_raw(&self, x: f64, y: f64) -> [f64; 2] {
        let eta2 = self.eta * self.eta;
        let mut ex = 0.0;
        let mut ey = 0.0;
        for &p in self.source.points() {
            let dx = x - p;
            let r2 = dx * dx + y * y;
            if self.eta > 0.0 && r2 < eta2 {
                continue;
            }
            ex -= dx / r2;
            ey -= y / r2;
        }
        if let Some(w) = &self.background {
            let (lo, hi) = (w.lo(), w.hi());
            let a = x - lo;
            let b = x - hi;
            ex += 0.5 * (fmath::ln(a * a + y * y) - fmath::ln(b * b + y * y));
            if y != 0.0 {
                ey += fmath::atan(a / y) - fmath::atan(b / y);
            }
        }
        [ex, ey]
    }

    /// Parameter values in `(0, 1)` where the segment from `a` to `b`
    /// crosses a discontinuity or singularity line of the integrand:
    /// truncation-disc boundaries, the charge axis, background endpoints,
    /// and (untruncated) charges themselves.
    fn segment_cuts(&self, a: [f64; 2], b: [f64; 2]) -> Vec<f64> {
        let d = [b[0] - a[0], b[1] - a[1]];
        let mut cuts = Vec::new();
        let mut push = |t: f64| {
            if t > 0.0 && t < 1.0 {
                cuts.push(t);
            }
        };
        // Axis crossing.
        if d[1] != 0.0 {
            push(-a[1] / d[1]);
        }
        // On-axis singular points crossed by a horizontal segment, and
        // disc boundaries for truncated fields.
        let mut singular_xs: Vec<f64> = Vec::new();
        if let Some(w) = &self.background {
            singular_xs.push(w.lo());
            singular_xs.push(w.hi());
        }
        if self.eta == 0.0 {
            singular_xs.extend_from_slice(self.source.points());
        }
        for sx in singular_xs {
            if d[1] == 0.0 && a[1] == 0.0 && d[0] != 0.0 {
                push((sx - a[0]) / d[0]);
            }
        }
        if self.eta > 0.0 {
            let dd = d[0] * d[0] + d[1] * d[1];
            for &p in self.source.points() {
                // |a + t d - (p, 0)|^2 = eta^2, a quadratic in t.
                let ox = a[0] - p;
                let oy = a[1];
                let bq = ox * d[0] + oy * d[1];
                let cq = ox * ox + oy * oy - self.eta * self.eta;
                let disc = bq * bq - dd * cq;
                if disc > 0.0 {
                    let s = fmath::sqrt(disc);
                    push((-bq - s) / dd);
                    push((-bq + s) / dd);
                }
            }
        }
        cuts
    }

    /// Flux of the field through an oriented segment, with the normal
    /// obtained by rotating the direction clockwise (for a counter-
    /// clockwise boundary traversal this is the outward normal).
    pub fn flux(&self, a: [f64; 2], b: [f64; 2], tol: f64) -> Result<f64> {
        let d = [b[0] - a[0], b[1] - a[1]];
        let cuts = self.segment_cuts(a, b);
        quad::integrate_1d_cuts(
            &mut |t: f64| {
                let e = self.eval_raw(a[0] + t * d[0], a[1] + t * d[1]);
                e[0] * d[1] - e[1] * d[0]
            },
            0.0,
            1.0,
            &cuts,
            tol,
            FLUX_BUDGET,
        )
    }

    /// Integral of the squared field along a segment (arc-length
    /// measure); requires a truncated field.
    pub fn line_energy(&self, a: [f64; 2], b: [f64; 2], tol: f64) -> Result<f64> {
        if self.eta <= 0.0 {
            return Err(Error::PreconditionViolated { check: "line energy needs eta > 0" });
        }
        let d = [b[0] - a[0], b[1] - a[1]];
        let len = fmath::sqrt(d[0] * d[0] + d[1] * d[1]);
        let cuts = self.segment_cuts(a, b);
        let v = quad::integrate_1d_cuts(
            &mut |t: f64| {
                let e = self.eval_raw(a[0] + t * d[0], a[1] + t * d[1]);
                e[0] * e[0] + e[1] * e[1]
            },
            0.0,
            1.0,
            &cuts,
            tol / (1.0 + len),
            FLUX_BUDGET,
        )?;
        Ok(len * v)
    }

    /// Total outward flux through the boundary of a rectangle, traversed
    /// counter-clockwise.
    pub fn box_flux(&self, rect: Rect, tol: f64) -> Result<f64> {
        let t = tol / 4.0;
        let f = self.flux([rect.x0, rect.y0], [rect.x1, rect.y0], t)?
            + self.flux([rect.x1, rect.y0], [rect.x1, rect.y1], t)?
            + self.flux([rect.x1, rect.y1], [rect.x0, rect.y1], t)?
            + self.flux([rect.x0, rect.y1], [rect.x0, rect.y0], t)?;
        Ok(f)
    }

    /// Integral of `|E|^2` over the rectangle by adaptive quadrature to
    /// tolerance `tol` (relative, with a small absolute floor). Requires
    /// a truncated field so the integrand is bounded at charges.
    pub fn energy_rectangle(&self, rect: Rect, tol: f64) -> Result<f64> {
        if self.eta <= 0.0 {
            return Err(Error::PreconditionViolated { check: "energy needs eta > 0" });
        }
        if !(tol > 0.0) {
            return Err(Error::InvalidParameter { name: "tol" });
        }
        let mut cuts_x: Vec<f64> = Vec::new();
        let cuts_y: Vec<f64> = alloc::vec![0.0, self.eta, -self.eta];
        for &p in self.source.points() {
            cuts_x.push(p);
            cuts_x.push(p - self.eta);
            cuts_x.push(p + self.eta);
        }
        if let Some(w) = &self.background {
            cuts_x.push(w.lo());
            cuts_x.push(w.hi());
        }
        quad::integrate_2d(
            &mut |x, y| {
                let e = self.eval_raw(x, y);
                e[0] * e[0] + e[1] * e[1]
            },
            rect,
            &cuts_x,
            &cuts_y,
            tol,
            1e-12,
            ENERGY_BUDGET,
        )
    }
}

/// Renormalized field energy of the configuration's own truncated local
/// field over its carrier thickened to height `t_height`: the squared
/// field integral scaled by `1/(2 pi)` plus `n log eta`, which removes
/// the leading small-`eta` divergence of `n` smeared unit charges.
pub fn welec_eta(c: &PointConfiguration, eta: f64, t_height: f64, tol: f64) -> Result<f64> {
    if !(eta > 0.0 && eta < 0.5) {
        return Err(Error::InvalidParameter { name: "eta" });
    }
    if !(t_height > 0.0) {
        return Err(Error::InvalidParameter { name: "t_height" });
    }
    let f = FieldEvaluator::local(c).truncate(eta)?;
    let rect = Rect::new(c.carrier().lo(), c.carrier().hi(), -t_height, t_height)?;
    let energy = f.energy_rectangle(rect, tol)?;
    Ok(energy / (2.0 * PI) + c.len() as f64 * fmath::ln(eta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate_1d_cuts;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn config(points: &[f64], r: f64) -> PointConfiguration {
        PointConfiguration::new(points.to_vec(), Window::centered(r).unwrap()).unwrap()
    }

    #[test]
    fn single_charge_field() {
        let f = FieldEvaluator::new(config(&[0.0], 1.0), None);
        let e = f.eval(1.0, 0.0).unwrap();
        assert_abs_diff_eq!(e[0], -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(e[1], 0.0);
        assert!(matches!(f.eval(0.0, 0.0), Err(Error::Singularity { .. })));
    }

    #[test]
    fn background_symmetry_axis() {
        let f = FieldEvaluator::new(
            PointConfiguration::empty(Window::centered(1.0).unwrap()),
            Some(Window::centered(1.0).unwrap()),
        );
        for &y in &[0.3, -0.8, 2.0] {
            let e = f.eval(0.0, y).unwrap();
            assert_abs_diff_eq!(e[0], 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn background_closed_form_matches_quadrature() {
        let w = Window::new(-1.0, 2.0).unwrap();
        let f = FieldEvaluator::new(PointConfiguration::empty(w), Some(w));
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let x = rng.gen_range(-3.0..3.0);
            let y = rng.gen_range(0.1..2.0) * if rng.gen::<bool>() { 1.0 } else { -1.0 };
            let ex = integrate_1d_cuts(
                &mut |t: f64| (x - t) / ((x - t) * (x - t) + y * y),
                w.lo(),
                w.hi(),
                &[x],
                1e-11,
                1_000_000,
            )
            .unwrap();
            let ey = integrate_1d_cuts(
                &mut |t: f64| y / ((x - t) * (x - t) + y * y),
                w.lo(),
                w.hi(),
                &[x],
                1e-11,
                1_000_000,
            )
            .unwrap();
            let e = f.eval(x, y).unwrap();
            assert_abs_diff_eq!(e[0], ex, epsilon = 1e-9);
            assert_abs_diff_eq!(e[1], ey, epsilon = 1e-9);
        }
    }

    #[test]
    fn truncation_changes_nothing_far_from_charges() {
        let c = config(&[-0.5, 0.5], 1.0);
        let f = FieldEvaluator::local(&c);
        let g = f.truncate(0.1).unwrap();
        for &(x, y) in &[(0.2, 0.3), (-1.5, 0.05), (0.61, 0.0), (0.5, 0.11)] {
            let a = f.eval(x, y).unwrap();
            let b = g.eval(x, y).unwrap();
            assert_abs_diff_eq!(a[0], b[0], epsilon = 1e-12);
            assert_abs_diff_eq!(a[1], b[1], epsilon = 1e-12);
        }
    }

    #[test]
    fn truncated_field_drops_only_the_covering_charge() {
        let c = config(&[-0.5, 0.5], 1.0);
        let f = FieldEvaluator::local(&c).truncate(0.2).unwrap();
        let without = FieldEvaluator::new(
            config(&[-0.5], 1.0),
            Some(Window::centered(1.0).unwrap()),
        );
        // Inside the disc around 0.5 the truncated field equals the
        // field with that charge removed.
        let a = f.eval(0.55, 0.05).unwrap();
        let b = without.eval(0.55, 0.05).unwrap();
        assert_abs_diff_eq!(a[0], b[0], epsilon = 1e-12);
        assert_abs_diff_eq!(a[1], b[1], epsilon = 1e-12);
    }

    #[test]
    fn truncated_field_bounded_near_charge() {
        let c = config(&[0.0], 1.0);
        let f = FieldEvaluator::local(&c).truncate(0.1).unwrap();
        let mut max = 0.0f64;
        for i in -20..=20 {
            for j in -20..=20 {
                let e = f.eval_raw(i as f64 * 0.01, j as f64 * 0.01);
                max = max.max(e[0].abs()).max(e[1].abs());
            }
        }
        assert!(max.is_finite() && max < 1e3);
    }

    #[test]
    fn gauss_identity_zero_discrepancy() {
        let c = config(&[-0.5, 0.5], 1.0);
        let f = FieldEvaluator::local(&c).truncate(0.1).unwrap();
        let flux = f.box_flux(Rect::new(-1.0, 1.0, -5.0, 5.0).unwrap(), 1e-7).unwrap();
        assert_abs_diff_eq!(flux, 0.0, epsilon = 1e-5);
    }

    #[test]
    fn gauss_identity_unit_discrepancy() {
        let c = config(&[0.5], 1.0);
        let f = FieldEvaluator::local(&c).truncate(0.1).unwrap();
        let flux = f.box_flux(Rect::new(-1.0, 1.0, -5.0, 5.0).unwrap(), 1e-7).unwrap();
        // One charge minus background length 2.
        assert_abs_diff_eq!(flux, 2.0 * PI, epsilon = 1e-5);
    }

    #[test]
    fn flux_additive_over_split_segment() {
        let c = config(&[-0.3, 0.4], 1.0);
        let f = FieldEvaluator::local(&c).truncate(0.05).unwrap();
        let whole = f.flux([-2.0, 0.7], [2.0, 0.7], 1e-9).unwrap();
        let a = f.flux([-2.0, 0.7], [0.3, 0.7], 1e-9).unwrap();
        let b = f.flux([0.3, 0.7], [2.0, 0.7], 1e-9).unwrap();
        assert_abs_diff_eq!(whole, a + b, epsilon = 1e-7);
    }

    #[test]
    fn energy_nesting() {
        let c = config(&[-0.5, 0.5], 1.0);
        let f = FieldEvaluator::local(&c).truncate(0.1).unwrap();
        let big = f.energy_rectangle(Rect::new(-1.0, 1.0, -2.0, 2.0).unwrap(), 1e-5).unwrap();
        let small = f.energy_rectangle(Rect::new(-0.5, 0.5, -1.0, 1.0).unwrap(), 1e-5).unwrap();
        assert!(small <= big * (1.0 + 1e-4));
        assert!(big >= 0.0 && small >= 0.0);
    }

    #[test]
    fn energy_of_nothing_is_zero() {
        let w = Window::centered(1.0).unwrap();
        let f = FieldEvaluator::new(PointConfiguration::empty(w), None)
            .truncate(0.1)
            .unwrap();
        let v = f.energy_rectangle(Rect::new(-1.0, 1.0, -1.0, 1.0).unwrap(), 1e-6).unwrap();
        assert_abs_diff_eq!(v, 0.0);
    }

    #[test]
    fn welec_rejects_bad_eta() {
        let c = config(&[-0.5, 0.5], 1.0);
        assert!(welec_eta(&c, 0.0, 4.0, 1e-4).is_err());
        assert!(welec_eta(&c, 0.7, 4.0, 1e-4).is_err());
    }
}
