//! Sorted-tuple view of configurations, exact optimal assignment between
//! sample sets, displacement interpolation, and quantitative convexity
//! certificates for the intrinsic energy along the interpolation.

use alloc::vec::Vec;

use crate::energy;
use crate::error::{Error, Result};
use crate::fmath;
use crate::pointconf::{PointConfiguration, Window};
use crate::summation::Accumulator;

/// A nondecreasing tuple of finite positions; the coordinate-ordered view
/// a transport map acts on.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledTuple {
    values: Vec<f64>,
}

impl LabeledTuple {
    /// Wraps a nondecreasing sequence of finite values.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        for w in values.windows(2) {
            if !(w[0] <= w[1]) {
                return Err(Error::InvalidParameter { name: "values not sorted" });
            }
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter { name: "values not finite" });
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn require_strict(&self) -> Result<()> {
        for w in self.values.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicatePoint { position: w[0] });
            }
        }
        Ok(())
    }
}

/// Orders a `2R`-point simple configuration on `[-R, R]` into a tuple.
pub fn label(c: &PointConfiguration) -> Result<LabeledTuple> {
    let r = energy::symmetric_half_width(c.carrier())?;
    if c.len() != 2 * r as usize {
        return Err(Error::WrongCount { expected: 2 * r as usize, found: c.len() });
    }
    let t = LabeledTuple::new(c.points().to_vec())?;
    t.require_strict()?;
    Ok(t)
}

/// Inverse of [`label`]: a tuple of even length `2R` with values in
/// `[-R, R]` becomes a configuration carried on `[-R, R]`.
pub fn unlabel(x: &LabeledTuple) -> Result<PointConfiguration> {
    if x.len() < 2 || x.len() % 2 != 0 {
        return Err(Error::WrongCount { expected: x.len() + x.len() % 2, found: x.len() });
    }
    let r = (x.len() / 2) as f64;
    PointConfiguration::new(x.values.clone(), Window::new(-r, r)?)
}

/// A finitely supported coupling of two sets of tuples.
#[derive(Debug, Clone, PartialEq)]
pub struct Coupling {
    pairs: Vec<(LabeledTuple, LabeledTuple, f64)>,
}

impl Coupling {
    /// Validates nonnegative weights summing to one.
    pub fn new(pairs: Vec<(LabeledTuple, LabeledTuple, f64)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::InvalidParameter { name: "empty coupling" });
        }
        let mut total = Accumulator::new();
        for (_, _, w) in &pairs {
            if !(*w >= 0.0) {
                return Err(Error::InvalidParameter { name: "negative weight" });
            }
            total.add(*w);
        }
        if fmath::abs(total.total() - 1.0) > 1e-9 {
            return Err(Error::InvalidParameter { name: "weights must sum to 1" });
        }
        Ok(Self { pairs })
    }

    pub fn pairs(&self) -> &[(LabeledTuple, LabeledTuple, f64)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Squared Euclidean distance between equal-length tuples.
fn sq_dist(a: &LabeledTuple, b: &LabeledTuple) -> f64 {
    let mut acc = Accumulator::new();
    for (x, y) in a.values.iter().zip(&b.values) {
        acc.add((x - y) * (x - y));
    }
    acc.total()
}

/// Exact minimum-cost perfect assignment for a square cost matrix,
/// returning the column matched to each row. Potential-based shortest
/// augmenting paths; cubic in the matrix size.
fn hungarian(cost: &[Vec<f64>]) -> Vec<usize> {
    let n = cost.len();
    if n == 0 {
        return Vec::new();
    }
    // 1-based arrays; index 0 is the virtual unmatched column.
    let mut u = alloc::vec![0.0f64; n + 1];
    let mut v = alloc::vec![0.0f64; n + 1];
    let mut p = alloc::vec![0usize; n + 1];
    let mut way = alloc::vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = alloc::vec![f64::INFINITY; n + 1];
        let mut used = alloc::vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        // Walk the augmenting path back, flipping matches.
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut ans = alloc::vec![0usize; n];
    for j in 1..=n {
        ans[p[j] - 1] = j - 1;
    }
    ans
}

/// Optimal one-to-one coupling of two equally sized tuple samples under
/// squared Euclidean cost, each matched pair carrying weight `1/m`.
pub fn assignment_coupling(
    samples0: &[LabeledTuple],
    samples1: &[LabeledTuple],
) -> Result<Coupling> {
    if samples0.len() != samples1.len() || samples0.is_empty() {
        return Err(Error::SizeMismatch { left: samples0.len(), right: samples1.len() });
    }
    let dim = samples0[0].len();
    for t in samples0.iter().chain(samples1) {
        if t.len() != dim {
            return Err(Error::SizeMismatch { left: dim, right: t.len() });
        }
    }
    let m = samples0.len();
    let cost: Vec<Vec<f64>> = samples0
        .iter()
        .map(|a| samples1.iter().map(|b| sq_dist(a, b)).collect())
        .collect();
    let assign = hungarian(&cost);
    let w = 1.0 / m as f64;
    let pairs = assign
        .iter()
        .enumerate()
        .map(|(i, &j)| (samples0[i].clone(), samples1[j].clone(), w))
        .collect();
    Coupling::new(pairs)
}

/// Coordinatewise interpolation `(1-t) x0 + t x1`; sorted inputs give a
/// sorted output.
pub fn interpolate(x0: &LabeledTuple, x1: &LabeledTuple, t: f64) -> Result<LabeledTuple> {
    if x0.len() != x1.len() {
        return Err(Error::SizeMismatch { left: x0.len(), right: x1.len() });
    }
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidParameter { name: "t" });
    }
    let values = x0
        .values
        .iter()
        .zip(&x1.values)
        .map(|(a, b)| (1.0 - t) * a + t * b)
        .collect();
    LabeledTuple::new(values)
}

/// Gap-discrepancy functional between two strictly increasing tuples of
/// equal length: the sum over adjacent gaps of
/// `(G_i - G_i')^2 / (G_i^2 + G_i'^2)`. Each summand lies in `[0, 1)`.
pub fn gain(x0: &LabeledTuple, x1: &LabeledTuple) -> Result<f64> {
    if x0.len() != x1.len() {
        return Err(Error::SizeMismatch { left: x0.len(), right: x1.len() });
    }
    x0.require_strict()?;
    x1.require_strict()?;
    let mut acc = Accumulator::new();
    for i in 0..x0.len().saturating_sub(1) {
        let a = x0.values[i + 1] - x0.values[i];
        let b = x1.values[i + 1] - x1.values[i];
        let d = a - b;
        acc.add(d * d / (a * a + b * b));
    }
    Ok(acc.total())
}

/// Both sides of the strengthened midpoint inequality for `-log` at
/// positive arguments: returns
/// `(-log((x+y)/2), -(log x + log y)/2 - (x-y)^2 / (8 (x^2 + y^2)))`.
/// The first component never exceeds the second.
pub fn midpoint_log_bound(x: f64, y: f64) -> (f64, f64) {
    debug_assert!(x > 0.0 && y > 0.0);
    let lhs = -fmath::ln(0.5 * (x + y));
    let rhs = -0.5 * (fmath::ln(x) + fmath::ln(y)) - (x - y) * (x - y) / (8.0 * (x * x + y * y));
    (lhs, rhs)
}

/// Record of the convexity inequality for the intrinsic energy along a
/// half-step of displacement interpolation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvexityCertificate {
    /// Intrinsic energy of the half-interpolate.
    pub lhs: f64,
    /// Mean of the endpoint intrinsic energies.
    pub rhs_mean: f64,
    /// Gap functional between the endpoints.
    pub gain: f64,
    /// Background midpoint deficit; nonpositive since the background
    /// potential is convex.
    pub bf: f64,
    /// `rhs_mean - gain/4 - lhs`; nonnegative up to roundoff.
    pub slack: f64,
}

/// Evaluates the convexity certificate for two strictly increasing
/// tuples inside `[-R, R]`.
pub fn convexity_certificate(
    x0: &LabeledTuple,
    x1: &LabeledTuple,
    r: u32,
) -> Result<ConvexityCertificate> {
    let g = gain(x0, x1)?;
    let half = interpolate(x0, x1, 0.5)?;
    let w0 = energy::intrinsic_energy_sorted(x0.values(), r)?;
    let w1 = energy::intrinsic_energy_sorted(x1.values(), r)?;
    let wh = energy::intrinsic_energy_sorted(half.values(), r)?;
    let mut bfacc = Accumulator::new();
    for i in 0..x0.len() {
        let vh = energy::background_potential(half.values()[i], r)?;
        let v0 = energy::background_potential(x0.values()[i], r)?;
        let v1 = energy::background_potential(x1.values()[i], r)?;
        bfacc.add(vh - 0.5 * (v0 + v1));
    }
    let bf = 2.0 * bfacc.total();
    let lhs = wh.total;
    let rhs_mean = 0.5 * (w0.total + w1.total);
    let slack = rhs_mean - 0.25 * g - lhs;
    Ok(ConvexityCertificate { lhs, rhs_mean, gain: g, bf, slack })
}

/// Negative differential entropy along the monotone-map interpolation of
/// two Gaussians: the interpolant at time `t` is Gaussian with standard
/// deviation `(1-t) s0 + t s1`, so the curve is `-log sigma_t` plus a
/// constant. The means only translate the interpolant and do not enter.
pub fn gaussian_entropy_convexity_toy(
    _m0: f64,
    s0: f64,
    _m1: f64,
    s1: f64,
    ts: &[f64],
) -> Result<Vec<(f64, f64)>> {
    if !(s0 > 0.0) || !(s1 > 0.0) {
        return Err(Error::InvalidParameter { name: "sigma" });
    }
    let c = 0.5 * fmath::ln(2.0 * core::f64::consts::PI * core::f64::consts::E);
    Ok(ts
        .iter()
        .map(|&t| {
            let sigma = (1.0 - t) * s0 + t * s1;
            (t, -(fmath::ln(sigma) + c))
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn tup(v: &[f64]) -> LabeledTuple {
        LabeledTuple::new(v.to_vec()).unwrap()
    }

    #[test]
    fn label_sorts_and_round_trips() {
        let c = PointConfiguration::new(
            alloc::vec![0.2, -0.5],
            Window::centered(1.0).unwrap(),
        )
        .unwrap();
        let t = label(&c).unwrap();
        assert_eq!(t.values(), &[-0.5, 0.2]);
        let back = unlabel(&t).unwrap();
        assert_eq!(back.points(), c.points());
        assert_abs_diff_eq!(back.carrier().hi(), 1.0);
    }

    #[test]
    fn label_rejects_bad_counts_and_duplicates() {
        let w = Window::centered(1.0).unwrap();
        let c = PointConfiguration::new(alloc::vec![0.2], w).unwrap();
        assert!(matches!(label(&c), Err(Error::WrongCount { .. })));
        let d = PointConfiguration::new(alloc::vec![0.2, 0.2], w).unwrap();
        assert!(matches!(label(&d), Err(Error::DuplicatePoint { .. })));
    }

    #[test]
    fn interpolate_endpoints_and_midpoint() {
        let a = tup(&[0.0, 1.0, 2.0]);
        let b = tup(&[0.5, 1.5, 2.5]);
        assert_eq!(interpolate(&a, &b, 0.0).unwrap(), a);
        assert_eq!(interpolate(&a, &b, 1.0).unwrap(), b);
        let mid = interpolate(&a, &b, 0.5).unwrap();
        assert_eq!(mid.values(), &[0.25, 1.25, 2.25]);
    }

    #[test]
    fn interpolation_of_sorted_tuples_stays_sorted() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let mut a: alloc::vec::Vec<f64> = (0..8).map(|_| rng.gen_range(-4.0..4.0)).collect();
            let mut b: alloc::vec::Vec<f64> = (0..8).map(|_| rng.gen_range(-4.0..4.0)).collect();
            a.sort_by(f64::total_cmp);
            b.sort_by(f64::total_cmp);
            let t = rng.gen_range(0.0..=1.0);
            let m = interpolate(&tup(&a), &tup(&b), t).unwrap();
            assert!(m.values().windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn gain_examples() {
        let a = tup(&[0.0, 1.0, 3.0]);
        assert_abs_diff_eq!(gain(&a, &a).unwrap(), 0.0);
        let b = tup(&[0.0, 2.0, 3.0]);
        // Gaps (1,2) vs (2,1): two summands of 1/5.
        assert_abs_diff_eq!(gain(&a, &b).unwrap(), 0.4, epsilon = 1e-14);
    }

    #[test]
    fn gain_summands_below_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let mut a: alloc::vec::Vec<f64> = (0..6).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let mut b: alloc::vec::Vec<f64> = (0..6).map(|_| rng.gen_range(-3.0..3.0)).collect();
            a.sort_by(f64::total_cmp);
            b.sort_by(f64::total_cmp);
            a.dedup();
            b.dedup();
            if a.len() != 6 || b.len() != 6 {
                continue;
            }
            let g = gain(&tup(&a), &tup(&b)).unwrap();
            assert!(g >= 0.0 && g < 5.0);
        }
    }

    #[test]
    fn identity_assignment_for_identical_samples() {
        let s: alloc::vec::Vec<LabeledTuple> =
            (0..5).map(|i| tup(&[i as f64, i as f64 + 1.0])).collect();
        let c = assignment_coupling(&s, &s).unwrap();
        let cost: f64 = c.pairs().iter().map(|(a, b, _)| sq_dist(a, b)).sum();
        assert_abs_diff_eq!(cost, 0.0);
    }

    #[test]
    fn one_dimensional_assignment_is_monotone() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut xs: alloc::vec::Vec<f64> = (0..7).map(|_| rng.gen_range(-5.0..5.0)).collect();
        let mut ys: alloc::vec::Vec<f64> = (0..7).map(|_| rng.gen_range(-5.0..5.0)).collect();
        let a: alloc::vec::Vec<LabeledTuple> = xs.iter().map(|&x| tup(&[x])).collect();
        let b: alloc::vec::Vec<LabeledTuple> = ys.iter().map(|&y| tup(&[y])).collect();
        let c = assignment_coupling(&a, &b).unwrap();
        let opt: f64 = c.pairs().iter().map(|(p, q, _)| sq_dist(p, q)).sum();
        xs.sort_by(f64::total_cmp);
        ys.sort_by(f64::total_cmp);
        let sorted: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - y) * (x - y)).sum();
        assert_abs_diff_eq!(opt, sorted, epsilon = 1e-10);
    }

    #[test]
    fn hungarian_matches_brute_force_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for m in 2..=6usize {
            for _ in 0..20 {
                let cost: alloc::vec::Vec<alloc::vec::Vec<f64>> = (0..m)
                    .map(|_| (0..m).map(|_| rng.gen_range(0.0..10.0)).collect())
                    .collect();
                let assign = hungarian(&cost);
                let got: f64 = assign.iter().enumerate().map(|(i, &j)| cost[i][j]).sum();
                let best = brute_force_min(&cost);
                assert_abs_diff_eq!(got, best, epsilon = 1e-10);
            }
        }
    }

    fn brute_force_min(cost: &[alloc::vec::Vec<f64>]) -> f64 {
        let m = cost.len();
        let mut perm: alloc::vec::Vec<usize> = (0..m).collect();
        let mut best = f64::INFINITY;
        permute(&mut perm, 0, cost, &mut best);
        best
    }

    fn permute(perm: &mut [usize], k: usize, cost: &[alloc::vec::Vec<f64>], best: &mut f64) {
        let m = perm.len();
        if k == m {
            let total: f64 = (0..m).map(|i| cost[i][perm[i]]).sum();
            if total < *best {
                *best = total;
            }
            return;
        }
        for i in k..m {
            perm.swap(k, i);
            permute(perm, k + 1, cost, best);
            perm.swap(k, i);
        }
    }

    #[test]
    fn midpoint_log_bound_worked_value() {
        let (lhs, rhs) = midpoint_log_bound(1.0, 3.0);
        assert_abs_diff_eq!(lhs, -(2.0_f64.ln()), epsilon = 1e-14);
        assert_abs_diff_eq!(rhs, -0.5 * 3.0_f64.ln() - 0.05, epsilon = 1e-14);
        assert!(lhs <= rhs);
    }

    #[test]
    fn certificate_degenerate_pair() {
        let a = tup(&[-0.8, -0.1, 0.3, 0.9]);
        let cert = convexity_certificate(&a, &a, 2).unwrap();
        assert_abs_diff_eq!(cert.gain, 0.0);
        assert_abs_diff_eq!(cert.slack, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(cert.bf, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn certificate_holds_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..300 {
            let r = 2u32;
            let mut a: alloc::vec::Vec<f64> =
                (0..4).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let mut b: alloc::vec::Vec<f64> =
                (0..4).map(|_| rng.gen_range(-2.0..2.0)).collect();
            a.sort_by(f64::total_cmp);
            b.sort_by(f64::total_cmp);
            let (ta, tb) = (tup(&a), tup(&b));
            if gain(&ta, &tb).is_err() {
                continue;
            }
            let cert = convexity_certificate(&ta, &tb, r).unwrap();
            assert!(cert.slack >= -1e-9, "slack {}", cert.slack);
            assert!(cert.bf <= 1e-10, "bf {}", cert.bf);
        }
    }

    #[test]
    fn entropy_toy_constant_for_equal_sigmas() {
        let curve = gaussian_entropy_convexity_toy(0.0, 2.0, 5.0, 2.0, &[0.0, 0.3, 1.0]).unwrap();
        assert_abs_diff_eq!(curve[0].1, curve[1].1, epsilon = 1e-14);
        assert_abs_diff_eq!(curve[1].1, curve[2].1, epsilon = 1e-14);
    }

    #[test]
    fn entropy_toy_strict_midpoint_convexity() {
        let curve =
            gaussian_entropy_convexity_toy(0.0, 1.0, 0.0, 3.0, &[0.0, 0.5, 1.0]).unwrap();
        let (f0, fh, f1) = (curve[0].1, curve[1].1, curve[2].1);
        assert!(fh < 0.5 * (f0 + f1));
        // Closed form: -log 2 < -(log 1 + log 3)/2.
        assert_abs_diff_eq!(fh - 0.5 * (f0 + f1), -(2.0_f64.ln()) + 0.5 * 3.0_f64.ln(), epsilon = 1e-12);
    }
}
