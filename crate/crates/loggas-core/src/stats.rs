//! Ensemble statistics: discrepancy variance decay, the enumeration
//! shift, the gap-mismatch gain functional, gap-distribution distances
//! over a fixed test-function dictionary, gap second moments against
//! field energy, far-tile interaction bounds, and per-volume energy
//! reports.

use alloc::vec::Vec;

use crate::constants;
use crate::energy::{
    self, intrinsic_energy, log_antiderivative, log_antiderivative2,
};
use crate::error::{Error, Result};
use crate::fmath;
use crate::pointconf::{PointConfiguration, Window};
use crate::summation::Accumulator;
use crate::transport::{interpolate, Coupling, LabeledTuple};

/// Monte-Carlo variance of the discrepancy over `[-R, R]`, per unit
/// volume, with a standard error for the variance estimate itself.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscrepancyVariancePoint {
    pub r: u32,
    pub variance_per_volume: f64,
    pub stderr: f64,
}

/// Per-volume energy summary of an ensemble of windows at one inverse
/// temperature. `f_beta` is filled only when an entropy-type estimate
/// is available: `f_beta = beta * per_volume_wint + sre_estimate`.
#[derive(Debug, Clone, PartialEq)]
pub struct FreeEnergyReport {
    pub beta: f64,
    pub per_volume_wint: f64,
    pub stderr: f64,
    pub sre_estimate: Option<f64>,
    pub f_beta: Option<f64>,
}

/// Estimate of the mean gap-mismatch gain per unit length under a
/// coupling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainEstimate {
    pub r: u32,
    /// Estimate of the expected gain divided by `R`; nonnegative.
    pub value: f64,
    pub stderr: f64,
    /// Relative enumeration shift of largest magnitude encountered.
    pub shift_used: i64,
}

/// Draws `draws` configurations and estimates `Var(D_{[-R,R]}) / (2R)`
/// for each requested `R`. The uncertainty is the asymptotic standard
/// error of a sample variance.
pub fn discrepancy_variance_curve<F>(
    mut draw: F,
    rs: &[u32],
    draws: usize,
) -> Result<Vec<DiscrepancyVariancePoint>>
where
    F: FnMut(usize) -> Result<PointConfiguration>,
{
    if draws < 100 {
        return Err(Error::InvalidParameter { name: "draws" });
    }
    let mut per_r: Vec<Vec<f64>> = rs.iter().map(|_| Vec::with_capacity(draws)).collect();
    for k in 0..draws {
        let c = draw(k)?;
        for (j, &r) in rs.iter().enumerate() {
            let rf = r as f64;
            let carrier = c.carrier();
            if carrier.lo() > -rf || carrier.hi() < rf {
                return Err(Error::OutOfWindow {
                    value: rf,
                    lo: carrier.lo(),
                    hi: carrier.hi(),
                });
            }
            per_r[j].push(c.discrepancy(Window::centered(rf)?));
        }
    }
    let mut out = Vec::with_capacity(rs.len());
    for (j, &r) in rs.iter().enumerate() {
        let xs = &per_r[j];
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let mut m2 = Accumulator::new();
        let mut m4 = Accumulator::new();
        for &x in xs {
            let d = x - mean;
            m2.add(d * d);
            m4.add(d * d * d * d);
        }
        let var = m2.total() / (n - 1.0);
        let mu4 = m4.total() / n;
        // Var(s^2) ~ (mu4 - sigma^4 (n-3)/(n-1)) / n.
        let var_of_var = (mu4 - var * var * (n - 3.0) / (n - 1.0)) / n;
        let vol = 2.0 * r as f64;
        out.push(DiscrepancyVariancePoint {
            r,
            variance_per_volume: var / vol,
            stderr: fmath::sqrt(var_of_var.max(0.0)) / vol,
        });
    }
    Ok(out)
}

/// The enumeration shift `S` of a configuration with `2R` points: the
/// origin-labelled point `x_0` is the left-labelled point `z_{R+S+1}`,
/// so `S` equals the number of negative points minus `R`. Balanced
/// configurations give `S = 0`; all points nonnegative gives `S = -R`.
pub fn shift_s(c: &PointConfiguration) -> Result<i64> {
    let r = energy::symmetric_half_width(c.carrier())?;
    if c.len() != 2 * r as usize {
        return Err(Error::WrongCount { expected: 2 * r as usize, found: c.len() });
    }
    let gv = c.gaps()?;
    if gv.negative_count() == c.len() {
        return Err(Error::NoPointRight { threshold: 0.0 });
    }
    Ok(gv.negative_count() as i64 - r as i64)
}

/// One gain summand: gaps compare as `|a - b|^2 / (a^2 + b^2)`, with
/// agreement (both infinite, or both zero) counting 0 and a one-sided
/// infinite gap counting the supremum value 1.
fn gain_summand(a: f64, b: f64) -> f64 {
    match (a.is_finite(), b.is_finite()) {
        (true, true) => {
            let denom = a * a + b * b;
            if denom == 0.0 {
                0.0
            } else {
                (a - b) * (a - b) / denom
            }
        }
        (false, false) => 0.0,
        _ => 1.0,
    }
}

/// Weighted mean over the coupling of the central gap-mismatch sum
/// (`|i| <= R/2`, enumerations aligned by the relative shift), divided
/// by `R`. Each summand lies in `[0, 1]`, so a pair contributes at most
/// `(R + 1) / R`.
pub fn gain_estimator(coupling: &Coupling, r: u32) -> Result<GainEstimate> {
    let n = 2 * r as usize;
    let half = (r / 2) as i64;
    let mut values = Vec::with_capacity(coupling.len());
    let mut weights = Vec::with_capacity(coupling.len());
    let mut shift_used: i64 = 0;
    for (x0, x1, w) in coupling.pairs() {
        if x0.len() != n || x1.len() != n {
            return Err(Error::InsufficientPoints {
                needed: n,
                found: x0.len().min(x1.len()),
            });
        }
        let c0 = crate::transport::unlabel(x0)?;
        let c1 = crate::transport::unlabel(x1)?;
        let g0 = c0.gaps()?;
        let g1 = c1.gaps()?;
        let s_rel =
            g0.negative_count() as i64 - g1.negative_count() as i64;
        if s_rel.abs() > shift_used.abs() {
            shift_used = s_rel;
        }
        let mut acc = Accumulator::new();
        for i in -half..=half {
            acc.add(gain_summand(g0.origin_gap(i), g1.origin_gap(i + s_rel)));
        }
        values.push(acc.total() / r as f64);
        weights.push(*w);
    }
    let mean: f64 = values.iter().zip(&weights).map(|(v, w)| v * w).sum();
    let var_w: f64 = values
        .iter()
        .zip(&weights)
        .map(|(v, w)| w * (v - mean) * (v - mean))
        .sum();
    let stderr = if values.len() > 1 {
        fmath::sqrt(var_w / (values.len() as f64 - 1.0))
    } else {
        0.0
    };
    Ok(GainEstimate { r, value: mean, stderr, shift_used })
}

/// Per-component center values for the tent dictionary, sized so the
/// product grid stays at or below 4096 centers.
fn tent_centers(dim: u32) -> &'static [f64] {
    let fits = |base: u64| base.checked_pow(dim).is_some_and(|v| v <= 4096);
    if fits(4) {
        &[0.5, 1.0, 1.5, 2.0]
    } else if fits(2) {
        &[0.5, 1.5]
    } else {
        &[1.0]
    }
}

/// Evaluates the tent `max(0, 1 - |v - center|_1 / width)`; any
/// infinite gap puts `v` outside every compact support.
fn tent(v: &[f64], center: &[f64], width: f64) -> f64 {
    let mut l1 = 0.0;
    for (a, c) in v.iter().zip(center) {
        if !a.is_finite() {
            return 0.0;
        }
        l1 += fmath::abs(a - c);
    }
    (1.0 - l1 / width).max(0.0)
}

fn gap_vectors(samples: &[PointConfiguration], r: u32) -> Vec<Vec<f64>> {
    let ri = r as i64;
    samples
        .iter()
        .filter_map(|c| c.gaps().ok())
        .map(|g| (-ri..=ri).map(|i| g.origin_gap(i)).collect())
        .collect()
}

/// Largest mean difference, between two sample sets, of a fixed
/// dictionary of bounded 1-Lipschitz (in `l^1`) compactly supported
/// functions of the central gap vector `(Gamma_{-r}, ..., Gamma_r)`.
/// A lower bound on any distributional distance built from such test
/// functions; always in `[0, 1]`.
pub fn gap_distribution_distance(
    p0: &[PointConfiguration],
    p1: &[PointConfiguration],
    r: u32,
) -> f64 {
    let dim = 2 * r + 1;
    let grid = tent_centers(dim);
    let v0 = gap_vectors(p0, r);
    let v1 = gap_vectors(p1, r);
    let mean = |vs: &[Vec<f64>], center: &[f64], width: f64| -> f64 {
        if vs.is_empty() {
            return 0.0;
        }
        vs.iter().map(|v| tent(v, center, width)).sum::<f64>() / vs.len() as f64
    };
    let mut best = 0.0f64;
    let mut center = alloc::vec![0.0; dim as usize];
    let n_centers = grid.len().pow(dim);
    for flat in 0..n_centers {
        let mut rem = flat;
        for slot in center.iter_mut() {
            *slot = grid[rem % grid.len()];
            rem /= grid.len();
        }
        for width in [1.0, 2.0] {
            let d = fmath::abs(mean(&v0, &center, width) - mean(&v1, &center, width));
            best = best.max(d);
        }
    }
    best
}

/// Central gap second moment against the linear-plus-energy bound:
/// returns `(sum of Gamma_i^2 over |i| <= R/2, R + field_energy)`.
/// Requires at least `R/2` points on each side of the origin and finite
/// central gaps.
pub fn gap_l2_diagnostic(
    c: &PointConfiguration,
    field_energy: f64,
) -> Result<(f64, f64)> {
    let r = energy::symmetric_half_width(c.carrier())?;
    let rf = r as f64;
    let need = (r / 2) as usize;
    let neg = c.count_in(Window::new(-rf, 0.0)?);
    let pos = c.count_in(Window::new(0.0, rf)?);
    if neg < need || pos < need {
        return Err(Error::InsufficientPoints { needed: need, found: neg.min(pos) });
    }
    let gv = c.gaps()?;
    let half = (r / 2) as i64;
    let mut acc = Accumulator::new();
    let mut finite = 0usize;
    for i in -half..=half {
        let g = gv.origin_gap(i);
        if !g.is_finite() {
            return Err(Error::InsufficientPoints {
                needed: 2 * half as usize + 1,
                found: finite,
            });
        }
        finite += 1;
        acc.add(g * g);
    }
    Ok((acc.total(), rf + field_energy))
}

fn tile_index(c: &PointConfiguration, r: u32) -> Result<i64> {
    let rf = r as f64;
    let carrier = c.carrier();
    if fmath::abs(carrier.length() - 2.0 * rf) > 1e-9 {
        return Err(Error::CarrierMismatch {
            expected_lo: -rf,
            expected_hi: rf,
            found_lo: carrier.lo(),
            found_hi: carrier.hi(),
        });
    }
    let center = 0.5 * (carrier.lo() + carrier.hi());
    let idx = fmath::round(center / (2.0 * rf));
    if fmath::abs(center - idx * 2.0 * rf) > 1e-9 {
        return Err(Error::CarrierMismatch {
            expected_lo: idx * 2.0 * rf - rf,
            expected_hi: idx * 2.0 * rf + rf,
            found_lo: carrier.lo(),
            found_hi: carrier.hi(),
        });
    }
    Ok(idx as i64)
}

/// `sum_k (|D_{[-R, -R+k]}| + |D over the next unit| + 1)` for
/// `k = 0..2R`, on the configuration translated back to `[-R, R]`.
fn discrepancy_profile_sum(c: &PointConfiguration, r: u32) -> f64 {
    let rf = r as f64;
    let mut acc = Accumulator::new();
    for k in 0..=(2 * r) {
        let kf = k as f64;
        let left = if k == 0 {
            0.0
        } else {
            c.discrepancy(Window::new(-rf, -rf + kf).expect("k >= 1"))
        };
        let unit = if k == 2 * r {
            0.0
        } else {
            c.discrepancy(Window::new(-rf + kf, (-rf + kf + 1.0).min(rf)).expect("unit"))
        };
        acc.add(fmath::abs(left) + fmath::abs(unit) + 1.0);
    }
    acc.total()
}

/// Interaction energy between two distant tiles, both measured against
/// their own uniform background, with a discrepancy-driven upper bound.
///
/// The interaction `-log` double integral splits into an exact pair
/// sum, point-against-interval terms in closed form, and an
/// interval-against-interval closed form; no quadrature is involved.
/// Tiles must be at index distance `>= 2` so the kernel is smooth.
pub fn pairwise_interaction_bound(
    ca: &PointConfiguration,
    cb: &PointConfiguration,
    r: u32,
) -> Result<(f64, f64)> {
    let a = tile_index(ca, r)?;
    let b = tile_index(cb, r)?;
    if (a - b).abs() < 2 {
        return Err(Error::TilesAdjacent { a, b });
    }
    let (a_lo, a_hi) = (ca.carrier().lo(), ca.carrier().hi());
    let (b_lo, b_hi) = (cb.carrier().lo(), cb.carrier().hi());

    let mut pair = Accumulator::new();
    for &p in ca.points() {
        for &q in cb.points() {
            pair.add(-fmath::ln(fmath::abs(p - q)));
        }
    }
    let mut cross_a = Accumulator::new();
    for &p in ca.points() {
        cross_a.add(log_antiderivative(p - b_lo) - log_antiderivative(p - b_hi));
    }
    let mut cross_b = Accumulator::new();
    for &q in cb.points() {
        cross_b.add(log_antiderivative(q - a_lo) - log_antiderivative(q - a_hi));
    }
    let double = log_antiderivative2(a_hi - b_lo) + log_antiderivative2(a_lo - b_hi)
        - log_antiderivative2(a_hi - b_hi)
        - log_antiderivative2(a_lo - b_lo);
    let interaction = pair.total() + cross_a.total() + cross_b.total() - double;

    let da = discrepancy_profile_sum(&ca.translate(a as f64 * 2.0 * r as f64), r);
    let db = discrepancy_profile_sum(&cb.translate(b as f64 * 2.0 * r as f64), r);
    let dist = (a - b) as f64;
    let bound =
        constants::PAIR_INTERACTION_C * da * db / (dist * dist * (r as f64) * (r as f64));
    Ok((interaction, bound))
}

/// Averages the per-volume intrinsic energy over an ensemble of
/// windows. The entropy slot is caller-provided (0 for the ideal
/// memoryless process, closed forms for toys, absent otherwise).
pub fn free_energy_report(
    windows: &[PointConfiguration],
    beta: f64,
    sre_estimate: Option<f64>,
) -> Result<FreeEnergyReport> {
    if windows.is_empty() {
        return Err(Error::InsufficientPoints { needed: 1, found: 0 });
    }
    let mut vals = Vec::with_capacity(windows.len());
    for c in windows {
        let r = energy::symmetric_half_width(c.carrier())?;
        let e = intrinsic_energy(c)?;
        vals.push(e.total / (2.0 * r as f64));
    }
    let n = vals.len() as f64;
    let mean = vals.iter().sum::<f64>() / n;
    let var =
        vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0).max(1.0);
    let stderr = fmath::sqrt(var / n);
    Ok(FreeEnergyReport {
        beta,
        per_volume_wint: mean,
        stderr,
        sre_estimate,
        f_beta: sre_estimate.map(|s| beta * mean + s),
    })
}

/// Exact discrepancy sandwich for the sorted midpoint of an
/// index-coupled pair: over every window `[-R, m]` with integer `m`,
/// the midpoint's discrepancy lies between the endpoints' (the count
/// is sandwiched between the endpoint counts slot by slot).
pub fn interpolation_discrepancy_sandwich(
    x0: &LabeledTuple,
    x1: &LabeledTuple,
) -> Result<bool> {
    let h = interpolate(x0, x1, 0.5)?;
    let r = (x0.len() / 2) as i64;
    let count = |xs: &[f64], m: f64| xs.iter().filter(|&&v| v <= m).count() as f64;
    for m in -r..=r {
        let mf = m as f64;
        let vol = (m + r) as f64;
        let d0 = count(x0.values(), mf) - vol;
        let d1 = count(x1.values(), mf) - vol;
        let dh = count(h.values(), mf) - vol;
        if fmath::abs(dh) > fmath::abs(d0).max(fmath::abs(d1)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Two-sample Kolmogorov-Smirnov statistic.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut sa = a.to_vec();
    let mut sb = b.to_vec();
    sa.sort_by(f64::total_cmp);
    sb.sort_by(f64::total_cmp);
    let (na, nb) = (sa.len() as f64, sb.len() as f64);
    let mut i = 0;
    let mut j = 0;
    let mut d = 0.0f64;
    while i < sa.len() && j < sb.len() {
        // Consume every value tied at the current level on both sides
        // before comparing the empirical CDFs.
        let v = sa[i].min(sb[j]);
        while i < sa.len() && sa[i] <= v {
            i += 1;
        }
        while j < sb.len() && sb[j] <= v {
            j += 1;
        }
        d = d.max(fmath::abs(i as f64 / na - j as f64 / nb));
    }
    d
}

/// One-sample Kolmogorov-Smirnov statistic against a reference CDF.
pub fn ks_one_sample<F: Fn(f64) -> f64>(xs: &[f64], cdf: F) -> f64 {
    let mut s = xs.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in s.iter().enumerate() {
        let f = cdf(x);
        d = d.max(fmath::abs(f - i as f64 / n));
        d = d.max(fmath::abs(f - (i as f64 + 1.0) / n));
    }
    d
}
