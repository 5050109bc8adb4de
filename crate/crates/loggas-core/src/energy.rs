//! Energy functionals for finite configurations on a symmetric window:
//! pairwise logarithmic repulsion, the closed-form potential generated by
//! a unit background, and truncation-error bookkeeping.
//!
//! The decomposition implemented by [`intrinsic_energy`] expands the
//! double integral of `-log|x-y|` against the signed measure
//! `(dC - dx)` twice, off the diagonal: a pair sum, a cross term against
//! the background (closed form via [`background_potential`]), and a
//! configuration-independent constant ([`background_const`]).

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fmath;
use crate::pointconf::{PointConfiguration, Window};
use crate::summation::Accumulator;
use crate::transport::LabeledTuple;

/// Antiderivative of `log|u|` with the continuous extension `g(0) = 0`:
/// `g(u) = u log|u| - u`. Odd in `u`.
pub fn log_antiderivative(u: f64) -> f64 {
    if u == 0.0 {
        0.0
    } else {
        u * fmath::ln(fmath::abs(u)) - u
    }
}

/// Second antiderivative of `log|u|` (so `F'' = log|u|`, `F' = g`):
/// `F(u) = u^2 log|u| / 2 - 3 u^2 / 4`. Even in `u`, `F(0) = 0`.
pub fn log_antiderivative2(u: f64) -> f64 {
    if u == 0.0 {
        0.0
    } else {
        0.5 * u * u * fmath::ln(fmath::abs(u)) - 0.75 * u * u
    }
}

/// Sum of `-log(z_j - z_i)` over ordered pairs `i < j`.
pub fn pair_interaction(x: &LabeledTuple) -> Result<f64> {
    pair_interaction_sorted(x.values())
}

pub(crate) fn pair_interaction_sorted(z: &[f64]) -> Result<f64> {
    let mut acc = Accumulator::new();
    for (i, &a) in z.iter().enumerate() {
        for &b in &z[i + 1..] {
            let d = b - a;
            if d <= 0.0 {
                return Err(Error::DuplicatePoint { position: a });
            }
            acc.add(-fmath::ln(d));
        }
    }
    Ok(acc.total())
}

/// Potential `V_R(t)` of the unit background on `[-R, R]` under the
/// `log` kernel: `V_R(t) = integral of log|t - y| dy over [-R, R]`,
/// in closed form `g(t + R) - g(t - R)`.
///
/// Defined for `|t| <= R`; the endpoints use the continuous limit.
pub fn background_potential(t: f64, r: u32) -> Result<f64> {
    let rf = r as f64;
    if !(fmath::abs(t) <= rf) {
        return Err(Error::OutOfWindow { value: t, lo: -rf, hi: rf });
    }
    Ok(background_potential_width(t, rf))
}

/// `V_R` for a real half-width; used internally where windows are not
/// integer-sized.
pub(crate) fn background_potential_width(t: f64, rf: f64) -> f64 {
    log_antiderivative(t + rf) - log_antiderivative(t - rf)
}

/// The configuration-independent term: the double integral of
/// `-log|x-y|` over `[-R, R]^2`, in closed form `L^2 (3/2 - log L)`
/// with `L = 2R`.
pub fn background_const(r: u32) -> f64 {
    let l = 2.0 * r as f64;
    l * l * (1.5 - fmath::ln(l))
}

/// Additive decomposition of the intrinsic energy of a configuration
/// against the unit background on its carrier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyBreakdown {
    /// Twice the pair sum of `-log` over distinct pairs.
    pub pair_term: f64,
    /// Twice the summed background potential `V_R` at the points.
    pub background_term: f64,
    /// The background-background constant for the carrier half-width.
    pub const_term: f64,
    /// Sum of the three terms.
    pub total: f64,
}

/// Reads an integer half-width `R` off a symmetric carrier `[-R, R]`.
pub(crate) fn symmetric_half_width(w: Window) -> Result<u32> {
    let hi = w.hi();
    if w.lo() != -hi {
        return Err(Error::CarrierMismatch {
            expected_lo: -hi,
            expected_hi: hi,
            found_lo: w.lo(),
            found_hi: hi,
        });
    }
    if hi < 1.0 || hi != fmath::round(hi) || hi > u32::MAX as f64 {
        return Err(Error::InvalidParameter { name: "carrier half-width" });
    }
    Ok(hi as u32)
}

/// Intrinsic energy of sorted, strictly increasing points inside
/// `[-R, R]`, without a carrier object.
pub fn intrinsic_energy_sorted(points: &[f64], r: u32) -> Result<EnergyBreakdown> {
    let rf = r as f64;
    let mut bg = Accumulator::new();
    for &p in points {
        if !(fmath::abs(p) <= rf) {
            return Err(Error::OutOfWindow { value: p, lo: -rf, hi: rf });
        }
        bg.add(background_potential_width(p, rf));
    }
    let pair_term = 2.0 * pair_interaction_sorted(points)?;
    let background_term = 2.0 * bg.total();
    let const_term = background_const(r);
    let total = pair_term + background_term + const_term;
    Ok(EnergyBreakdown { pair_term, background_term, const_term, total })
}

/// Intrinsic energy of a configuration whose carrier is `[-R, R]` for
/// an integer `R`.
pub fn intrinsic_energy(c: &PointConfiguration) -> Result<EnergyBreakdown> {
    let r = symmetric_half_width(c.carrier())?;
    intrinsic_energy_sorted(c.points(), r)
}

/// Sum of `-log|x - y|` over ordered pairs of points of `c` inside `w`
/// at distance below `2 eta`. Every term is positive because
/// `2 eta < 1`; the sum shrinks monotonically as `eta` does.
pub fn truncation_error(c: &PointConfiguration, eta: f64, w: &Window) -> f64 {
    debug_assert!(eta > 0.0 && eta < 0.5);
    let pts: Vec<f64> =
        c.points().iter().copied().filter(|&p| w.contains(p)).collect();
    let mut acc = Accumulator::new();
    for (i, &a) in pts.iter().enumerate() {
        for &b in &pts[i + 1..] {
            let d = b - a;
            if d >= 2.0 * eta {
                break;
            }
            if d > 0.0 {
                // Ordered pairs: each unordered pair counts twice.
                acc.add(-2.0 * fmath::ln(d));
            }
        }
    }
    acc.total()
}
