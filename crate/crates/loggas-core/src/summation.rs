//! Compensated (Neumaier) summation for long float reductions.

use crate::fmath;

/// Running compensated sum.
///
/// Keeps a separate compensation term so that long alternating-sign
/// reductions (energies, quadrature panels) do not lose low-order bits.
#[derive(Debug, Clone, Copy, Default)]
pub struct Accumulator {
    sum: f64,
    comp: f64,
}

impl Accumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if fmath::abs(self.sum) >= fmath::abs(x) {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated sum of an iterator.
pub fn sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut acc = Accumulator::new();
    for v in values {
        acc.add(v);
    }
    acc.total()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_bits() {
        // Naive summation of [huge, tiny, -huge] drops tiny entirely.
        let huge = 1e100;
        let tiny = 1.0;
        assert_eq!(sum([huge, tiny, -huge]), tiny);
    }

    #[test]
    fn matches_exact_small_sum() {
        let total = sum((1..=1000).map(|k| k as f64));
        assert_eq!(total, 500500.0);
    }
}
