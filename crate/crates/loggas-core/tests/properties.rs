//! Randomized checks of the exact structural identities: window
//! algebra, gap bookkeeping, pasting, transport interpolation, the
//! convexity certificate, and the screening construction's exact
//! postconditions.

use loggas_core::constants::FLUCT_BOUND_K;
use loggas_core::energy::truncation_error;
use loggas_core::pointconf::{fluctuation_bound, paste, PointConfiguration, SampledFunction, Window};
use loggas_core::sampler::rng_for;
use loggas_core::screening::{screen, ScreeningParams};
use loggas_core::transport::{convexity_certificate, gain, interpolate, LabeledTuple};
use proptest::prelude::*;

/// Dyadic grid value `k / 8`; sums and differences of these are exact
/// in double precision, so set identities can be asserted bitwise.
fn dyadic(range: i32) -> impl Strategy<Value = f64> {
    (-range..=range).prop_map(|k| k as f64 / 8.0)
}

/// Points at odd multiples of `1/8`, strictly inside `[-bound, bound]`,
/// sorted and deduplicated: they never collide with window boundaries
/// placed at multiples of `1/4`.
fn odd_dyadic_points(bound: i32, max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::btree_set(-bound..bound, 0..max_len)
        .prop_map(|ks| ks.into_iter().map(|k| (2 * k + 1) as f64 / 8.0).collect())
}

fn increasing_tuple(n: usize, lo: f64, hi: f64) -> impl Strategy<Value = LabeledTuple> {
    prop::collection::vec(1e-3..1.0f64, n).prop_map(move |steps: Vec<f64>| {
        let total: f64 = steps.iter().sum();
        let mut x = lo;
        let mut out = Vec::with_capacity(n);
        for s in steps {
            x += s / total * (hi - lo) * 0.98;
            out.push(x);
        }
        LabeledTuple::new(out).expect("strictly increasing by construction")
    })
}

proptest! {
    /// Restriction and translation commute: translating first and
    /// restricting to `w` equals restricting to `w - u` and then
    /// translating, including the carrier.
    #[test]
    fn restrict_translate_commute(
        points in odd_dyadic_points(64, 12),
        u in dyadic(32),
        (a, b) in (-48i32..48, 1i32..32).prop_map(|(a, l)| (a, a + l)),
    ) {
        let carrier = Window::centered(16.0).unwrap();
        let c = PointConfiguration::new(points, carrier).unwrap();
        let w = Window::new(a as f64 / 4.0, b as f64 / 4.0).unwrap();
        let lhs = c.translate(u).restrict(w);
        let rhs = c.restrict(w.translate(-u)).translate(u);
        prop_assert_eq!(lhs.points(), rhs.points());
        prop_assert_eq!(lhs.carrier(), rhs.carrier());
    }

    /// Discrepancy is finitely additive over adjacent windows whose
    /// shared endpoint carries no point.
    #[test]
    fn discrepancy_additive_over_adjacent_windows(
        points in odd_dyadic_points(64, 16),
        (a, b, c) in (-40i32..40, 1i32..20, 1i32..20)
            .prop_map(|(a, l1, l2)| (a, a + l1, a + l1 + l2)),
    ) {
        let conf = PointConfiguration::new(points, Window::centered(16.0).unwrap()).unwrap();
        let wa = Window::new(a as f64 / 4.0, b as f64 / 4.0).unwrap();
        let wb = Window::new(b as f64 / 4.0, c as f64 / 4.0).unwrap();
        let whole = Window::new(a as f64 / 4.0, c as f64 / 4.0).unwrap();
        let split = conf.discrepancy(wa) + conf.discrepancy(wb);
        prop_assert_eq!(conf.discrepancy(whole), split);
    }

    /// Left-enumeration gaps telescope to the configuration's span.
    #[test]
    fn gaps_sum_to_span(x in increasing_tuple(6, -5.0, 5.0)) {
        let c = PointConfiguration::new(
            x.values().to_vec(),
            Window::centered(8.0).unwrap(),
        ).unwrap();
        let gv = c.gaps().unwrap();
        let mut total = 0.0;
        for i in 1..c.len() {
            total += gv.left_gap(i).unwrap();
        }
        let span = x.values()[c.len() - 1] - x.values()[0];
        prop_assert!((total - span).abs() <= 1e-12);
    }

    /// Pasting then restricting to tile `i` recovers copy `i`
    /// translated onto that tile.
    #[test]
    fn paste_restricts_to_translated_tiles(
        tiles in prop::collection::vec(odd_dyadic_points(8, 6), 1..4),
    ) {
        let r = 2u32;
        let lam = Window::centered(r as f64).unwrap();
        let copies: Vec<PointConfiguration> = tiles
            .iter()
            .map(|pts| PointConfiguration::new(pts.clone(), lam).unwrap())
            .collect();
        let pasted = paste(&copies, r).unwrap();
        for (i, copy) in copies.iter().enumerate() {
            let shift = 2.0 * r as f64 * i as f64;
            let tile = lam.translate(shift);
            let on_tile = pasted.restrict(tile);
            let moved = copy.translate(shift);
            prop_assert_eq!(on_tile.points(), moved.points());
        }
    }

    /// The point indexed by `position_after_translation(u)` is the
    /// first one at or beyond `u`.
    #[test]
    fn position_after_translation_brackets(
        x in increasing_tuple(5, -4.0, 4.0),
        t in 0.0..1.0f64,
    ) {
        let c = PointConfiguration::new(
            x.values().to_vec(),
            Window::centered(8.0).unwrap(),
        ).unwrap();
        let max = *x.values().last().unwrap();
        let u = -5.0 + t * (max + 5.0);
        prop_assume!(u <= max);
        let m = c.position_after_translation(u).unwrap();
        let gv = c.gaps().unwrap();
        prop_assert!(gv.origin_point(m).unwrap() >= u);
        if let Ok(prev) = gv.origin_point(m - 1) {
            prop_assert!(prev < u);
        }
    }

    /// Displacement interpolation is the coordinatewise line segment:
    /// exact at the endpoints, convex combination in between, and
    /// order-preserving throughout.
    #[test]
    fn interpolation_traces_segments(
        x0 in increasing_tuple(6, -6.0, 6.0),
        x1 in increasing_tuple(6, -6.0, 6.0),
        t in 0.0..=1.0f64,
    ) {
        let at0 = interpolate(&x0, &x1, 0.0).unwrap();
        let at1 = interpolate(&x0, &x1, 1.0).unwrap();
        prop_assert_eq!(at0.values(), x0.values());
        prop_assert_eq!(at1.values(), x1.values());
        let xt = interpolate(&x0, &x1, t).unwrap();
        for ((&a, &b), &v) in x0.values().iter().zip(x1.values()).zip(xt.values()) {
            prop_assert!((v - ((1.0 - t) * a + t * b)).abs() <= 1e-12);
        }
        for pair in xt.values().windows(2) {
            prop_assert!(pair[0] <= pair[1]);
        }
    }

    /// The interaction-energy certificate is a theorem: the slack is
    /// never meaningfully negative and the background term never
    /// meaningfully positive.
    #[test]
    fn certificate_always_clears(
        x0 in increasing_tuple(4, -1.9, 1.9),
        x1 in increasing_tuple(4, -1.9, 1.9),
    ) {
        let cert = convexity_certificate(&x0, &x1, 2).unwrap();
        prop_assert!(cert.slack >= -1e-9, "slack {}", cert.slack);
        prop_assert!(cert.bf <= 1e-10, "bf {}", cert.bf);
    }

    /// The gap-mismatch gain is nonnegative and vanishes exactly on
    /// identical tuples.
    #[test]
    fn gain_nonnegative_and_zero_on_diagonal(
        x0 in increasing_tuple(6, -5.0, 5.0),
        x1 in increasing_tuple(6, -5.0, 5.0),
    ) {
        prop_assert_eq!(gain(&x0, &x0).unwrap(), 0.0);
        prop_assert!(gain(&x0, &x1).unwrap() >= 0.0);
    }

    /// Shrinking the truncation radius only removes close pairs, so the
    /// truncation error shrinks with it.
    #[test]
    fn truncation_error_monotone(
        x in increasing_tuple(8, -7.0, 7.0),
        (eta_small, eta_big) in (0.01..0.2f64, 1.0..2.0f64)
            .prop_map(|(e, f)| (e, (e * f * 2.0).min(0.45))),
    ) {
        let w = Window::centered(8.0).unwrap();
        let c = PointConfiguration::new(x.values().to_vec(), w).unwrap();
        prop_assert!(truncation_error(&c, eta_small, &w) <= truncation_error(&c, eta_big, &w) + 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Fluctuation integrals stay within the calibrated multiple of
    /// their discrepancy-driven bound for arbitrary piecewise-linear
    /// test functions and dyadic configurations.
    #[test]
    fn fluctuation_within_calibrated_bound(
        length in 2i32..6,
        ys in prop::collection::vec(-2.0..2.0f64, 13),
        points in odd_dyadic_points(24, 16),
    ) {
        let l = length as f64;
        let xs: Vec<f64> = (0..13).map(|i| l * i as f64 / 12.0).collect();
        let deriv = xs
            .windows(2)
            .zip(ys.windows(2))
            .map(|(x, y)| ((y[1] - y[0]) / (x[1] - x[0])).abs())
            .fold(0.0f64, f64::max);
        let g = SampledFunction::new(xs, ys, deriv).unwrap();
        let carrier = Window::new(-6.0, 6.0).unwrap();
        let c = PointConfiguration::new(points, carrier).unwrap();
        let (lhs, rhs) = fluctuation_bound(&g, &c, Window::new(0.0, l).unwrap()).unwrap();
        prop_assert!(lhs.abs() <= FLUCT_BOUND_K * rhs + 1e-12, "lhs {lhs} rhs {rhs}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// The screening construction's exact postconditions on jittered
    /// lattices: count, interior preservation, edge clearance, jitter
    /// radius, and the close-pair subset property.
    #[test]
    fn screening_exact_postconditions(
        jitters in prop::collection::vec(-0.2..0.2f64, 32),
        seed in any::<u64>(),
    ) {
        let r = 16u32;
        let p = ScreeningParams::new(r, 0.125, 0.05, 10.0).unwrap();
        let w = Window::centered(r as f64).unwrap();
        let points: Vec<f64> = jitters
            .iter()
            .enumerate()
            .map(|(k, j)| -16.0 + 0.5 + k as f64 + j)
            .collect();
        let c = PointConfiguration::new(points, w).unwrap();
        let (out, report) = screen(&c, &p, &mut rng_for(seed, 0), 1e-4).unwrap();

        prop_assert_eq!(out.len(), 32);
        let interior = Window::centered(p.r_inner()).unwrap();
        let kept = out.restrict(interior);
        let original = c.restrict(interior);
        prop_assert_eq!(kept.points(), original.points());
        for &x in out.points() {
            prop_assert!(16.0 - x.abs() >= 0.1 - 1e-12);
        }
        for &(center, x) in &report.placements {
            prop_assert!((x - center).abs() <= 0.05 / 4.0 + 1e-12);
        }
        let grown = truncation_error(&out, 0.025, &w) - truncation_error(&c, 0.025, &w);
        prop_assert!(grown <= 1e-9, "close-pair energy grew by {grown}");
    }
}
