//! Re-measures every calibrated constant against fresh draws and fails
//! if any measured quantity exceeds the bound its constant sets. Each
//! block prints the implied constant, the smallest value that would
//! still pass on this seed, so the cushion stays visible when a bound
//! is retuned.

use loggas::accept::{collect_windows, percentile};
use loggas_core::constants;
use loggas_core::field::FieldEvaluator;
use loggas_core::pointconf::{
    fluctuation_bound, PointConfiguration, SampledFunction, Window,
};
use loggas_core::quad::Rect;
use loggas_core::sampler::{rng_for, sample_poisson};
use loggas_core::screening::{
    check_preconditions, choose_ell, compute_mi, screen, screening_energy_check, ScreeningParams,
};
use loggas_core::stats::{gap_l2_diagnostic, pairwise_interaction_bound};
use rand::Rng;

const R: u32 = 32;
const S: f64 = 0.125;
const ETA: f64 = 0.05;
const TOL: f64 = 1e-4;

fn probe_params() -> ScreeningParams {
    ScreeningParams::new(R, S, ETA, 1e6).expect("params")
}

/// The window filter the screening consumers use: preconditions clear
/// and the interval solve is feasible.
fn screenable(c: &PointConfiguration) -> bool {
    let probe = probe_params();
    match check_preconditions(c, &probe, TOL) {
        Ok((_, _, clearance)) => {
            clearance
                && c.len() <= 2 * R as usize
                && choose_ell(c, &probe, TOL)
                    .and_then(|(ell, _)| compute_mi(c, &probe, ell, TOL))
                    .is_ok()
        }
        Err(_) => false,
    }
}

fn screened_windows(
    want: usize,
) -> (Vec<PointConfiguration>, Vec<PointConfiguration>, ScreeningParams) {
    let (windows, _) = collect_windows(2.0, 512, R, want, 0xCA11, 1, screenable);
    assert_eq!(windows.len(), want, "window harvest fell short");
    let probe = probe_params();
    let mut m_scrs: Vec<f64> = windows
        .iter()
        .map(|c| check_preconditions(c, &probe, TOL).expect("rechecked").0)
        .collect();
    let m_auto = percentile(&mut m_scrs, 0.95).max(1e-6);
    let params = ScreeningParams::new(R, S, ETA, m_auto).expect("params");
    let screened = windows
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let mut rng = rng_for(0xCA12, i as u64);
            screen(c, &params, &mut rng, TOL).expect("screening").0
        })
        .collect();
    (windows, screened, params)
}

/// The claim constants of the screening report: every named bound must
/// hold on fresh screened windows, with the implied constant printed.
#[test]
fn screening_claim_constants() {
    let want = 20;
    let (windows, _, params) = screened_windows(want);
    let scaled = [
        ("kmax", constants::KMAX_C),
        ("xk_outer", constants::XK_OUTER_C),
        ("xk_inner", constants::XK_INNER_C),
        ("discr_new_a", constants::DISCR_NEW_A_C),
        ("discr_new_b", constants::DISCR_NEW_B_C),
        ("mi_interior", constants::MI_INTERIOR_C),
    ];
    let mut implied = [0.0f64; 6];
    for (i, c) in windows.iter().enumerate() {
        let mut rng = rng_for(0xCA12, i as u64);
        let (_, report) = screen(c, &params, &mut rng, TOL).expect("screening");
        for check in &report.claim_checks {
            if let Some(slot) = scaled.iter().position(|(n, _)| *n == check.name) {
                assert!(
                    check.pass,
                    "window {i}: claim {} exceeded ({} > {})",
                    check.name, check.lhs, check.rhs
                );
                if check.rhs > 0.0 {
                    implied[slot] =
                        implied[slot].max(scaled[slot].1 * check.lhs / check.rhs);
                }
            }
        }
    }
    for ((name, current), need) in scaled.iter().zip(implied) {
        eprintln!("{name}: constant {current}, implied {need:.3}");
    }
}

/// The screened-output energy stays within the logarithmic allowance of
/// the input energy.
#[test]
fn screened_energy_increment_constant() {
    let (windows, screened, params) = screened_windows(6);
    let allowance = -ETA.ln() * params.m() * S * R as f64;
    let mut worst = f64::NEG_INFINITY;
    for (c, out) in windows.iter().zip(&screened) {
        let (lhs, rhs) = screening_energy_check(c, out, &params, 1e-3).expect("energy check");
        assert!(lhs <= rhs, "screened energy {lhs} above allowance {rhs}");
        let implied = constants::SCREEN_ENERGY_C - (rhs - lhs) / allowance;
        worst = worst.max(implied);
    }
    eprintln!(
        "screen_energy: constant {}, implied {worst:.3}",
        constants::SCREEN_ENERGY_C
    );
}

/// Far-tile interactions stay under the discrepancy-driven bound.
#[test]
fn pair_interaction_constant() {
    let r = 16u32;
    let rf = r as f64;
    let params = ScreeningParams::new(r, 0.125, ETA, 40.0).expect("params");
    let tiles: Vec<PointConfiguration> = (0..6)
        .map(|i| {
            let mut rng = rng_for(0xCA14, i as u64);
            let pts: Vec<f64> = (0..2 * r)
                .map(|k| -rf + 0.5 + k as f64 + rng.gen_range(-0.2..0.2))
                .collect();
            let c = PointConfiguration::new(pts, Window::centered(rf).expect("window"))
                .expect("jitter keeps order");
            screen(&c, &params, &mut rng, TOL).expect("screening").0
        })
        .collect();
    let mut worst = 0.0f64;
    for d in [2i64, 4, 8] {
        for (i, a) in tiles.iter().enumerate() {
            let b = tiles[(i + 1) % tiles.len()].translate(-2.0 * rf * d as f64);
            let (interaction, bound) = pairwise_interaction_bound(a, &b, r).expect("tiles");
            assert!(
                interaction.abs() <= bound,
                "tiles at distance {d}: interaction {interaction} above bound {bound}"
            );
            worst = worst.max(constants::PAIR_INTERACTION_C * interaction.abs() / bound);
        }
    }
    eprintln!(
        "pair_interaction: constant {}, implied {worst:.3}",
        constants::PAIR_INTERACTION_C
    );
}

/// Linear statistics of random configurations stay within the
/// discrepancy bound.
#[test]
fn fluctuation_constant() {
    let mut worst = 0.0f64;
    for case in 0..300u64 {
        let mut rng = rng_for(0xCA15, case);
        let carrier = Window::centered(8.0).unwrap();
        let c = sample_poisson(1.0, &carrier, &mut rng).expect("poisson");
        if c.len() == 0 {
            continue;
        }
        let omega = rng.gen_range(0.2..3.0);
        let phase = rng.gen_range(0.0..6.28);
        let g = SampledFunction::from_fn(
            -8.0,
            8.0,
            4096,
            |x| (omega * x + phase).sin(),
            omega,
        )
        .expect("sampled function");
        let lo = rng.gen_range(-7.9..0.0);
        let hi = rng.gen_range(0.5..7.9);
        let w = Window::new(lo, hi).unwrap();
        let (lhs, rhs) = fluctuation_bound(&g, &c, w).expect("bound");
        assert!(
            lhs.abs() <= constants::FLUCT_BOUND_K * rhs,
            "case {case}: fluctuation {lhs} above {} * {rhs}",
            constants::FLUCT_BOUND_K
        );
        if rhs > 0.0 {
            worst = worst.max(lhs.abs() / rhs);
        }
    }
    eprintln!(
        "fluctuation: constant {}, implied {worst:.3}",
        constants::FLUCT_BOUND_K
    );
}

/// Central gaps of sampled windows stay square-summable against the
/// carrier size plus the truncated field energy.
#[test]
fn gap_l2_constant() {
    let keep = |c: &PointConfiguration| {
        let rf = R as f64;
        c.count_in(Window::new(-rf, 0.0).unwrap()) >= (R / 2) as usize
            && c.count_in(Window::new(0.0, rf).unwrap()) >= (R / 2) as usize
    };
    let (windows, _) = collect_windows(2.0, 512, R, 6, 0xCA16, 1, keep);
    assert_eq!(windows.len(), 6);
    let rf = R as f64;
    let rect = Rect::new(-rf, rf, -rf, rf).expect("rect");
    let mut worst = 0.0f64;
    for c in &windows {
        let fe = FieldEvaluator::local(c)
            .truncate(ETA)
            .expect("truncation")
            .energy_rectangle(rect, 1e-3)
            .expect("field energy");
        let (lhs, rhs) = gap_l2_diagnostic(c, fe).expect("diagnostic");
        assert!(
            lhs <= constants::GAP_L2_RATIO_C * rhs,
            "gap square sum {lhs} above {} * {rhs}",
            constants::GAP_L2_RATIO_C
        );
        worst = worst.max(lhs / rhs);
    }
    eprintln!(
        "gap_l2: constant {}, implied {worst:.3}",
        constants::GAP_L2_RATIO_C
    );
}
