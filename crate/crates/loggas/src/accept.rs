//! The acceptance suite: thirteen numbered checks covering convexity of
//! the intrinsic energy along displacement interpolation, the flux
//! identity of the truncated field, closed forms against quadrature,
//! the screening construction, sampler cross-validation, discrepancy
//! variance decay, gain positivity between distinct processes, and the
//! far-tile interaction decay. Each check reports named `(lhs, rhs,
//! tolerance)` measurements and an overall pass flag; `run_all` drives
//! them in order. The `loggas verify` subcommand and the acceptance
//! test target are both thin wrappers around this module.

use std::time::Instant;

use loggas_core::energy::{background_const, background_potential, intrinsic_energy};
use loggas_core::field::FieldEvaluator;
use loggas_core::pointconf::{PointConfiguration, Window};
use loggas_core::quad::{integrate_1d, integrate_1d_cuts, Rect};
use loggas_core::sampler::{
    microscopic_window, rng_for, sample_mcmc, sample_poisson, sample_tridiagonal, uniform_tuple,
    EnsembleSpec, SamplerId,
};
use loggas_core::screening::{check_preconditions, choose_ell, compute_mi, screen, ScreeningParams};
use loggas_core::stats::{
    discrepancy_variance_curve, gain_estimator, interpolation_discrepancy_sandwich, ks_two_sample,
    pairwise_interaction_bound,
};
use loggas_core::transport::{
    assignment_coupling, convexity_certificate, gaussian_entropy_convexity_toy, label,
    midpoint_log_bound, Coupling, LabeledTuple,
};
use rand::Rng;
use serde::Serialize;

use crate::parallel_map_indexed;

const TAU: f64 = 2.0 * std::f64::consts::PI;

/// Environment variable that flips the sign of the gain estimate, a
/// mutation hook proving the suite can fail with a named criterion.
pub const SIGN_FLIP_ENV: &str = "LOGGAS_SIGN_FLIP";

/// Suite options. `fast` shrinks sample counts for a quick smoke run;
/// the full sizes are the defaults.
#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub fast: bool,
    pub threads: usize,
}

impl Default for Options {
    fn default() -> Self {
        Self { fast: false, threads: 1 }
    }
}

impl Options {
    fn size(&self, full: usize, fast: usize) -> usize {
        if self.fast {
            fast
        } else {
            full
        }
    }
}

/// One named comparison inside a check.
#[derive(Debug, Clone, Serialize)]
pub struct Measurement {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Measurement {
    /// Passes when `lhs <= rhs + tolerance`; a negative tolerance
    /// demands a strict margin.
    fn le(name: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let pass = lhs <= rhs + tolerance;
        Self { name: name.into(), lhs, rhs, tolerance, pass }
    }

    /// Passes when `lhs >= rhs - tolerance`.
    fn ge(name: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let pass = lhs >= rhs - tolerance;
        Self { name: name.into(), lhs, rhs, tolerance, pass }
    }

    /// Passes when `|lhs - rhs| <= tolerance`.
    fn close(name: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let pass = (lhs - rhs).abs() <= tolerance;
        Self { name: name.into(), lhs, rhs, tolerance, pass }
    }

    /// Passes when the violation count is zero.
    fn count(name: impl Into<String>, violations: usize) -> Self {
        Self {
            name: name.into(),
            lhs: violations as f64,
            rhs: 0.0,
            tolerance: 0.0,
            pass: violations == 0,
        }
    }
}

/// Result of one acceptance check.
#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub seconds: f64,
    pub measurements: Vec<Measurement>,
    /// Recorded values that do not gate the check.
    pub notes: Vec<String>,
}

impl CheckOutcome {
    fn finish(
        id: u32,
        name: &'static str,
        start: Instant,
        measurements: Vec<Measurement>,
        notes: Vec<String>,
    ) -> Self {
        let passed = measurements.iter().all(|m| m.pass);
        Self { id, name, passed, seconds: start.elapsed().as_secs_f64(), measurements, notes }
    }

    /// One line per check, the format the verify subcommand prints.
    pub fn summary(&self) -> String {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        let failed: Vec<&str> = self
            .measurements
            .iter()
            .filter(|m| !m.pass)
            .map(|m| m.name.as_str())
            .collect();
        if failed.is_empty() {
            format!(
                "criterion {:02} {}: {} ({} checks, {:.1}s)",
                self.id,
                self.name,
                verdict,
                self.measurements.len(),
                self.seconds
            )
        } else {
            format!(
                "criterion {:02} {}: {} ({})",
                self.id,
                self.name,
                verdict,
                failed.join(", ")
            )
        }
    }
}

fn sign_hook() -> f64 {
    if std::env::var_os(SIGN_FLIP_ENV).is_some() {
        -1.0
    } else {
        1.0
    }
}

/// Random strictly increasing tuples for the certificate sweeps.
fn random_pair(size: usize, r: u32, rng: &mut impl Rng) -> (LabeledTuple, LabeledTuple) {
    let w = Window::centered(r as f64).expect("window");
    (uniform_tuple(size, &w, rng), uniform_tuple(size, &w, rng))
}

/// Checks 1 and 2 share this sweep: certificates over random tuple
/// pairs at every size, returning (min slack, max background deficit,
/// error count).
fn certificate_sweep(o: &Options, seed: u64) -> (f64, f64, usize) {
    let pairs_per_size = o.size(2500, 300);
    let sizes = [4usize, 8, 16, 32];
    let results = parallel_map_indexed(sizes.len(), o.threads, |si| {
        let size = sizes[si];
        let r = (size / 2) as u32;
        let mut min_slack = f64::INFINITY;
        let mut max_bf = f64::NEG_INFINITY;
        let mut errors = 0usize;
        for k in 0..pairs_per_size {
            let mut rng = rng_for(seed, (si * pairs_per_size + k) as u64);
            let (x0, x1) = random_pair(size, r, &mut rng);
            match convexity_certificate(&x0, &x1, r) {
                Ok(cert) => {
                    min_slack = min_slack.min(cert.slack);
                    max_bf = max_bf.max(cert.bf);
                }
                Err(_) => errors += 1,
            }
        }
        (min_slack, max_bf, errors)
    });
    let min_slack = results.iter().map(|r| r.0).fold(f64::INFINITY, f64::min);
    let max_bf = results.iter().map(|r| r.1).fold(f64::NEG_INFINITY, f64::max);
    let errors = results.iter().map(|r| r.2).sum();
    (min_slack, max_bf, errors)
}

/// Criterion 1: along displacement interpolation, the intrinsic energy
/// of the half-interpolate stays below the endpoint mean minus a
/// quarter of the gain, across random tuple pairs of every size.
pub fn convexity_certificate_check(o: &Options) -> CheckOutcome {
    let start = Instant::now();
    let (min_slack, _, errors) = certificate_sweep(o, 0xAC01);
    let measurements = vec![
        Measurement::ge("min certificate slack", min_slack, 0.0, 1e-9),
        Measurement::count("certificate evaluation errors", errors),
        Measurement::le("runtime seconds", start.elapsed().as_secs_f64(), 60.0, 0.0),
    ];
    CheckOutcome::finish(1, "convexity-certificate", start, measurements, vec![])
}

/// Criterion 2: the background midpoint deficit is nonpositive on the
/// same sweep, since the background potential is convex.
pub fn background_convexity_check(o: &Options) -> CheckOutcome {
    let start = Instant::now();
    let (_, max_bf, errors) = certificate_sweep(o, 0xAC02);
    let measurements = vec![
        Measurement::le("max background midpoint deficit", max_bf, 0.0, 1e-10),
        Measurement::count("certificate evaluation errors", errors),
    ];
    CheckOutcome::finish(2, "background-convexity", start, measurements, vec![])
}

/// Criterion 3: the quantitative midpoint bound for `-log` on an
/// exhaustive grid, plus its worked special value.
pub fn scalar_log_convexity_check() -> CheckOutcome {
    let start = Instant::now();
    let mut violations = 0usize;
    let mut worst_margin = f64::INFINITY;
    for i in 1..=100 {
        for j in 1..=100 {
            let x = i as f64 / 10.0;
            let y = j as f64 / 10.0;
            let (lhs, rhs) = midpoint_log_bound(x, y);
            if lhs > rhs {
                violations += 1;
            }
            worst_margin = worst_margin.min(rhs - lhs);
        }
    }
    let worked_lhs = -std::f64::consts::LN_2;
    let worked_rhs = -3f64.ln() / 2.0 - 0.05;
    let measurements = vec![
        Measurement::count("grid violations", violations),
        Measurement::le("worked value -log 2", worked_lhs, worked_rhs, 0.0),
    ];
    let notes = vec![format!("smallest grid margin {worst_margin:.3e}")];
    CheckOutcome::finish(3, "scalar-log-convexity", start, measurements, notes)
}

fn dist_to_rect_boundary(px: f64, py: f64, r: &Rect) -> f64 {
    let dx_in = (px - r.x0).min(r.x1 - px);
    let dy_in = (py - r.y0).min(r.y1 - py);
    if dx_in >= 0.0 && dy_in >= 0.0 {
        dx_in.min(dy_in)
    } else {
        let cx = px.clamp(r.x0, r.x1);
        let cy = py.clamp(r.y0, r.y1);
        ((px - cx).powi(2) + (py - cy).powi(2)).sqrt()
    }
}

/// Criterion 4: the boundary flux of the truncated field around a box
/// that avoids all truncation discs equals `-2 pi` times the box
/// discrepancy, to a multiple of the quadrature tolerance.
pub fn gauss_flux_check(o: &Options) -> CheckOutcome {
    let start = Instant::now();
    let boxes = o.size(50, 15);
    let eta = 0.05;
    let tol = 1e-6;
    let results = parallel_map_indexed(boxes, o.threads, |k| {
        let mut rng = rng_for(0xAC04, k as u64);
        let n = rng.gen_range(1..=6);
        let mut pts: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.8..1.8)).collect();
        pts.sort_by(f64::total_cmp);
        let c = PointConfiguration::new(pts, Window::centered(2.0).expect("window"))
            .expect("strictly random points");
        let ev = FieldEvaluator::local(&c).truncate(eta).expect("eta");
        let rect = loop {
            let mut xs = [rng.gen_range(-2.5..2.5), rng.gen_range(-2.5..2.5)];
            let mut ys = [rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5)];
            xs.sort_by(f64::total_cmp);
            ys.sort_by(f64::total_cmp);
            if xs[1] - xs[0] < 0.3 || ys[1] - ys[0] < 0.3 {
                continue;
            }
            // Horizontal edges off the charge axis, vertical edges off
            // the background endpoints, all edges clear of the discs.
            if ys.iter().any(|y| y.abs() < 0.05) {
                continue;
            }
            if xs.iter().any(|x| (x.abs() - 2.0).abs() < 0.05) {
                continue;
            }
            let rect = Rect::new(xs[0], xs[1], ys[0], ys[1]).expect("rect");
            if c.points().iter().any(|&p| dist_to_rect_boundary(p, 0.0, &rect) < eta + 0.02) {
                continue;
            }
            break rect;
        };
        let flux = ev.box_flux(rect, tol).expect("flux quadrature");
        let straddles = rect.y0 < 0.0 && rect.y1 > 0.0;
        let inside = if straddles {
            c.points().iter().filter(|&&p| rect.x0 < p && p < rect.x1).count() as f64
        } else {
            0.0
        };
        let covered = if straddles {
            (rect.x1.min(2.0) - rect.x0.max(-2.0)).max(0.0)
        } else {
            0.0
        };
        (flux - (-TAU * (inside - covered))).abs()
    });
    let worst = results.into_iter().fold(0.0, f64::max);
    let measurements = vec![
        Measurement::le("max flux residual", worst, 10.0 * tol, 0.0),
        Measurement::le("runtime seconds", start.elapsed().as_secs_f64(), 120.0, 0.0),
    ];
    CheckOutcome::finish(4, "gauss-flux", start, measurements, vec![])
}

/// The frozen reference value of the intrinsic energy of `{-0.5, 0.5}`
/// on the unit symmetric carrier, cross-checked against quadrature in
/// the core test suite.
const FIXTURE_ENERGY: f64 = -3.7260924347106847;

/// Renormalized truncated field energy over a wide square domain (the
/// intrinsic energy is the whole-plane field energy, so the domain
/// must extend well past the carrier; a slim strip would miss the
/// energy radiated sideways by charges near the carrier edge).
fn renormalized_field_energy(c: &PointConfiguration, eta: f64, extent: f64, tol: f64) -> f64 {
    let ev = FieldEvaluator::local(c).truncate(eta).expect("truncation radius");
    let rect = Rect::new(-extent, extent, -extent, extent).expect("rect");
    let energy = ev.energy_rectangle(rect, tol).expect("field quadrature");
    energy / TAU + c.len() as f64 * eta.ln()
}

/// Criterion 5: the renormalized truncated field energy decreases
/// toward the intrinsic energy as the truncation radius shrinks, on
/// five fixed neutral configurations; includes the fixture value.
pub fn energy_monotonicity_check(o: &Options) -> CheckOutcome {
    let start = Instant::now();
    let etas = [0.2, 0.1, 0.05, 0.025];
    let configs: Vec<(Vec<f64>, f64)> = vec![
        (vec![-0.5, 0.5], 1.0),
        (vec![-0.6, 0.3], 1.0),
        (vec![-0.75, 0.15], 1.0),
        (vec![-1.5, -0.5, 0.5, 1.5], 2.0),
        (vec![-1.4, -0.35, 0.45, 1.3], 2.0),
    ];
    let per_config = parallel_map_indexed(configs.len(), o.threads, |ci| {
        let (pts, rf) = &configs[ci];
        let c = PointConfiguration::new(pts.clone(), Window::centered(*rf).expect("window"))
            .expect("fixed configuration");
        let wint = intrinsic_energy(&c).expect("closed form").total;
        let ws: Vec<f64> = etas
            .iter()
            .map(|&eta| renormalized_field_energy(&c, eta, 8.0 * rf, 3e-5))
            .collect();
        (wint, ws)
    });
    let mut measurements = Vec::new();
    // Fixture values: the closed form against the frozen reference,
    // and the field energy extrapolated to zero truncation radius
    // (the leading truncation correction is linear in eta, so one
    // Richardson step cancels it).
    measurements.push(Measurement::close(
        "fixture intrinsic energy",
        per_config[0].0,
        FIXTURE_ENERGY,
        1e-12,
    ));
    measurements.push(Measurement::close(
        "fixture field energy extrapolated to zero truncation",
        2.0 * per_config[0].1[3] - per_config[0].1[2],
        FIXTURE_ENERGY,
        5e-3,
    ));
    for step in 0..3 {
        let max_delta = per_config
            .iter()
            .map(|(_, ws)| ws[step + 1] - ws[step])
            .fold(f64::NEG_INFINITY, f64::max);
        measurements.push(Measurement::le(
            format!("max increment eta {} -> {}", etas[step], etas[step + 1]),
            max_delta,
            0.0,
            -1e-6,
        ));
        let max_distance_delta = per_config
            .iter()
            .map(|(wint, ws)| (ws[step + 1] - wint).abs() - (ws[step] - wint).abs())
            .fold(f64::NEG_INFINITY, f64::max);
        measurements.push(Measurement::le(
            format!("max distance increment eta {} -> {}", etas[step], etas[step + 1]),
            max_distance_delta,
            0.0,
            5e-4,
        ));
    }
    let max_extrapolation_error = per_config
        .iter()
        .map(|(wint, ws)| (2.0 * ws[3] - ws[2] - wint).abs())
        .fold(f64::NEG_INFINITY, f64::max);
    measurements.push(Measurement::le(
        "max extrapolated distance to intrinsic energy",
        max_extrapolation_error,
        0.0,
        1e-2,
    ));
    measurements.push(Measurement::le(
        "runtime seconds",
        start.elapsed().as_secs_f64(),
        180.0,
        0.0,
    ));
    let notes = per_config
        .iter()
        .enumerate()
        .map(|(i, (wint, ws))| {
            format!("config {i}: wint {wint:.6}, distances {:?}", ws.iter().map(|w| w - wint).collect::<Vec<_>>())
        })
        .collect();
    CheckOutcome::finish(5, "energy-monotonicity", start, measurements, notes)
}

/// Criterion 6: the closed forms of the background potential and the
/// background constant match adaptive quadrature, and the unit-carrier
/// potential at the origin is exactly -2.
pub fn closed_forms_check() -> CheckOutcome {
    let start = Instant::now();
    let mut max_v_err = 0.0f64;
    let mut max_c_err = 0.0f64;
    for r in [1u32, 2, 4] {
        let rf = r as f64;
        for frac in [0.0, 0.3, -0.3, 0.7, -0.7] {
            let t = frac * rf;
            let closed = background_potential(t, r).expect("inside carrier");
            let quad = integrate_1d_cuts(
                &mut |y: f64| (t - y).abs().ln(),
                -rf,
                rf,
                &[t],
                1e-10,
                400_000,
            )
            .expect("potential quadrature");
            max_v_err = max_v_err.max((closed - quad).abs());
        }
        let mut outer = |x: f64| {
            integrate_1d_cuts(&mut |y: f64| (x - y).abs().ln(), -rf, rf, &[x], 1e-11, 400_000)
                .expect("inner quadrature")
        };
        let nested = integrate_1d(&mut outer, -rf, rf, 1e-9, 400_000).expect("outer quadrature");
        max_c_err = max_c_err.max((background_const(r) - (-nested)).abs());
    }
    let measurements = vec![
        Measurement::le("max potential error vs quadrature", max_v_err, 1e-8, 0.0),
        Measurement::le("max constant error vs quadrature", max_c_err, 1e-8, 0.0),
        Measurement::close(
            "unit-carrier potential at origin",
            background_potential(0.0, 1).expect("origin"),
            -2.0,
            0.0,
        ),
    ];
    CheckOutcome::finish(6, "closed-forms", start, measurements, vec![])
}

/// Draws beta-ensemble samples and harvests microscopic windows at a
/// rotation of bulk centers until `want` windows satisfy `keep`.
/// Windows arrive in (draw, center) order, so the result does not
/// depend on the thread count.
pub fn collect_windows<F>(
    beta: f64,
    n: usize,
    r: u32,
    want: usize,
    seed: u64,
    threads: usize,
    keep: F,
) -> (Vec<PointConfiguration>, usize)
where
    F: Fn(&PointConfiguration) -> bool + Sync,
{
    let centers = [-0.3, -0.1, 0.1, 0.3];
    let spec = EnsembleSpec { n_particles: n, beta, seed, sampler_id: SamplerId::Tridiagonal };
    let mut out = Vec::with_capacity(want);
    let mut rejected = 0usize;
    let mut next_draw = 0u64;
    while out.len() < want && next_draw < 60 * want as u64 {
        let batch = threads.max(1) * 4;
        let candidates = parallel_map_indexed(batch, threads, |i| {
            let mut rng = rng_for(seed, next_draw + i as u64);
            let sample = sample_tridiagonal(&spec, &mut rng).expect("tridiagonal sampler");
            let mut windows = Vec::new();
            for &x in &centers {
                if let Ok(mw) = microscopic_window(&sample, x, r) {
                    windows.push(mw.config);
                }
            }
            windows
        });
        next_draw += batch as u64;
        for w in candidates.into_iter().flatten() {
            if out.len() >= want {
                break;
            }
            if keep(&w) {
                out.push(w);
            } else {
                rejected += 1;
            }
        }
    }
    (out, rejected)
}

/// Nearest-rank percentile of `values`, sorting them in place.
pub fn percentile(values: &mut [f64], q: f64) -> f64 {
    values.sort_by(f64::total_cmp);
    let idx = ((values.len() as f64 - 1.0) * q).round() as usize;
    values[idx.min(values.len() - 1)]
}

/// Criterion 7: the screening construction on sampled beta = 2 windows
/// keeps the interior intact, fills to the exact background count with
/// clearance and bounded jitter, and satisfies the calibrated claim
/// bounds on collar counts and point displacements.
pub fn screening_contract_check(o: &Options) -> CheckOutcome {
    let start = Instant::now();
    let want = o.size(50, 10);
    let r = 32u32;
    let s = 0.125;
    let eta = 0.05;
    let tol = 1e-4;
    let probe = ScreeningParams::new(r, s, eta, 1e6).expect("params");
    // Keep only windows that satisfy the screening preconditions and a
    // feasible interval solve; the construction is quantified over
    // typical windows, not all of them, and a degenerate interval is
    // its designed signal that the window is too rough at this size.
    let keep = |c: &PointConfiguration| match check_preconditions(c, &probe, tol) {
        Ok((_, _, clearance)) => {
            clearance
                && c.len() <= 2 * r as usize
                && choose_ell(c, &probe, tol)
                    .and_then(|(ell, _)| compute_mi(c, &probe, ell, tol))
                    .is_ok()
        }
        Err(_) => false,
    };
    let (windows, rejected) = collect_windows(2.0, 512, r, want, 0xAC07, o.threads, keep);
    let mut measurements = Vec::new();
    let mut notes =
        vec![format!("{} candidate windows rejected by preconditions or degeneracy", rejected)];
    if windows.len() < want {
        measurements.push(Measurement::count(
            "window shortfall",
            want - windows.len(),
        ));
        return CheckOutcome::finish(7, "screening-contract", start, measurements, notes);
    }
    // The energy threshold is set at the 95th percentile of the
    // measured boundary energies, the auto rule the CLI uses.
    let mut m_scrs: Vec<f64> = windows
        .iter()
        .map(|c| check_preconditions(c, &probe, tol).expect("rechecked").0)
        .collect();
    let m_auto = percentile(&mut m_scrs, 0.95).max(1e-6);
    notes.push(format!("auto energy threshold {m_auto:.4}"));
    let params = ScreeningParams::new(r, s, eta, m_auto).expect("params");

    let screened = parallel_map_indexed(windows.len(), o.threads, |i| {
        let mut rng = rng_for(0xAC77, i as u64);
        screen(&windows[i], &params, &mut rng, tol)
    });

    let rp = params.r_inner();
    let interior = Window::new(-rp, rp).expect("interior");
    let carrier = Window::centered(r as f64).expect("carrier");
    let mut screen_errors = 0usize;
    let mut count_wrong = 0usize;
    let mut interior_changed = 0usize;
    let mut max_edge_intrusion = f64::NEG_INFINITY;
    let mut max_jitter = 0.0f64;
    let mut close_pair_growth = f64::NEG_INFINITY;
    let mut claim_failures = [0usize; 5];
    let claim_names = ["kmax", "xk_outer", "xk_inner", "discr_new_a", "discr_new_b"];
    let mut worst_ratio = [0.0f64; 5];
    let mut mass_worst = 0.0f64;
    let mut threshold_ok = 0usize;
    for (c, result) in windows.iter().zip(&screened) {
        let (out, report) = match result {
            Ok(pair) => pair,
            Err(_) => {
                screen_errors += 1;
                continue;
            }
        };
        if out.len() != 2 * r as usize {
            count_wrong += 1;
        }
        if out.restrict(interior).points() != c.restrict(interior).points() {
            interior_changed += 1;
        }
        for &x in out.points() {
            max_edge_intrusion = max_edge_intrusion.max(0.1 - (r as f64 - x.abs()));
        }
        for &(center, x) in &report.placements {
            max_jitter = max_jitter.max((x - center).abs());
        }
        let growth = loggas_core::energy::truncation_error(out, eta / 2.0, &carrier)
            - loggas_core::energy::truncation_error(c, eta / 2.0, &carrier);
        close_pair_growth = close_pair_growth.max(growth);
        for check in &report.claim_checks {
            if let Some(k) = claim_names.iter().position(|&n| n == check.name) {
                if !check.pass {
                    claim_failures[k] += 1;
                }
                if check.rhs > 0.0 {
                    worst_ratio[k] = worst_ratio[k].max(check.lhs / check.rhs);
                }
            }
            if check.name == "mass_bookkeeping" {
                mass_worst = mass_worst.max(check.lhs);
            }
            if check.name == "m_scr_threshold" && check.pass {
                threshold_ok += 1;
            }
        }
    }
    measurements.push(Measurement::count("screening failures", screen_errors));
    measurements.push(Measurement::count("wrong output count", count_wrong));
    measurements.push(Measurement::count("interior modified", interior_changed));
    measurements.push(Measurement::le(
        "max boundary intrusion past clearance",
        max_edge_intrusion,
        0.0,
        1e-12,
    ));
    measurements.push(Measurement::le("max jitter", max_jitter, eta / 4.0, 1e-12));
    measurements.push(Measurement::le(
        "close-pair energy growth",
        close_pair_growth,
        0.0,
        1e-9,
    ));
    for (k, &name) in claim_names.iter().enumerate() {
        measurements.push(Measurement::count(
            format!("claim {name} failures"),
            claim_failures[k],
        ));
        notes.push(format!("claim {name} worst ratio {:.3}", worst_ratio[k]));
    }
    measurements.push(Measurement::le("worst mass bookkeeping defect", mass_worst, 1.0, 0.0));
    measurements.push(Measurement::ge(
        "fraction under energy threshold",
        threshold_ok as f64 / windows.len() as f64,
        0.9,
        0.0,
    ));
    CheckOutcome::finish(7, "screening-contract", start, measurements, notes)
}

/// Criterion 8: the tridiagonal sampler and the Metropolis chain agree
/// in distribution at small size across temperatures, measured by the
/// pooled two-sample Kolmogorov-Smirnov statistic.
pub fn sampler_cross_validation_check(o: &Options) -> CheckOutcome {
    let start = Instant::now();
    let draws = o.size(10_000, 2_000);
    let n = 8usize;
    let mut measurements = Vec::new();
    for (bi, beta) in [1.0, 2.0, 4.0].into_iter().enumerate() {
        let tri_spec =
            EnsembleSpec { n_particles: n, beta, seed: 0xAC08, sampler_id: SamplerId::Tridiagonal };
        let tri = parallel_map_indexed(draws, o.threads, |i| {
            let mut rng = rng_for(0xAC08 + bi as u64, i as u64);
            sample_tridiagonal(&tri_spec, &mut rng).expect("tridiagonal").points
        });
        let mc_spec =
            EnsembleSpec { n_particles: n, beta, seed: 0xAC08, sampler_id: SamplerId::Mcmc };
        let mc = parallel_map_indexed(draws, o.threads, |i| {
            let mut rng = rng_for(0xAC18 + bi as u64, i as u64);
            sample_mcmc(&mc_spec, 4_000, &mut rng).expect("chain").points
        });
        let a: Vec<f64> = tri.into_iter().flatten().collect();
        let b: Vec<f64> = mc.into_iter().flatten().collect();
        let d = ks_two_sample(&a, &b);
        measurements.push(Measurement::le(format!("KS distance, beta {beta}"), d, 0.05, 0.0));
    }
    CheckOutcome::finish(8, "sampler-cross-validation", start, measurements, vec![])
}

/// Per-radius discrepancy variance with delete-one-group jackknife
/// estimates, groups being independent ensemble draws.
struct GroupedVariance {
    sums: Vec<f64>,
    sumsqs: Vec<f64>,
    counts: Vec<usize>,
}

impl GroupedVariance {
    fn from_groups(groups: &[Vec<f64>]) -> Self {
        Self {
            sums: groups.iter().map(|g| g.iter().sum()).collect(),
            sumsqs: groups.iter().map(|g| g.iter().map(|x| x * x).sum()).collect(),
            counts: groups.iter().map(|g| g.len()).collect(),
        }
    }

    /// Sample variance with group `skip` removed (`usize::MAX` keeps
    /// every group).
    fn variance_without(&self, skip: usize) -> f64 {
        let mut s = 0.0;
        let mut q = 0.0;
        let mut n = 0usize;
        for i in 0..self.sums.len() {
            if i == skip {
                continue;
            }
            s += self.sums[i];
            q += self.sumsqs[i];
            n += self.counts[i];
        }
        let nf = n as f64;
        (q - s * s / nf) / (nf - 1.0)
    }
}

/// Criterion 9: the per-volume variance of the window discrepancy
/// strictly decreases in the window radius for the beta = 2 ensemble
/// (one-sided 95% jackknife bound on each consecutive difference),
/// while the Poisson control stays at one.
pub fn discrepancy_variance_decay_check(o: &Options) -> CheckOutcome {
    let start = Instant::now();
    let groups = o.size(125, 40);
    let rs = [4u32, 8, 16, 32];
    let centers = [-0.3, -0.1, 0.1, 0.3];
    let spec =
        EnsembleSpec { n_particles: 512, beta: 2.0, seed: 0xAC09, sampler_id: SamplerId::Tridiagonal };
    // One group of windows per ensemble draw; windows from one draw
    // share the sample, so confidence comes from jackknife over draws.
    let per_group: Vec<Vec<Vec<f64>>> = parallel_map_indexed(groups, o.threads, |g| {
        let mut rng = rng_for(0xAC09, g as u64);
        let sample = sample_tridiagonal(&spec, &mut rng).expect("tridiagonal");
        rs.iter()
            .map(|&r| {
                centers
                    .iter()
                    .filter_map(|&x| microscopic_window(&sample, x, r).ok())
                    .map(|mw| mw.config.discrepancy(Window::centered(r as f64).expect("window")))
                    .collect()
            })
            .collect()
    });
    let mut measurements = Vec::new();
    let mut notes = Vec::new();
    let grouped: Vec<GroupedVariance> = (0..rs.len())
        .map(|ri| {
            let groups: Vec<Vec<f64>> = per_group.iter().map(|g| g[ri].clone()).collect();
            GroupedVariance::from_groups(&groups)
        })
        .collect();
    let windows_per_r: usize = grouped[0].counts.iter().sum();
    notes.push(format!("{windows_per_r} windows per radius"));
    let v_full: Vec<f64> = grouped
        .iter()
        .zip(&rs)
        .map(|(gv, &r)| gv.variance_without(usize::MAX) / (2.0 * r as f64))
        .collect();
    for (ri, &r) in rs.iter().enumerate() {
        notes.push(format!("per-volume variance at radius {r}: {:.4}", v_full[ri]));
    }
    for step in 0..rs.len() - 1 {
        let d_full = v_full[step + 1] - v_full[step];
        let deltas: Vec<f64> = (0..groups)
            .map(|g| {
                grouped[step + 1].variance_without(g) / (2.0 * rs[step + 1] as f64)
                    - grouped[step].variance_without(g) / (2.0 * rs[step] as f64)
            })
            .collect();
        let mean = deltas.iter().sum::<f64>() / groups as f64;
        let var_jack = (groups as f64 - 1.0) / groups as f64
            * deltas.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>();
        let upper = d_full + 1.645 * var_jack.sqrt();
        measurements.push(Measurement::le(
            format!("variance difference upper bound, radius {} -> {}", rs[step], rs[step + 1]),
            upper,
            0.0,
            0.0,
        ));
    }
    // Poisson control: per-volume variance is the intensity at every
    // radius.
    let control_draws = o.size(500, 160);
    let w32 = Window::centered(32.0).expect("window");
    let control = discrepancy_variance_curve(
        |i| sample_poisson(1.0, &w32, &mut rng_for(0xAC19, i as u64)),
        &rs,
        control_draws,
    )
    .expect("poisson control");
    for point in control {
        measurements.push(Measurement::close(
            format!("poisson per-volume variance, radius {}", point.r),
            point.variance_per_volume,
            1.0,
            3.0 * point.stderr + 0.02,
        ));
    }
    measurements.push(Measurement::le(
        "runtime seconds",
        start.elapsed().as_secs_f64(),
        600.0,
        0.0,
    ));
    CheckOutcome::finish(9, "discrepancy-variance-decay", start, measurements, notes)
}

/// Shared fixture for criteria 10 and 11: Poisson tuples coupled to
/// beta = 4 window tuples by exact assignment, plus the beta = 4
/// self-coupling.
struct GainFixture {
    cross: Coupling,
    selfsame: Coupling,
}

fn gain_fixture(o: &Options) -> Result<GainFixture, String> {
    let pairs = o.size(200, 60);
    let r = 16u32;
    let n = 2 * r as usize;
    let w = Window::centered(r as f64).expect("window");
    let poisson: Vec<LabeledTuple> = (0..pairs)
        .map(|i| uniform_tuple(n, &w, &mut rng_for(0xAC10, i as u64)))
        .collect();
    // Conditioning the ensemble windows on the exact background count
    // makes the two sides comparable tuple by tuple.
    let keep = |c: &PointConfiguration| c.len() == n;
    let (windows, _) = collect_windows(4.0, 512, r, pairs, 0xAC11, o.threads, keep);
    if windows.len() < pairs {
        return Err(format!("only {} of {pairs} exact-count windows", windows.len()));
    }
    let beta4: Vec<LabeledTuple> = windows
        .iter()
        .map(|c| label(c).expect("exact-count window"))
        .collect();
    let cross = assignment_coupling(&poisson, &beta4).map_err(|e| e.to_string())?;
    let selfsame = assignment_coupling(&beta4, &beta4).map_err(|e| e.to_string())?;
    Ok(GainFixture { cross, selfsame })
}

/// Criterion 10: the gain estimate between Poisson and beta = 4
/// windows is positive with its 95% interval clear of zero, and the
/// self-coupling gain is exactly zero.
pub fn gain_positivity_check(o: &Options) -> CheckOutcome {
    let start = Instant::now();
    let fixture = match gain_fixture(o) {
        Ok(f) => f,
        Err(msg) => {
            let m = vec![Measurement::count("fixture shortfall", 1)];
            return CheckOutcome::finish(10, "gain-positivity", start, m, vec![msg]);
        }
    };
    let est = gain_estimator(&fixture.cross, 16).expect("estimator");
    let value = sign_hook() * est.value;
    let self_est = gain_estimator(&fixture.selfsame, 16).expect("estimator");
    let measurements = vec![
        Measurement::ge(
            "gain lower confidence bound",
            value - 1.96 * est.stderr,
            0.0,
            0.0,
        ),
        Measurement::close("self-coupling gain", self_est.value, 0.0, 0.0),
    ];
    let notes = vec![format!(
        "estimate {:.4} +- {:.4}, enumeration shift {}",
        est.value, est.stderr, est.shift_used
    )];
    CheckOutcome::finish(10, "gain-positivity", start, measurements, notes)
}

/// Criterion 11: the discrepancy of every half-interpolate is
/// sandwiched by the endpoint discrepancies, for each coupled pair of
/// criterion 10, exactly.
pub fn discrepancy_sandwich_check(o: &Options) -> CheckOutcome {
    let start = Instant::now();
    let fixture = match gain_fixture(o) {
        Ok(f) => f,
        Err(msg) => {
            let m = vec![Measurement::count("fixture shortfall", 1)];
            return CheckOutcome::finish(11, "discrepancy-sandwich", start, m, vec![msg]);
        }
    };
    let mut violations = 0usize;
    let mut pairs = 0usize;
    for coupling in [&fixture.cross, &fixture.selfsame] {
        for (x0, x1, _) in coupling.pairs() {
            pairs += 1;
            match interpolation_discrepancy_sandwich(x0, x1) {
                Ok(true) => {}
                _ => violations += 1,
            }
        }
    }
    let measurements = vec![Measurement::count("sandwich violations", violations)];
    let notes = vec![format!("{pairs} coupled pairs checked")];
    CheckOutcome::finish(11, "discrepancy-sandwich", start, measurements, notes)
}

/// Criterion 12: midpoint convexity of the negative differential
/// entropy along the Gaussian interpolation, exact in closed form over
/// a grid of endpoint widths and means.
pub fn entropy_toy_check() -> CheckOutcome {
    let start = Instant::now();
    let ts = [0.0, 0.5, 1.0];
    let mut violations = 0usize;
    for i in 1..=15 {
        for j in 1..=15 {
            let s0 = i as f64 / 5.0;
            let s1 = j as f64 / 5.0;
            for (m0, m1) in [(0.0, 0.0), (-1.0, 2.0)] {
                let curve =
                    gaussian_entropy_convexity_toy(m0, s0, m1, s1, &ts).expect("closed form");
                let mid = curve[1].1;
                let mean = 0.5 * (curve[0].1 + curve[2].1);
                if mid > mean {
                    violations += 1;
                }
            }
        }
    }
    let worked = gaussian_entropy_convexity_toy(0.0, 1.0, 0.0, 2.0, &ts).expect("closed form");
    let measurements = vec![
        Measurement::count("midpoint convexity violations", violations),
        Measurement::le(
            "worked midpoint, widths 1 and 2",
            worked[1].1,
            0.5 * (worked[0].1 + worked[2].1),
            0.0,
        ),
    ];
    CheckOutcome::finish(12, "entropy-toy", start, measurements, vec![])
}

/// Least-squares slope of `ln y` against `ln x`.
fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let cov: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    cov / var
}

/// Criterion 13: the interaction between far screened tiles decays
/// like the inverse square of the tile distance, and the neutral
/// lattice baseline interaction vanishes.
pub fn tile_interaction_decay_check(o: &Options) -> CheckOutcome {
    let start = Instant::now();
    let m = o.size(20, 8);
    let r = 16u32;
    let rf = r as f64;
    let params = ScreeningParams::new(r, 0.125, 0.05, 10.0).expect("params");
    let screened: Vec<PointConfiguration> = parallel_map_indexed(m, o.threads, |i| {
        let mut rng = rng_for(0xAC13, i as u64);
        let pts: Vec<f64> =
            (0..2 * r).map(|k| -rf + 0.5 + k as f64 + rng.gen_range(-0.2..0.2)).collect();
        let c = PointConfiguration::new(pts, Window::centered(rf).expect("window"))
            .expect("jitter keeps order");
        let (out, _) = screen(&c, &params, &mut rng, 1e-4).expect("screening");
        out
    });
    let distances = [2.0f64, 3.0, 4.0, 6.0, 8.0, 12.0];
    let mut means = Vec::with_capacity(distances.len());
    let mut bound_violations = 0usize;
    for &d in &distances {
        let mut acc = 0.0;
        for i in 0..m {
            let a = &screened[i];
            let b = screened[(i + 1) % m].translate(-2.0 * rf * d);
            let (interaction, bound) =
                pairwise_interaction_bound(a, &b, r).expect("separated tiles");
            if interaction.abs() > bound {
                bound_violations += 1;
            }
            acc += interaction.abs();
        }
        means.push(acc / m as f64);
    }
    let slope = log_log_slope(&distances, &means);
    // Neutral baseline: two exact unit lattices interact negligibly.
    let lattice8: Vec<f64> = (0..16).map(|k| -8.0 + 0.5 + k as f64).collect();
    let la = PointConfiguration::new(lattice8.clone(), Window::centered(8.0).expect("window"))
        .expect("lattice");
    let lb = la.translate(-32.0);
    let (lattice_interaction, _) = pairwise_interaction_bound(&la, &lb, 8).expect("tiles");
    let measurements = vec![
        Measurement::close("log-log slope", slope, -2.0, 0.3),
        Measurement::count("bound violations", bound_violations),
        Measurement::le("neutral lattice interaction", lattice_interaction.abs(), 1e-3, 0.0),
    ];
    let notes = vec![format!("mean interactions {means:?}")];
    CheckOutcome::finish(13, "tile-interaction-decay", start, measurements, notes)
}

/// Runs the whole suite in criterion order.
pub fn run_all(o: &Options) -> Vec<CheckOutcome> {
    vec![
        convexity_certificate_check(o),
        background_convexity_check(o),
        scalar_log_convexity_check(),
        gauss_flux_check(o),
        energy_monotonicity_check(o),
        closed_forms_check(),
        screening_contract_check(o),
        sampler_cross_validation_check(o),
        discrepancy_variance_decay_check(o),
        gain_positivity_check(o),
        discrepancy_sandwich_check(o),
        entropy_toy_check(),
        tile_interaction_decay_check(o),
    ]
}

/// Runs a single check by its kebab-case name.
pub fn by_name(name: &str, o: &Options) -> Option<CheckOutcome> {
    Some(match name {
        "convexity-certificate" => convexity_certificate_check(o),
        "background-convexity" => background_convexity_check(o),
        "scalar-log-convexity" => scalar_log_convexity_check(),
        "gauss-flux" => gauss_flux_check(o),
        "energy-monotonicity" => energy_monotonicity_check(o),
        "closed-forms" => closed_forms_check(),
        "screening-contract" => screening_contract_check(o),
        "sampler-cross-validation" => sampler_cross_validation_check(o),
        "discrepancy-variance-decay" => discrepancy_variance_decay_check(o),
        "gain-positivity" => gain_positivity_check(o),
        "discrepancy-sandwich" => discrepancy_sandwich_check(o),
        "entropy-toy" => entropy_toy_check(),
        "tile-interaction-decay" => tile_interaction_decay_check(o),
        _ => return None,
    })
}

/// All check names in criterion order.
pub const CHECK_NAMES: [&str; 13] = [
    "convexity-certificate",
    "background-convexity",
    "scalar-log-convexity",
    "gauss-flux",
    "energy-monotonicity",
    "closed-forms",
    "screening-contract",
    "sampler-cross-validation",
    "discrepancy-variance-decay",
    "gain-positivity",
    "discrepancy-sandwich",
    "entropy-toy",
    "tile-interaction-decay",
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn measurement_semantics() {
        assert!(Measurement::le("a", 1.0, 1.0, 0.0).pass);
        assert!(!Measurement::le("a", 1.0, 1.0, -1e-9).pass);
        assert!(Measurement::ge("a", 0.5, 0.0, 0.0).pass);
        assert!(Measurement::close("a", 1.0, 1.0 + 1e-9, 1e-8).pass);
        assert!(!Measurement::count("a", 2).pass);
    }

    #[test]
    fn instant_checks_pass() {
        assert!(scalar_log_convexity_check().passed);
        assert!(entropy_toy_check().passed);
        assert!(closed_forms_check().passed);
    }

    #[test]
    fn by_name_covers_all() {
        let o = Options { fast: true, threads: 1 };
        assert!(by_name("no-such-check", &o).is_none());
        assert_eq!(CHECK_NAMES.len(), 13);
        // Cheap representative: name lookup reaches the right criterion.
        let c = by_name("scalar-log-convexity", &o).unwrap();
        assert_eq!(c.id, 3);
    }
}
