//! Samplers for the finite log-gas on the line: a tridiagonal
//! random-matrix construction whose eigenvalue law matches the Gibbs
//! density, a single-site Metropolis chain targeting the same density,
//! Poisson controls, and microscopic (unit-intensity) window extraction.

use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{ChiSquared, Distribution, Poisson, StandardNormal};

use crate::error::{Error, Result};
use crate::fmath;
use crate::pointconf::{PointConfiguration, Window};
use crate::transport::LabeledTuple;
use crate::tridiag::SymTridiagonal;

/// Which sampling algorithm produced (or should produce) a draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplerId {
    Tridiagonal,
    Mcmc,
}

/// Target ensemble: `n` particles at inverse temperature `beta` with the
/// quadratic confinement scaled so the equilibrium support is order one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleSpec {
    pub n_particles: usize,
    pub beta: f64,
    pub seed: u64,
    pub sampler_id: SamplerId,
}

impl EnsembleSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_particles < 2 {
            return Err(Error::InvalidParameter { name: "n_particles" });
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(Error::InvalidParameter { name: "beta" });
        }
        Ok(())
    }
}

/// Per-draw diagnostics; fields are populated by the sampler that
/// produced the draw.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Diagnostics {
    pub acceptance_rate: Option<f64>,
    pub residual: Option<f64>,
    pub proposal_sigma: Option<f64>,
}

/// One draw: sorted particle positions plus provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleSample {
    pub spec: EnsembleSpec,
    pub points: Vec<f64>,
    pub diagnostics: Diagnostics,
}

/// Deterministic per-draw generator: one seed, one stream per index.
pub fn rng_for(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// The random symmetric tridiagonal matrix whose eigenvalue density is
/// proportional to `prod |l_i - l_j|^beta exp(-sum l_i^2 / 2)`:
/// standard normal diagonal, off-diagonal `chi_{beta (n-k)} / sqrt(2)`.
/// Draw order: the full diagonal first, then off-diagonals from the top.
pub fn beta_hermite_matrix<R: Rng + ?Sized>(
    n: usize,
    beta: f64,
    rng: &mut R,
) -> Result<SymTridiagonal> {
    if n < 1 || !(beta > 0.0) {
        return Err(Error::InvalidParameter { name: "beta_hermite" });
    }
    let diag: Vec<f64> = (0..n).map(|_| StandardNormal.sample(rng)).collect();
    let mut off = Vec::with_capacity(n.saturating_sub(1));
    for k in 1..n {
        let df = beta * (n - k) as f64;
        let chi2 = ChiSquared::new(df)
            .map_err(|_| Error::InvalidParameter { name: "chi-squared dof" })?;
        off.push(fmath::sqrt(chi2.sample(rng) / 2.0));
    }
    SymTridiagonal::new(diag, off)
}

/// Exact-law sampler: eigenvalues of the tridiagonal model rescaled by
/// `1 / sqrt(beta n)` so the density matches the Gibbs measure with
/// confinement `n sum x_i^2 / 2` at inverse temperature `beta`.
pub fn sample_tridiagonal<R: Rng + ?Sized>(
    spec: &EnsembleSpec,
    rng: &mut R,
) -> Result<EnsembleSample> {
    spec.validate()?;
    if spec.sampler_id != SamplerId::Tridiagonal {
        return Err(Error::InvalidParameter { name: "sampler_id" });
    }
    let tol = 1e-12;
    let m = beta_hermite_matrix(spec.n_particles, spec.beta, rng)?;
    let scale = 1.0 / fmath::sqrt(spec.beta * spec.n_particles as f64);
    let points: Vec<f64> = m.eigenvalues(tol)?.into_iter().map(|l| l * scale).collect();
    Ok(EnsembleSample {
        spec: *spec,
        points,
        diagnostics: Diagnostics { residual: Some(tol), ..Diagnostics::default() },
    })
}

/// Metropolis options; `include_interaction: false` drops the pair term,
/// leaving independent Gaussians (a calibration target for tests).
#[derive(Debug, Clone, Copy)]
pub struct McmcOptions {
    pub steps: usize,
    pub include_interaction: bool,
}

/// Single-site Metropolis chain targeting the Gibbs density. The first
/// quarter of the proposals is burn-in, during which the proposal width
/// is tuned toward a 0.2-0.4 acceptance rate.
pub fn sample_mcmc<R: Rng + ?Sized>(
    spec: &EnsembleSpec,
    steps: usize,
    rng: &mut R,
) -> Result<EnsembleSample> {
    sample_mcmc_with(spec, McmcOptions { steps, include_interaction: true }, rng)
}

pub fn sample_mcmc_with<R: Rng + ?Sized>(
    spec: &EnsembleSpec,
    opts: McmcOptions,
    rng: &mut R,
) -> Result<EnsembleSample> {
    spec.validate()?;
    if spec.sampler_id != SamplerId::Mcmc {
        return Err(Error::InvalidParameter { name: "sampler_id" });
    }
    if opts.steps == 0 {
        return Err(Error::InvalidParameter { name: "steps" });
    }
    let n = spec.n_particles;
    let nf = n as f64;
    let beta = spec.beta;
    // Start from equilibrium quantiles so burn-in only has to fix local
    // structure.
    let mut x: Vec<f64> =
        (0..n).map(|i| semicircle_quantile((i as f64 + 0.5) / nf)).collect();
    let mut sigma = 1.0 / nf;
    let burn_in = opts.steps / 4;
    let block = 200usize;
    let mut block_accepts = 0usize;
    let mut accepts_after_burn_in = 0usize;
    let mut proposals_after_burn_in = 0usize;
    for step in 0..opts.steps {
        let i = step % n;
        let old = x[i];
        let noise: f64 = StandardNormal.sample(rng);
        let new = old + sigma * noise;
        let mut delta = beta * nf * 0.5 * (new * new - old * old);
        let mut collision = false;
        if opts.include_interaction {
            for (j, &xj) in x.iter().enumerate() {
                if j == i {
                    continue;
                }
                let dn = new - xj;
                if dn == 0.0 {
                    collision = true;
                    break;
                }
                delta += beta * (fmath::ln(fmath::abs(old - xj)) - fmath::ln(fmath::abs(dn)));
            }
        }
        let accept = !collision
            && (delta <= 0.0 || rng.gen::<f64>() < fmath::exp(-delta));
        if accept {
            x[i] = new;
        }
        if step < burn_in {
            if accept {
                block_accepts += 1;
            }
            if (step + 1) % block == 0 {
                let rate = block_accepts as f64 / block as f64;
                if rate < 0.2 {
                    sigma /= 1.3;
                } else if rate > 0.4 {
                    sigma *= 1.3;
                }
                block_accepts = 0;
            }
        } else {
            proposals_after_burn_in += 1;
            if accept {
                accepts_after_burn_in += 1;
            }
        }
    }
    x.sort_by(f64::total_cmp);
    let rate = if proposals_after_burn_in > 0 {
        accepts_after_burn_in as f64 / proposals_after_burn_in as f64
    } else {
        0.0
    };
    Ok(EnsembleSample {
        spec: *spec,
        points: x,
        diagnostics: Diagnostics {
            acceptance_rate: Some(rate),
            proposal_sigma: Some(sigma),
            ..Diagnostics::default()
        },
    })
}

/// Poisson process of the given intensity on a window: Poisson count,
/// iid uniform positions, sorted.
pub fn sample_poisson<R: Rng + ?Sized>(
    intensity: f64,
    w: &Window,
    rng: &mut R,
) -> Result<PointConfiguration> {
    if !(intensity > 0.0 && intensity.is_finite()) {
        return Err(Error::InvalidParameter { name: "intensity" });
    }
    let mean = intensity * w.length();
    let count = Poisson::new(mean)
        .map_err(|_| Error::InvalidParameter { name: "poisson mean" })?
        .sample(rng) as usize;
    let mut pts: Vec<f64> = (0..count).map(|_| rng.gen_range(w.lo()..w.hi())).collect();
    pts.sort_by(f64::total_cmp);
    PointConfiguration::new(pts, *w)
}

/// `n` iid uniform positions on the window, sorted into a strictly
/// increasing tuple (the law of a Poisson process conditioned on its
/// count); redraws on the null event of a tie.
pub fn uniform_tuple<R: Rng + ?Sized>(n: usize, w: &Window, rng: &mut R) -> LabeledTuple {
    loop {
        let mut pts: Vec<f64> = (0..n).map(|_| rng.gen_range(w.lo()..w.hi())).collect();
        pts.sort_by(f64::total_cmp);
        if pts.windows(2).all(|p| p[0] < p[1]) {
            return LabeledTuple::new(pts).expect("sorted by construction");
        }
    }
}

/// A microscopic window: the sample rescaled to unit intensity around a
/// bulk location.
#[derive(Debug, Clone, PartialEq)]
pub struct MicroWindow {
    /// Macroscopic center the window was taken at.
    pub center: f64,
    /// Half-width of the rescaled carrier.
    pub half_width: u32,
    /// Rescaled points on `[-R, R]`, intensity approximately one.
    pub config: PointConfiguration,
    /// Equilibrium density at the center used for the rescaling.
    pub density_used: f64,
}

/// Rescales the points near `x` by the equilibrium density at `x` so the
/// result has unit intensity on `[-R, R]`. Fails with `EdgeWindow` when
/// the window would overlap the measured edge of the spectrum.
///
/// The rescaling factor must be deterministic: an estimated density
/// carries relative noise of a few percent, which multiplies the window
/// length and inflates the count variance by its square times `(2R)^2`,
/// drowning the logarithmic count fluctuations this window exists to
/// expose.
pub fn microscopic_window(sample: &EnsembleSample, x: f64, r: u32) -> Result<MicroWindow> {
    let pts = &sample.points;
    let n = pts.len();
    if n < 16 {
        return Err(Error::InsufficientPoints { needed: 16, found: n });
    }
    if r == 0 {
        return Err(Error::InvalidParameter { name: "half_width" });
    }
    let quantile = |q: f64| -> f64 {
        let idx = fmath::round(q * (n - 1) as f64) as usize;
        pts[idx.min(n - 1)]
    };
    let q_lo = quantile(0.005);
    let q_hi = quantile(0.995);
    let rho = semicircle_density(x);
    if rho <= 0.0 {
        return Err(Error::EdgeWindow { center: x });
    }
    let spacing = 1.0 / (rho * n as f64);
    let half_macro = r as f64 * spacing;
    if x - half_macro < q_lo + 10.0 * spacing || x + half_macro > q_hi - 10.0 * spacing {
        return Err(Error::EdgeWindow { center: x });
    }
    let rf = r as f64;
    let micro: Vec<f64> = pts
        .iter()
        .map(|&p| rho * n as f64 * (p - x))
        .filter(|&v| fmath::abs(v) <= rf)
        .collect();
    let config = PointConfiguration::new(micro, Window::centered(rf)?)?;
    Ok(MicroWindow { center: x, half_width: r, config, density_used: rho })
}

/// Equilibrium density of the confined log-gas: `sqrt(2 - x^2) / pi` on
/// `[-sqrt 2, sqrt 2]`.
pub fn semicircle_density(x: f64) -> f64 {
    let t = 2.0 - x * x;
    if t <= 0.0 {
        0.0
    } else {
        fmath::sqrt(t) / PI
    }
}

/// Distribution function of [`semicircle_density`].
pub fn semicircle_cdf(x: f64) -> f64 {
    let s = fmath::sqrt(2.0);
    if x <= -s {
        return 0.0;
    }
    if x >= s {
        return 1.0;
    }
    0.5 + (x * fmath::sqrt(2.0 - x * x) / 2.0 + fmath::asin(x / s)) / PI
}

fn semicircle_quantile(q: f64) -> f64 {
    let s = fmath::sqrt(2.0);
    let mut lo = -s;
    let mut hi = s;
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if semicircle_cdf(mid) < q {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
