//! Batch front end for the log-gas laboratory. Subcommands wire the
//! library's samplers, energy and field evaluators, screening,
//! interpolation certificates, and estimators to files: JSON lines for
//! configurations, JSON for reports, CSV for estimator tables. Every
//! run is reproducible from its recorded seed and arguments. Exit
//! codes: 0 success, 1 verification failure, 2 usage error, 3 IO
//! failure.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use loggas_core::energy::{intrinsic_energy, truncation_error};
use loggas_core::field::FieldEvaluator;
use loggas_core::pointconf::{PointConfiguration, Window};
use loggas_core::quad::Rect;
use loggas_core::sampler::{
    microscopic_window, rng_for, sample_mcmc, sample_tridiagonal, Diagnostics, EnsembleSample,
    EnsembleSpec, SamplerId,
};
use loggas_core::screening::{check_preconditions, screen, ScreeningParams};
use loggas_core::transport::{convexity_certificate, interpolate, label, unlabel};
use serde::Serialize;

use loggas::accept;
use loggas::formats;
use loggas::parallel_map_indexed;
use loggas::store::{self, Manifest, SampleRecord};

/// Environment variable naming the default store directory.
const STORE_ENV: &str = "LOGGAS_STORE";

#[derive(Parser)]
#[command(name = "loggas", version, about = "Laboratory for one-dimensional log-gas ensembles")]
struct Cli {
    /// Base seed for every derived generator stream.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for sample-parallel commands; results are
    /// independent of this value.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Quadrature tolerance for field and screening integrals.
    #[arg(long, global = true, default_value_t = 1e-6)]
    tol: f64,
    /// Output path; its role (directory or file) depends on the
    /// subcommand.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SamplerKind {
    Tridiagonal,
    Mcmc,
}

#[derive(Subcommand)]
enum Command {
    /// Draw an ensemble and write it as a store directory.
    Sample {
        #[arg(long)]
        beta: f64,
        /// Particles per draw.
        #[arg(long)]
        n: usize,
        #[arg(long)]
        draws: usize,
        #[arg(long, value_enum, default_value_t = SamplerKind::Tridiagonal)]
        sampler: SamplerKind,
        /// Metropolis proposals per chain (mcmc sampler only).
        #[arg(long, default_value_t = 4000)]
        steps: usize,
    },
    /// Intrinsic energies of configurations from a JSON-lines file.
    Energy {
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
    },
    /// Box flux of the truncated field against the box discrepancy.
    Field {
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
        #[arg(long)]
        eta: f64,
        #[arg(long)]
        x0: f64,
        #[arg(long)]
        x1: f64,
        #[arg(long)]
        y0: f64,
        #[arg(long)]
        y1: f64,
    },
    /// Repair configurations near their carrier edges to the exact
    /// background count.
    Screen {
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
        #[arg(long, value_name = "R")]
        r: u32,
        #[arg(long)]
        s: f64,
        #[arg(long)]
        eta: f64,
        /// Boundary energy threshold, a number or `auto` for the 95th
        /// percentile of the measured energies.
        #[arg(long, default_value = "auto")]
        m: String,
        /// Where to write the screening report (JSON).
        #[arg(long, value_name = "FILE")]
        report: Option<PathBuf>,
    },
    /// Displacement interpolation between paired configurations, with
    /// convexity certificates at the midpoint.
    Interpolate {
        /// First endpoint: JSON-lines file or store directory.
        #[arg(long, value_name = "PATH")]
        a: PathBuf,
        /// Second endpoint: JSON-lines file or store directory.
        #[arg(long, value_name = "PATH")]
        b: PathBuf,
        /// Interpolation time in [0, 1].
        #[arg(long, default_value_t = 0.5)]
        t: f64,
        /// Window half-width used to take microscopic windows from
        /// stores and to evaluate energies.
        #[arg(long, value_name = "R")]
        r: u32,
    },
    /// Estimator tables from a store, as tidy CSV.
    Stats {
        #[command(subcommand)]
        which: StatsCommand,
    },
    /// Run the acceptance suite and write its JSON report.
    Verify {
        /// Smaller sample counts for a quick smoke run.
        #[arg(long)]
        fast: bool,
        /// Run a single named check instead of the whole suite.
        #[arg(long, value_name = "NAME")]
        only: Option<String>,
    },
}

#[derive(Subcommand)]
enum StatsCommand {
    /// Per-volume discrepancy variance across window radii.
    Discrepancy {
        #[arg(long, value_name = "DIR")]
        store: Option<PathBuf>,
        /// Comma-separated window half-widths.
        #[arg(long, default_value = "4,8,16,32")]
        rs: String,
        /// Draws per CSV row.
        #[arg(long, default_value_t = 100)]
        block: usize,
    },
    /// Per-volume intrinsic energy across window radii.
    Energy {
        #[arg(long, value_name = "DIR")]
        store: Option<PathBuf>,
        #[arg(long, default_value = "4,8,16,32")]
        rs: String,
        #[arg(long, default_value_t = 100)]
        block: usize,
    },
}

/// Failure modes, ordered by exit code.
enum CliError {
    /// Exit 1: a verification or computation produced a wrong or
    /// failed result.
    Failure(String),
    /// Exit 2: arguments that parse but do not make sense.
    Usage(String),
    /// Exit 3: the filesystem said no.
    Io(String),
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<loggas_core::Error> for CliError {
    fn from(e: loggas_core::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Sample { beta, n, draws, sampler, steps } => {
            cmd_sample(&cli, *beta, *n, *draws, *sampler, *steps)
        }
        Command::Energy { input } => cmd_energy(&cli, input),
        Command::Field { input, eta, x0, x1, y0, y1 } => {
            cmd_field(&cli, input, *eta, Rect::new(*x0, *x1, *y0, *y1)?)
        }
        Command::Screen { input, r, s, eta, m, report } => {
            cmd_screen(&cli, input, *r, *s, *eta, m, report.as_deref())
        }
        Command::Interpolate { a, b, t, r } => cmd_interpolate(&cli, a, b, *t, *r),
        Command::Stats { which } => cmd_stats(&cli, which),
        Command::Verify { fast, only } => cmd_verify(&cli, *fast, only.as_deref()),
    }
}

/// Resolves an optional path against the store environment variable.
fn store_dir(explicit: Option<&Path>) -> Result<PathBuf, CliError> {
    if let Some(p) = explicit {
        return Ok(p.to_path_buf());
    }
    std::env::var_os(STORE_ENV).map(PathBuf::from).ok_or_else(|| {
        CliError::Usage(format!("no store path: pass --out/--store or set {STORE_ENV}"))
    })
}

/// Writes a serializable report to the output path, or stdout.
fn emit_report<T: Serialize>(out: Option<&Path>, report: &T) -> Result<(), CliError> {
    let json = serde_json::to_string_pretty(report)
        .map_err(|e| CliError::Failure(format!("serialize report: {e}")))?;
    match out {
        Some(path) => fs::write(path, json + "\n")?,
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(json.as_bytes())?;
            stdout.write_all(b"\n")?;
        }
    }
    Ok(())
}

fn cmd_sample(
    cli: &Cli,
    beta: f64,
    n: usize,
    draws: usize,
    sampler: SamplerKind,
    steps: usize,
) -> Result<(), CliError> {
    let dir = store_dir(cli.out.as_deref())?;
    let (sampler_id, name) = match sampler {
        SamplerKind::Tridiagonal => (SamplerId::Tridiagonal, "tridiagonal"),
        SamplerKind::Mcmc => (SamplerId::Mcmc, "mcmc"),
    };
    let spec = EnsembleSpec { n_particles: n, beta, seed: cli.seed, sampler_id };
    spec.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let samples: Vec<Result<Vec<f64>, String>> =
        parallel_map_indexed(draws, cli.threads, |i| {
            let mut rng = rng_for(cli.seed, i as u64);
            let drawn = match sampler_id {
                SamplerId::Tridiagonal => sample_tridiagonal(&spec, &mut rng),
                SamplerId::Mcmc => sample_mcmc(&spec, steps, &mut rng),
            };
            drawn.map(|s| s.points).map_err(|e| e.to_string())
        });
    let mut records = Vec::with_capacity(draws);
    for (index, points) in samples.into_iter().enumerate() {
        records.push(SampleRecord {
            index,
            points: points.map_err(CliError::Failure)?,
        });
    }
    let manifest = Manifest {
        version: env!("CARGO_PKG_VERSION").to_string(),
        seed: cli.seed,
        n_particles: n,
        beta,
        sampler: name.to_string(),
        draws,
        args: std::env::args().skip(1).collect(),
    };
    store::write_store(&dir, &manifest, &records)?;
    println!("wrote {draws} samples to {}", dir.display());
    Ok(())
}

#[derive(Serialize)]
struct EnergyRow {
    index: usize,
    n_points: usize,
    pair_term: f64,
    background_term: f64,
    const_term: f64,
    total: f64,
}

fn cmd_energy(cli: &Cli, input: &Path) -> Result<(), CliError> {
    let configs = formats::read_configs(input)?;
    let mut rows = Vec::with_capacity(configs.len());
    for (index, c) in configs.iter().enumerate() {
        let e = intrinsic_energy(c).map_err(|err| {
            CliError::Usage(format!("configuration {index}: {err}"))
        })?;
        rows.push(EnergyRow {
            index,
            n_points: c.len(),
            pair_term: e.pair_term,
            background_term: e.background_term,
            const_term: e.const_term,
            total: e.total,
        });
    }
    emit_report(cli.out.as_deref(), &rows)
}

#[derive(Serialize)]
struct FluxRow {
    index: usize,
    flux: f64,
    discrepancy: f64,
    expected_flux: f64,
    residual: f64,
}

fn cmd_field(cli: &Cli, input: &Path, eta: f64, rect: Rect) -> Result<(), CliError> {
    let configs = formats::read_configs(input)?;
    let mut rows = Vec::with_capacity(configs.len());
    for (index, c) in configs.iter().enumerate() {
        let ev = FieldEvaluator::local(c)
            .truncate(eta)
            .map_err(|e| CliError::Usage(e.to_string()))?;
        let flux = ev
            .box_flux(rect, cli.tol)
            .map_err(|e| CliError::Failure(format!("configuration {index}: {e}")))?;
        let straddles = rect.y0 < 0.0 && rect.y1 > 0.0;
        let inside = if straddles {
            c.points().iter().filter(|&&p| rect.x0 < p && p < rect.x1).count() as f64
        } else {
            0.0
        };
        let covered = if straddles {
            (rect.x1.min(c.carrier().hi()) - rect.x0.max(c.carrier().lo())).max(0.0)
        } else {
            0.0
        };
        let discrepancy = inside - covered;
        let expected = -2.0 * std::f64::consts::PI * discrepancy;
        rows.push(FluxRow {
            index,
            flux,
            discrepancy,
            expected_flux: expected,
            residual: flux - expected,
        });
    }
    emit_report(cli.out.as_deref(), &rows)
}

#[derive(Serialize)]
struct ClaimRow {
    name: String,
    lhs: f64,
    rhs: f64,
    pass: bool,
}

#[derive(Serialize)]
struct ScreenRow {
    index: usize,
    boundary_energy: f64,
    tail_energy: f64,
    ell: f64,
    flux_mean: f64,
    collar_left: usize,
    collar_right: usize,
    claims: Vec<ClaimRow>,
}

#[derive(Serialize)]
struct ScreenReport {
    threshold: f64,
    screened: Vec<ScreenRow>,
    errors: Vec<(usize, String)>,
}

fn cmd_screen(
    cli: &Cli,
    input: &Path,
    r: u32,
    s: f64,
    eta: f64,
    m: &str,
    report_path: Option<&Path>,
) -> Result<(), CliError> {
    let configs = formats::read_configs(input)?;
    if configs.is_empty() {
        return Err(CliError::Usage("no configurations in input".into()));
    }
    let probe = ScreeningParams::new(r, s, eta, 1e6)?;
    let threshold = if m == "auto" {
        let mut energies = Vec::new();
        for c in &configs {
            if let Ok((m_scr, _, _)) = check_preconditions(c, &probe, cli.tol) {
                energies.push(m_scr);
            }
        }
        if energies.is_empty() {
            return Err(CliError::Failure("no configuration admits screening".into()));
        }
        energies.sort_by(f64::total_cmp);
        let idx = ((energies.len() as f64 - 1.0) * 0.95).round() as usize;
        energies[idx.min(energies.len() - 1)].max(1e-6)
    } else {
        m.parse::<f64>()
            .map_err(|_| CliError::Usage(format!("--m must be a number or auto, got {m}")))?
    };
    let params = ScreeningParams::new(r, s, eta, threshold)?;
    let mut screened_configs = Vec::new();
    let mut rows = Vec::new();
    let mut errors = Vec::new();
    for (index, c) in configs.iter().enumerate() {
        let mut rng = rng_for(cli.seed, index as u64);
        match screen(c, &params, &mut rng, cli.tol) {
            Ok((out, report)) => {
                debug_assert!(
                    truncation_error(&out, eta / 2.0, &c.carrier())
                        <= truncation_error(c, eta / 2.0, &c.carrier()) + 1e-9
                );
                screened_configs.push(out);
                rows.push(ScreenRow {
                    index,
                    boundary_energy: report.m_scr,
                    tail_energy: report.e_scr,
                    ell: report.ell,
                    flux_mean: report.u0,
                    collar_left: report.k_max_left,
                    collar_right: report.k_max_right,
                    claims: report
                        .claim_checks
                        .iter()
                        .map(|c| ClaimRow {
                            name: c.name.to_string(),
                            lhs: c.lhs,
                            rhs: c.rhs,
                            pass: c.pass,
                        })
                        .collect(),
                });
            }
            Err(e) => errors.push((index, e.to_string())),
        }
    }
    if let Some(out) = cli.out.as_deref() {
        formats::write_configs(out, &screened_configs)?;
    }
    let report = ScreenReport { threshold, screened: rows, errors: errors.clone() };
    emit_report(report_path, &report)?;
    if errors.is_empty() {
        Ok(())
    } else {
        Err(CliError::Failure(format!("{} configurations failed screening", errors.len())))
    }
}

/// Loads interpolation endpoints from a JSON-lines file or, for a
/// store directory, from microscopic windows of its samples.
fn load_endpoint(path: &Path, r: u32) -> Result<Vec<PointConfiguration>, CliError> {
    if !path.is_dir() {
        return Ok(formats::read_configs(path)?);
    }
    let (manifest, samples) = store::read_store(path)?;
    let sampler_id = match manifest.sampler.as_str() {
        "tridiagonal" => SamplerId::Tridiagonal,
        "mcmc" => SamplerId::Mcmc,
        other => return Err(CliError::Io(format!("unknown sampler {other} in manifest"))),
    };
    let spec = EnsembleSpec {
        n_particles: manifest.n_particles,
        beta: manifest.beta,
        seed: manifest.seed,
        sampler_id,
    };
    let mut out = Vec::new();
    for rec in samples {
        let sample =
            EnsembleSample { spec, points: rec.points, diagnostics: Diagnostics::default() };
        if let Ok(mw) = microscopic_window(&sample, 0.0, r) {
            out.push(mw.config);
        }
    }
    Ok(out)
}

#[derive(Serialize)]
struct CertificateRow {
    index: usize,
    lhs: f64,
    rhs_mean: f64,
    gain: f64,
    background_deficit: f64,
    slack: f64,
}

#[derive(Serialize)]
struct InterpolateReport {
    pairs: usize,
    skipped_unequal: usize,
    violations: usize,
    certificates: Vec<CertificateRow>,
}

fn cmd_interpolate(cli: &Cli, a: &Path, b: &Path, t: f64, r: u32) -> Result<(), CliError> {
    if !(0.0..=1.0).contains(&t) {
        return Err(CliError::Usage(format!("--t must lie in [0, 1], got {t}")));
    }
    let ca = load_endpoint(a, r)?;
    let cb = load_endpoint(b, r)?;
    let pairs = ca.len().min(cb.len());
    if pairs == 0 {
        return Err(CliError::Usage("no pairs to interpolate".into()));
    }
    let mut skipped = 0usize;
    let mut certificates = Vec::new();
    let mut midpoints = Vec::new();
    let mut violations = 0usize;
    for i in 0..pairs {
        if ca[i].len() != cb[i].len() || ca[i].is_empty() {
            skipped += 1;
            continue;
        }
        let x0 = label(&ca[i]).map_err(|e| CliError::Usage(e.to_string()))?;
        let x1 = label(&cb[i]).map_err(|e| CliError::Usage(e.to_string()))?;
        let xt = interpolate(&x0, &x1, t).map_err(|e| CliError::Failure(e.to_string()))?;
        midpoints.push(
            unlabel(&xt).map_err(|e| CliError::Failure(e.to_string()))?,
        );
        if t == 0.5 {
            let cert =
                convexity_certificate(&x0, &x1, r).map_err(|e| CliError::Failure(e.to_string()))?;
            if cert.slack < -1e-9 {
                violations += 1;
            }
            certificates.push(CertificateRow {
                index: i,
                lhs: cert.lhs,
                rhs_mean: cert.rhs_mean,
                gain: cert.gain,
                background_deficit: cert.bf,
                slack: cert.slack,
            });
        }
    }
    if let Some(out) = cli.out.as_deref() {
        formats::write_configs(out, &midpoints)?;
    }
    let report = InterpolateReport { pairs, skipped_unequal: skipped, violations, certificates };
    emit_report(None, &report)?;
    if violations == 0 {
        Ok(())
    } else {
        Err(CliError::Failure(format!("{violations} certificate violations")))
    }
}

fn parse_rs(rs: &str) -> Result<Vec<u32>, CliError> {
    let parsed: Result<Vec<u32>, _> = rs.split(',').map(|p| p.trim().parse::<u32>()).collect();
    let v = parsed.map_err(|_| CliError::Usage(format!("bad --rs list: {rs}")))?;
    if v.is_empty() || v.iter().any(|&r| r == 0) {
        return Err(CliError::Usage("--rs needs positive radii".into()));
    }
    Ok(v)
}

/// Rebuilds ensemble samples from a store for window extraction.
fn load_samples(dir: &Path) -> Result<Vec<EnsembleSample>, CliError> {
    let (manifest, records) = store::read_store(dir)?;
    let sampler_id = match manifest.sampler.as_str() {
        "tridiagonal" => SamplerId::Tridiagonal,
        "mcmc" => SamplerId::Mcmc,
        other => return Err(CliError::Io(format!("unknown sampler {other} in manifest"))),
    };
    let spec = EnsembleSpec {
        n_particles: manifest.n_particles,
        beta: manifest.beta,
        seed: manifest.seed,
        sampler_id,
    };
    Ok(records
        .into_iter()
        .map(|rec| EnsembleSample { spec, points: rec.points, diagnostics: Diagnostics::default() })
        .collect())
}

const WINDOW_CENTERS: [f64; 4] = [-0.3, -0.1, 0.1, 0.3];

fn cmd_stats(cli: &Cli, which: &StatsCommand) -> Result<(), CliError> {
    let (store_path, rs, block, estimator) = match which {
        StatsCommand::Discrepancy { store, rs, block } => {
            (store.as_deref(), parse_rs(rs)?, *block, "discrepancy_variance")
        }
        StatsCommand::Energy { store, rs, block } => {
            (store.as_deref(), parse_rs(rs)?, *block, "wint_per_volume")
        }
    };
    if block == 0 {
        return Err(CliError::Usage("--block must be positive".into()));
    }
    let dir = store_dir(store_path)?;
    let samples = load_samples(&dir)?;
    if samples.is_empty() {
        return Err(CliError::Usage("store holds no samples".into()));
    }
    let mut csv = String::from("estimator,R,block,windows,value,stderr\n");
    for (block_idx, chunk) in samples.chunks(block).enumerate() {
        for &r in &rs {
            // One window per (draw, center) that clears the spectrum
            // edge; estimators aggregate within the block.
            let mut values = Vec::new();
            for sample in chunk {
                for &x in &WINDOW_CENTERS {
                    if let Ok(mw) = microscopic_window(sample, x, r) {
                        let w = Window::centered(r as f64)
                            .map_err(|e| CliError::Failure(e.to_string()))?;
                        match estimator {
                            "discrepancy_variance" => {
                                values.push(mw.config.discrepancy(w));
                            }
                            _ => {
                                let e = intrinsic_energy(&mw.config)
                                    .map_err(|err| CliError::Failure(err.to_string()))?;
                                values.push(e.total / w.length());
                            }
                        }
                    }
                }
            }
            let n = values.len();
            let (value, stderr) = if estimator == "discrepancy_variance" {
                variance_and_stderr(&values, 2.0 * r as f64)
            } else {
                mean_and_stderr(&values)
            };
            if n < 2 {
                continue;
            }
            let _ = writeln!(
                csv,
                "{estimator},{r},{block_idx},{n},{value:.10e},{stderr:.10e}"
            );
        }
    }
    match cli.out.as_deref() {
        Some(path) => fs::write(path, csv)?,
        None => print!("{csv}"),
    }
    Ok(())
}

fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    if values.len() < 2 {
        return (values.first().copied().unwrap_or(0.0), 0.0);
    }
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Per-volume sample variance with the large-sample standard error of
/// a variance estimate.
fn variance_and_stderr(values: &[f64], volume: f64) -> (f64, f64) {
    let n = values.len() as f64;
    if values.len() < 2 {
        return (0.0, 0.0);
    }
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    let mu4 = values.iter().map(|v| (v - mean).powi(4)).sum::<f64>() / n;
    let var_of_var = (mu4 - var * var * (n - 3.0) / (n - 1.0)) / n;
    (var / volume, var_of_var.max(0.0).sqrt() / volume)
}

#[derive(Serialize)]
struct VerifyReport {
    version: String,
    fast: bool,
    passed: bool,
    outcomes: Vec<accept::CheckOutcome>,
}

fn cmd_verify(cli: &Cli, fast: bool, only: Option<&str>) -> Result<(), CliError> {
    let options = accept::Options { fast, threads: cli.threads.max(1) };
    let outcomes = match only {
        Some(name) => {
            let outcome = accept::by_name(name, &options).ok_or_else(|| {
                CliError::Usage(format!(
                    "unknown check {name}; valid names: {}",
                    accept::CHECK_NAMES.join(", ")
                ))
            })?;
            vec![outcome]
        }
        None => accept::run_all(&options),
    };
    for outcome in &outcomes {
        eprintln!("{}", outcome.summary());
    }
    let passed = outcomes.iter().all(|o| o.passed);
    let report = VerifyReport {
        version: env!("CARGO_PKG_VERSION").to_string(),
        fast,
        passed,
        outcomes,
    };
    emit_report(cli.out.as_deref(), &report)?;
    if passed {
        Ok(())
    } else {
        Err(CliError::Failure("acceptance checks failed".into()))
    }
}
