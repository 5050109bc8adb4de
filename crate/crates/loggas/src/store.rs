//! On-disk ensemble stores. A store is a directory holding
//! `manifest.json` (seed, code version, and the arguments that produced
//! it) and `samples.ndjson` (one sample per line, ordered by index).
//! Given the manifest, a store is reproducible byte for byte; readers
//! never write, and writers refuse to overwrite an existing store.

use std::fs::{self, File};
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

/// Reproducibility record for a store.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    /// Version of the code that wrote the store.
    pub version: String,
    /// Seed every per-sample generator stream was derived from.
    pub seed: u64,
    /// Number of particles per sample.
    pub n_particles: usize,
    /// Inverse temperature.
    pub beta: f64,
    /// Sampler name, `tridiagonal` or `mcmc`.
    pub sampler: String,
    /// Number of samples in `samples.ndjson`.
    pub draws: usize,
    /// Command-line arguments the store was produced with.
    pub args: Vec<String>,
}

/// One stored sample.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SampleRecord {
    pub index: usize,
    pub points: Vec<f64>,
}

fn manifest_path(dir: &Path) -> PathBuf {
    dir.join("manifest.json")
}

fn samples_path(dir: &Path) -> PathBuf {
    dir.join("samples.ndjson")
}

/// Writes a complete store. Fails without touching anything if the
/// directory already holds a store.
pub fn write_store(dir: &Path, manifest: &Manifest, samples: &[SampleRecord]) -> io::Result<()> {
    if manifest_path(dir).exists() {
        return Err(io::Error::new(
            io::ErrorKind::AlreadyExists,
            format!("store already exists at {}", dir.display()),
        ));
    }
    fs::create_dir_all(dir)?;
    let mut w = BufWriter::new(File::create(samples_path(dir))?);
    for s in samples {
        serde_json::to_writer(&mut w, s)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    let mut m = BufWriter::new(File::create(manifest_path(dir))?);
    serde_json::to_writer_pretty(&mut m, manifest)?;
    m.write_all(b"\n")?;
    m.flush()
}

/// Reads a store's manifest.
pub fn read_manifest(dir: &Path) -> io::Result<Manifest> {
    let data = fs::read_to_string(manifest_path(dir))?;
    serde_json::from_str(&data)
        .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, format!("manifest: {e}")))
}

/// Reads all samples, verifying that their count matches the manifest
/// and that indices are consecutive from zero.
pub fn read_store(dir: &Path) -> io::Result<(Manifest, Vec<SampleRecord>)> {
    let manifest = read_manifest(dir)?;
    let file = File::open(samples_path(dir))?;
    let mut samples = Vec::with_capacity(manifest.draws);
    for (lineno, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: SampleRecord = serde_json::from_str(&line).map_err(|e| {
            io::Error::new(
                io::ErrorKind::InvalidData,
                format!("samples line {}: {e}", lineno + 1),
            )
        })?;
        if rec.index != samples.len() {
            return Err(io::Error::new(
                io::ErrorKind::InvalidData,
                format!("sample index {} out of order", rec.index),
            ));
        }
        samples.push(rec);
    }
    if samples.len() != manifest.draws {
        return Err(io::Error::new(
            io::ErrorKind::InvalidData,
            format!(
                "manifest lists {} draws but store holds {}",
                manifest.draws,
                samples.len()
            ),
        ));
    }
    Ok((manifest, samples))
}
