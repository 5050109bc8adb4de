//! JSON-lines configuration files: one configuration per line, carrier
//! first so a file is meaningful without outside context. Readers
//! validate instead of repairing; a file with unsorted or non-finite
//! points is rejected.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use loggas_core::pointconf::{PointConfiguration, Window};
use serde::{Deserialize, Serialize};

/// Wire form of a configuration: `{"carrier":[lo,hi],"points":[...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConfigRecord {
    pub carrier: [f64; 2],
    pub points: Vec<f64>,
}

impl ConfigRecord {
    pub fn from_config(c: &PointConfiguration) -> Self {
        Self {
            carrier: [c.carrier().lo(), c.carrier().hi()],
            points: c.points().to_vec(),
        }
    }

    /// Validating conversion: the points must already be sorted, finite,
    /// and inside the carrier.
    pub fn into_config(self) -> io::Result<PointConfiguration> {
        let w = Window::new(self.carrier[0], self.carrier[1])
            .map_err(|e| invalid(format!("bad carrier: {e}")))?;
        if self.points.windows(2).any(|p| !(p[0] <= p[1])) {
            return Err(invalid("points are not sorted".to_string()));
        }
        if self.points.iter().any(|p| !p.is_finite()) {
            return Err(invalid("non-finite point".to_string()));
        }
        PointConfiguration::new(self.points, w)
            .map_err(|e| invalid(format!("bad configuration: {e}")))
    }
}

fn invalid(msg: String) -> io::Error {
    io::Error::new(io::ErrorKind::InvalidData, msg)
}

/// Reads a JSON-lines configuration file; blank lines are allowed.
pub fn read_configs(path: &Path) -> io::Result<Vec<PointConfiguration>> {
    let file = File::open(path)?;
    let mut out = Vec::new();
    for (lineno, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: ConfigRecord = serde_json::from_str(&line)
            .map_err(|e| invalid(format!("line {}: {e}", lineno + 1)))?;
        out.push(
            rec.into_config()
                .map_err(|e| invalid(format!("line {}: {e}", lineno + 1)))?,
        );
    }
    Ok(out)
}

/// Writes configurations as JSON lines, one per line, in order.
pub fn write_configs(path: &Path, configs: &[PointConfiguration]) -> io::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for c in configs {
        serde_json::to_writer(&mut w, &ConfigRecord::from_config(c))?;
        w.write_all(b"\n")?;
    }
    w.flush()
}
