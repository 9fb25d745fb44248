//! Run configuration, reports, CSV series, field dumps and run directories.

pub mod config;
pub mod dump;
pub mod report;
pub mod series;

use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use thiserror::Error;

pub use config::{ResolvedConfig, RunConfigFile};
pub use dump::{read_field, write_field, DumpMeta};
pub use report::{Json, Report};
pub use series::{read_series, virial_report, write_series, SeriesTable, VirialReport};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("format: {0}")]
    Format(String),
    #[error("missing column `{0}`")]
    MissingColumn(String),
    #[error("need >= 3 samples, got {0}")]
    TooFewSamples(usize),
}

/// Creates `<root>/<UTC timestamp>-<hash>`; an existing directory is never
/// reused, a numeric suffix is appended instead.
pub fn create_run_dir(root: &Path, canonical_config: &str) -> Result<PathBuf, IoError> {
    std::fs::create_dir_all(root)?;
    let digest = Sha256::digest(canonical_config.as_bytes());
    let hash: String = digest[..6].iter().map(|b| format!("{b:02x}")).collect();
    let stamp = chrono::Utc::now().format("%Y%m%dT%H%M%SZ");
    let stem = format!("{stamp}-{hash}");
    for k in 0.. {
        let name = if k == 0 {
            stem.clone()
        } else {
            format!("{stem}-{k}")
        };
        let dir = root.join(name);
        match std::fs::create_dir(&dir) {
            Ok(()) => return Ok(dir),
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => continue,
            Err(e) => return Err(e.into()),
        }
    }
    unreachable!()
}
