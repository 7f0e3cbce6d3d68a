use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use logbm_core::io::BodiesFile;
use logbm_core::Error;
use serde::Serialize;

pub const EXIT_OK: u8 = 0;
pub const EXIT_OTHER: u8 = 1;
pub const EXIT_VIOLATED: u8 = 2;
pub const EXIT_UNSUPPORTED: u8 = 3;
pub const EXIT_PARSE: u8 = 4;

#[derive(Debug)]
pub enum CliError {
    Engine(Error),
    Io(String),
    Usage(String),
    Other(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Engine(Error::Parse(_) | Error::DimensionMismatch { .. }) => EXIT_PARSE,
            CliError::Engine(Error::Unsupported(_) | Error::Degenerate(_) | Error::Precondition(_)) => EXIT_UNSUPPORTED,
            CliError::Engine(Error::Numerical(_)) | CliError::Io(_) | CliError::Usage(_) | CliError::Other(_) => EXIT_OTHER,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Engine(e) => write!(f, "{e}"),
            CliError::Io(m) | CliError::Usage(m) | CliError::Other(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Engine(e)
    }
}

pub fn read_bodies(path: &Path) -> Result<BodiesFile, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(BodiesFile::parse_bytes(&bytes)?)
}

pub fn out_file(dir: &Path, name: &str) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    Ok(dir.join(name))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Other(e.to_string()))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Writes `header` and then one row per record, so an empty table still
/// carries its columns.
pub fn write_csv<T: Serialize>(path: &Path, header: &[&str], rows: &[T]) -> Result<(), CliError> {
    let io = |e: csv::Error| CliError::Io(format!("{}: {e}", path.display()));
    let mut w = csv::WriterBuilder::new().has_headers(false).from_path(path).map_err(io)?;
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.serialize(r).map_err(io)?;
    }
    w.flush().map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
