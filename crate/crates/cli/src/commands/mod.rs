pub mod decay;
pub mod decompose;
pub mod dephasing;
pub mod populations;
pub mod splittings;
pub mod switch;

use std::io::Write;
use std::path::PathBuf;

use pseudospin::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Where and how command output lands; stdout when no path is given.
pub struct OutputSink {
    pub path: Option<PathBuf>,
    pub format: Format,
}

impl OutputSink {
    pub fn write(&self, content: &str) -> Result<()> {
        match &self.path {
            Some(path) => {
                let mut f = std::fs::File::create(path)?;
                f.write_all(content.as_bytes())?;
                Ok(())
            }
            None => {
                print!("{content}");
                Ok(())
            }
        }
    }
}

/// Full-precision float formatting; keeps emitted files oracle-grade and
/// byte-identical across runs.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.17e}")
}

/// Load the whole parameter struct from a JSON config file when given.
pub fn apply_config<T: serde::de::DeserializeOwned>(
    args: T,
    config: &Option<PathBuf>,
) -> Result<T> {
    match config {
        None => Ok(args),
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            serde_json::from_str(&text)
                .map_err(|e| Error::Io(format!("bad config {}: {e}", path.display())))
        }
    }
}

pub fn to_pretty_json<T: serde::Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Parse a half-integer argument like "3/2", "1.5" or "2".
pub fn parse_halfint(s: &str) -> std::result::Result<pseudospin::HalfInt, String> {
    pseudospin::HalfInt::parse(s).ok_or_else(|| format!("'{s}' is not a half-integer"))
}
