use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;

use clusterx_core::Error;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

#[derive(Debug)]
pub enum CliError {
    /// Bad or unreadable input.
    Input(String),
    /// A checked property does not hold.
    Property(String),
    /// Exploration hit its node bound.
    Truncated(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Property(_) => 1,
            CliError::Input(_) => 2,
            CliError::Truncated(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Property(m) => write!(f, "property failure: {m}"),
            CliError::Truncated(m) => write!(f, "truncated: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Truncated(_) => CliError::Truncated(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// JSON with object keys in sorted order.
pub fn to_sorted_json<T: Serialize>(v: &T) -> String {
    // serde_json's default map is ordered by key
    let value: Value = serde_json::to_value(v).expect("serializable output");
    serde_json::to_string_pretty(&value).expect("serializable output") + "\n"
}

pub fn emit(text: &str, out: Option<&Path>) -> CliResult<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Input(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Input(format!("cannot write to stdout: {e}")))
        }
    }
}
