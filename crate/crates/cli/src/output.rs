//! Exit codes, CSV/JSON formatting and file output.

use std::fmt;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use padic_vladimirov::Error;
use serde::Serialize;

/// A failure carrying its exit status.
#[derive(Debug)]
pub enum CliError {
    /// An invariant failed or a requested value does not exist (exit 1).
    Failure(String),
    /// Malformed arguments or configuration (exit 2).
    Config(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failure(_) => 1,
            CliError::Config(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Failure(m) | CliError::Config(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NotInL2(_)
            | Error::DiagonalDivergence(_)
            | Error::SingularY
            | Error::Range(_)
            | Error::UnboundedTail
            | Error::NotFinite => CliError::Failure(e.to_string()),
            Error::NotPrime(_)
            | Error::PrimeMismatch(..)
            | Error::ParseRational(_)
            | Error::InvalidIndex(_)
            | Error::MissingY
            | Error::Dimension(_)
            | Error::InvalidConfig(_) => CliError::Config(e.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// 17 significant digits with a '.' decimal point.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

/// Comma-separated rows under a header.
pub fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for r in rows {
        s.push_str(&r.join(","));
        s.push('\n');
    }
    s
}

/// Pretty JSON; structs serialize in field order and maps are `BTreeMap`s,
/// so key order is stable.
pub fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

pub fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

/// Writes to `out` when given, stdout otherwise.
pub fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut o = std::io::stdout().lock();
            o.write_all(text.as_bytes())
                .map_err(|e| CliError::Failure(e.to_string()))
        }
    }
}

pub fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))
}
