//! Crate-wide error type.
//!
//! Every fallible operation returns [`Result`]. Variants map onto the process
//! exit codes used by the command-line front end:
//!
//! * [`Error::Config`] — malformed or inconsistent scenario input (exit 1),
//! * every numeric variant (domain, convergence, overflow, singular geometry,
//!   degenerate truncation) — evaluation failure (exit 2),
//! * validation failures are not errors; the `validate` command reports them
//!   and exits 3 on its own.

use std::fmt;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Failure cases surfaced by the library.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    Domain(String),
    /// A series or iteration hit its budget before reaching tolerance.
    NonConvergence(String),
    /// An intermediate or final value exceeds the representable range.
    /// Reported explicitly instead of silently saturating to infinity.
    Overflow(String),
    /// The pointing geometry hits a division singularity (boresight along a
    /// coordinate singularity of the footprint mapping).
    SingularGeometry(String),
    /// A truncated distribution has (numerically) no mass left above the
    /// selection threshold, so conditional quantities are undefined.
    DegenerateTruncation(String),
    /// Scenario configuration could not be parsed or validated.
    Config(String),
    /// Reading or writing a scenario/result file failed.
    Io(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(m) => write!(f, "domain error: {m}"),
            Error::NonConvergence(m) => write!(f, "non-convergence: {m}"),
            Error::Overflow(m) => write!(f, "overflow: {m}"),
            Error::SingularGeometry(m) => write!(f, "singular geometry: {m}"),
            Error::DegenerateTruncation(m) => write!(f, "degenerate truncation: {m}"),
            Error::Config(m) => write!(f, "config error: {m}"),
            Error::Io(m) => write!(f, "io error: {m}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    /// Process exit code the command-line front end maps this error to.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Io(_) => 1,
            _ => 2,
        }
    }
}
