//! Error type shared by all modules of the crate.

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// All failure modes of the library.
#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum Error {
    /// Two polynomials from rings with different moduli were combined.
    #[error("mismatched moduli: {0} vs {1}")]
    MismatchedModulus(usize, usize),

    /// Inversion was requested for a non-invertible ring element.
    #[error("polynomial is not invertible modulo x^{r} - 1")]
    NotInvertible { r: usize },

    /// A position index fell outside `[0, r)` (or the relevant range).
    #[error("index {index} out of range for modulus {r}")]
    IndexOutOfRange { index: usize, r: usize },

    /// Two distinct column indices were required but the same one was given.
    #[error("column indices must differ (both were {0})")]
    SameIndex(usize),

    /// A cyclic window length was outside `[1, r]`.
    #[error("window length {m} out of range for modulus {r}")]
    WindowOutOfRange { m: usize, r: usize },

    /// A block grid was empty, ragged, or mixed moduli.
    #[error("invalid block grid: {0}")]
    InvalidGrid(String),

    /// BIKE parameters violated their invariants.
    #[error("invalid parameters: {0}")]
    ParameterError(String),

    /// A filter or decoder configuration violated its invariants.
    #[error("invalid configuration: {0}")]
    ConfigError(String),

    /// A numeric argument was outside the domain of a formula.
    #[error("domain error: {0}")]
    DomainError(String),

    /// An error vector's length did not match the key's `2r`.
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    /// A record in a key file could not be parsed.
    #[error("parse error at line {line}: {message}")]
    ParseError { line: usize, message: String },

    /// A parsed record violated a structural invariant (unsorted support,
    /// duplicate index, wrong weight, ...).
    #[error("invariant violation at line {line}: {message}")]
    InvariantViolation { line: usize, message: String },

    /// A statistical test was fed a sample it cannot handle.
    #[error("degenerate sample: {0}")]
    DegenerateSample(String),

    /// I/O failure, annotated with the file involved.
    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    /// Wraps an [`std::io::Error`] with the path it occurred on.
    pub fn io(path: impl Into<String>, err: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            message: err.to_string(),
        }
    }
}
