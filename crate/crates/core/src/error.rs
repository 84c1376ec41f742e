use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A QUBO (or graph) was requested with zero variables.
    InvalidDimension,
    /// Entry key outside the upper triangle or past `n`.
    Index { i: usize, j: usize, n: usize },
    /// NaN or infinite coefficient.
    NonFinite { i: usize, j: usize },
    /// Assignment or matrix length does not match the model.
    DimensionMismatch { expected: usize, found: usize },
    /// Malformed problem input.
    Input(String),
    /// Out-of-range parameter (pruning fraction, penalty weights, sampler settings).
    Parameter(String),
    /// Brute force refused because 2^n would be too large.
    TooLarge { n: usize, cap: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidDimension => write!(f, "variable count must be at least 1"),
            Error::Index { i, j, n } => {
                write!(f, "invalid entry ({i}, {j}) for {n} variables: need i <= j < n")
            }
            Error::NonFinite { i, j } => write!(f, "non-finite value at ({i}, {j})"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::Input(msg) => write!(f, "invalid input: {msg}"),
            Error::Parameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::TooLarge { n, cap } => {
                write!(f, "{n} variables exceed the brute-force cap of {cap}")
            }
        }
    }
}

impl core::error::Error for Error {}
