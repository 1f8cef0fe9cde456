use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Errors raised by the numerical and algebraic routines of this crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A sample needs at least one value.
    EmptySample,
    /// `values` and `weights` differ in length.
    LengthMismatch { values: usize, weights: usize },
    /// Weights must be finite and strictly positive.
    NonPositiveWeight { index: usize, weight: f64 },
    /// A value (sample entry, field evaluation, coordinate) is NaN or infinite.
    NonFinite { what: &'static str, index: usize },
    /// A scalar parameter is outside its admissible range.
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },
    /// Vector or matrix dimensions do not agree.
    DimensionMismatch { expected: usize, found: usize },
    /// The gradient vanishes where the game p-Laplacian needs a direction.
    ZeroGradient,
    /// Input violates a structural precondition of the operation.
    Domain(&'static str),
    /// Unknown named set or field.
    UnknownName(String),
    /// A lattice domain contains no interior node.
    EmptyInterior,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptySample => write!(f, "sample is empty"),
            Error::LengthMismatch { values, weights } => {
                write!(f, "{values} values but {weights} weights")
            }
            Error::NonPositiveWeight { index, weight } => {
                write!(
                    f,
                    "weight {index} is {weight}, expected a finite positive number"
                )
            }
            Error::NonFinite { what, index } => write!(f, "{what} {index} is not finite"),
            Error::InvalidParameter { name, reason } => write!(f, "invalid {name}: {reason}"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::ZeroGradient => write!(f, "gradient is zero"),
            Error::Domain(msg) => f.write_str(msg),
            Error::UnknownName(name) => write!(f, "unknown name `{name}`"),
            Error::EmptyInterior => write!(f, "domain contains no interior lattice node"),
        }
    }
}

impl core::error::Error for Error {}
