use alloc::boxed::Box;
use alloc::string::String;
use core::fmt;

use crate::measures::AtomicMeasure;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Errors raised by the core operations.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A point does not belong to the space it is used with.
    PointMismatch { expected: &'static str, reason: String },
    /// A suspension angle outside `[0, pi]`.
    AngleOutOfRange(f64),
    /// The space descriptor itself is malformed.
    InvalidSpace(String),
    /// Weights or coefficients violate the probability-measure invariants.
    InvalidMeasure(String),
    /// Two measures live on different spaces.
    SpaceMismatch,
    /// The operation needs a different kind of space.
    UnsupportedSpace { operation: &'static str, kind: &'static str },
    /// An argument violates the operation's precondition.
    Precondition(String),
    /// A geodesic or intermediate point that cannot be computed exactly for
    /// this configuration.
    NotComputable(String),
    /// The transport solver failed on valid input; this is an internal fault.
    SolverFault(String),
    /// A measure that lies in the ray family `(1-l) d_0 + l d_x`.
    InSigma,
    /// A Dirac equator measure has a unique midpoint; it is attached.
    DiracEquator { unique_midpoint: Box<AtomicMeasure> },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::PointMismatch { expected, reason } => {
                write!(f, "point does not belong to {expected} space: {reason}")
            }
            Error::AngleOutOfRange(t) => write!(f, "suspension angle {t} outside [0, pi]"),
            Error::InvalidSpace(msg) => write!(f, "invalid space: {msg}"),
            Error::InvalidMeasure(msg) => write!(f, "invalid measure: {msg}"),
            Error::SpaceMismatch => f.write_str("measures live on different spaces"),
            Error::UnsupportedSpace { operation, kind } => {
                write!(f, "{operation} is not defined on {kind} spaces")
            }
            Error::Precondition(msg) => write!(f, "precondition violated: {msg}"),
            Error::NotComputable(msg) => write!(f, "not computable: {msg}"),
            Error::SolverFault(msg) => write!(f, "transport solver fault: {msg}"),
            Error::InSigma => f.write_str("measure is of the form (1-l) d_0 + l d_x; no witness ray exists"),
            Error::DiracEquator { .. } => {
                f.write_str("Dirac equator measure: the midpoint set is a single measure")
            }
        }
    }
}

impl core::error::Error for Error {}
