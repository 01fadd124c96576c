//! Error type shared by all analysis and construction routines.

use std::error::Error as StdError;
use std::fmt;

/// Errors produced by morphology construction and analysis.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A caller-supplied argument violates a precondition.
    InvalidArgument(String),
    /// An actuator definition is unusable (zero direction, non-positive limit).
    InvalidActuator(String),
    /// Geometry collapsed to a degenerate configuration (coincident points,
    /// zero-length elements).
    DegenerateGeometry(String),
    /// The inertia matrix is singular, indefinite, or badly conditioned.
    IllConditionedDynamics(String),
    /// Matrix dimensions do not agree.
    DimensionMismatch { expected: String, found: String },
    /// The acceleration ellipsoid is rank-deficient along `weak_axis`.
    SingularEllipsoid { weak_axis: [f64; 3] },
    /// The requested acceleration is not in the column space of the map;
    /// `residual` is the least-squares defect.
    InfeasibleAcceleration { residual: f64 },
    /// A column or element index is out of range.
    IndexOutOfRange { index: usize, len: usize },
    /// A morphology document failed to parse or validate.
    Parse(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::InvalidActuator(msg) => write!(f, "invalid actuator: {msg}"),
            Error::DegenerateGeometry(msg) => write!(f, "degenerate geometry: {msg}"),
            Error::IllConditionedDynamics(msg) => {
                write!(f, "ill-conditioned dynamics: {msg}")
            }
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::SingularEllipsoid { weak_axis } => write!(
                f,
                "singular ellipsoid: no authority along [{}, {}, {}]",
                weak_axis[0], weak_axis[1], weak_axis[2]
            ),
            Error::InfeasibleAcceleration { residual } => write!(
                f,
                "infeasible acceleration: outside the attainable column space \
                 (least-squares residual {residual:e})"
            ),
            Error::IndexOutOfRange { index, len } => {
                write!(f, "index {index} out of range for length {len}")
            }
            Error::Parse(msg) => write!(f, "morphology parse error: {msg}"),
        }
    }
}

impl StdError for Error {}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Parse(err.to_string())
    }
}
