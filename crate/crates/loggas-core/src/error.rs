//! Crate-wide error type.

use core::fmt;

/// Errors reported by the library.
///
/// Structural misuse (wrong counts, carrier mismatches) and numerical
/// failures (quadrature budget exhausted, eigensolver stall) share one
/// enum so results compose across modules.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Error {
    /// Two points share a position where a simple configuration is required.
    MultiplePoint { position: f64 },
    /// An enumeration index walked off the configuration.
    IndexOutOfRange { index: i64 },
    /// No point lies at or to the right of the requested threshold.
    NoPointRight { threshold: f64 },
    /// A configuration's carrier does not match the expected window.
    CarrierMismatch { expected_lo: f64, expected_hi: f64, found_lo: f64, found_hi: f64 },
    /// A tuple contains a repeated value where strict order is required.
    DuplicatePoint { position: f64 },
    /// A value lies outside the window it must belong to.
    OutOfWindow { value: f64, lo: f64, hi: f64 },
    /// A window has nonpositive length or non-finite endpoints.
    InvalidWindow { lo: f64, hi: f64 },
    /// Adaptive quadrature exhausted its evaluation budget.
    QuadratureFailure { evals: usize, achieved: f64, requested: f64 },
    /// An untruncated field was evaluated exactly at a charge.
    Singularity { x: f64, y: f64 },
    /// Bisection failed to bracket the spectrum to tolerance.
    EigensolverFailure { residual: f64 },
    /// A microscopic window overlaps the measured spectrum edge.
    EdgeWindow { center: f64 },
    /// A configuration does not hold the required number of points.
    WrongCount { expected: usize, found: usize },
    /// Two sequences that must have equal lengths do not.
    SizeMismatch { left: usize, right: usize },
    /// A screening interval's target density strayed too far from 1.
    DegenerateInterval { index: usize, m: f64 },
    /// A screening precondition failed.
    PreconditionViolated { check: &'static str },
    /// Fewer points than an estimator needs.
    InsufficientPoints { needed: usize, found: usize },
    /// Tile indices differ by less than 2, so the far-field bound does not apply.
    TilesAdjacent { a: i64, b: i64 },
    /// A scalar parameter violates its documented domain.
    InvalidParameter { name: &'static str },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Error::MultiplePoint { position } => {
                write!(f, "multiple point at position {position}")
            }
            Error::IndexOutOfRange { index } => {
                write!(f, "enumeration index {index} out of range")
            }
            Error::NoPointRight { threshold } => {
                write!(f, "no point at or to the right of {threshold}")
            }
            Error::CarrierMismatch { expected_lo, expected_hi, found_lo, found_hi } => {
                write!(
                    f,
                    "carrier mismatch: expected [{expected_lo}, {expected_hi}], found [{found_lo}, {found_hi}]"
                )
            }
            Error::DuplicatePoint { position } => {
                write!(f, "duplicate point at position {position}")
            }
            Error::OutOfWindow { value, lo, hi } => {
                write!(f, "value {value} outside window [{lo}, {hi}]")
            }
            Error::InvalidWindow { lo, hi } => {
                write!(f, "invalid window [{lo}, {hi}]")
            }
            Error::QuadratureFailure { evals, achieved, requested } => {
                write!(
                    f,
                    "quadrature budget of {evals} evaluations exhausted at error {achieved:e} (requested {requested:e})"
                )
            }
            Error::Singularity { x, y } => {
                write!(f, "field singularity at ({x}, {y})")
            }
            Error::EigensolverFailure { residual } => {
                write!(f, "eigensolver residual {residual:e} above tolerance")
            }
            Error::EdgeWindow { center } => {
                write!(f, "window at {center} overlaps the spectrum edge")
            }
            Error::WrongCount { expected, found } => {
                write!(f, "expected {expected} points, found {found}")
            }
            Error::SizeMismatch { left, right } => {
                write!(f, "size mismatch: {left} vs {right}")
            }
            Error::DegenerateInterval { index, m } => {
                write!(f, "screening interval {index} has degenerate density {m}")
            }
            Error::PreconditionViolated { check } => {
                write!(f, "screening precondition violated: {check}")
            }
            Error::InsufficientPoints { needed, found } => {
                write!(f, "need at least {needed} points, found {found}")
            }
            Error::TilesAdjacent { a, b } => {
                write!(f, "tiles {a} and {b} are closer than distance 2")
            }
            Error::InvalidParameter { name } => {
                write!(f, "parameter {name} outside its domain")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
