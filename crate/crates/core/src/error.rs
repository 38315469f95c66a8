//! Error type shared by every fallible operation in the crate.
//!
//! Variants split into usage errors (bad arguments, mismatched truncation
//! orders), domain errors (an input outside the mathematical domain of the
//! operation, e.g. a mean-zero measure where a transform must be inverted)
//! and numerical errors (instability detected while integrating).

use core::fmt;

/// Convenience alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// Two series of different truncation orders were combined.
    OrderMismatch { left: usize, right: usize },
    /// A series operation was applied outside its domain (composition with a
    /// non-vanishing inner series, reversion without a linear term, ...).
    Domain(&'static str),
    /// A measure description failed validation.
    InvalidMeasure(&'static str),
    /// The operation divides by the first moment, which was zero.
    MeanZero(&'static str),
    /// A scalar parameter was outside its documented range.
    InvalidInput(&'static str),
    /// Re B > 0 was detected where a Herglotz field was required.
    NotHerglotz(&'static str),
    /// A trajectory left the closed unit disc or broke the Schur bound.
    Instability(&'static str),
    /// The time-one embedding preconditions do not hold for this target.
    EmbeddingUnsupported(&'static str),
    /// The affine solve for a field coefficient degenerated.
    DegenerateEmbedding { index: usize },
    /// No time-one-preserving transform exists for these parameters.
    UndefinedTransform(&'static str),
    /// A smoothed density came out negative beyond tolerance.
    InconsistentMoments(&'static str),
    /// A word or order beyond the supported size was requested.
    ResourceLimit(&'static str),
    /// The measure is outside the Boolean infinitely divisible class.
    NotBooleanId(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::OrderMismatch { left, right } => {
                write!(f, "series truncation orders differ: {left} vs {right}")
            }
            Error::Domain(msg) => write!(f, "series domain error: {msg}"),
            Error::InvalidMeasure(msg) => write!(f, "invalid measure: {msg}"),
            Error::MeanZero(msg) => write!(f, "mean-zero input: {msg}"),
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::NotHerglotz(msg) => write!(f, "not a Herglotz field: {msg}"),
            Error::Instability(msg) => write!(f, "numerical instability: {msg}"),
            Error::EmbeddingUnsupported(msg) => write!(f, "embedding unsupported: {msg}"),
            Error::DegenerateEmbedding { index } => {
                write!(f, "degenerate affine solve for field coefficient {index}")
            }
            Error::UndefinedTransform(msg) => write!(f, "undefined transform: {msg}"),
            Error::InconsistentMoments(msg) => write!(f, "inconsistent moments: {msg}"),
            Error::ResourceLimit(msg) => write!(f, "resource limit: {msg}"),
            Error::NotBooleanId(msg) => {
                write!(f, "not Boolean infinitely divisible: {msg}")
            }
        }
    }
}

impl core::error::Error for Error {}

impl Error {
    /// True for errors caused by numerical behaviour of valid inputs rather
    /// than by malformed arguments. The CLI maps these to a distinct exit
    /// code.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::MeanZero(_)
                | Error::NotHerglotz(_)
                | Error::Instability(_)
                | Error::EmbeddingUnsupported(_)
                | Error::DegenerateEmbedding { .. }
                | Error::UndefinedTransform(_)
                | Error::InconsistentMoments(_)
                | Error::NotBooleanId(_)
        )
    }
}
