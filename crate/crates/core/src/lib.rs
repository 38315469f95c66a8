#![cfg_attr(not(test), no_std)]

//! Truncated η-transform calculus for probability measures on the unit circle.
//!
//! Everything in this crate works with the first `N` power-series coefficients
//! of analytic objects attached to a measure μ on the circle: its moments
//! m_n = ∫ ζ^n dμ, the moment series ψ(z) = Σ m_n z^n, and the η-transform
//! η(z) = ψ(z)/(1 + ψ(z)), an analytic self-map of the unit disc with
//! η(0) = 0. Multiplicative convolutions (monotone, Boolean, orthogonal,
//! conditionally free, conditionally monotone, and their mean-normalized
//! variants) become algebraic operations on η-coefficients; semigroups of
//! conditionally monotone convolutions become coefficient ODEs driven by
//! Herglotz vector fields.
//!
//! The crate is `no_std` (with `alloc`); IO, file formats and the CLI live in
//! the companion `etaconv-cli` crate.

extern crate alloc;

pub mod convolutions;
pub mod error;
pub mod measures;
pub mod oracle;
pub mod semigroups;
pub mod series;
pub mod transforms;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use series::TruncatedSeries;
pub use transforms::{CircleMeasureSpec, EtaCoefficients, MomentSequence, PairDistribution};

/// Default truncation order used by the CLI when none is requested.
pub const DEFAULT_ORDER: usize = 16;
