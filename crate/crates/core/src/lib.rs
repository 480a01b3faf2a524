//! Certified separability analysis for bipartite pure states whose amplitude
//! matrices live on `l2 x l2`.
//!
//! A state `sum_ij a_ij |i>|j>` is described by a [`CoefficientSource`],
//! truncated to a finite block with a rigorous operator-norm bound on what was
//! dropped, and then classified. The state is separable exactly when its
//! amplitude operator has rank one; equivalently every 2x2 minor vanishes.
//! Both routes are implemented and cross-checked against each other.
//!
//! ```
//! use bps_core::{certify, CoefficientSource, TruncationConfig};
//!
//! let src = CoefficientSource::two_mode_squeezed(0.5).unwrap();
//! let state = src.truncate(20, 20, &TruncationConfig::default()).unwrap();
//! let verdict = certify::classify(&state, 1e-6, 1e-9).unwrap();
//! assert!(verdict.is_entangled());
//! ```

pub mod certify;
pub mod error;
pub mod format;
pub mod matrix;
pub mod minor;
pub mod report;
pub mod spectral;
pub mod state;

pub use certify::{
    classify, entanglement_entropy, sigma2_interval, Interval, Verdict, VerdictKind,
};
pub use error::{Error, Result};
pub use matrix::CMatrix;
pub use minor::{
    max_minor_magnitude, minor_det, minors_vanish, proportionality_factor, RankOneFactor,
};
pub use spectral::{polar_decompose, positive_sqrt, svd, PolarParts, SpectralSummary};
pub use state::{
    CoefficientSource, SequenceSpec, TruncatedState, TruncationConfig, ValidationReport,
};

pub use num_complex::Complex64;

/// Default tolerance on total squared mass.
pub const DEFAULT_NORMALIZATION_TOL: f64 = 1e-9;
/// Default rank-one detection tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Default separability radius.
pub const DEFAULT_DELTA: f64 = 1e-6;
