//! Certified separability verdicts for the infinite state behind a
//! truncation.
//!
//! A state is separable exactly when `sigma_2(M) = 0`. From a truncation we
//! only know `sigma_2(M)` up to the tail bound `tau`, so the verdict is one
//! of: certified entangled (`sigma_2(M_n) - tau > tol`), separable within
//! `delta` (`sigma_2(M_n) + tau <= delta`), or inconclusive.
//!
//! The minor test and the spectrum are tied by Cauchy-Binet: the squared
//! minors sum to `sum_{k<l} sigma_k^2 sigma_l^2`, and any single minor is at
//! most `sigma_1 sigma_2`. Hence, with `N = C(n,2) C(m,2)` minors,
//!
//! ```text
//! sigma_1 sigma_2 / sqrt(N) <= max |minor| <= sigma_1 sigma_2
//! ```
//!
//! [`classify`] checks this bracket on every analysis.

use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::CMatrix;
use crate::minor::{max_minor_magnitude, proportionality_factor, MaxMinor, RankOneFactor};
pub use crate::spectral::Interval;
use crate::spectral::{svd, Svd};
use crate::state::TruncatedState;

/// `[max(0, sigma_2(M_n) - tau), sigma_2(M_n) + tau]`.
pub fn sigma2_interval(state: &TruncatedState) -> Result<Interval> {
    let d = svd(state.matrix())?;
    Ok(Interval::around_nonnegative(
        d.sigma(1),
        state.tail_op_bound(),
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub enum InconclusiveReason {
    /// The tail bound alone exceeds `delta`; a larger truncation is needed.
    TailTooLarge { tail: f64, delta: f64 },
    /// `sigma_2` lies between `tol` and `delta` (after widening by the tail).
    SigmaInBand {
        interval: Interval,
        tol: f64,
        delta: f64,
    },
    /// The interval fits below `delta` but no rank-one factor is within
    /// `delta + tau` in Frobenius norm (many small singular values).
    ResidualTooLarge { residual: f64, bound: f64 },
}

impl fmt::Display for InconclusiveReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InconclusiveReason::TailTooLarge { tail, delta } => write!(
                f,
                "tail bound {tail:e} exceeds delta {delta:e}; enlarge the truncation"
            ),
            InconclusiveReason::SigmaInBand { interval, tol, delta } => write!(
                f,
                "sigma2 interval [{:e}, {:e}] straddles the band between tol {tol:e} and delta {delta:e}",
                interval.lo, interval.hi
            ),
            InconclusiveReason::ResidualTooLarge { residual, bound } => write!(
                f,
                "best rank-one residual {residual:e} exceeds delta + tail = {bound:e}"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum VerdictKind {
    CertifiedEntangled { sigma2_lower: f64 },
    SeparableWithin { delta: f64, factor: RankOneFactor },
    Inconclusive { reason: InconclusiveReason },
}

/// Flags for the operator classes a truncation visibly belongs to:
/// rank one implies finite rank implies compact implies bounded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorClasses {
    pub operator_norm: f64,
    /// `||M_n|| <= 1 + 1e-12`.
    pub bounded_by_one: bool,
    /// `sigma_2(M_n) <= tol`.
    pub rank_one: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evidence {
    pub sigma2_interval: Interval,
    pub max_minor: MaxMinor,
    pub tail_op_bound: f64,
    pub captured_mass: f64,
    pub truncation: (usize, usize),
    pub classes: OperatorClasses,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub evidence: Evidence,
}

impl Verdict {
    pub fn is_entangled(&self) -> bool {
        matches!(self.kind, VerdictKind::CertifiedEntangled { .. })
    }

    pub fn is_separable(&self) -> bool {
        matches!(self.kind, VerdictKind::SeparableWithin { .. })
    }

    pub fn is_inconclusive(&self) -> bool {
        matches!(self.kind, VerdictKind::Inconclusive { .. })
    }

    /// Stable identifier used in reports.
    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            VerdictKind::CertifiedEntangled { .. } => "certified_entangled",
            VerdictKind::SeparableWithin { .. } => "separable_within",
            VerdictKind::Inconclusive { .. } => "inconclusive",
        }
    }
}

fn pairs(k: usize) -> f64 {
    (k * k.saturating_sub(1) / 2) as f64
}

/// Verifies the Cauchy-Binet bracket between the minor route and the
/// spectral route.
pub fn check_minor_spectrum_agreement(m: &CMatrix, max_minor: &MaxMinor, d: &Svd) -> Result<()> {
    let (n, c) = (m.rows(), m.cols());
    let (s1, s2) = (d.sigma(0), d.sigma(1));
    let product = s1 * s2;
    let slack = 64.0 * (n + c) as f64 * f64::EPSILON * (s1 * s1).max(m.max_abs().powi(2));
    let lower = if max_minor.exhaustive {
        product / (pairs(n) * pairs(c)).sqrt()
    } else {
        product / (c as f64 * pairs(n).sqrt())
    };
    if n < 2 || c < 2 {
        return Ok(());
    }
    if max_minor.value > product + slack {
        return Err(Error::Consistency(format!(
            "max minor {:e} exceeds sigma1*sigma2 = {product:e}",
            max_minor.value
        )));
    }
    if max_minor.value + slack < lower {
        return Err(Error::Consistency(format!(
            "max minor {:e} below the spectral lower bound {lower:e}",
            max_minor.value
        )));
    }
    Ok(())
}

/// Classifies the infinite state behind `state`.
///
/// `tol` is the floor a certified `sigma_2` lower bound must clear; `delta`
/// the radius within which a state counts as separable. Entanglement is
/// checked first.
pub fn classify(state: &TruncatedState, delta: f64, tol: f64) -> Result<Verdict> {
    if delta.is_nan() || delta < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "delta must be nonnegative, got {delta}"
        )));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "tol must be positive, got {tol}"
        )));
    }
    let m = state.matrix();
    let d = svd(m)?;
    let tau = state.tail_op_bound();
    let sigma2 = Interval::around_nonnegative(d.sigma(1), tau);
    let max_minor = max_minor_magnitude(m);
    check_minor_spectrum_agreement(m, &max_minor, &d)?;

    let evidence = Evidence {
        sigma2_interval: sigma2,
        max_minor,
        tail_op_bound: tau,
        captured_mass: state.captured_mass(),
        truncation: (state.rows(), state.cols()),
        classes: OperatorClasses {
            operator_norm: d.sigma(0),
            bounded_by_one: d.sigma(0) <= 1.0 + 1e-12,
            rank_one: d.sigma(1) <= tol,
        },
    };

    let kind = if sigma2.lo > tol {
        VerdictKind::CertifiedEntangled {
            sigma2_lower: sigma2.lo,
        }
    } else if sigma2.hi <= delta {
        let bound = delta + tau;
        let factor = proportionality_factor(m, tol)?
            .into_factor()
            .filter(|f| f.residual <= bound)
            .unwrap_or_else(|| top_singular_factor(m, &d));
        if factor.residual <= bound {
            VerdictKind::SeparableWithin { delta, factor }
        } else {
            VerdictKind::Inconclusive {
                reason: InconclusiveReason::ResidualTooLarge {
                    residual: factor.residual,
                    bound,
                },
            }
        }
    } else if tau > delta {
        VerdictKind::Inconclusive {
            reason: InconclusiveReason::TailTooLarge { tail: tau, delta },
        }
    } else {
        VerdictKind::Inconclusive {
            reason: InconclusiveReason::SigmaInBand {
                interval: sigma2,
                tol,
                delta,
            },
        }
    };
    Ok(Verdict { kind, evidence })
}

fn top_singular_factor(m: &CMatrix, d: &Svd) -> RankOneFactor {
    if d.singular_values.is_empty() {
        return RankOneFactor::canonical(m, vec![], vec![], 0.0);
    }
    RankOneFactor::canonical(m, d.u.column(0), d.v.column(0), d.sigma(0))
}

/// Entropy in bits of `{sigma_k^2}` of the truncation (not renormalized),
/// with the mass the truncation leaves unresolved.
pub fn entanglement_entropy(state: &TruncatedState) -> Result<(f64, f64)> {
    let d = svd(state.matrix())?;
    Ok((
        crate::spectral::schmidt_entropy_bits(&d.singular_values),
        state.unresolved_mass(),
    ))
}
