//! Error types shared across the library.

use thiserror::Error;

/// Failure modes of the numerical routines.
///
/// `NearNode` and `NodalAtInfinity` are recoverable by the caller (shrink a
/// step, skip a sample time); the remaining variants indicate the requested
/// computation is not possible at the given inputs.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The guidance-field denominator G dropped to the floor; the evaluation
    /// point is too close to the nodal set.
    #[error("guidance field singular near t = {t}: G = {g:.3e} <= floor")]
    NearNode { t: f64, g: f64 },

    /// A sine denominator of the nodal-point equations vanished; the nodal
    /// point is at infinity at this time.
    #[error("nodal point at infinity at t = {t}")]
    NodalAtInfinity { t: f64 },

    /// Adaptive step control demanded a step below the hard minimum.
    #[error("step size underflow at t = {t}")]
    StepUnderflow { t: f64 },

    /// Newton iteration failed to converge.
    #[error("Newton iteration did not converge ({context})")]
    NoConvergence { context: &'static str },

    /// A stationary point was found but one eigenvalue is numerically zero.
    #[error("degenerate saddle at t0 = {t0}: |lambda| = {lambda:.3e}")]
    DegenerateSaddle { t0: f64, lambda: f64 },

    /// The closed-form spiral solution left its validity range.
    #[error("spiral solution domain exceeded (sqrt argument {arg:.3e} <= 0)")]
    DomainExceeded { arg: f64 },

    /// A bound case admits no |X0| at the requested |Y0|.
    #[error("case {case} admits no |X0| at |Y0| = {abs_y0}")]
    EmptyInterval { case: char, abs_y0: f64 },

    /// Power-law fit over a degenerate abscissa range.
    #[error("degenerate fit: d0 range spans a factor {span:.3} < 2")]
    DegenerateFit { span: f64 },

    /// Invalid argument outside the documented domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
