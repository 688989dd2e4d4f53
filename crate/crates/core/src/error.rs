//! Crate-wide error type.

use alloc::vec::Vec;
use core::fmt;

use crate::kuma::KumaParams;

/// Convenience alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;

/// Everything that can go wrong across the estimation pipeline.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Shape parameters must be strictly positive and finite.
    InvalidParams { a: f64, b: f64 },
    /// Trapezoid knots must be finite and ordered `xi <= omega <= delta <= theta`.
    InvalidMembership { xi: f64, omega: f64, delta: f64, theta: f64 },
    /// Observation support does not intersect (0, 1) usefully.
    ObservationOutsideUnit { xi: f64, theta: f64 },
    /// A fuzzy sample must contain at least one observation.
    EmptySample,
    /// Membership grades of a fuzzy information system must sum to 1 everywhere.
    NotOrthogonal { x: f64, total: f64 },
    /// A value expected to lie in the open unit interval did not.
    OutOfDomain { x: f64 },
    /// Invalid option or specification field.
    InvalidOptions(&'static str),
    /// The integrand evaluated to a non-finite value.
    NonFiniteIntegrand { x: f64 },
    /// Adaptive quadrature exhausted its subdivision budget; carries the best
    /// estimate obtained and a bound on its error.
    Quadrature { best: f64, error_bound: f64 },
    /// A single fuzzy event has numerically zero probability under the model.
    ZeroProbability,
    /// Observation `index` of the sample carries numerically zero probability.
    DegenerateObservation { index: usize },
    /// Newton–Raphson hit a (numerically) singular Hessian; the trace holds
    /// every iterate visited before the failure.
    SingularHessian { trace: Vec<KumaParams> },
    /// Operation requires a converged fit.
    NotConverged,
    /// The observed information (or a curvature matrix) is not positive definite.
    NotPositiveDefinite,
    /// The summed conditional expectations of the E-step were non-negative,
    /// which is impossible for valid data and signals an integration failure.
    InvalidEStep { sum: f64 },
    /// No draws available for a posterior summary.
    EmptyDraws,
    /// An internal optimizer failed to locate a maximum.
    OptimizerFailed(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParams { a, b } => {
                write!(f, "shape parameters must be positive and finite, got a={a}, b={b}")
            }
            Error::InvalidMembership { xi, omega, delta, theta } => write!(
                f,
                "membership knots must be finite with xi <= omega <= delta <= theta, got ({xi}, {omega}, {delta}, {theta})"
            ),
            Error::ObservationOutsideUnit { xi, theta } => write!(
                f,
                "observation support [{xi}, {theta}] does not intersect (0, 1) with positive length or a point"
            ),
            Error::EmptySample => write!(f, "fuzzy sample must contain at least one observation"),
            Error::NotOrthogonal { x, total } => write!(
                f,
                "fuzzy information system is not orthogonal: memberships sum to {total} at x={x}"
            ),
            Error::OutOfDomain { x } => write!(f, "value {x} outside the open unit interval"),
            Error::InvalidOptions(what) => write!(f, "invalid options: {what}"),
            Error::NonFiniteIntegrand { x } => {
                write!(f, "integrand is not finite at x={x}")
            }
            Error::Quadrature { best, error_bound } => write!(
                f,
                "quadrature did not converge: best estimate {best} with error bound {error_bound}"
            ),
            Error::ZeroProbability => {
                write!(f, "fuzzy event probability underflowed to zero")
            }
            Error::DegenerateObservation { index } => {
                write!(f, "observation {index} has numerically zero probability")
            }
            Error::SingularHessian { trace } => write!(
                f,
                "singular Hessian after {} iterations",
                trace.len().saturating_sub(1)
            ),
            Error::NotConverged => write!(f, "fit did not converge"),
            Error::NotPositiveDefinite => {
                write!(f, "observed information matrix is not positive definite")
            }
            Error::InvalidEStep { sum } => write!(
                f,
                "E-step expectations summed to {sum} >= 0; integration failure"
            ),
            Error::EmptyDraws => write!(f, "no posterior draws available"),
            Error::OptimizerFailed(what) => write!(f, "optimizer failed: {what}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
