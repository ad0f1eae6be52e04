use thiserror::Error;

use crate::Rational;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("series has no determinable leading term below order {order}")]
    ZeroLeadingTerm { order: Rational },

    #[error("exponent {exponent} is at or beyond the truncation order {order}")]
    BeyondTruncation { exponent: Rational, order: Rational },

    #[error("z -> z + 1/2 on zeta-exponent {exponent} does not give a real phase")]
    NonRealPhase { exponent: Rational },

    #[error("theta characteristic b = {b} gives phases outside the supported set (2b must be an integer)")]
    UnsupportedPhase { b: Rational },

    #[error("Gram matrix is not positive definite (pivot {index} = {pivot})")]
    NotPositiveDefinite { index: usize, pivot: Rational },

    #[error("lattice specification is malformed: {0}")]
    InvalidLattice(String),

    #[error("theta decomposition does not reproduce the input form: {0}")]
    DecompositionMismatch(String),

    #[error("phi(0; tau) is not constant: coefficient {coeff} at q^{exponent}")]
    NotConstant { exponent: Rational, coeff: Rational },

    #[error("exponent {exponent} is not on the grid -1/8 + Z>=0")]
    GridMismatch { exponent: Rational },

    #[error("coefficients violate the discriminant symmetry: {0}")]
    SymmetryViolation(String),

    #[error("numeric sum did not converge: {check} differs by {difference:e} between truncations (tol {tol:e})")]
    ConvergenceNotReached { check: String, difference: f64, tol: f64 },

    #[error("series tail estimate {tail:e} exceeds tol/10 = {limit:e}")]
    ConvergencePoor { tail: f64, limit: f64 },

    #[error("independent constructions disagree: {0}")]
    Inconsistent(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}
