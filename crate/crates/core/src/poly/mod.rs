//! Exact sparse multivariate polynomials over `Q` and prime fields.

mod arrangement;
mod coefficient;
mod gcd;
pub mod linalg;
mod monomial;
mod polynomial;

pub use arrangement::{normalize_row, LinearFormProduct};
pub(crate) use coefficient::{inv_mod, mul_mod, pow_mod};
pub use coefficient::{is_prime, Coefficient, Field, MAX_PRIME};
pub use gcd::{gcd, gcd_all};
pub use monomial::Monomial;
pub use polynomial::Polynomial;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("variable count mismatch: {left} vs {right}")]
    VariableCountMismatch { left: usize, right: usize },
    #[error("coefficient field mismatch")]
    FieldMismatch,
    #[error("variable index {index} out of range for {n_vars} variables")]
    VariableOutOfRange { index: usize, n_vars: usize },
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("division is not exact")]
    InexactDivision,
    #[error("gcd of two zero polynomials is undefined")]
    GcdOfZeros,
    #[error("point has {found} coordinates, expected {expected}")]
    PointLength { expected: usize, found: usize },
    #[error("expected a nonzero homogeneous linear form")]
    NotLinear,
    #[error("the zero form does not define a hyperplane")]
    ZeroForm,
    #[error("prime {0} divides a denominator")]
    DenominatorCollision(u64),
    #[error("{0} is not a supported prime")]
    InvalidPrime(u64),
    #[error("multiplicities must be positive")]
    InvalidMultiplicity,
    #[error("an arrangement needs at least one form")]
    EmptyArrangement,
    #[error("expected a homogeneous polynomial")]
    NotHomogeneous,
}
