//! Exact arithmetic over the rings underlying Clifford+T synthesis:
//! Z[omega] with omega = exp(i pi/4), the real quadratic ring Z[sqrt2],
//! and the dyadic extension D[omega] whose elements have denominator
//! sqrt2^k. All coefficients are arbitrary-precision integers.

mod domega;
mod unitary;
mod zomega;
mod zroottwo;

pub use domega::DOmega;
pub use unitary::UnitaryDOmega;
pub use zomega::ZOmega;
pub use zroottwo::ZRootTwo;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RingError {
    #[error("gcd of zero and zero is undefined")]
    GcdOfZeros,
    #[error("euclidean division failed to reduce the norm")]
    EuclidStuck,
    #[error("exact division left a remainder")]
    InexactDivision,
}
