//! Exact scalar rings.
//!
//! Closed formulas live in [`QLPoly`] (integer Laurent polynomials in `q`
//! and `λ`); brute-force character sums live in [`CycloScalar`], where `q`
//! has been specialized to a prime `p` and `ψ` takes values in `Q(ζ_p)`.
//! `λ` stays formal in both.

mod cyclo;
mod prime;
mod qlpoly;

pub use cyclo::{
    parse_rational, psi_char, rational_to_string, specialize, CycloNumber, CycloScalar,
    CycloScalarJson,
};
pub use prime::Prime;
pub use qlpoly::QLPoly;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("scalars over different primes ({0} vs {1})")]
    PrimeMismatch(u32, u32),
    #[error("Q(ζ_{p}) needs {} coordinates, found {found}", p - 1)]
    CoordinateCount { p: u32, found: usize },
    #[error("malformed rational {0:?}")]
    BadRational(String),
}
