//! Brute-force oracles at finite level: unit groups of `(Z/ℓᴺ)[x]/(f)`,
//! Hodge and Mumford–Tate points, the norm-one filtration of a quadratic
//! extension of `Q_ℓ`, and Cartan subgroups of `GL₂(Z/ℓⁿ)`.
//!
//! All counts are aggregated order-independently, so results do not
//! depend on how rayon partitions the work.

mod cartan;
mod filtration;
mod ring;

pub use cartan::{cartan_and_normalizer, CartanDatum, CartanReport, Mat2, MAX_CARTAN_MODULUS};
pub use filtration::{filtration_orders, FiltrationReport, FiltrationSpec, QuadraticKind};
pub use ring::{FiniteRing, PsiAnalysis, RingCounts, MAX_RING_SIZE};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TorusError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("{what} has {size} elements, above the cap of {cap}")]
    TooLarge { what: &'static str, size: u128, cap: u128 },
    #[error("modulus polynomial must be monic of degree >= 1")]
    BadModulus,
    #[error("invalid involution: {0}")]
    InvalidTau(String),
    #[error("psi index check failed: {0}")]
    InconsistentIndex(String),
    #[error("invalid filtration parameters: {0}")]
    InvalidFiltration(String),
    #[error("quotient |C({k})/C({})| changed from {at_n} to {at_n1} when raising the truncation; increase N", k + 1)]
    UnstableTruncation { k: usize, at_n: String, at_n1: String },
    #[error("invalid Cartan datum: {0}")]
    InvalidCartan(String),
    #[error("normalizer index is {index}, expected 2")]
    IndexNotTwo { index: String },
}
