//! Jacobians of `y^p = x(1 − x)`: CM by `Q(ζ_p)` with type
//! `S = { g ∈ (Z/p)^× : 2⟨g⟩ < p }`, where `⟨g⟩ ∈ (0, p)` is the least
//! positive residue. These types are nondegenerate, so the Mumford–Tate
//! rank is `(p+1)/2`, while the 2-torsion field has degree only `p`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::is_prime;
use crate::cm::{CmDatum, CmError, CmType};
use crate::lattice::{mt_invariants, reflex_norm_matrix, LatticeError, ReflexNormMatrix};
use crate::rational::Rational;

/// Largest prime accepted: `(Z/p)^×` must fit the Cayley-table cap.
pub const MAX_FAMILY_PRIME: u64 = 47;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("p = {0} exceeds the cap {MAX_FAMILY_PRIME}")]
    TooLarge(u64),
    #[error("rank {rank} differs from (p+1)/2 = {expected} for p = {p}")]
    RankMismatch { p: u64, rank: usize, expected: usize },
    #[error(transparent)]
    Cm(#[from] CmError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Debug, Clone)]
pub struct FamilyDatum {
    pub p: u64,
    pub genus: usize,
    pub cm_type: CmType,
    /// Degree of the 2-torsion field over the base; a known constant.
    pub two_torsion_degree: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub p: u64,
    pub genus: usize,
    pub s: Vec<String>,
    pub rank: usize,
    pub nondegenerate: bool,
    pub simple: bool,
    pub order_f: Rational,
    pub two_torsion_degree: u64,
    /// `2^r / p`
    pub ratio: Rational,
}

/// The residues `g` with `2g < p`, i.e. `1..=(p−1)/2`.
pub fn family_type_residues(p: u64) -> Vec<u64> {
    (1..p).filter(|g| 2 * g < p).collect()
}

pub fn build_family(p: u64) -> Result<FamilyDatum, FamilyError> {
    if p == 2 || !is_prime(p) {
        return Err(FamilyError::NotOddPrime(p));
    }
    if p > MAX_FAMILY_PRIME {
        return Err(FamilyError::TooLarge(p));
    }
    let datum = CmDatum::cyclotomic(p)?;
    let labels: Vec<String> = family_type_residues(p).iter().map(|g| g.to_string()).collect();
    let cm_type = datum.cm_type_from_labels(&labels)?;
    Ok(FamilyDatum { p, genus: ((p - 1) / 2) as usize, cm_type, two_torsion_degree: p })
}

impl FamilyDatum {
    pub fn reflex_matrix(&self) -> Result<ReflexNormMatrix, FamilyError> {
        Ok(reflex_norm_matrix(&self.cm_type.reflex()?))
    }

    pub fn report(&self) -> Result<FamilyReport, FamilyError> {
        let m = self.reflex_matrix()?;
        let inv = mt_invariants(&m, self.genus)?;
        let expected = self.genus + 1;
        if inv.rank != expected {
            return Err(FamilyError::RankMismatch { p: self.p, rank: inv.rank, expected });
        }
        let two_r = num_bigint::BigInt::from(2).pow(inv.rank as u32);
        Ok(FamilyReport {
            p: self.p,
            genus: self.genus,
            s: self.cm_type.s_labels(),
            rank: inv.rank,
            nondegenerate: inv.nondegenerate,
            simple: self.cm_type.is_simple(),
            order_f: Rational::integer(inv.order_f),
            two_torsion_degree: self.two_torsion_degree,
            ratio: Rational::new(two_r, self.p),
        })
    }
}

pub fn family_report(p: u64) -> Result<FamilyReport, FamilyError> {
    build_family(p)?.report()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_types() {
        assert_eq!(build_family(3).unwrap().cm_type.s_labels(), vec!["1"]);
        assert_eq!(build_family(5).unwrap().cm_type.s_labels(), vec!["1", "2"]);
        assert_eq!(build_family(7).unwrap().cm_type.s_labels(), vec!["1", "2", "3"]);
    }

    #[test]
    fn reports() {
        let r = family_report(5).unwrap();
        assert_eq!((r.rank, r.ratio.to_string()), (3, "8/5".to_string()));
        assert!(r.nondegenerate && r.simple);
        let r = family_report(3).unwrap();
        assert_eq!((r.rank, r.ratio.to_string()), (2, "4/3".to_string()));
        let r = family_report(11).unwrap();
        assert_eq!((r.rank, r.ratio.to_string()), (6, "64/11".to_string()));
    }

    #[test]
    fn rejects() {
        assert_eq!(build_family(9).unwrap_err(), FamilyError::NotOddPrime(9));
        assert_eq!(build_family(2).unwrap_err(), FamilyError::NotOddPrime(2));
        assert_eq!(build_family(53).unwrap_err(), FamilyError::TooLarge(53));
    }
}
