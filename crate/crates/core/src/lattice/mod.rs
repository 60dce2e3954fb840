//! The reflex norm on character lattices and the invariants read off it:
//! the Mumford–Tate rank, the elementary divisors and the order of the
//! component group of the kernel.

mod hadamard;
mod snf;

pub use hadamard::{hadamard_max_det, HadamardError, HadamardMode, HadamardResult};
pub use snf::{determinant, elementary_divisors, smith_normal_form, IntMatrix, SnfResult};

use num_bigint::{BigInt, BigUint};
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cm::ReflexDatum;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("rank {rank} exceeds g + 1 = {}; the input is not a genuine CM type", g + 1)]
    RankExceedsGPlusOne { rank: usize, g: usize },
    #[error("|F| = {order_f} exceeds the determinant bound f({rank}) = {bound}")]
    TorsionExceedsBound { order_f: BigInt, rank: usize, bound: BigUint },
    #[error("reflex-norm entry ({row}, {col}) = {value} is not 0 or 1")]
    EntryNotZeroOne { row: usize, col: usize, value: BigInt },
}

/// Matrix of the reflex norm on characters: columns are the embeddings
/// `H\G` of the CM field, rows the embeddings `H'\G` of the reflex field.
/// Column `Hg` is the indicator of `{ H'rg : H'r ∈ R }`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReflexNormMatrix {
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub entries: IntMatrix,
}

impl ReflexNormMatrix {
    pub fn column_sums(&self) -> Vec<BigInt> {
        (0..self.entries.cols())
            .map(|j| (0..self.entries.rows()).map(|i| &self.entries[(i, j)]).sum())
            .collect()
    }

    /// Plain-text grid with row and column labels.
    pub fn to_grid(&self) -> String {
        let width = self
            .row_labels
            .iter()
            .chain(&self.col_labels)
            .map(|l| l.len())
            .max()
            .unwrap_or(1)
            .max(1);
        let mut out = format!("{:>width$} |", "");
        for c in &self.col_labels {
            out += &format!(" {c:>width$}");
        }
        out.push('\n');
        for (i, r) in self.row_labels.iter().enumerate() {
            out += &format!("{r:>width$} |");
            for v in self.entries.row(i) {
                out += &format!(" {v:>width$}");
            }
            out.push('\n');
        }
        out
    }
}

pub fn reflex_norm_matrix(reflex: &ReflexDatum) -> ReflexNormMatrix {
    let datum = reflex.source().datum();
    let group = datum.group();
    let src = datum.cosets();
    let dst = reflex.cosets();
    // R̃ = S̃⁻¹ is a union of H'-cosets, so R̃g covers exactly the |R| cosets H'rg
    let r_tilde: Vec<usize> = reflex.source().s_tilde().iter().map(|&s| group.inv(s)).collect();

    let mut entries = IntMatrix::zeros(dst.len(), src.len());
    for col in 0..src.len() {
        let g = src.rep(col);
        for &x in &r_tilde {
            entries[(dst.coset_of(group.mul(x, g)), col)] = BigInt::one();
        }
    }
    ReflexNormMatrix {
        row_labels: (0..dst.len()).map(|c| dst.label(group, c).to_string()).collect(),
        col_labels: (0..src.len()).map(|c| src.label(group, c).to_string()).collect(),
        entries,
    }
}

/// Invariants of the Mumford–Tate torus extracted from the reflex norm.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MtInvariants {
    pub g: usize,
    /// Rank of the Mumford–Tate torus, the rank of the character matrix.
    pub rank: usize,
    pub elementary_divisors: Vec<BigInt>,
    /// Torsion order of the cokernel of the character map, i.e. the order
    /// of the component group of the kernel of the reflex norm.
    pub order_f: BigInt,
    pub nondegenerate: bool,
    pub f_bound: BigUint,
}

pub fn mt_invariants(m: &ReflexNormMatrix, g: usize) -> Result<MtInvariants, LatticeError> {
    for i in 0..m.entries.rows() {
        for (j, v) in m.entries.row(i).iter().enumerate() {
            if *v != BigInt::from(0) && *v != BigInt::one() {
                return Err(LatticeError::EntryNotZeroOne { row: i, col: j, value: v.clone() });
            }
        }
    }
    let snf = elementary_divisors(&m.entries);
    let rank = snf.rank;
    if rank > g + 1 {
        return Err(LatticeError::RankExceedsGPlusOne { rank, g });
    }
    let order_f = snf.torsion_order();
    let f_bound = f_bound(rank.max(1) as u64);
    if order_f > BigInt::from(f_bound.clone()) {
        return Err(LatticeError::TorsionExceedsBound { order_f, rank, bound: f_bound });
    }
    Ok(MtInvariants {
        g,
        rank,
        elementary_divisors: snf.elementary_divisors().to_vec(),
        order_f,
        nondegenerate: rank == g + 1,
        f_bound,
    })
}

/// `f(x) = ⌊2((x+1)/4)^((x+1)/2)⌋ = ⌊(x+1)^((x+1)/2) / 2^x⌋`, exactly.
///
/// This is also the Hadamard-type bound on `|det|` of an `x × x` matrix
/// with entries in `{0, 1}`. For even `x` the half-integral power is taken
/// through an integer square root; `⌊⌊√N⌋/2^x⌋ = ⌊√N/2^x⌋`.
///
/// Panics if `x == 0`.
pub fn f_bound(x: u64) -> BigUint {
    assert!(x >= 1, "f_bound is defined for x >= 1");
    let base = BigUint::from(x + 1);
    let numerator = if (x + 1) % 2 == 0 {
        base.pow(((x + 1) / 2) as u32)
    } else {
        base.pow((x + 1) as u32).sqrt()
    };
    numerator >> x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cm::CmDatum;

    #[test]
    fn f_values() {
        let f: Vec<u64> = (1..=7).map(|x| f_bound(x).try_into().unwrap()).collect();
        assert_eq!(f, vec![1, 1, 2, 3, 6, 14, 32]);
    }

    #[test]
    fn quadratic_matrix_is_identity() {
        use crate::group::GroupTable;
        use std::sync::Arc;
        let g = Arc::new(GroupTable::from_table(vec![vec![0, 1], vec![1, 0]]).unwrap());
        let h = g.trivial_subgroup();
        let d = CmDatum::new(g, h, 1).unwrap();
        let r = d.cm_type([0]).unwrap().reflex().unwrap();
        let m = reflex_norm_matrix(&r);
        assert_eq!(m.entries, IntMatrix::identity(2));
        let inv = mt_invariants(&m, 1).unwrap();
        assert_eq!(inv.rank, 2);
        assert_eq!(inv.order_f, BigInt::one());
        assert!(inv.nondegenerate);
    }

    #[test]
    fn cyclotomic_five() {
        let d = CmDatum::cyclotomic(5).unwrap();
        let r = d.cm_type_from_labels(&["1", "2"]).unwrap().reflex().unwrap();
        let m = reflex_norm_matrix(&r);
        // column g has ones at rows g and 3g mod 5
        let labels: Vec<u64> = m.row_labels.iter().map(|l| l.parse().unwrap()).collect();
        for (j, cl) in m.col_labels.iter().enumerate() {
            let g: u64 = cl.parse().unwrap();
            let want = [g % 5, 3 * g % 5];
            for (i, &rl) in labels.iter().enumerate() {
                let expected = if want.contains(&rl) { 1 } else { 0 };
                assert_eq!(m.entries[(i, j)], BigInt::from(expected), "row {rl} col {g}");
            }
        }
        let inv = mt_invariants(&m, 2).unwrap();
        assert_eq!(inv.rank, 3);
        assert!(inv.nondegenerate);
    }

    #[test]
    fn cyclotomic_eight_is_degenerate() {
        let d = CmDatum::cyclotomic(8).unwrap();
        let r = d.cm_type_from_labels(&["1", "3"]).unwrap().reflex().unwrap();
        let m = reflex_norm_matrix(&r);
        assert_eq!((m.entries.rows(), m.entries.cols()), (2, 4));
        assert!(m.column_sums().iter().all(|s| *s == BigInt::one()));
        let inv = mt_invariants(&m, 2).unwrap();
        assert_eq!(inv.rank, 2);
        assert!(!inv.nondegenerate);
    }

    #[test]
    fn rank_bound_is_checked() {
        let m = ReflexNormMatrix {
            row_labels: vec!["a".into(), "b".into()],
            col_labels: vec!["x".into(), "y".into()],
            entries: IntMatrix::identity(2),
        };
        assert_eq!(
            mt_invariants(&m, 0),
            Err(LatticeError::RankExceedsGPlusOne { rank: 2, g: 0 })
        );
    }

    #[test]
    fn grid_dump() {
        let d = CmDatum::cyclotomic(8).unwrap();
        let r = d.cm_type_from_labels(&["1", "3"]).unwrap().reflex().unwrap();
        let grid = reflex_norm_matrix(&r).to_grid();
        assert_eq!(grid.lines().count(), 3);
        assert!(grid.starts_with("  | 1 3 5 7"));
    }
}
