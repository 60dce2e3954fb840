//! Maximal `|det|` over square matrices with entries in `{0, 1}`.

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::f_bound;

/// Largest dimension for the exhaustive search (`2^16` matrices).
pub const MAX_EXHAUSTIVE: usize = 4;
/// Largest dimension accepted at all.
pub const MAX_DIM: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HadamardMode {
    Exhaustive,
    Sampled { samples: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HadamardError {
    #[error("exhaustive search is limited to n <= {MAX_EXHAUSTIVE}, got n = {0}")]
    TooLargeForExhaustive(usize),
    #[error("dimension must be in 1..={MAX_DIM}, got {0}")]
    DimensionOutOfRange(usize),
    #[error("max |det| = {found} exceeds the bound {bound} for n = {n}")]
    BoundViolated { n: usize, found: u64, bound: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HadamardResult {
    pub n: usize,
    pub max_abs_det: u64,
    pub bound: u64,
    pub matrices_examined: u64,
    pub exhaustive: bool,
}

/// Determinant of the `n × n` 0/1 matrix whose row `i` is bits
/// `i*n .. i*n + n` of `bits` (bit `j` of the row is column `j`).
fn det01(bits: u64, n: usize) -> i64 {
    let mut a = [[0i64; MAX_DIM]; MAX_DIM];
    for (i, row) in a.iter_mut().enumerate().take(n) {
        for (j, x) in row.iter_mut().enumerate().take(n) {
            *x = (bits >> (i * n + j) & 1) as i64;
        }
    }
    // Bareiss; entries stay bounded by the minors, tiny for n <= 5
    let mut sign = 1;
    let mut prev = 1i64;
    for k in 0..n.saturating_sub(1) {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

pub fn hadamard_max_det(n: usize, mode: HadamardMode) -> Result<HadamardResult, HadamardError> {
    if !(1..=MAX_DIM).contains(&n) {
        return Err(HadamardError::DimensionOutOfRange(n));
    }
    let bound = f_bound(n as u64).to_u64().expect("small bound");
    let (max_abs_det, examined, exhaustive) = match mode {
        HadamardMode::Exhaustive => {
            if n > MAX_EXHAUSTIVE {
                return Err(HadamardError::TooLargeForExhaustive(n));
            }
            // partition over the first row; max is order independent
            let rest = 1u64 << (n * (n - 1));
            let max = (0u64..1 << n)
                .into_par_iter()
                .map(|first| {
                    (0..rest)
                        .map(|tail| det01(first | tail << n, n).unsigned_abs())
                        .max()
                        .unwrap_or(0)
                })
                .max()
                .unwrap_or(0);
            (max, 1u64 << (n * n), true)
        }
        HadamardMode::Sampled { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mask = if n * n == 64 { u64::MAX } else { (1u64 << (n * n)) - 1 };
            let max = (0..samples)
                .map(|_| det01(rng.gen::<u64>() & mask, n).unsigned_abs())
                .max()
                .unwrap_or(0);
            (max, samples, false)
        }
    };
    if max_abs_det > bound {
        return Err(HadamardError::BoundViolated { n, found: max_abs_det, bound });
    }
    Ok(HadamardResult { n, max_abs_det, bound, matrices_examined: examined, exhaustive })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det01_matches_known() {
        // rows 110, 011, 101 -> det 2
        let bits = 0b101_110_011;
        assert_eq!(det01(bits, 3).abs(), 2);
        assert_eq!(det01(0b1, 1), 1);
        assert_eq!(det01(0, 2), 0);
    }

    #[test]
    fn small_exhaustive() {
        let r1 = hadamard_max_det(1, HadamardMode::Exhaustive).unwrap();
        assert_eq!((r1.max_abs_det, r1.bound), (1, 1));
        let r2 = hadamard_max_det(2, HadamardMode::Exhaustive).unwrap();
        assert_eq!((r2.max_abs_det, r2.bound), (1, 1));
        assert_eq!(r2.matrices_examined, 16);
        let r3 = hadamard_max_det(3, HadamardMode::Exhaustive).unwrap();
        assert_eq!((r3.max_abs_det, r3.bound), (2, 2));
    }

    #[test]
    fn limits() {
        assert_eq!(
            hadamard_max_det(5, HadamardMode::Exhaustive),
            Err(HadamardError::TooLargeForExhaustive(5))
        );
        assert_eq!(
            hadamard_max_det(6, HadamardMode::Exhaustive),
            Err(HadamardError::DimensionOutOfRange(6))
        );
        let s = hadamard_max_det(5, HadamardMode::Sampled { samples: 2000, seed: 7 }).unwrap();
        assert!(s.max_abs_det <= s.bound);
        assert_eq!(s.bound, 6);
    }
}
