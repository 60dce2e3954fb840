//! Smith normal form over the integers with big-integer entries.
//!
//! Classical elimination: pick the smallest nonzero entry of the trailing
//! block as pivot, clear its row and column by Euclidean steps, then repair
//! divisibility of the remaining block before moving on.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Dense integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Panics if the rows are ragged.
    pub fn from_rows<T: Into<BigInt> + Copy>(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix rows");
        let data = rows.iter().flat_map(|r| r.iter().map(|&x| x.into())).collect();
        IntMatrix { rows: rows.len(), cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        use num_traits::ToPrimitive;
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.to_i64()).collect())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    /// Panics on dimension mismatch.
    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// `row[dst] += q * row[src]`
    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        for j in 0..self.cols {
            let v = &self[(src, j)] * q;
            self[(dst, j)] += v;
        }
    }

    /// `col[dst] += q * col[src]`
    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        for i in 0..self.rows {
            let v = &self[(i, src)] * q;
            self[(i, dst)] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// Output of [`smith_normal_form`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnfResult {
    /// The `min(rows, cols)` diagonal entries, nonnegative, each dividing
    /// the next; zeros trail.
    pub diag: Vec<BigInt>,
    pub rank: usize,
    /// Unimodular `(left, right)` with `left * M * right = D`.
    pub transforms: Option<(IntMatrix, IntMatrix)>,
}

impl SnfResult {
    /// The nonzero elementary divisors.
    pub fn elementary_divisors(&self) -> &[BigInt] {
        &self.diag[..self.rank]
    }

    /// Order of the torsion subgroup of the cokernel.
    pub fn torsion_order(&self) -> BigInt {
        self.elementary_divisors().iter().product()
    }

    /// The diagonal matrix `D` with the input's dimensions.
    pub fn diagonal_matrix(&self, rows: usize, cols: usize) -> IntMatrix {
        let mut d = IntMatrix::zeros(rows, cols);
        for (i, v) in self.diag.iter().enumerate() {
            d[(i, i)] = v.clone();
        }
        d
    }
}

fn smallest_nonzero(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..a.rows {
        for j in t..a.cols {
            let v = &a[(i, j)];
            if v.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if a[(bi, bj)].abs() <= v.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

pub fn smith_normal_form(m: &IntMatrix) -> SnfResult {
    snf_impl(m, true)
}

/// Same as [`smith_normal_form`] without tracking the transforms.
pub fn elementary_divisors(m: &IntMatrix) -> SnfResult {
    snf_impl(m, false)
}

fn snf_impl(m: &IntMatrix, track: bool) -> SnfResult {
    let (rows, cols) = (m.rows, m.cols);
    let mut a = m.clone();
    let mut left = track.then(|| IntMatrix::identity(rows));
    let mut right = track.then(|| IntMatrix::identity(cols));
    let steps = rows.min(cols);
    let mut rank = 0;

    'outer: for t in 0..steps {
        loop {
            let Some((pi, pj)) = smallest_nonzero(&a, t) else {
                break 'outer;
            };
            a.swap_rows(t, pi);
            a.swap_cols(t, pj);
            if let Some(l) = left.as_mut() {
                l.swap_rows(t, pi);
            }
            if let Some(r) = right.as_mut() {
                r.swap_cols(t, pj);
            }

            let pivot = a[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = -(&a[(i, t)] / &pivot);
                a.add_row(i, t, &q);
                if let Some(l) = left.as_mut() {
                    l.add_row(i, t, &q);
                }
                clean &= a[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = -(&a[(t, j)] / &pivot);
                a.add_col(j, t, &q);
                if let Some(r) = right.as_mut() {
                    r.add_col(j, t, &q);
                }
                clean &= a[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }

            // pivot must divide the whole trailing block
            let bad_row = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !a[(i, j)].is_multiple_of(&pivot)));
            match bad_row {
                Some(i) => {
                    let one = BigInt::one();
                    a.add_row(t, i, &one);
                    if let Some(l) = left.as_mut() {
                        l.add_row(t, i, &one);
                    }
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            if let Some(l) = left.as_mut() {
                l.negate_row(t);
            }
        }
        rank += 1;
    }

    let diag = (0..steps).map(|i| a[(i, i)].clone()).collect();
    SnfResult { diag, rank, transforms: left.zip(right) }
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &IntMatrix) -> BigInt {
    assert_eq!(m.rows, m.cols, "determinant of a non-square matrix");
    let n = m.rows;
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                Some(i) => {
                    a.swap_rows(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                a[(i, j)] = v;
            }
        }
        prev = a[(k, k)].clone();
    }
    sign * &a[(n - 1, n - 1)]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag_of(rows: &[Vec<i64>]) -> Vec<i64> {
        let m = IntMatrix::from_rows(rows);
        smith_normal_form(&m).diag.iter().map(|x| x.try_into().unwrap()).collect()
    }

    #[test]
    fn small_examples() {
        assert_eq!(diag_of(&[vec![1, 0], vec![0, 1]]), vec![1, 1]);
        assert_eq!(diag_of(&[vec![2, 0], vec![0, 4]]), vec![2, 4]);
        assert_eq!(diag_of(&[vec![2, 0], vec![0, 3]]), vec![1, 6]);
        assert_eq!(diag_of(&[vec![0, 0], vec![0, 0]]), vec![0, 0]);
        assert_eq!(diag_of(&[vec![-3]]), vec![3]);
    }

    #[test]
    fn transforms_reproduce_diagonal() {
        let rows = vec![vec![2i64, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
        let m = IntMatrix::from_rows(&rows);
        let snf = smith_normal_form(&m);
        // known: diag(2, 6, 12)
        let d: Vec<i64> = snf.diag.iter().map(|x| x.try_into().unwrap()).collect();
        assert_eq!(d, vec![2, 6, 12]);
        let (l, r) = snf.transforms.clone().unwrap();
        assert_eq!(l.mul(&m).mul(&r), snf.diagonal_matrix(3, 3));
        assert_eq!(determinant(&l).abs(), BigInt::one());
        assert_eq!(determinant(&r).abs(), BigInt::one());
    }

    #[test]
    fn determinants() {
        let m = IntMatrix::from_rows(&[vec![1i64, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]);
        assert_eq!(determinant(&m), BigInt::from(2));
        let z = IntMatrix::from_rows(&[vec![0i64, 1], vec![1, 0]]);
        assert_eq!(determinant(&z), BigInt::from(-1));
        let s = IntMatrix::from_rows(&[vec![1i64, 2], vec![2, 4]]);
        assert_eq!(determinant(&s), BigInt::zero());
    }
}
