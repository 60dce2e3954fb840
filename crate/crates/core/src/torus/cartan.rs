//! Cartan subgroups of `GL₂(Z/ℓⁿ)` and their normalizers.
//!
//! With `ω² = cω + d`, multiplication by `a + bω` on the basis `(1, ω)`
//! is `[[a, bd], [b, a + bc]] = aI + bW`, `W = [[0, d], [1, c]]`. These
//! matrices span the plane `Π = { x₁₁ + c·x₂₁ = x₂₂, x₁₂ = d·x₂₁ }`; the
//! Cartan subgroup is its invertible part, and the normalizer is taken to
//! be the stabilizer of `Π` under conjugation, i.e. `{ g : gWg⁻¹ ∈ Π }`.
//! The group-theoretic normalizer is computed alongside for comparison.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::TorusError;
use crate::arith::{is_prime, reduce};
use crate::rational::Rational;

/// Largest `ℓⁿ` for the pass over all of `M₂(Z/ℓⁿ)`.
pub const MAX_CARTAN_MODULUS: u64 = 49;

/// `[[m[0], m[1]], [m[2], m[3]]]`
pub type Mat2 = [u64; 4];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CartanDatum {
    pub c: i64,
    pub d: i64,
    pub ell: u64,
    pub n: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CartanReport {
    pub modulus: u64,
    pub gl2_order: u64,
    pub cartan_order: u64,
    /// `|{(a, b) : a² + abc − b²d invertible}|`, counted separately.
    pub cartan_order_from_pairs: u64,
    /// Order of the stabilizer of `Π`.
    pub normalizer_order: u64,
    /// Order of `{ g : gCg⁻¹ = C }`.
    pub group_normalizer_order: u64,
    pub index: Rational,
    pub witness: Mat2,
    pub witness_in_normalizer: bool,
    pub witness_in_cartan: bool,
    /// `ℓ = 2` or `ℓ | c² + 4d`: index 2 is not asserted.
    pub excluded: bool,
    pub index_is_two: bool,
}

struct Ring2 {
    q: u64,
    ell: u64,
}

impl Ring2 {
    fn mul(&self, x: &Mat2, y: &Mat2) -> Mat2 {
        let q = self.q;
        [
            (x[0] * y[0] + x[1] * y[2]) % q,
            (x[0] * y[1] + x[1] * y[3]) % q,
            (x[2] * y[0] + x[3] * y[2]) % q,
            (x[2] * y[1] + x[3] * y[3]) % q,
        ]
    }

    fn det(&self, x: &Mat2) -> u64 {
        (x[0] * x[3] % self.q + self.q - x[1] * x[2] % self.q) % self.q
    }

    fn invertible(&self, x: &Mat2) -> bool {
        self.det(x) % self.ell != 0
    }

    fn inv_scalar(&self, a: u64) -> u64 {
        (1..self.q).find(|&b| a * b % self.q == 1).expect("unit")
    }

    fn inverse(&self, x: &Mat2) -> Mat2 {
        let q = self.q;
        let di = self.inv_scalar(self.det(x));
        [x[3] * di % q, (q - x[1]) % q * di % q, (q - x[2]) % q * di % q, x[0] * di % q]
    }

    fn all(&self) -> impl ParallelIterator<Item = Mat2> + '_ {
        let q = self.q;
        (0..q * q).into_par_iter().flat_map_iter(move |hi| {
            (0..q * q).map(move |lo| [hi / q, hi % q, lo / q, lo % q])
        })
    }
}

fn in_plane(x: &Mat2, c: u64, d: u64, q: u64) -> bool {
    (x[0] + c * x[2]) % q == x[3] && x[1] == d * x[2] % q
}

/// Minimal generating set of the abelian group `elems` (closure by products).
fn generators(ring: &Ring2, elems: &[Mat2]) -> Vec<Mat2> {
    let mut gens: Vec<Mat2> = Vec::new();
    let mut span: std::collections::HashSet<Mat2> = [[1 % ring.q, 0, 0, 1 % ring.q]].into();
    for e in elems {
        if span.contains(e) {
            continue;
        }
        gens.push(*e);
        // close under multiplication by the new generator
        let mut frontier: Vec<Mat2> = span.iter().copied().collect();
        while let Some(x) = frontier.pop() {
            let y = ring.mul(&x, e);
            if span.insert(y) {
                frontier.push(y);
            }
        }
    }
    gens
}

pub fn cartan_and_normalizer(datum: &CartanDatum) -> Result<CartanReport, TorusError> {
    let ell = datum.ell;
    if !is_prime(ell) {
        return Err(TorusError::NotPrime(ell));
    }
    if datum.n == 0 {
        return Err(TorusError::InvalidCartan("level n must be >= 1".into()));
    }
    let q = match ell.checked_pow(datum.n) {
        Some(q) if q <= MAX_CARTAN_MODULUS => q,
        other => {
            return Err(TorusError::TooLarge {
                what: "GL2 enumeration",
                size: other.map_or(u128::MAX, |q| (q as u128).pow(4)),
                cap: (MAX_CARTAN_MODULUS as u128).pow(4),
            })
        }
    };
    let disc = datum.c * datum.c + 4 * datum.d;
    if disc == 0 {
        return Err(TorusError::InvalidCartan("c^2 + 4d must be nonzero".into()));
    }
    let excluded = ell == 2 || disc.rem_euclid(ell as i64) == 0;
    let (c, d) = (reduce(datum.c, q), reduce(datum.d, q));
    let ring = Ring2 { q, ell };
    let w: Mat2 = [0, d, 1 % q, c];

    let cartan: Vec<Mat2> = (0..q)
        .flat_map(|a| (0..q).map(move |b| [a, b * d % q, b, (a + b * c) % q]))
        .filter(|m| ring.invertible(m))
        .collect();
    let cartan_order_from_pairs = (0..q)
        .flat_map(|a| (0..q).map(move |b| (a, b)))
        .filter(|&(a, b)| {
            let n = (a * a + a * b % q * c + q * q - b * b % q * d) % q;
            n % ell != 0
        })
        .count() as u64;
    let gens = generators(&ring, &cartan);

    // (gl2, cartan, stabilizer, group normalizer)
    let (gl2, cartan_count, stab, norm) = ring
        .all()
        .filter(|g| ring.invertible(g))
        .map(|g| {
            let gi = ring.inverse(&g);
            let conj = |x: &Mat2| ring.mul(&ring.mul(&g, x), &gi);
            let stab = in_plane(&conj(&w), c, d, q);
            let norm = gens.iter().all(|x| in_plane(&conj(x), c, d, q));
            (1u64, in_plane(&g, c, d, q) as u64, stab as u64, norm as u64)
        })
        .reduce(|| (0, 0, 0, 0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2, a.3 + b.3));

    let cartan_order = cartan.len() as u64;
    if cartan_count != cartan_order || cartan_order != cartan_order_from_pairs {
        return Err(TorusError::InvalidCartan(format!(
            "Cartan counts disagree: {cartan_count}, {cartan_order}, {cartan_order_from_pairs}"
        )));
    }
    let witness: Mat2 = [1 % q, c, 0, (q - 1) % q];
    let witness_in_normalizer = {
        let wi = ring.inverse(&witness);
        in_plane(&ring.mul(&ring.mul(&witness, &w), &wi), c, d, q)
    };
    let witness_in_cartan = in_plane(&witness, c, d, q);
    let index = Rational::new(stab, cartan_order);
    let index_is_two = index == Rational::integer(2);
    if !index_is_two && !excluded {
        return Err(TorusError::IndexNotTwo { index: index.to_string() });
    }
    Ok(CartanReport {
        modulus: q,
        gl2_order: gl2,
        cartan_order,
        cartan_order_from_pairs,
        normalizer_order: stab,
        group_normalizer_order: norm,
        index,
        witness,
        witness_in_normalizer,
        witness_in_cartan,
        excluded,
        index_is_two,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_mod_three() {
        let r = cartan_and_normalizer(&CartanDatum { c: 0, d: -1, ell: 3, n: 1 }).unwrap();
        assert_eq!(r.gl2_order, 48);
        assert_eq!((r.cartan_order, r.normalizer_order), (8, 16));
        assert_eq!(r.index, Rational::integer(2));
        assert_eq!(r.witness, [1, 0, 0, 2]);
        assert!(r.witness_in_normalizer && !r.witness_in_cartan);
        assert_eq!(r.group_normalizer_order, r.normalizer_order);
    }

    #[test]
    fn eisenstein_mod_five() {
        let r = cartan_and_normalizer(&CartanDatum { c: 1, d: -1, ell: 5, n: 1 }).unwrap();
        assert!(r.index_is_two && !r.excluded);
    }

    #[test]
    fn caps() {
        assert!(matches!(
            cartan_and_normalizer(&CartanDatum { c: 0, d: -1, ell: 11, n: 2 }),
            Err(TorusError::TooLarge { .. })
        ));
        assert!(matches!(
            cartan_and_normalizer(&CartanDatum { c: 2, d: -1, ell: 3, n: 1 }),
            Err(TorusError::InvalidCartan(_))
        ));
    }
}
