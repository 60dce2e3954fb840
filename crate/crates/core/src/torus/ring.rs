//! The ring `(Z/ℓᴺ)[x]/(f)` with an involution `τ: a(x) ↦ a(t(x))`.
//!
//! Elements are coefficient vectors `c_0 + c_1 x + … + c_{D−1} x^{D−1}`,
//! enumerated in lexicographic order of `(c_0, …, c_{D−1})`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::TorusError;
use crate::arith::{is_prime, reduce};

/// Largest ring the enumerations will walk.
pub const MAX_RING_SIZE: u128 = 10_000_000;
const MAX_DEGREE: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteRing {
    ell: u64,
    level: u32,
    q: u64,
    /// Coefficients of `f` below the leading 1, reduced mod `q`.
    f: Vec<u64>,
    /// `x^k mod f` for `k < 2D − 1`.
    xpow: Vec<Vec<u64>>,
    /// Column `i` is `τ(x^i) = t(x)^i mod f`.
    tau: Vec<Vec<u64>>,
    size: u128,
    /// Unit flag of every residue class mod `ℓ`, indexed like elements.
    unit_mod_ell: Vec<bool>,
}

/// Raw counts from a single pass over the ring.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingCounts {
    pub units: u64,
    pub hodge: u64,
    pub mt: u64,
    /// Mumford–Tate points whose norm `u τ(u)` is a square scalar.
    pub mt_square_norm: u64,
}

impl std::ops::Add for RingCounts {
    type Output = RingCounts;
    fn add(self, o: RingCounts) -> RingCounts {
        RingCounts {
            units: self.units + o.units,
            hodge: self.hodge + o.hodge,
            mt: self.mt + o.mt,
            mt_square_norm: self.mt_square_norm + o.mt_square_norm,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PsiAnalysis {
    pub hodge_order: u64,
    pub scalar_order: u64,
    pub kernel_order: u64,
    pub im_psi_order: u64,
    pub mt_order: u64,
    pub index_im_psi: u64,
    pub square_criterion: bool,
    /// Image of `Ψ` counted directly as the MT points with square norm.
    pub im_psi_direct: u64,
    /// Whether the index dichotomy was asserted (`ℓ` odd).
    pub dichotomy_checked: bool,
}

fn poly_mul_raw(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = ((out[i + j] as u128 + x as u128 * y as u128) % q as u128) as u64;
        }
    }
    out
}

/// Reduce a polynomial modulo the monic `x^D + f_{D−1}x^{D−1} + … + f_0`.
fn poly_rem(mut p: Vec<u64>, f: &[u64], q: u64) -> Vec<u64> {
    let d = f.len();
    while p.len() > d {
        let top = p.pop().unwrap();
        if top == 0 {
            continue;
        }
        let base = p.len() - d;
        for (i, &fi) in f.iter().enumerate() {
            let sub = (top as u128 * fi as u128 % q as u128) as u64;
            p[base + i] = (p[base + i] + q - sub) % q;
        }
    }
    p.resize(d, 0);
    p
}

/// Determinant mod a prime by Gaussian elimination.
fn det_mod_prime(mut m: Vec<Vec<u64>>, p: u64) -> u64 {
    let n = m.len();
    let mut det = 1u64;
    for c in 0..n {
        let Some(r) = (c..n).find(|&r| m[r][c] % p != 0) else {
            return 0;
        };
        if r != c {
            m.swap(r, c);
            det = (p - det) % p;
        }
        let piv = m[c][c] % p;
        det = det * piv % p;
        let inv = pow_mod(piv, p - 2, p);
        for r in c + 1..n {
            let factor = m[r][c] % p * inv % p;
            if factor == 0 {
                continue;
            }
            for k in c..n {
                let sub = factor * (m[c][k] % p) % p;
                m[r][k] = (m[r][k] % p + p - sub) % p;
            }
        }
    }
    det
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        e >>= 1;
    }
    r
}

impl FiniteRing {
    /// `modulus` and `tau` are coefficient lists, constant term first;
    /// `modulus` must be monic. Negative coefficients are reduced mod `ℓᴺ`.
    pub fn new(ell: u64, level: u32, modulus: &[i64], tau: &[i64]) -> Result<Self, TorusError> {
        if !is_prime(ell) {
            return Err(TorusError::NotPrime(ell));
        }
        if level == 0 {
            return Err(TorusError::InvalidTau("truncation exponent N must be >= 1".into()));
        }
        let mut modulus = modulus.to_vec();
        while modulus.len() > 1 && modulus.last() == Some(&0) {
            modulus.pop();
        }
        if modulus.len() < 2 || modulus.last() != Some(&1) || modulus.len() - 1 > MAX_DEGREE {
            return Err(TorusError::BadModulus);
        }
        let d = modulus.len() - 1;
        let q128 = (ell as u128).checked_pow(level).filter(|&q| q < 1 << 32);
        let size = q128.and_then(|q| q.checked_pow(d as u32));
        let size = match size {
            Some(s) if s <= MAX_RING_SIZE => s,
            _ => {
                return Err(TorusError::TooLarge {
                    what: "ring",
                    size: size.unwrap_or(u128::MAX),
                    cap: MAX_RING_SIZE,
                })
            }
        };
        let q = q128.unwrap() as u64;
        let f: Vec<u64> = modulus[..d].iter().map(|&c| reduce(c, q)).collect();

        let mut xpow = Vec::with_capacity(2 * d);
        for k in 0..2 * d {
            let mut mono = vec![0u64; k + 1];
            mono[k] = 1 % q;
            xpow.push(poly_rem(mono, &f, q));
        }

        let mut t: Vec<u64> = tau.iter().map(|&c| reduce(c, q)).collect();
        if t.is_empty() {
            t.push(0);
        }
        let t = poly_rem(t, &f, q);
        let mut tau_cols = vec![poly_rem(vec![1 % q], &f, q)];
        for _ in 1..=d {
            let prev = tau_cols.last().unwrap();
            tau_cols.push(poly_rem(poly_mul_raw(prev, &t, q), &f, q));
        }
        // f(t) = t^D + Σ f_i t^i must vanish for substitution to be well defined
        let mut f_of_t = tau_cols[d].clone();
        for (i, &fi) in f.iter().enumerate() {
            for (k, v) in f_of_t.iter_mut().enumerate() {
                *v = ((*v as u128 + fi as u128 * tau_cols[i][k] as u128) % q as u128) as u64;
            }
        }
        if f_of_t.iter().any(|&c| c != 0) {
            return Err(TorusError::InvalidTau("f(t(x)) is not 0 modulo f".into()));
        }
        tau_cols.truncate(d);

        let mut ring = FiniteRing {
            ell,
            level,
            q,
            f,
            xpow,
            tau: tau_cols,
            size,
            unit_mod_ell: Vec::new(),
        };
        let mut x = vec![0u64; d];
        if d > 1 {
            x[1] = 1;
        } else {
            x[0] = ring.xpow[1][0];
        }
        if ring.apply_tau(&ring.apply_tau(&x)) != x {
            return Err(TorusError::InvalidTau("t(t(x)) is not x modulo f".into()));
        }
        ring.unit_mod_ell = ring.unit_table();
        Ok(ring)
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// `ℓᴺ`
    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn degree(&self) -> usize {
        self.f.len()
    }

    pub fn size(&self) -> u128 {
        self.size
    }

    pub fn element(&self, mut idx: u64) -> Vec<u64> {
        let d = self.degree();
        let mut c = vec![0u64; d];
        for i in (0..d).rev() {
            c[i] = idx % self.q;
            idx /= self.q;
        }
        c
    }

    fn index_mod_ell(&self, c: &[u64]) -> usize {
        c.iter().fold(0usize, |acc, &x| acc * self.ell as usize + (x % self.ell) as usize)
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let q = self.q as u128;
        let raw = poly_mul_raw(a, b, self.q);
        let mut out = vec![0u128; self.degree()];
        for (k, &ck) in raw.iter().enumerate() {
            if ck == 0 {
                continue;
            }
            for (o, &r) in out.iter_mut().zip(&self.xpow[k]) {
                *o = (*o + ck as u128 * r as u128) % q;
            }
        }
        out.into_iter().map(|v| v as u64).collect()
    }

    pub fn apply_tau(&self, a: &[u64]) -> Vec<u64> {
        let q = self.q as u128;
        let mut out = vec![0u128; self.degree()];
        for (col, &ai) in self.tau.iter().zip(a) {
            if ai == 0 {
                continue;
            }
            for (o, &t) in out.iter_mut().zip(col) {
                *o = (*o + ai as u128 * t as u128) % q;
            }
        }
        out.into_iter().map(|v| v as u64).collect()
    }

    fn unit_table(&self) -> Vec<bool> {
        let d = self.degree();
        let ell = self.ell;
        let count = (ell as usize).pow(d as u32);
        (0..count)
            .into_par_iter()
            .map(|idx| {
                let mut c = vec![0u64; d];
                let mut rest = idx as u64;
                for i in (0..d).rev() {
                    c[i] = rest % ell;
                    rest /= ell;
                }
                // multiplication-by-c matrix: column j is c · x^j
                let cols: Vec<Vec<u64>> = (0..d).map(|j| self.mul(&c, &self.xpow[j])).collect();
                let m: Vec<Vec<u64>> =
                    (0..d).map(|i| (0..d).map(|j| cols[j][i] % ell).collect()).collect();
                det_mod_prime(m, ell) != 0
            })
            .collect()
    }

    pub fn is_unit(&self, a: &[u64]) -> bool {
        self.unit_mod_ell[self.index_mod_ell(a)]
    }

    /// Units in lexicographic order.
    pub fn units(&self) -> impl Iterator<Item = Vec<u64>> + '_ {
        (0..self.size as u64).map(|i| self.element(i)).filter(|c| self.is_unit(c))
    }

    /// `Some(c)` when `a` is the constant `c`.
    fn as_scalar(a: &[u64]) -> Option<u64> {
        a[1..].iter().all(|&x| x == 0).then_some(a[0])
    }

    fn scalar_squares(&self) -> Vec<bool> {
        let mut sq = vec![false; self.q as usize];
        for s in 0..self.q {
            if s % self.ell != 0 {
                sq[(s as u128 * s as u128 % self.q as u128) as usize] = true;
            }
        }
        sq
    }

    /// One parallel pass counting units, Hodge points and MT points.
    pub fn counts(&self) -> RingCounts {
        let squares = self.scalar_squares();
        let one = {
            let mut v = vec![0u64; self.degree()];
            v[0] = 1 % self.q;
            v
        };
        let q = self.q;
        // partition on the leading coefficient; sums are order independent
        (0..q)
            .into_par_iter()
            .map(|lead| {
                let mut acc = RingCounts::default();
                let inner = self.size as u64 / q;
                for rest in 0..inner {
                    let c = self.element(lead * inner + rest);
                    if !self.is_unit(&c) {
                        continue;
                    }
                    acc.units += 1;
                    let norm = self.mul(&c, &self.apply_tau(&c));
                    if norm == one {
                        acc.hodge += 1;
                    }
                    if let Some(s) = Self::as_scalar(&norm) {
                        if s % self.ell != 0 {
                            acc.mt += 1;
                            if squares[s as usize] {
                                acc.mt_square_norm += 1;
                            }
                        }
                    }
                }
                acc
            })
            .reduce(RingCounts::default, |a, b| a + b)
    }

    pub fn unit_count(&self) -> u64 {
        self.counts().units
    }

    pub fn hodge_order(&self) -> u64 {
        self.counts().hodge
    }

    pub fn mt_order(&self) -> u64 {
        self.counts().mt
    }

    /// Image of `Ψ: Hg × scalars → MT, (h, s) ↦ hs` and its index.
    pub fn psi_analysis(&self) -> Result<PsiAnalysis, TorusError> {
        let counts = self.counts();
        let scalar_order = (0..self.q).filter(|s| s % self.ell != 0).count() as u64;
        let kernel_order = (0..self.q)
            .filter(|&s| s % self.ell != 0 && (s as u128 * s as u128) % self.q as u128 == 1 % self.q as u128)
            .count() as u64;
        let product = counts.hodge * scalar_order;
        if product % kernel_order != 0 {
            return Err(TorusError::InconsistentIndex(format!(
                "|Hg| |scalars| = {product} not divisible by |kernel| = {kernel_order}"
            )));
        }
        let im_psi_order = product / kernel_order;
        if im_psi_order != counts.mt_square_norm {
            return Err(TorusError::InconsistentIndex(format!(
                "image by formula {im_psi_order} differs from direct count {}",
                counts.mt_square_norm
            )));
        }
        if im_psi_order == 0 || counts.mt % im_psi_order != 0 {
            return Err(TorusError::InconsistentIndex(format!(
                "image order {im_psi_order} does not divide |MT| = {}",
                counts.mt
            )));
        }
        let index = counts.mt / im_psi_order;
        let square_criterion = counts.mt_square_norm == counts.mt;
        let dichotomy_checked = self.ell != 2;
        if dichotomy_checked {
            if index != 1 && index != 2 {
                return Err(TorusError::InconsistentIndex(format!("index {index} is not 1 or 2")));
            }
            if (index == 1) != square_criterion {
                return Err(TorusError::InconsistentIndex(format!(
                    "index {index} but square criterion is {square_criterion}"
                )));
            }
        }
        Ok(PsiAnalysis {
            hodge_order: counts.hodge,
            scalar_order,
            kernel_order,
            im_psi_order,
            mt_order: counts.mt,
            index_im_psi: index,
            square_criterion,
            im_psi_direct: counts.mt_square_norm,
            dichotomy_checked,
        })
    }

    /// Whether `f` is squarefree modulo `ℓ` (the good-reduction shape).
    pub fn separable_mod_ell(&self) -> bool {
        let p = self.ell;
        let mut f: Vec<u64> = self.f.iter().map(|c| c % p).collect();
        f.push(1);
        let df: Vec<u64> = f.iter().enumerate().skip(1).map(|(i, &c)| (i as u64 % p) * c % p).collect();
        poly_gcd_degree(f, df, p) == 0
    }
}

fn trim(p: &mut Vec<u64>) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

/// Degree of `gcd(a, b)` over `F_p`; `b = 0` counts as infinite gcd
/// (returns the degree of `a`).
fn poly_gcd_degree(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> usize {
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        // a mod b
        let inv = pow_mod(*b.last().unwrap(), p - 2, p);
        while a.len() >= b.len() && !a.is_empty() {
            let coef = a.last().unwrap() * inv % p;
            let shift = a.len() - b.len();
            for (i, &bi) in b.iter().enumerate() {
                a[shift + i] = (a[shift + i] + p - coef * bi % p) % p;
            }
            trim(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f9() -> FiniteRing {
        FiniteRing::new(3, 1, &[1, 0, 1], &[0, -1]).unwrap()
    }

    #[test]
    fn arithmetic_in_f9() {
        let r = f9();
        assert_eq!(r.size(), 9);
        // i * i = -1
        assert_eq!(r.mul(&[0, 1], &[0, 1]), vec![2, 0]);
        assert_eq!(r.apply_tau(&[1, 1]), vec![1, 2]);
        assert!(r.is_unit(&[1, 1]));
        assert!(!r.is_unit(&[0, 0]));
        assert!(r.separable_mod_ell());
    }

    #[test]
    fn spec_counts() {
        let c = f9().counts();
        assert_eq!((c.units, c.hodge, c.mt), (8, 4, 8));
        let split = FiniteRing::new(5, 1, &[0, -1, 1], &[1, -1]).unwrap();
        let c = split.counts();
        assert_eq!((c.units, c.hodge, c.mt), (16, 4, 16));
        let r = FiniteRing::new(3, 2, &[1, 0, 1], &[0, -1]).unwrap();
        assert_eq!(r.unit_count(), 72);
    }

    #[test]
    fn unit_iterator_is_lexicographic() {
        let r = f9();
        let units: Vec<_> = r.units().collect();
        assert_eq!(units.len(), 8);
        assert_eq!(units[0], vec![0, 1]);
        assert!(units.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn psi_examples() {
        let p = f9().psi_analysis().unwrap();
        assert_eq!(
            (p.hodge_order, p.scalar_order, p.kernel_order, p.im_psi_order, p.mt_order, p.index_im_psi),
            (4, 2, 2, 4, 8, 2)
        );
        assert!(!p.square_criterion);
        let split = FiniteRing::new(5, 1, &[0, -1, 1], &[1, -1]).unwrap();
        let p = split.psi_analysis().unwrap();
        assert_eq!(
            (p.hodge_order, p.scalar_order, p.kernel_order, p.im_psi_order, p.mt_order, p.index_im_psi),
            (4, 4, 2, 8, 16, 2)
        );
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(FiniteRing::new(4, 1, &[1, 0, 1], &[0, -1]), Err(TorusError::NotPrime(4)));
        assert_eq!(FiniteRing::new(3, 1, &[1, 0, 2], &[0, -1]), Err(TorusError::BadModulus));
        // x -> x + 1 is not an automorphism of x^2 + 1 mod 3
        assert!(matches!(
            FiniteRing::new(3, 1, &[1, 0, 1], &[1, 1]),
            Err(TorusError::InvalidTau(_))
        ));
        assert!(matches!(
            FiniteRing::new(7, 5, &[1, 0, 0, 0, 1], &[0, -1]),
            Err(TorusError::TooLarge { .. })
        ));
    }

    #[test]
    fn separability() {
        // x^2 + 1 = (x + 1)^2 mod 2
        let r = FiniteRing::new(2, 1, &[1, 0, 1], &[0, 1]).unwrap();
        assert!(!r.separable_mod_ell());
    }
}
