//! Norm-one units of a quadratic extension `Q_ℓ(√d)` and their filtration
//! `C(k) = { x : v(x − 1) ≥ k }`, with `v` normalized by `v(ℓ) = 1`.
//!
//! Elements are pairs `(a, b)` standing for `a + b√d` modulo `ℓᴺ` with
//! `a² − d b² ≡ 1`. For odd `ℓ`, `v(x − 1) = min(v(a − 1), v(b) + v(d)/2)`,
//! so `x ∈ C(k)` iff `ℓᵏ | a − 1` and `ℓᵏ | b` in both the unramified and
//! the ramified case. For `ℓ = 2` the valuation is read off the norm,
//! `v(y) = v(N(y)) / 2`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::TorusError;
use crate::arith::{is_prime, reduce, valuation};
use crate::rational::Rational;

const MAX_PAIRS: u128 = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuadraticKind {
    Unramified,
    Ramified,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiltrationSpec {
    pub ell: u64,
    /// Truncation exponent `N`.
    pub level: u32,
    pub d: i64,
    pub k_max: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiltrationReport {
    pub kind: QuadraticKind,
    /// `|C(k)|` at truncation `N`, for `k = 0..=k_max + 1`.
    pub filtration_sizes: Vec<u64>,
    /// `|C(k)/C(k+1)|` for `k = 0..=k_max`.
    pub quotients: Vec<Rational>,
    /// Predicted quotients (`ℓ` odd), or the upper bound `4` (`ℓ = 2`).
    pub expected: Vec<Rational>,
    /// Equalities for odd `ℓ`, inequalities for `ℓ = 2`.
    pub matches_expected: bool,
    pub stable: bool,
}

fn legendre(a: u64, p: u64) -> i32 {
    let mut r = 1u64;
    let (mut b, mut e) = (a % p, (p - 1) / 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    if r == 1 {
        1
    } else if r == 0 {
        0
    } else {
        -1
    }
}

impl FiltrationSpec {
    pub fn kind(&self) -> Result<QuadraticKind, TorusError> {
        let bad = |m: String| Err(TorusError::InvalidFiltration(m));
        if !is_prime(self.ell) {
            return Err(TorusError::NotPrime(self.ell));
        }
        if self.level < 2 || self.k_max + 2 > self.level as usize {
            return bad(format!("need k_max <= N - 2, got k_max = {}, N = {}", self.k_max, self.level));
        }
        if self.d == 0 {
            return bad("d must be nonzero".into());
        }
        let l = self.ell;
        let v = valuation(self.d.unsigned_abs() as u128, l);
        if l == 2 {
            let unit = self.d / (1 << v);
            return match (v, unit.rem_euclid(8)) {
                (0, 5) => Ok(QuadraticKind::Unramified),
                (0, 3) | (0, 7) | (1, _) => Ok(QuadraticKind::Ramified),
                _ => bad(format!("d = {} does not give a quadratic extension of Q_2 in normal form", self.d)),
            };
        }
        match v {
            0 if legendre(reduce(self.d, l), l) == -1 => Ok(QuadraticKind::Unramified),
            0 => bad(format!("d = {} is a square mod {l}", self.d)),
            1 => Ok(QuadraticKind::Ramified),
            _ => bad(format!("v_{l}(d) = {v}; use d with valuation 0 or 1")),
        }
    }
}

/// `|C(k)|` for `k = 0..=kmax + 1` at truncation `level`.
fn filtration_sizes(ell: u64, level: u32, d: i64, kmax: usize) -> Result<Vec<u64>, TorusError> {
    let q = ell.pow(level);
    if (q as u128) * (q as u128) > MAX_PAIRS {
        return Err(TorusError::TooLarge {
            what: "pair enumeration",
            size: q as u128 * q as u128,
            cap: MAX_PAIRS,
        });
    }
    let dq = reduce(d, q) as u128;
    let qq = q as u128;
    let val = |x: u64| if x == 0 { level as usize } else { valuation(x as u128, ell) as usize };
    let depth = |a: u64, b: u64| -> usize {
        let am1 = (a + q - 1) % q;
        if ell == 2 {
            // v(N(x − 1)) / 2, N(α + β√d) = α² − dβ²
            let n = ((am1 as u128 * am1 as u128 + qq * qq - dq * (b as u128 * b as u128 % qq)) % qq) as u64;
            val(n) / 2
        } else {
            val(am1).min(val(b))
        }
    };
    let counts = (0..q)
        .into_par_iter()
        .map(|a| {
            let mut local = vec![0u64; kmax + 2];
            let a2 = a as u128 * a as u128 % qq;
            for b in 0..q {
                let norm = (a2 + qq * qq - dq * (b as u128 * b as u128 % qq)) % qq;
                if norm != 1 % qq {
                    continue;
                }
                let dep = depth(a, b);
                for slot in local.iter_mut().take(dep.min(kmax + 1) + 1) {
                    *slot += 1;
                }
            }
            local
        })
        .reduce(
            || vec![0u64; kmax + 2],
            |mut x, y| {
                x.iter_mut().zip(y).for_each(|(s, t)| *s += t);
                x
            },
        );
    Ok(counts)
}

fn quotients(sizes: &[u64]) -> Vec<Rational> {
    sizes.windows(2).map(|w| Rational::new(w[0], w[1].max(1))).collect()
}

pub fn filtration_orders(spec: &FiltrationSpec) -> Result<FiltrationReport, TorusError> {
    let kind = spec.kind()?;
    let sizes = filtration_sizes(spec.ell, spec.level, spec.d, spec.k_max)?;
    let q_n = quotients(&sizes);
    let q_n1 = quotients(&filtration_sizes(spec.ell, spec.level + 1, spec.d, spec.k_max)?);
    if let Some(k) = (0..q_n.len()).find(|&k| q_n[k] != q_n1[k]) {
        return Err(TorusError::UnstableTruncation {
            k,
            at_n: q_n[k].to_string(),
            at_n1: q_n1[k].to_string(),
        });
    }
    let l = spec.ell as i64;
    let (expected, matches_expected) = if spec.ell == 2 {
        let four = Rational::integer(4);
        let ok = q_n.iter().all(|x| *x <= four);
        (vec![four; q_n.len()], ok)
    } else {
        let first = match kind {
            QuadraticKind::Unramified => l + 1,
            QuadraticKind::Ramified => 2 * l,
        };
        let exp: Vec<Rational> = (0..q_n.len())
            .map(|k| Rational::integer(if k == 0 { first } else { l }))
            .collect();
        let ok = exp == q_n;
        (exp, ok)
    };
    Ok(FiltrationReport {
        kind,
        filtration_sizes: sizes,
        quotients: q_n,
        expected,
        matches_expected,
        stable: true,
    })
}
