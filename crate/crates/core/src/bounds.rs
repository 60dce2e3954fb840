//! Exact evaluation of the degree, order and index bounds for CM abelian
//! varieties, given the arithmetic context as user input.
//!
//! Nothing here computes number-field data: class numbers, roots of
//! unity, ramification and reduction type are trusted inputs. Every
//! claim is emitted, with the preconditions it needs; claims whose
//! preconditions fail are reported as not applicable rather than dropped.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::is_prime;
use crate::citation;
use crate::rational::{ell_pow, Rational, RationalEnclosure};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundError {
    #[error("the l-part of 0 is undefined")]
    ZeroInput,
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("discriminant must be nonzero")]
    ZeroDiscriminant,
    #[error("invalid bound context: {0}")]
    InvalidContext(String),
    #[error("rank {r} != g + 1 = {}: the CM type is degenerate", g + 1)]
    NotNondegenerate { r: usize, g: usize },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundFlags {
    pub unramified_e: bool,
    pub unramified_k: bool,
    pub good_reduction: bool,
}

/// Arithmetic context of an abelian variety `A/K` with CM by `E`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundContext {
    pub g: usize,
    /// Rank of the Mumford–Tate group.
    pub r: usize,
    pub order_f: BigInt,
    pub ell: u64,
    pub n: u32,
    pub h_k: u64,
    /// Number of roots of unity in `E`.
    pub mu_e: u64,
    /// `1` under good reduction at `ℓ`, otherwise `mu_e`.
    pub mu_star: u64,
    /// `[K : E*]`
    pub k_over_estar: u64,
    pub flags: BoundFlags,
    /// Dimension of an auxiliary torus with good reduction, if any.
    pub dim_t: Option<usize>,
    /// Exactly known `|MT(Z/ℓⁿ)|`, e.g. from the enumeration oracle.
    pub mt_order: Option<BigInt>,
}

impl BoundContext {
    pub fn validate(&self) -> Result<(), BoundError> {
        let bad = |m: String| Err(BoundError::InvalidContext(m));
        if !is_prime(self.ell) {
            return Err(BoundError::NotPrime(self.ell));
        }
        if self.g == 0 {
            return bad("g must be at least 1".into());
        }
        if self.r > self.g + 1 {
            return bad(format!("rank {} exceeds g + 1 = {}", self.r, self.g + 1));
        }
        if self.n == 0 {
            return bad("n must be at least 1".into());
        }
        if !self.order_f.is_positive() {
            return bad(format!("|F| must be positive, got {}", self.order_f));
        }
        if self.h_k == 0 || self.mu_e == 0 || self.k_over_estar == 0 {
            return bad("h(K), |mu(E)| and [K:E*] must be positive".into());
        }
        if self.mu_star != 1 && self.mu_star != self.mu_e {
            return bad(format!("mu* must be 1 or |mu(E)| = {}, got {}", self.mu_e, self.mu_star));
        }
        if self.flags.good_reduction && self.mu_star != 1 {
            return bad("mu* must be 1 under good reduction".into());
        }
        Ok(())
    }

    pub fn ell_divides_order_f(&self) -> bool {
        (&self.order_f % BigInt::from(self.ell)).is_zero()
    }

    pub fn nondegenerate(&self) -> bool {
        self.r == self.g + 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClaimKind {
    Interval,
    UpperBound,
    Divisibility,
    Equality,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Payload {
    Interval {
        lower: RationalEnclosure,
        upper: RationalEnclosure,
    },
    UpperBound {
        bound: Rational,
    },
    Divides {
        modulus: Rational,
    },
    /// Degree of a division field: raw rational bounds, integer
    /// roundings, and the exact value when it is forced.
    Degree {
        lower_raw: Rational,
        lower: Rational,
        upper_raw: Rational,
        upper: Rational,
        exact: Option<Rational>,
        order_claim: String,
        index_claim: String,
    },
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundEntry {
    pub claim_id: String,
    pub kind: ClaimKind,
    pub preconditions_met: bool,
    pub unmet: Vec<String>,
    pub payload: Payload,
    pub informational: bool,
    pub citation: String,
}

impl BoundEntry {
    fn new(id: &str, kind: ClaimKind, unmet: Vec<String>, payload: impl FnOnce() -> Payload) -> Self {
        let met = unmet.is_empty();
        BoundEntry {
            claim_id: id.to_string(),
            kind,
            preconditions_met: met,
            unmet,
            payload: if met { payload() } else { Payload::NotApplicable },
            informational: false,
            citation: citation::for_claim(id).to_string(),
        }
    }

    /// Lower and upper end of an interval payload.
    pub fn interval(&self) -> Option<(&RationalEnclosure, &RationalEnclosure)> {
        match &self.payload {
            Payload::Interval { lower, upper } => Some((lower, upper)),
            _ => None,
        }
    }

    pub fn modulus(&self) -> Option<&Rational> {
        match &self.payload {
            Payload::Divides { modulus } => Some(modulus),
            _ => None,
        }
    }

    pub fn upper_bound(&self) -> Option<&Rational> {
        match &self.payload {
            Payload::UpperBound { bound } => Some(bound),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub entries: Vec<BoundEntry>,
}

impl BoundReport {
    pub fn get(&self, claim_id: &str) -> Option<&BoundEntry> {
        self.entries.iter().find(|e| e.claim_id == claim_id)
    }
}

/// Exact closed interval of rationals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn contains(&self, v: &Rational) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    fn into_payload(self) -> Payload {
        Payload::Interval {
            lower: RationalEnclosure::exact(self.lo),
            upper: RationalEnclosure::exact(self.hi),
        }
    }
}

/// `(v_ℓ(m), |m|_ℓ)` with `|m|_ℓ = ℓ^(−v_ℓ(m))`.
pub fn ellpart(m: &BigInt, ell: u64) -> Result<(u32, Rational), BoundError> {
    if m.is_zero() {
        return Err(BoundError::ZeroInput);
    }
    if !is_prime(ell) {
        return Err(BoundError::NotPrime(ell));
    }
    let l = BigInt::from(ell);
    let mut m = m.abs();
    let mut v = 0u32;
    while (&m % &l).is_zero() {
        m /= &l;
        v += 1;
    }
    Ok((v, ell_pow(ell, -(v as i64))))
}

fn factorial(g: usize) -> BigUint {
    (1..=g as u64).map(BigUint::from).product()
}

fn ell_rat(ell: u64) -> Rational {
    Rational::integer(ell as i64)
}

/// `ℓ^{nr}` bracketed by `1/(4μ√(g!))` and `(5/2)μ h(K)`, for `ℓ > √(2·g!)`
/// unramified in `E·K`.
pub fn rank_degree_bounds(ctx: &BoundContext) -> BoundEntry {
    let mut unmet = Vec::new();
    let gf = factorial(ctx.g);
    if BigUint::from(ctx.ell).pow(2) <= &gf * 2u32 {
        unmet.push(format!("l > sqrt(2 * {}!)", ctx.g));
    }
    if !(ctx.flags.unramified_e && ctx.flags.unramified_k) {
        unmet.push("l unramified in E.K".to_string());
    }
    BoundEntry::new("degree-rank", ClaimKind::Interval, unmet, || {
        let top = ell_pow(ctx.ell, (ctx.n as usize * ctx.r) as i64);
        let mu = Rational::integer(ctx.mu_e as i64);
        let sqrt_gf = RationalEnclosure::sqrt(&gf);
        let lower = sqrt_gf.recip_scaled(&(&top / &(&Rational::integer(4) * &mu)));
        let upper = &(&Rational::new(5, 2) * &mu) * &(&Rational::integer(ctx.h_k as i64) * &top);
        Payload::Interval { lower, upper: RationalEnclosure::exact(upper) }
    })
}

/// Order bounds for a `d`-dimensional torus with good reduction at `ℓ`.
pub fn good_reduction_torus_bounds(d: usize, ell: u64, n: u32) -> Interval {
    let l = ell_rat(ell);
    let top = ell_pow(ell, (n as usize * d) as i64);
    let lo_f = (&Rational::one() - &l.recip()).pow(d as u32);
    let hi_f = (&Rational::one() + &l.recip()).pow(d as u32);
    Interval { lo: &lo_f * &top, hi: &hi_f * &top }
}

/// For each `ℓ`, whether good reduction of the torus of `E` is guaranteed
/// (`ℓ ∤ disc(E)`).
pub fn good_reduction_primes(disc_e: i64, ells: &[u64]) -> Result<Vec<(u64, bool)>, BoundError> {
    if disc_e == 0 {
        return Err(BoundError::ZeroDiscriminant);
    }
    ells.iter()
        .map(|&l| {
            if !is_prime(l) {
                return Err(BoundError::NotPrime(l));
            }
            Ok((l, disc_e.unsigned_abs() % l != 0))
        })
        .collect()
}

/// Order bounds for `MT(Z/ℓⁿ)` when the CM type is nondegenerate.
pub fn mt_order_bounds_nondegenerate(g: usize, ell: u64, n: u32) -> Interval {
    let g32 = g as u32;
    let top = ell_pow(ell, ((g + 1) * n as usize) as i64);
    if ell == 2 {
        Interval {
            lo: &top / &ell_pow(2, (2 * g + 3) as i64),
            hi: &ell_pow(2, 2 * g as i64 - 1) * &top,
        }
    } else {
        let inv = ell_rat(ell).recip();
        let one = Rational::one();
        Interval {
            lo: &(&one - &inv).pow(g32 + 1) * &top,
            hi: &(&ell_pow(2, g as i64) * &(&one + &inv).pow(g32 - 1)) * &top,
        }
    }
}

/// Same, checking nondegeneracy first.
pub fn checked_mt_order_bounds(r: usize, g: usize, ell: u64, n: u32) -> Result<Interval, BoundError> {
    if r != g + 1 {
        return Err(BoundError::NotNondegenerate { r, g });
    }
    Ok(mt_order_bounds_nondegenerate(g, ell, n))
}

fn int(n: impl Into<BigInt>) -> Rational {
    Rational::integer(n.into())
}

/// Index bounds: `G` in `MT`, `MT(Z_ℓ)` over `G ∩ MT(Z_ℓ)` (universal,
/// sharper intermediate, divisibility), and the mod-`ℓ` divisibility.
pub fn index_bounds(ctx: &BoundContext) -> Vec<BoundEntry> {
    let f = &ctx.order_f;
    let mu_star = BigInt::from(ctx.mu_star);
    let deg = BigInt::from(ctx.k_over_estar);
    let mut out = Vec::new();

    out.push(BoundEntry::new("index-galois-in-mt", ClaimKind::UpperBound, vec![], || {
        Payload::UpperBound { bound: int(BigInt::from(ctx.mu_e) * ctx.h_k) }
    }));

    out.push(BoundEntry::new("index-mt-universal", ClaimKind::UpperBound, vec![], || {
        Payload::UpperBound { bound: int(&mu_star * &deg * f.pow(2 * ctx.r as u32)) }
    }));

    let mut sharp = BoundEntry::new("index-mt-universal-sharp", ClaimKind::UpperBound, vec![], || {
        let (v, _) = ellpart(f, ctx.ell).expect("validated context");
        let factor = f * BigInt::from(ctx.ell).pow(v);
        Payload::UpperBound { bound: int(&mu_star * &deg * factor.pow(ctx.r as u32)) }
    });
    sharp.informational = true;
    out.push(sharp);

    let mut unmet = Vec::new();
    if !ctx.flags.unramified_e {
        unmet.push("l unramified in E".to_string());
    }
    if ctx.ell_divides_order_f() {
        unmet.push("l does not divide |F|".to_string());
    }
    let modulus = if ctx.flags.unramified_k { &mu_star * f } else { &mu_star * &deg * f };
    out.push(divisibility_entry("index-mt-divisibility", unmet, modulus));

    let mut unmet = Vec::new();
    if !ctx.flags.unramified_e {
        unmet.push("l unramified in E".to_string());
    }
    if !ctx.flags.good_reduction {
        unmet.push("good reduction at l".to_string());
    }
    let modulus = if ctx.flags.unramified_k { f.clone() } else { &deg * f };
    out.push(divisibility_entry("index-mod-ell", unmet, modulus));
    out
}

fn divisibility_entry(id: &str, unmet: Vec<String>, modulus: BigInt) -> BoundEntry {
    let kind = if modulus.is_one() { ClaimKind::Equality } else { ClaimKind::Divisibility };
    BoundEntry::new(id, kind, unmet, || Payload::Divides { modulus: int(modulus) })
}

/// `MT(Z/ℓⁿ)` order bounds that apply to `ctx`, nondegenerate case first.
fn mt_order_entries(ctx: &BoundContext) -> (BoundEntry, BoundEntry) {
    let nondeg = {
        let unmet = if ctx.nondegenerate() {
            vec![]
        } else {
            vec![format!("nondegenerate type (r = g + 1 = {})", ctx.g + 1)]
        };
        BoundEntry::new("mt-order-nondegenerate", ClaimKind::Interval, unmet, || {
            mt_order_bounds_nondegenerate(ctx.g, ctx.ell, ctx.n).into_payload()
        })
    };
    let unram = {
        let unmet = if ctx.flags.unramified_e { vec![] } else { vec!["l unramified in E".to_string()] };
        BoundEntry::new("mt-order-unramified", ClaimKind::Interval, unmet, || {
            good_reduction_torus_bounds(ctx.r, ctx.ell, ctx.n).into_payload()
        })
    };
    (nondeg, unram)
}

/// Bounds on `[K(A[ℓⁿ]) : K]`: the Mumford–Tate order bound divided by the
/// best applicable index bound from below, times `|μ(E)| h(K)` from above.
///
/// The order bound is the nondegenerate one when the type is
/// nondegenerate, else the unramified one. The index bound is the
/// divisibility modulus when it applies, else the universal bound.
pub fn division_field_bounds(ctx: &BoundContext) -> BoundEntry {
    let (nondeg, unram) = mt_order_entries(ctx);
    let index = index_bounds(ctx);
    let order = [&nondeg, &unram].into_iter().find(|e| e.preconditions_met);
    let Some(order) = order else {
        return BoundEntry::new(
            "division-field-degree",
            ClaimKind::Interval,
            vec!["nondegenerate type or l unramified in E".to_string()],
            || Payload::NotApplicable,
        );
    };
    let (lo, hi) = order.interval().expect("interval payload");
    let (lo, hi) = (lo.lo.clone(), hi.hi.clone());

    let divisibility = index.iter().find(|e| e.claim_id == "index-mt-divisibility").unwrap();
    let (index_claim, index_bound) = match divisibility.modulus() {
        Some(m) => (divisibility, m.clone()),
        None => {
            let u = index.iter().find(|e| e.claim_id == "index-mt-universal").unwrap();
            (u, u.upper_bound().unwrap().clone())
        }
    };
    let galois = int(BigInt::from(ctx.mu_e) * ctx.h_k);

    let lower_raw = &lo / &index_bound;
    let upper_raw = &hi * &galois;
    let lower = int(lower_raw.ceil().max(BigInt::one()));
    let upper = int(upper_raw.floor());
    // index 1 forces the degree when the group sits inside MT(Z_ℓ)
    let exact = match (&ctx.mt_order, index_bound.is_one()) {
        (Some(m), true) => Some(int(m.clone())),
        _ => None,
    };
    BoundEntry::new("division-field-degree", ClaimKind::Interval, vec![], || Payload::Degree {
        lower_raw,
        lower,
        upper_raw,
        upper,
        exact,
        order_claim: order.claim_id.clone(),
        index_claim: index_claim.claim_id.clone(),
    })
}

/// Every claim for `ctx`, applicable or not, in a fixed order.
pub fn bound_report(ctx: &BoundContext) -> Result<BoundReport, BoundError> {
    ctx.validate()?;
    let mut entries = vec![rank_degree_bounds(ctx)];
    let (nondeg, unram) = mt_order_entries(ctx);
    entries.push(unram);
    entries.push(nondeg);
    if let Some(d) = ctx.dim_t {
        let unmet = if ctx.flags.good_reduction { vec![] } else { vec!["good reduction at l".to_string()] };
        entries.push(BoundEntry::new("torus-order-good-reduction", ClaimKind::Interval, unmet, || {
            good_reduction_torus_bounds(d, ctx.ell, ctx.n).into_payload()
        }));
    }
    entries.extend(index_bounds(ctx));
    entries.push(division_field_bounds(ctx));
    Ok(BoundReport { entries })
}
