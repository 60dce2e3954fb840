//! Built-in acceptance suite.
//!
//! Each criterion recomputes its expected values with an oracle that does
//! not share code with the path under test wherever that is feasible
//! (closed-form bounds written out again, gcd of minors by cofactor
//! expansion, literal published values). Failures are reported, not
//! raised.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use cm_torus::bounds::{mt_order_bounds_nondegenerate, Payload};
use cm_torus::cm::{CmDatum, CmType};
use cm_torus::family::family_report;
use cm_torus::lattice::{
    elementary_divisors, f_bound, hadamard_max_det, reflex_norm_matrix, HadamardMode, IntMatrix,
};
use cm_torus::rational::Rational;
use cm_torus::torus::{cartan_and_normalizer, filtration_orders, CartanDatum, FiniteRing};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::commands::{self, Command, Input};
use crate::config::{ConfigError, ConfigFile, Resolver};
use crate::error::CliError;
use crate::report::{CriterionView, Entry, EntryResult, Status};

macro_rules! fixtures {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../fixtures/", $name)))),*]
    };
}

/// Checked-in fixtures, embedded at build time.
pub const EMBEDDED: &[(&str, &str)] = fixtures![
    "quadratic.toml",
    "c4.toml",
    "d4.toml",
    "cyclo5.toml",
    "cyclo8_degenerate.toml",
    "cyclo13_all.toml",
    "ring_f9.toml",
    "ring_f9_n2.toml",
    "ring_phi5_n1.toml",
    "ring_phi5_n2.toml",
    "ring_split5.toml",
    "ring_split_identity.toml",
    "filtration_unramified.toml",
    "filtration_ramified.toml",
    "cartan_gaussian.toml",
    "cartan_eisenstein.toml",
    "bounds_quartic_l3n1.toml",
    "bounds_quartic_l5n2.toml",
    "bounds_quadratic_equality.toml",
];

#[derive(Debug, Clone)]
pub enum FixtureSource {
    Embedded,
    Directory(PathBuf),
}

pub struct Harness {
    pub source: FixtureSource,
    /// The `f` under test; replaceable to check the suite's sensitivity.
    pub f_bound: fn(u64) -> BigUint,
}

impl Harness {
    pub fn new(source: FixtureSource) -> Self {
        Harness { source, f_bound }
    }

    pub fn with_f_bound(mut self, f: fn(u64) -> BigUint) -> Self {
        self.f_bound = f;
        self
    }

    pub fn fixture(&self, name: &str) -> Result<ConfigFile, ConfigError> {
        match &self.source {
            FixtureSource::Embedded => {
                let (_, text) = EMBEDDED
                    .iter()
                    .find(|(n, _)| *n == name)
                    .ok_or_else(|| ConfigError::new(name, None, "no such embedded fixture"))?;
                ConfigFile::parse(text, name)
            }
            FixtureSource::Directory(dir) => ConfigFile::load(&dir.join(name)),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub number: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub budget: Option<Duration>,
}

impl Outcome {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} {:<28} {}  ({:.1} ms)",
            self.number,
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.elapsed.as_secs_f64() * 1e3
        )
    }

    pub fn entry(&self) -> Entry {
        let status = if self.passed { Status::Ok } else { Status::Violation };
        Entry::new(
            "selftest-criterion",
            status,
            EntryResult::Criterion(CriterionView {
                number: self.number,
                name: self.name.to_string(),
                passed: self.passed,
                detail: self.detail.clone(),
            }),
        )
    }
}

type Check = Result<String, String>;

struct Criterion {
    number: u32,
    name: &'static str,
    budget: Option<Duration>,
    run: fn(&Harness) -> Check,
}

const fn ms(n: u64) -> Option<Duration> {
    Some(Duration::from_millis(n))
}

const CRITERIA: &[Criterion] = &[
    Criterion { number: 1, name: "f-table", budget: ms(1), run: f_table },
    Criterion { number: 2, name: "cyclotomic-family-ranks", budget: ms(1_000), run: family_ranks },
    Criterion { number: 3, name: "hadamard", budget: ms(10_000), run: hadamard },
    Criterion { number: 4, name: "torsion-bound-corpus", budget: ms(30_000), run: torsion_corpus },
    Criterion { number: 5, name: "low-dimension-torsion", budget: None, run: low_dimension },
    Criterion { number: 6, name: "mt-order-envelope", budget: ms(60_000), run: mt_envelope },
    Criterion { number: 7, name: "filtration", budget: ms(10_000), run: filtration },
    Criterion { number: 8, name: "psi-dichotomy", budget: None, run: psi_dichotomy },
    Criterion { number: 9, name: "cartan-normalizer", budget: ms(120_000), run: cartan },
    Criterion { number: 10, name: "snf-minors", budget: None, run: snf_minors },
    Criterion { number: 11, name: "bound-regression", budget: None, run: bound_regression },
];

pub const CRITERION_COUNT: u32 = CRITERIA.len() as u32;

/// Runs criterion `number` (1-based). Panics on an unknown number.
pub fn run_criterion(h: &Harness, number: u32) -> Outcome {
    let c = CRITERIA.iter().find(|c| c.number == number).expect("criterion number");
    let start = Instant::now();
    let result = (c.run)(h);
    let elapsed = start.elapsed();
    let (mut passed, mut detail) = match result {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    if let Some(b) = c.budget {
        if elapsed > b {
            passed = false;
            detail = format!("over the {} ms budget; {detail}", b.as_millis());
        }
    }
    Outcome { number, name: c.name, passed, detail, elapsed, budget: c.budget }
}

pub fn run_all(h: &Harness) -> Vec<Outcome> {
    CRITERIA.iter().map(|c| run_criterion(h, c.number)).collect()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn load(h: &Harness, name: &str) -> Result<ConfigFile, String> {
    h.fixture(name).map_err(|e| CliError::from(e).to_string())
}

fn f_table(h: &Harness) -> Check {
    let expected: [(u64, u64); 5] = [(3, 2), (4, 3), (5, 6), (6, 14), (7, 32)];
    for (x, want) in expected {
        let got = (h.f_bound)(x);
        ensure(got == BigUint::from(want), || format!("f({x}) = {got}, expected {want}"))?;
    }
    Ok("f(3..=7) = 2, 3, 6, 14, 32".into())
}

fn family_ranks(_: &Harness) -> Check {
    let mut ranks = Vec::new();
    for p in [3u64, 5, 7, 11, 13, 17, 19, 23] {
        let r = family_report(p).map_err(|e| format!("p = {p}: {e}"))?;
        let want = ((p + 1) / 2) as usize;
        ensure(r.rank == want && r.nondegenerate, || {
            format!("p = {p}: rank {} nondegenerate {}, expected rank {want}", r.rank, r.nondegenerate)
        })?;
        ranks.push(r.rank.to_string());
    }
    Ok(format!("ranks {}", ranks.join(", ")))
}

fn hadamard(h: &Harness) -> Check {
    let mut maxima = Vec::new();
    for (n, want) in [(1usize, 1u64), (2, 1), (3, 2), (4, 3)] {
        let r = hadamard_max_det(n, HadamardMode::Exhaustive).map_err(|e| e.to_string())?;
        let bound = (h.f_bound)(n as u64);
        ensure(r.max_abs_det == want, || format!("n = {n}: max |det| = {}, expected {want}", r.max_abs_det))?;
        ensure(BigUint::from(r.max_abs_det) <= bound, || {
            format!("n = {n}: max |det| = {} exceeds f(n) = {bound}", r.max_abs_det)
        })?;
        maxima.push(r.max_abs_det.to_string());
    }
    Ok(format!("max |det| for n = 1..4: {}", maxima.join(", ")))
}

struct Torsion {
    rank: usize,
    order: BigInt,
}

/// Checks 0/1 entries and computes rank and torsion order directly from
/// the Smith form, bypassing the library's own bound check.
fn torsion(t: &CmType) -> Result<Torsion, String> {
    let m = reflex_norm_matrix(&t.reflex().map_err(|e| e.to_string())?);
    let rows = m.entries.to_i64_rows().ok_or("entry out of range")?;
    ensure(rows.iter().flatten().all(|&v| v == 0 || v == 1), || {
        format!("type {:?}: entries outside {{0, 1}}", t.s_labels())
    })?;
    let snf = elementary_divisors(&m.entries);
    Ok(Torsion { rank: snf.rank, order: snf.torsion_order() })
}

fn torsion_corpus(h: &Harness) -> Check {
    let mut total = 0usize;
    for m in [5u64, 7, 8, 9, 11, 12, 13] {
        let datum = CmDatum::cyclotomic(m).map_err(|e| e.to_string())?;
        let types = datum.enumerate_cm_types().map_err(|e| e.to_string())?;
        let g = datum.g();
        ensure(types.len() == 1 << g, || format!("m = {m}: {} types, expected 2^{g}", types.len()))?;
        for t in &types {
            let tor = torsion(t)?;
            ensure(tor.rank <= g + 1, || format!("m = {m}, S = {:?}: rank {} > g + 1", t.s_labels(), tor.rank))?;
            let bound = BigInt::from((h.f_bound)(tor.rank.max(1) as u64));
            ensure(tor.order <= bound, || {
                format!("m = {m}, S = {:?}: |F| = {} > f({}) = {bound}", t.s_labels(), tor.order, tor.rank)
            })?;
        }
        total += types.len();
    }
    Ok(format!("{total} CM types checked"))
}

fn fixture_types(h: &Harness, name: &str) -> Result<Vec<CmType>, String> {
    let f = load(h, name)?;
    Resolver::new(&f, name).cm_types().map_err(|e| e.to_string())
}

fn low_dimension(h: &Harness) -> Check {
    let quad = fixture_types(h, "quadratic.toml")?;
    for t in &quad {
        let tor = torsion(t)?;
        ensure(tor.order.is_one(), || format!("quadratic: |F| = {}", tor.order))?;
        let rows = reflex_norm_matrix(&t.reflex().map_err(|e| e.to_string())?).entries;
        ensure(rows == IntMatrix::identity(2), || "quadratic: reflex norm is not the identity".into())?;
    }
    let mut simple = 0usize;
    let mut sources: Vec<(String, Vec<CmType>)> = Vec::new();
    for m in [5u64, 8, 12] {
        let datum = CmDatum::cyclotomic(m).map_err(|e| e.to_string())?;
        sources.push((format!("m = {m}"), datum.enumerate_cm_types().map_err(|e| e.to_string())?));
    }
    for name in ["c4.toml", "d4.toml"] {
        sources.push((name.to_string(), fixture_types(h, name)?));
    }
    for (src, types) in &sources {
        for t in types.iter().filter(|t| t.is_simple()) {
            ensure(t.datum().g() == 2, || format!("{src}: not quartic"))?;
            let tor = torsion(t)?;
            ensure(tor.order.is_one(), || format!("{src}, S = {:?}: |F| = {}", t.s_labels(), tor.order))?;
            ensure(tor.rank == 3, || format!("{src}, S = {:?}: simple but rank {}", t.s_labels(), tor.rank))?;
            simple += 1;
        }
    }
    ensure(simple > 0, || "no simple quartic type found".into())?;
    Ok(format!("quadratic |F| = 1; {simple} simple quartic types with |F| = 1"))
}

fn ring_from(h: &Harness, name: &str) -> Result<(FiniteRing, bool), String> {
    let f = load(h, name)?;
    let r = Resolver::new(&f, name);
    let b = r.ring().map_err(|e| e.to_string())?;
    let ring = commands::build_ring(b, &r).map_err(|e| e.to_string())?;
    Ok((ring, b.nondegenerate))
}

/// `[(1 − 1/ℓ)^{g+1} ℓ^{(g+1)N}, 2^g (1 + 1/ℓ)^{g−1} ℓ^{(g+1)N}]` for odd `ℓ`.
fn envelope(g: u32, ell: u64, n: u32) -> (Rational, Rational) {
    let l = BigInt::from(ell);
    let top = l.pow((g + 1) * n);
    let lo = Rational::new((&l - 1u32).pow(g + 1) * &top, l.pow(g + 1));
    let hi = Rational::new(BigInt::from(2).pow(g) * (&l + 1u32).pow(g - 1) * &top, l.pow(g - 1));
    (lo, hi)
}

fn mt_envelope(h: &Harness) -> Check {
    let cases: [(&str, Option<(u64, (i64, i64))>); 4] = [
        ("ring_f9.toml", Some((8, (4, 18)))),
        ("ring_phi5_n1.toml", None),
        ("ring_phi5_n2.toml", None),
        ("ring_split5.toml", Some((16, (16, 50)))),
    ];
    let mut seen = Vec::new();
    for (name, literal) in cases {
        let (ring, _) = ring_from(h, name)?;
        let g = (ring.degree() / 2) as u32;
        let order = ring.mt_order();
        let (lo, hi) = envelope(g, ring.ell(), ring.level());
        let lib = mt_order_bounds_nondegenerate(g as usize, ring.ell(), ring.level());
        ensure(lib.lo == lo && lib.hi == hi, || {
            format!("{name}: library interval [{}, {}] differs from [{lo}, {hi}]", lib.lo, lib.hi)
        })?;
        if let Some((want, (a, b))) = literal {
            ensure(order == want, || format!("{name}: |MT| = {order}, expected {want}"))?;
            ensure(lo == Rational::integer(a) && hi == Rational::integer(b), || {
                format!("{name}: interval [{lo}, {hi}], expected [{a}, {b}]")
            })?;
        }
        let v = Rational::integer(order);
        ensure(lo <= v && v <= hi, || format!("{name}: |MT| = {order} outside [{lo}, {hi}]"))?;
        seen.push(format!("{order} in [{lo}, {hi}]"));
    }
    Ok(seen.join("; "))
}

fn filtration(h: &Harness) -> Check {
    let mut seen = Vec::new();
    for (name, first) in [("filtration_unramified.toml", 4i64), ("filtration_ramified.toml", 6)] {
        let f = load(h, name)?;
        let spec = Resolver::new(&f, name).filtration().map_err(|e| e.to_string())?;
        let rep = filtration_orders(&spec).map_err(|e| format!("{name}: {e}"))?;
        let want: Vec<Rational> = [first, 3, 3].into_iter().map(Rational::integer).collect();
        ensure(rep.quotients == want, || format!("{name}: quotients {:?}", rep.quotients))?;
        ensure(rep.stable, || format!("{name}: not stable under N -> N+1"))?;
        seen.push(format!("{first}, 3, 3"));
    }
    Ok(format!("quotients [{}]", seen.join("] and [")))
}

const RING_FIXTURES: &[&str] = &[
    "ring_f9.toml",
    "ring_f9_n2.toml",
    "ring_phi5_n1.toml",
    "ring_phi5_n2.toml",
    "ring_split5.toml",
    "ring_split_identity.toml",
];

fn psi_dichotomy(h: &Harness) -> Check {
    let mut indices = Vec::new();
    for name in RING_FIXTURES {
        let (ring, _) = ring_from(h, name)?;
        if ring.ell() == 2 {
            continue;
        }
        let a = ring.psi_analysis().map_err(|e| format!("{name}: {e}"))?;
        ensure(matches!(a.index_im_psi, 1 | 2), || format!("{name}: index {}", a.index_im_psi))?;
        ensure((a.index_im_psi == 1) == a.square_criterion, || {
            format!("{name}: index {} with square criterion {}", a.index_im_psi, a.square_criterion)
        })?;
        if *name == "ring_f9.toml" {
            let got = (
                a.hodge_order,
                a.scalar_order,
                a.kernel_order,
                a.im_psi_order,
                a.mt_order,
                a.index_im_psi,
                a.square_criterion,
            );
            ensure(got == (4, 2, 2, 4, 8, 2, false), || format!("F_9: {got:?}"))?;
        }
        indices.push(format!("{name}: {}", a.index_im_psi));
    }
    Ok(indices.join(", "))
}

fn cartan(h: &Harness) -> Check {
    let mut failures = Vec::new();
    let mut cases = 0;
    for name in ["cartan_gaussian.toml", "cartan_eisenstein.toml"] {
        let f = load(h, name)?;
        let base = Resolver::new(&f, name).cartan().map_err(|e| e.to_string())?;
        for (ell, n) in [(3u64, 1u32), (3, 2), (5, 1), (5, 2), (7, 1)] {
            let datum = CartanDatum { ell, n, ..base.clone() };
            cases += 1;
            let tag = format!("(c, d) = ({}, {}) mod {}", datum.c, datum.d, ell.pow(n));
            match cartan_and_normalizer(&datum) {
                Ok(r) => {
                    let witness = [1 % r.modulus, datum.c.rem_euclid(r.modulus as i64) as u64, 0, r.modulus - 1];
                    if r.index != Rational::integer(2) || !r.witness_in_normalizer || r.witness != witness {
                        failures.push(format!(
                            "{tag}: |N|/|C| = {}/{} = {}, witness in N: {}",
                            r.normalizer_order, r.cartan_order, r.index, r.witness_in_normalizer
                        ));
                    }
                }
                Err(e) => failures.push(format!("{tag}: {e}")),
            }
        }
    }
    if failures.is_empty() {
        Ok(format!("index 2 with witness in all {cases} cases"))
    } else {
        Err(failures.join("; "))
    }
}

/// Determinant by cofactor expansion along the first row.
fn cofactor_det(m: &[Vec<i64>]) -> i64 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .filter(|&j| m[0][j] != 0)
            .map(|j| {
                let minor: Vec<Vec<i64>> =
                    m[1..].iter().map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &v)| v).collect()).collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * cofactor_det(&minor)
            })
            .sum(),
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|b| b.count_ones() as usize == k)
        .map(|b| (0..n).filter(|i| b >> i & 1 == 1).collect())
        .collect()
}

/// gcd of all `k × k` minors.
fn minors_gcd(m: &[Vec<i64>], k: usize) -> i64 {
    let (rows, cols) = (m.len(), m[0].len());
    let mut g = 0i64;
    for rs in subsets(rows, k) {
        for cs in subsets(cols, k) {
            let sub: Vec<Vec<i64>> = rs.iter().map(|&i| cs.iter().map(|&j| m[i][j]).collect()).collect();
            g = g.gcd(&cofactor_det(&sub));
        }
    }
    g
}

fn snf_minors(_: &Harness) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0010);
    for trial in 0..500 {
        let (rows, cols) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
        let m: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(0..=1)).collect()).collect();
        let snf = elementary_divisors(&IntMatrix::from_rows(&m));
        let mut prefix = BigInt::one();
        for k in 1..=rows.min(cols) {
            prefix *= &snf.diag[k - 1];
            let want = BigInt::from(minors_gcd(&m, k));
            ensure(prefix == want || (prefix.is_zero() && want.is_zero()), || {
                format!("trial {trial}: k = {k}, prefix product {prefix}, gcd of minors {want}, matrix {m:?}")
            })?;
        }
    }
    Ok("500 random 0/1 matrices up to 6 x 6".into())
}

fn bounds_report(h: &Harness, name: &str) -> Result<Vec<Entry>, String> {
    let f = load(h, name)?;
    let report = commands::run(&Command::Bounds, Some(Input { file: &f, source_name: name }))
        .map_err(|e| format!("{name}: {e}"))?;
    ensure(!report.has_violation(), || format!("{name}: report contains a violation"))?;
    Ok(report.entries)
}

fn bound_payload<'a>(entries: &'a [Entry], claim: &str) -> Option<&'a Payload> {
    entries.iter().find_map(|e| match &e.result {
        EntryResult::Bound(b) if b.claim_id == claim => Some(&b.payload),
        _ => None,
    })
}

fn bound_regression(h: &Harness) -> Check {
    let mut seen = Vec::new();
    for (name, ell, n, deg) in [("bounds_quartic_l3n1.toml", 3i64, 1u32, 2i64), ("bounds_quartic_l5n2.toml", 5, 2, 2)] {
        let entries = bounds_report(h, name)?;
        // (1 − 1/ℓ)³ ℓ^{3n} / [K:E*] = (ℓ − 1)³ ℓ^{3n − 3} / [K:E*]
        let want = Rational::new(BigInt::from(ell - 1).pow(3) * BigInt::from(ell).pow(3 * n - 3), deg);
        match bound_payload(&entries, "division-field-degree") {
            Some(Payload::Degree { lower_raw, .. }) => {
                ensure(*lower_raw == want, || format!("{name}: lower bound {lower_raw}, expected {want}"))?
            }
            other => return Err(format!("{name}: no degree bound ({other:?})")),
        }
        seen.push(want.to_string());
    }
    let name = "bounds_quadratic_equality.toml";
    let entries = bounds_report(h, name)?;
    match bound_payload(&entries, "index-mt-divisibility") {
        Some(Payload::Divides { modulus }) => {
            ensure(modulus.is_one(), || format!("{name}: modulus {modulus}, expected 1"))?
        }
        other => return Err(format!("{name}: divisibility not applicable ({other:?})")),
    }
    Ok(format!("lower bounds {}; quadratic modulus 1", seen.join(", ")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cofactor_oracle() {
        assert_eq!(cofactor_det(&[vec![1, 1], vec![0, 1]]), 1);
        assert_eq!(cofactor_det(&[vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]), 2);
        assert_eq!(minors_gcd(&[vec![2, 0], vec![0, 4]], 1), 2);
        assert_eq!(minors_gcd(&[vec![2, 0], vec![0, 4]], 2), 8);
    }

    #[test]
    fn envelope_matches_literals() {
        assert_eq!(envelope(1, 3, 1), (Rational::integer(4), Rational::integer(18)));
        assert_eq!(envelope(1, 5, 1), (Rational::integer(16), Rational::integer(50)));
        assert_eq!(envelope(2, 3, 1), (Rational::integer(8), Rational::integer(144)));
    }

    #[test]
    fn embedded_fixtures_parse() {
        for (name, text) in EMBEDDED {
            ConfigFile::parse(text, name).unwrap();
        }
    }
}
