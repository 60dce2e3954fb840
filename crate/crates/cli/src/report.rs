//! Structured reports.
//!
//! JSON layout:
//!
//! ```text
//! { "report": { "tool_version", "command", "input_echo",
//!               "entries": [ { "claim_id", "status", "citation",
//!                              "result": { "type": ..., "data": ... } } ],
//!               "citations": { claim_id: description } },
//!   "timing_ms": n }
//! ```
//!
//! Everything under `report` is deterministic for identical inputs;
//! timing lives outside it.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use cm_torus::bounds::{BoundEntry, Interval, Payload};
use cm_torus::citation;
use cm_torus::family::FamilyReport;
use cm_torus::lattice::{HadamardResult, MtInvariants, ReflexNormMatrix};
use cm_torus::rational::Rational;
use cm_torus::torus::{CartanReport, FiltrationReport, PsiAnalysis};
use serde::{Deserialize, Serialize};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    NotApplicable,
    /// Outside the stated hypotheses; reported without assertion.
    Flagged,
    Violation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReflexView {
    pub s: Vec<String>,
    pub s_tilde: Vec<String>,
    pub simple: bool,
    pub left_stabilizer: Vec<String>,
    pub h_prime: Vec<String>,
    pub r: Vec<String>,
    pub reflex_degree: usize,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub matrix: Vec<Vec<i64>>,
    pub column_sums: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MtView {
    pub s: Vec<String>,
    pub g: usize,
    pub rank: usize,
    pub nondegenerate: bool,
    pub simple: bool,
    pub elementary_divisors: Vec<Rational>,
    pub order_f: Rational,
    pub f_bound: Rational,
}

impl MtView {
    pub fn new(s: Vec<String>, simple: bool, inv: &MtInvariants) -> Self {
        MtView {
            s,
            g: inv.g,
            rank: inv.rank,
            nondegenerate: inv.nondegenerate,
            simple,
            elementary_divisors: inv.elementary_divisors.iter().cloned().map(Rational::integer).collect(),
            order_f: Rational::integer(inv.order_f.clone()),
            f_bound: Rational::integer(num_bigint::BigInt::from(inv.f_bound.clone())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationView {
    pub ell: u64,
    pub level: u32,
    pub degree: usize,
    pub ring_size: u64,
    pub units: u64,
    pub hodge_order: Option<u64>,
    pub mt_order: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipView {
    pub quantity: String,
    pub value: Rational,
    pub interval: Interval,
    pub contains: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionView {
    pub number: u32,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatioGrowthView {
    pub primes: Vec<u64>,
    pub ratios: Vec<Rational>,
    pub strictly_increasing: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", content = "data", rename_all = "kebab-case")]
pub enum EntryResult {
    Reflex(ReflexView),
    MtInvariants(MtView),
    Bound(BoundEntry),
    GoodReduction { disc_e: i64, ell: u64, good: bool },
    Enumeration(EnumerationView),
    Membership(MembershipView),
    Psi(PsiAnalysis),
    Filtration(FiltrationReport),
    Cartan(CartanReport),
    Family(FamilyReport),
    RatioGrowth(RatioGrowthView),
    Hadamard(HadamardResult),
    Criterion(CriterionView),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub claim_id: String,
    pub status: Status,
    pub citation: String,
    pub result: EntryResult,
}

impl Entry {
    /// Panics if `claim_id` is not in the citation table.
    pub fn new(claim_id: &str, status: Status, result: EntryResult) -> Self {
        Entry {
            claim_id: claim_id.to_string(),
            status,
            citation: citation::for_claim(claim_id).to_string(),
            result,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub tool_version: String,
    pub command: String,
    pub input_echo: serde_json::Value,
    pub entries: Vec<Entry>,
    pub citations: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub report: Report,
    pub timing_ms: f64,
}

impl Report {
    pub fn new(command: &str, input_echo: serde_json::Value, entries: Vec<Entry>) -> Self {
        let citations = entries
            .iter()
            .map(|e| (e.claim_id.clone(), e.citation.clone()))
            .collect();
        Report {
            tool_version: TOOL_VERSION.to_string(),
            command: command.to_string(),
            input_echo,
            entries,
            citations,
        }
    }

    pub fn has_violation(&self) -> bool {
        self.entries.iter().any(|e| e.status == Status::Violation)
    }

    /// Serialization of the deterministic section.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is serializable")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("cmtorus {} :: {}\n", self.tool_version, self.command);
        for e in &self.entries {
            let tag = match e.status {
                Status::Ok => "ok",
                Status::NotApplicable => "n/a",
                Status::Flagged => "flagged",
                Status::Violation => "VIOLATION",
            };
            let _ = writeln!(out, "\n[{tag}] {}", e.claim_id);
            for line in render(&e.result).lines() {
                let _ = writeln!(out, "    {line}");
            }
            let _ = writeln!(out, "    ({})", e.citation);
        }
        out
    }
}

impl Envelope {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is serializable")
    }
}

fn list(v: &[String]) -> String {
    format!("{{{}}}", v.join(", "))
}

fn join<T: std::fmt::Display>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

fn render(r: &EntryResult) -> String {
    match r {
        EntryResult::Reflex(v) => {
            let m = ReflexNormMatrix {
                row_labels: v.row_labels.clone(),
                col_labels: v.col_labels.clone(),
                entries: cm_torus::lattice::IntMatrix::from_rows(&v.matrix),
            };
            format!(
                "S = {}  simple = {}\nH' = {}  R = {}  [E*:Q] = {}\n{}",
                list(&v.s),
                v.simple,
                list(&v.h_prime),
                list(&v.r),
                v.reflex_degree,
                m.to_grid()
            )
        }
        EntryResult::MtInvariants(v) => format!(
            "S = {}  simple = {}  g = {}  rank = {}  nondegenerate = {}\nelementary divisors = [{}]  |F| = {}  f(rank) = {}",
            list(&v.s),
            v.simple,
            v.g,
            v.rank,
            v.nondegenerate,
            join(&v.elementary_divisors),
            v.order_f,
            v.f_bound
        ),
        EntryResult::Bound(b) => {
            let head = if b.unmet.is_empty() {
                String::new()
            } else {
                format!("unmet: {}\n", b.unmet.join("; "))
            };
            let body = match &b.payload {
                Payload::Interval { lower, upper } => format!("[{lower}, {upper}]"),
                Payload::UpperBound { bound } => format!("<= {bound}"),
                Payload::Divides { modulus } => format!("divides {modulus}"),
                Payload::Degree { lower_raw, lower, upper_raw, upper, exact, order_claim, index_claim } => {
                    let mut s = format!(
                        "{lower} <= degree <= {upper}  (raw {lower_raw} .. {upper_raw}; from {order_claim}, {index_claim})"
                    );
                    if let Some(e) = exact {
                        let _ = write!(s, "\ndegree = {e}");
                    }
                    s
                }
                Payload::NotApplicable => "not applicable".to_string(),
            };
            format!("{head}{body}{}", if b.informational { "  (informational)" } else { "" })
        }
        EntryResult::GoodReduction { disc_e, ell, good } => {
            format!("disc(E) = {disc_e}, l = {ell}: good reduction {}", if *good { "guaranteed" } else { "not guaranteed" })
        }
        EntryResult::Enumeration(v) => {
            let mut s = format!(
                "l = {}  N = {}  deg f = {}  |ring| = {}  units = {}",
                v.ell, v.level, v.degree, v.ring_size, v.units
            );
            if let Some(h) = v.hodge_order {
                let _ = write!(s, "  |Hg| = {h}");
            }
            if let Some(m) = v.mt_order {
                let _ = write!(s, "  |MT| = {m}");
            }
            s
        }
        EntryResult::Membership(m) => format!(
            "{} = {} in [{}, {}]: {}",
            m.quantity, m.value, m.interval.lo, m.interval.hi, m.contains
        ),
        EntryResult::Psi(p) => format!(
            "(|Hg|, |scalars|, |kernel|, |im Psi|, |MT|, index, square) = ({}, {}, {}, {}, {}, {}, {})",
            p.hodge_order,
            p.scalar_order,
            p.kernel_order,
            p.im_psi_order,
            p.mt_order,
            p.index_im_psi,
            p.square_criterion
        ),
        EntryResult::Filtration(f) => format!(
            "{:?}: |C(k)/C(k+1)| = [{}], expected [{}], stable under N -> N+1",
            f.kind,
            join(&f.quotients),
            join(&f.expected)
        ),
        EntryResult::Cartan(c) => format!(
            "mod {}: |C| = {}  |N| = {}  index = {}  group normalizer = {}\nwitness {:?} in N: {}, in C: {}{}",
            c.modulus,
            c.cartan_order,
            c.normalizer_order,
            c.index,
            c.group_normalizer_order,
            c.witness,
            c.witness_in_normalizer,
            c.witness_in_cartan,
            if c.excluded { "  (l = 2 or l | c^2 + 4d)" } else { "" }
        ),
        EntryResult::Family(f) => format!(
            "p = {}  g = {}  S = {}  rank = {}  nondegenerate = {}  |F| = {}  2-torsion degree = {}  2^r/p = {}",
            f.p,
            f.genus,
            list(&f.s),
            f.rank,
            f.nondegenerate,
            f.order_f,
            f.two_torsion_degree,
            f.ratio
        ),
        EntryResult::RatioGrowth(v) => format!(
            "p = [{}]\n2^r/p = [{}]\nstrictly increasing: {}",
            join(&v.primes),
            join(&v.ratios),
            v.strictly_increasing
        ),
        EntryResult::Hadamard(h) => format!(
            "n = {}  max |det| = {}  bound f(n) = {}  matrices = {}  {}",
            h.n,
            h.max_abs_det,
            h.bound,
            h.matrices_examined,
            if h.exhaustive { "exhaustive" } else { "sampled" }
        ),
        EntryResult::Criterion(c) => format!(
            "criterion {} [{}]: {}\n{}",
            c.number,
            c.name,
            if c.passed { "PASS" } else { "FAIL" },
            c.detail
        ),
    }
}
