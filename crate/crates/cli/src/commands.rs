//! Dispatch from a command and its configuration to a report.

use cm_torus::bounds::{
    bound_report, good_reduction_primes, good_reduction_torus_bounds, mt_order_bounds_nondegenerate, BoundEntry,
    Interval, Payload,
};
use cm_torus::cm::CmType;
use cm_torus::family::family_report;
use cm_torus::lattice::{hadamard_max_det, mt_invariants, reflex_norm_matrix, HadamardMode};
use cm_torus::rational::Rational;
use cm_torus::torus::{cartan_and_normalizer, filtration_orders, FiniteRing};
use serde::Serialize;
use serde_json::json;

use crate::config::{ConfigError, ConfigFile, Resolver, RingBlock};
use crate::error::CliError;
use crate::report::{
    EntryResult, EnumerationView, Entry, MembershipView, MtView, RatioGrowthView, ReflexView, Report, Status,
};
use crate::selftest::{self, FixtureSource};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    Reflex,
    Rank,
    Bounds,
    EnumerateMt,
    EnumerateHg,
    Psi,
    Filtration,
    Cartan,
    Family { p: Option<u64>, sweep: Option<(u64, u64)> },
    Hadamard { n: usize, mode: HadamardMode },
    Selftest { fixtures: Option<String> },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Reflex => "reflex",
            Command::Rank => "rank",
            Command::Bounds => "bounds",
            Command::EnumerateMt => "enumerate-mt",
            Command::EnumerateHg => "enumerate-hg",
            Command::Psi => "psi",
            Command::Filtration => "filtration",
            Command::Cartan => "cartan",
            Command::Family { .. } => "family",
            Command::Hadamard { .. } => "hadamard",
            Command::Selftest { .. } => "selftest",
        }
    }

    fn needs_config(&self) -> bool {
        !matches!(self, Command::Family { .. } | Command::Hadamard { .. } | Command::Selftest { .. })
    }
}

/// A parsed configuration together with the name used in error messages.
pub struct Input<'a> {
    pub file: &'a ConfigFile,
    pub source_name: &'a str,
}

pub fn run(command: &Command, input: Option<Input<'_>>) -> Result<Report, CliError> {
    let echo = json!({
        "args": command,
        "config": input.as_ref().map(|i| i.file.echo()),
    });
    let entries = match (command.needs_config(), &input) {
        (true, None) => {
            return Err(ConfigError::new("<none>", None, format!("`{}` needs --config", command.name())).into())
        }
        (true, Some(i)) => {
            let r = Resolver::new(i.file, i.source_name);
            match command {
                Command::Reflex => reflex(&r)?,
                Command::Rank => rank(&r)?,
                Command::Bounds => bounds(&r)?,
                Command::EnumerateMt => enumerate(&r, true)?,
                Command::EnumerateHg => enumerate(&r, false)?,
                Command::Psi => psi(&r)?,
                Command::Filtration => filtration(&r)?,
                Command::Cartan => cartan(&r)?,
                _ => unreachable!("commands without config handled below"),
            }
        }
        (false, _) => match command {
            Command::Family { p, sweep } => family(*p, *sweep)?,
            Command::Hadamard { n, mode } => {
                let res = hadamard_max_det(*n, *mode)?;
                vec![Entry::new("hadamard-max-det", Status::Ok, EntryResult::Hadamard(res))]
            }
            Command::Selftest { fixtures } => {
                let source = match fixtures {
                    Some(dir) => FixtureSource::Directory(dir.into()),
                    None => FixtureSource::Embedded,
                };
                selftest::run_all(&selftest::Harness::new(source))
                    .into_iter()
                    .map(|o| o.entry())
                    .collect()
            }
            _ => unreachable!("commands with config handled above"),
        },
    };
    Ok(Report::new(command.name(), echo, entries))
}

fn labels(t: &CmType, xs: &[usize]) -> Vec<String> {
    xs.iter().map(|&x| t.datum().group().label(x).to_string()).collect()
}

fn mt_view(t: &CmType) -> Result<MtView, CliError> {
    let m = reflex_norm_matrix(&t.reflex()?);
    let inv = mt_invariants(&m, t.datum().g())?;
    Ok(MtView::new(t.s_labels(), t.is_simple(), &inv))
}

fn reflex(r: &Resolver<'_>) -> Result<Vec<Entry>, CliError> {
    let t = r.cm_type()?;
    let reflex = t.reflex()?;
    let m = reflex_norm_matrix(&reflex);
    let view = ReflexView {
        s: t.s_labels(),
        s_tilde: labels(&t, t.s_tilde()),
        simple: t.is_simple(),
        left_stabilizer: labels(&t, &t.left_stabilizer()),
        h_prime: labels(&t, reflex.h_prime().members()),
        r: reflex.r_labels(),
        reflex_degree: reflex.degree(),
        row_labels: m.row_labels.clone(),
        col_labels: m.col_labels.clone(),
        matrix: m.entries.to_i64_rows().expect("0/1 entries"),
        column_sums: m.column_sums().iter().map(|v| i64::try_from(v).expect("small")).collect(),
    };
    Ok(vec![
        Entry::new("reflex-norm-matrix", Status::Ok, EntryResult::Reflex(view)),
        Entry::new("component-group-order", Status::Ok, EntryResult::MtInvariants(mt_view(&t)?)),
    ])
}

fn rank(r: &Resolver<'_>) -> Result<Vec<Entry>, CliError> {
    r.cm_types()?
        .iter()
        .map(|t| Ok(Entry::new("mt-rank", Status::Ok, EntryResult::MtInvariants(mt_view(t)?))))
        .collect()
}

fn bound_status(b: &BoundEntry) -> Status {
    if b.preconditions_met {
        Status::Ok
    } else {
        Status::NotApplicable
    }
}

fn membership(claim: &str, quantity: &str, value: Rational, interval: Interval) -> Entry {
    let contains = interval.contains(&value);
    let status = if contains { Status::Ok } else { Status::Violation };
    Entry::new(
        claim,
        status,
        EntryResult::Membership(MembershipView { quantity: quantity.to_string(), value, interval, contains }),
    )
}

fn bounds(r: &Resolver<'_>) -> Result<Vec<Entry>, CliError> {
    let lattice = match r.file.cm {
        Some(_) => {
            let v = mt_view(&r.cm_type()?)?;
            Some((v.g, v.rank, v.order_f.numer().clone()))
        }
        None => None,
    };
    let ctx = r.context(lattice)?;
    let report = bound_report(&ctx)?;
    let mut out: Vec<Entry> = report
        .entries
        .iter()
        .map(|b| Entry::new(&b.claim_id, bound_status(b), EntryResult::Bound(b.clone())))
        .collect();

    let block = r.file.context.as_ref().expect("resolved above");
    if let Some(disc) = block.disc_e {
        for (ell, good) in good_reduction_primes(disc, &[ctx.ell])? {
            out.push(Entry::new(
                "good-reduction-prime",
                Status::Ok,
                EntryResult::GoodReduction { disc_e: disc, ell, good },
            ));
        }
    }
    // a known |MT(Z/l^n)| must sit inside every applicable order interval
    if let Some(m) = &ctx.mt_order {
        let value = Rational::integer(m.clone());
        for b in &report.entries {
            if !b.claim_id.starts_with("mt-order-") || !b.preconditions_met {
                continue;
            }
            if let Payload::Interval { lower, upper } = &b.payload {
                let interval = Interval { lo: lower.lo.clone(), hi: upper.hi.clone() };
                out.push(membership(&b.claim_id, "|MT(Z/l^n)|", value.clone(), interval));
            }
        }
    }
    Ok(out)
}

pub fn build_ring(b: &RingBlock, r: &Resolver<'_>) -> Result<FiniteRing, CliError> {
    FiniteRing::new(b.ell, b.level, &b.modulus, &b.tau).map_err(|e| match CliError::from(e) {
        CliError::Input(m) => CliError::Config(ConfigError::new(r.source_name, Some("ring"), m)),
        other => other.context("ring"),
    })
}

fn enumerate(r: &Resolver<'_>, mt: bool) -> Result<Vec<Entry>, CliError> {
    let b = r.ring()?;
    let ring = build_ring(b, r)?;
    let counts = ring.counts();
    let view = EnumerationView {
        ell: ring.ell(),
        level: ring.level(),
        degree: ring.degree(),
        ring_size: ring.size() as u64,
        units: counts.units,
        hodge_order: (!mt).then_some(counts.hodge),
        mt_order: mt.then_some(counts.mt),
    };
    let claim = if mt { "mt-order-enumerated" } else { "hodge-order" };
    let mut out = vec![Entry::new(claim, Status::Ok, EntryResult::Enumeration(view))];

    let d = ring.degree();
    if ring.separable_mod_ell() {
        let interval = good_reduction_torus_bounds(d, ring.ell(), ring.level());
        out.push(membership("torus-order-good-reduction", "units", Rational::integer(counts.units), interval));
    }
    if mt && b.nondegenerate {
        if d % 2 != 0 {
            return Err(CliError::Config(ConfigError::new(
                r.source_name,
                Some("ring.nondegenerate"),
                "a CM algebra has even degree",
            )));
        }
        let interval = mt_order_bounds_nondegenerate(d / 2, ring.ell(), ring.level());
        out.push(membership("mt-order-nondegenerate", "|MT|", Rational::integer(counts.mt), interval));
    }
    Ok(out)
}

fn psi(r: &Resolver<'_>) -> Result<Vec<Entry>, CliError> {
    let ring = build_ring(r.ring()?, r)?;
    let a = ring.psi_analysis()?;
    let status = if a.dichotomy_checked { Status::Ok } else { Status::Flagged };
    Ok(vec![Entry::new("psi-image-index", status, EntryResult::Psi(a))])
}

fn filtration(r: &Resolver<'_>) -> Result<Vec<Entry>, CliError> {
    let rep = filtration_orders(&r.filtration()?)?;
    let status = if rep.matches_expected { Status::Ok } else { Status::Violation };
    Ok(vec![Entry::new("filtration-quotients", status, EntryResult::Filtration(rep))])
}

fn cartan(r: &Resolver<'_>) -> Result<Vec<Entry>, CliError> {
    let rep = cartan_and_normalizer(&r.cartan()?)?;
    let status = match (rep.index_is_two && rep.witness_in_normalizer, rep.excluded) {
        (true, _) => Status::Ok,
        (false, true) => Status::Flagged,
        (false, false) => Status::Violation,
    };
    Ok(vec![Entry::new("cartan-normalizer-index", status, EntryResult::Cartan(rep))])
}

fn family(p: Option<u64>, sweep: Option<(u64, u64)>) -> Result<Vec<Entry>, CliError> {
    let primes: Vec<u64> = match (p, sweep) {
        (Some(p), None) => vec![p],
        (None, Some((a, b))) => (a.max(3)..=b).filter(|&q| cm_torus::arith::is_prime(q)).collect(),
        _ => return Err(CliError::Input("give exactly one of --p and --sweep".into())),
    };
    if primes.is_empty() {
        return Err(CliError::Input("the sweep contains no odd prime".into()));
    }
    let reports = primes.iter().map(|&q| family_report(q)).collect::<Result<Vec<_>, _>>()?;
    let mut out: Vec<Entry> = reports
        .iter()
        .map(|f| {
            let status = if f.nondegenerate { Status::Ok } else { Status::Violation };
            Entry::new("family-rank", status, EntryResult::Family(f.clone()))
        })
        .collect();
    if reports.len() > 1 {
        let ratios: Vec<Rational> = reports.iter().map(|f| f.ratio.clone()).collect();
        let strictly_increasing = ratios.windows(2).all(|w| w[0] < w[1]);
        let status = if strictly_increasing { Status::Ok } else { Status::Violation };
        out.push(Entry::new(
            "family-ratio",
            status,
            EntryResult::RatioGrowth(RatioGrowthView { primes, ratios, strictly_increasing }),
        ));
    }
    Ok(out)
}
