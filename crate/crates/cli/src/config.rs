//! Run configuration files.
//!
//! A configuration is a TOML document with one table per input block:
//!
//! ```toml
//! [group]
//! cyclotomic = 5                 # or: labels = [...] and table = [[...], ...]
//!
//! [cm]
//! h = ["e"]                      # members of H, default: trivial subgroup
//! tau = "4"                      # default: "-1" for cyclotomic groups
//! s = ["1", "2"]                 # the CM type, as labels of H\G
//!
//! [context]                      # arithmetic context for `bounds`
//! ell = 3
//! n = 1
//! hK = 1
//! muE = 10
//! K_over_Estar = 2
//! flags = ["unramified_E", "good_reduction"]
//!
//! [ring]                         # (Z/ell^N)[x]/(f) with tau: x -> t(x)
//! ell = 3
//! N = 1
//! modulus = [1, 0, 1]            # coefficients, constant term first
//! tau = [0, -1]
//!
//! [filtration]
//! ell = 3
//! N = 5
//! d = -1
//! k_max = 2
//!
//! [cartan]
//! c = 0
//! d = -1
//! ell = 3
//! n = 1
//! ```
//!
//! Unknown keys are rejected. Errors carry the line and the offending field.

use std::fmt;
use std::path::Path;
use std::sync::Arc;

use cm_torus::bounds::{BoundContext, BoundFlags};
use cm_torus::cm::{CmDatum, CmType};
use cm_torus::group::{GroupTable, Subgroup};
use cm_torus::torus::{CartanDatum, FiltrationSpec};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ConfigError {
    pub source_name: String,
    pub line: Option<usize>,
    pub field: Option<String>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.source_name)?;
        if let Some(line) = self.line {
            write!(f, ":{line}")?;
        }
        if let Some(field) = &self.field {
            write!(f, " [{field}]")?;
        }
        write!(f, ": {}", self.message)
    }
}

impl ConfigError {
    pub fn new(source_name: &str, field: Option<&str>, message: impl Into<String>) -> Self {
        ConfigError {
            source_name: source_name.to_string(),
            line: None,
            field: field.map(str::to_string),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupBlock {
    pub cyclotomic: Option<u64>,
    pub labels: Option<Vec<String>>,
    /// `table[i][j]` is the label of `labels[i] * labels[j]`.
    pub table: Option<Vec<Vec<String>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CmBlock {
    pub h: Option<Vec<String>>,
    pub tau: Option<String>,
    pub s: Option<Vec<String>>,
    /// Run over every CM type of the datum instead of `s`.
    #[serde(default)]
    pub all_types: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContextBlock {
    pub ell: u64,
    pub n: u32,
    #[serde(rename = "hK")]
    pub h_k: u64,
    #[serde(rename = "muE")]
    pub mu_e: u64,
    /// Defaults to 1 under good reduction and to `muE` otherwise.
    #[serde(rename = "muStar")]
    pub mu_star: Option<u64>,
    #[serde(rename = "K_over_Estar")]
    pub k_over_estar: u64,
    #[serde(rename = "disc_E")]
    pub disc_e: Option<i64>,
    #[serde(default)]
    pub flags: Vec<String>,
    #[serde(rename = "dimT")]
    pub dim_t: Option<usize>,
    /// Known `|MT(Z/l^n)|`, e.g. from `enumerate-mt`.
    pub mt_order: Option<u64>,
    /// Needed only without a `[cm]` block.
    pub g: Option<usize>,
    pub r: Option<usize>,
    #[serde(rename = "order_F")]
    pub order_f: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingBlock {
    pub ell: u64,
    #[serde(rename = "N")]
    pub level: u32,
    pub modulus: Vec<i64>,
    pub tau: Vec<i64>,
    /// Caller's assertion that the ring carries a nondegenerate CM type;
    /// enables the nondegenerate order bounds.
    #[serde(default)]
    pub nondegenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiltrationBlock {
    pub ell: u64,
    #[serde(rename = "N")]
    pub level: u32,
    pub d: i64,
    pub k_max: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CartanBlock {
    pub c: i64,
    pub d: i64,
    pub ell: u64,
    pub n: u32,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub description: Option<String>,
    pub group: Option<GroupBlock>,
    pub cm: Option<CmBlock>,
    pub context: Option<ContextBlock>,
    pub ring: Option<RingBlock>,
    pub filtration: Option<FiltrationBlock>,
    pub cartan: Option<CartanBlock>,
}

const FLAGS: [&str; 4] = ["unramified_E", "unramified_K", "good_reduction", "ell_divides_F"];

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

/// Backtick-quoted name in a serde message such as "missing field `ell`".
fn quoted_field(message: &str) -> Option<String> {
    let start = message.find('`')? + 1;
    let len = message[start..].find('`')?;
    Some(message[start..start + len].to_string())
}

impl ConfigFile {
    pub fn parse(text: &str, source_name: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e: toml::de::Error| ConfigError {
            source_name: source_name.to_string(),
            line: e.span().map(|s| line_of(text, s.start)),
            field: quoted_field(e.message()),
            message: e.message().trim().to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let name = path.display().to_string();
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::new(&name, None, format!("cannot read file: {e}")))?;
        Self::parse(&text, &name)
    }

    pub fn echo(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("config is serializable")
    }
}

/// Resolves the blocks of a parsed file into library types.
pub struct Resolver<'a> {
    pub file: &'a ConfigFile,
    pub source_name: &'a str,
}

impl<'a> Resolver<'a> {
    pub fn new(file: &'a ConfigFile, source_name: &'a str) -> Self {
        Resolver { file, source_name }
    }

    fn err(&self, field: &str, message: impl Into<String>) -> CliError {
        CliError::Config(ConfigError::new(self.source_name, Some(field), message))
    }

    /// Input errors from the library become configuration errors on `field`.
    fn module<E: Into<CliError>>(&self, field: &str) -> impl Fn(E) -> CliError + '_ {
        let field = field.to_string();
        move |e| match e.into() {
            CliError::Input(m) => self.err(&field, m),
            other => other.context(&field),
        }
    }

    fn missing(&self, block: &str) -> CliError {
        self.err(block, format!("missing [{block}] block"))
    }

    pub fn group(&self) -> Result<Arc<GroupTable>, CliError> {
        let b = self.file.group.as_ref().ok_or_else(|| self.missing("group"))?;
        match (b.cyclotomic, &b.labels, &b.table) {
            (Some(m), None, None) => GroupTable::cyclotomic(m)
                .map(Arc::new)
                .map_err(self.module("group.cyclotomic")),
            (None, Some(labels), Some(table)) => {
                let index = |l: &str| {
                    labels
                        .iter()
                        .position(|x| x == l)
                        .ok_or_else(|| self.err("group.table", format!("unknown label {l:?}")))
                };
                let mul = table
                    .iter()
                    .map(|row| row.iter().map(|l| index(l)).collect::<Result<Vec<_>, _>>())
                    .collect::<Result<Vec<_>, _>>()?;
                GroupTable::from_labelled_table(mul, labels.clone())
                    .map(Arc::new)
                    .map_err(self.module("group.table"))
            }
            _ => Err(self.err("group", "give either `cyclotomic` or both `labels` and `table`")),
        }
    }

    pub fn datum(&self) -> Result<CmDatum, CliError> {
        let group = self.group()?;
        let b = self.file.cm.as_ref().ok_or_else(|| self.missing("cm"))?;
        let h = match &b.h {
            Some(labels) => Subgroup::from_labels(&group, labels)
                .map_err(self.module("cm.h"))?,
            None => group.trivial_subgroup(),
        };
        let tau = match (&b.tau, group.minus_one()) {
            (Some(l), _) => group.element_by_label(l).map_err(self.module("cm.tau"))?,
            (None, Some(m)) => m,
            (None, None) => return Err(self.err("cm.tau", "tau is required for a table group")),
        };
        CmDatum::new(group, h, tau).map_err(self.module("cm"))
    }

    /// The configured CM type, or every CM type when `all_types` is set.
    pub fn cm_types(&self) -> Result<Vec<CmType>, CliError> {
        let datum = self.datum()?;
        let b = self.file.cm.as_ref().expect("checked by datum");
        if b.all_types {
            return datum.enumerate_cm_types().map_err(self.module("cm.all_types"));
        }
        let s = b.s.as_ref().ok_or_else(|| self.err("cm.s", "missing CM type `s`"))?;
        let t = datum.cm_type_from_labels(s).map_err(self.module("cm.s"))?;
        Ok(vec![t])
    }

    pub fn cm_type(&self) -> Result<CmType, CliError> {
        let types = self.cm_types()?;
        match <[CmType; 1]>::try_from(types) {
            Ok([t]) => Ok(t),
            Err(_) => Err(self.err("cm.all_types", "this command takes a single CM type")),
        }
    }

    /// Context for the bound engine. `lattice` supplies `(g, r, |F|)` when
    /// the file has a CM block.
    pub fn context(&self, lattice: Option<(usize, usize, BigInt)>) -> Result<BoundContext, CliError> {
        let b = self.file.context.as_ref().ok_or_else(|| self.missing("context"))?;
        for f in &b.flags {
            if !FLAGS.contains(&f.as_str()) {
                return Err(self.err("context.flags", format!("unknown flag {f:?}; known: {FLAGS:?}")));
            }
        }
        let has = |f: &str| b.flags.iter().any(|x| x == f);
        let flags = BoundFlags {
            unramified_e: has("unramified_E"),
            unramified_k: has("unramified_K"),
            good_reduction: has("good_reduction"),
        };
        let (g, r, order_f) = match lattice {
            Some(t) => t,
            None => {
                let need = |v: Option<usize>, k: &str| v.ok_or_else(|| self.err(&format!("context.{k}"), "required without a [cm] block"));
                (
                    need(b.g, "g")?,
                    need(b.r, "r")?,
                    BigInt::from(b.order_f.ok_or_else(|| self.err("context.order_F", "required without a [cm] block"))?),
                )
            }
        };
        let mu_star = b.mu_star.unwrap_or(if flags.good_reduction { 1 } else { b.mu_e });
        let ctx = BoundContext {
            g,
            r,
            order_f,
            ell: b.ell,
            n: b.n,
            h_k: b.h_k,
            mu_e: b.mu_e,
            mu_star,
            k_over_estar: b.k_over_estar,
            flags,
            dim_t: b.dim_t,
            mt_order: b.mt_order.map(BigInt::from),
        };
        if has("ell_divides_F") != ctx.ell_divides_order_f() {
            return Err(self.err(
                "context.flags",
                format!("flag ell_divides_F contradicts |F| = {} and ell = {}", ctx.order_f, ctx.ell),
            ));
        }
        ctx.validate().map_err(self.module("context"))?;
        Ok(ctx)
    }

    pub fn ring(&self) -> Result<&RingBlock, CliError> {
        self.file.ring.as_ref().ok_or_else(|| self.missing("ring"))
    }

    pub fn filtration(&self) -> Result<FiltrationSpec, CliError> {
        let b = self.file.filtration.as_ref().ok_or_else(|| self.missing("filtration"))?;
        Ok(FiltrationSpec { ell: b.ell, level: b.level, d: b.d, k_max: b.k_max })
    }

    pub fn cartan(&self) -> Result<CartanDatum, CliError> {
        let b = self.file.cartan.as_ref().ok_or_else(|| self.missing("cartan"))?;
        Ok(CartanDatum { c: b.c, d: b.d, ell: b.ell, n: b.n })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_errors_carry_line_and_field() {
        let text = "[ring]\nell = 3\nN = 1\nmodulus = [1, 0, 1]\n";
        let e = ConfigFile::parse(text, "x.toml").unwrap_err();
        assert_eq!(e.field.as_deref(), Some("tau"));
        assert!(e.line.is_some());

        let e = ConfigFile::parse("[ring]\nell = \"three\"\n", "x.toml").unwrap_err();
        assert_eq!(e.line, Some(2));

        let e = ConfigFile::parse("[rings]\n", "x.toml").unwrap_err();
        assert_eq!(e.line, Some(1));
    }

    #[test]
    fn resolves_cyclotomic_datum() {
        let f = ConfigFile::parse("[group]\ncyclotomic = 5\n[cm]\ns = [\"1\", \"2\"]\n", "x").unwrap();
        let r = Resolver::new(&f, "x");
        let t = r.cm_type().unwrap();
        assert_eq!(t.s_labels(), vec!["1", "2"]);
        assert!(r.ring().is_err());
    }

    #[test]
    fn context_flag_checks() {
        let text = "[context]\nell = 3\nn = 1\nhK = 1\nmuE = 4\nK_over_Estar = 1\nflags = [\"ell_divides_F\"]\ng = 1\nr = 2\norder_F = 1\n";
        let f = ConfigFile::parse(text, "x").unwrap();
        match Resolver::new(&f, "x").context(None).unwrap_err() {
            CliError::Config(e) => assert_eq!(e.field.as_deref(), Some("context.flags")),
            e => panic!("unexpected {e:?}"),
        }

        let text = text.replace("ell_divides_F", "good_reduction");
        let f = ConfigFile::parse(&text, "x").unwrap();
        let ctx = Resolver::new(&f, "x").context(None).unwrap();
        assert_eq!(ctx.mu_star, 1);
        assert!(ctx.flags.good_reduction);
    }
}
