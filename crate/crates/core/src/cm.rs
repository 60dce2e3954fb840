//! CM data, CM types and reflex types, modelled purely through the Galois
//! group `G` of the normal closure, the subgroup `H` fixing the CM field and
//! the complex conjugation `τ`.
//!
//! Embeddings of the CM field are the right cosets `H\G`; conjugation acts by
//! right translation `Hg ↦ Hgτ`. The reflex field is represented by its
//! fixing subgroup `H' = { g : S̃g = S̃ }`.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{CosetSpace, GroupError, GroupTable, Subgroup};

/// Largest number of conjugate pairs `enumerate_cm_types` will expand.
pub const MAX_ENUMERATION_PAIRS: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CmError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("tau is not an involution (tau^2 must be the identity and tau must not be)")]
    TauNotInvolution,
    #[error("tau fixes the coset with representative {0}; no CM type exists")]
    TauFixesACoset(String),
    #[error("H\\G has {0} cosets, expected an even number")]
    OddCosetCount(usize),
    #[error("coset index {0} out of range")]
    CosetOutOfRange(usize),
    #[error("S contains the conjugate pair {0} / {1}")]
    NotDisjointFromConjugate(String, String),
    #[error("S and its conjugate do not cover H\\G (|S| = {size}, need {g})")]
    NotCovering { size: usize, g: usize },
    #[error("{pairs} conjugate pairs give 2^{pairs} types; at most {MAX_ENUMERATION_PAIRS} pairs are enumerated")]
    TooLarge { pairs: usize },
    #[error("reflex type is not a CM type for (G, H', tau): {0}")]
    ReflexNotCmType(String),
}

/// A validated triple `(G, H, τ)` admitting CM types.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CmDatum {
    group: Arc<GroupTable>,
    h: Subgroup,
    tau: usize,
    cosets: CosetSpace,
    g: usize,
    /// `pairs[i] = (c, cτ)` with `c < cτ`, sorted by `c`.
    pairs: Vec<(usize, usize)>,
}

/// Checks the involution and fixed-point conditions on `τ` and returns the
/// conjugate pairs of the coset space.
fn conjugate_pairs(
    group: &GroupTable,
    cosets: &CosetSpace,
    tau: usize,
) -> Result<Vec<(usize, usize)>, CmError> {
    if tau == group.identity() || group.mul(tau, tau) != group.identity() {
        return Err(CmError::TauNotInvolution);
    }
    if cosets.len() % 2 != 0 {
        return Err(CmError::OddCosetCount(cosets.len()));
    }
    let mut pairs = Vec::with_capacity(cosets.len() / 2);
    for c in 0..cosets.len() {
        let ct = cosets.act(group, c, tau);
        if ct == c {
            return Err(CmError::TauFixesACoset(cosets.label(group, c).to_string()));
        }
        if c < ct {
            pairs.push((c, ct));
        }
    }
    Ok(pairs)
}

impl CmDatum {
    pub fn new(group: Arc<GroupTable>, h: Subgroup, tau: usize) -> Result<Self, CmError> {
        group.check_element(tau)?;
        let cosets = CosetSpace::right(&group, &h)?;
        let pairs = conjugate_pairs(&group, &cosets, tau)?;
        let g = cosets.len() / 2;
        Ok(CmDatum { group, h: cosets.subgroup().clone(), tau, cosets, g, pairs })
    }

    /// Datum for the family `(Z/m)^×` with trivial `H` and `τ = -1`.
    pub fn cyclotomic(m: u64) -> Result<Self, CmError> {
        let group = Arc::new(GroupTable::cyclotomic(m)?);
        let tau = group.minus_one().expect("unit group has -1");
        let h = group.trivial_subgroup();
        Self::new(group, h, tau)
    }

    pub fn group(&self) -> &GroupTable {
        &self.group
    }

    pub fn group_arc(&self) -> &Arc<GroupTable> {
        &self.group
    }

    pub fn h(&self) -> &Subgroup {
        &self.h
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    pub fn cosets(&self) -> &CosetSpace {
        &self.cosets
    }

    /// Half the number of embeddings.
    pub fn g(&self) -> usize {
        self.g
    }

    pub fn conjugate_pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn conjugate(&self, coset: usize) -> usize {
        self.cosets.act(&self.group, coset, self.tau)
    }

    /// Validates a CM type given by coset indices.
    pub fn cm_type(&self, s: impl IntoIterator<Item = usize>) -> Result<CmType, CmError> {
        let s: BTreeSet<usize> = s.into_iter().collect();
        for &c in &s {
            if c >= self.cosets.len() {
                return Err(CmError::CosetOutOfRange(c));
            }
        }
        for &c in &s {
            let ct = self.conjugate(c);
            if s.contains(&ct) {
                let (a, b) = (c.min(ct), c.max(ct));
                return Err(CmError::NotDisjointFromConjugate(
                    self.cosets.label(&self.group, a).to_string(),
                    self.cosets.label(&self.group, b).to_string(),
                ));
            }
        }
        if s.len() != self.g {
            return Err(CmError::NotCovering { size: s.len(), g: self.g });
        }
        let s_tilde = (0..self.group.order())
            .filter(|&x| s.contains(&self.cosets.coset_of(x)))
            .collect();
        Ok(CmType { datum: self.clone(), s: s.into_iter().collect(), s_tilde })
    }

    /// CM type from element labels; each label names the coset containing it.
    pub fn cm_type_from_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<CmType, CmError> {
        let s = labels
            .iter()
            .map(|l| self.cosets.coset_by_label(&self.group, l.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        self.cm_type(s)
    }

    /// All `2^g` CM types. Bit `i` of the enumeration counter selects the
    /// larger coset of the `i`-th conjugate pair, so the first type is the
    /// set of smaller coset indices.
    pub fn enumerate_cm_types(&self) -> Result<Vec<CmType>, CmError> {
        let pairs = self.pairs.len();
        if pairs > MAX_ENUMERATION_PAIRS {
            return Err(CmError::TooLarge { pairs });
        }
        (0u32..1 << pairs)
            .map(|mask| {
                let s = self
                    .pairs
                    .iter()
                    .enumerate()
                    .map(|(i, &(a, b))| if mask >> i & 1 == 1 { b } else { a });
                self.cm_type(s)
            })
            .collect()
    }
}

/// A CM type `S ⊂ H\G` together with its preimage `S̃ ⊂ G`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CmType {
    datum: CmDatum,
    s: Vec<usize>,
    s_tilde: Vec<usize>,
}

impl CmType {
    pub fn datum(&self) -> &CmDatum {
        &self.datum
    }

    /// Coset indices, ascending.
    pub fn s(&self) -> &[usize] {
        &self.s
    }

    /// Element indices of the full preimage, ascending.
    pub fn s_tilde(&self) -> &[usize] {
        &self.s_tilde
    }

    pub fn s_labels(&self) -> Vec<String> {
        let d = &self.datum;
        self.s.iter().map(|&c| d.cosets.label(&d.group, c).to_string()).collect()
    }

    fn stabilizer(&self, left: bool) -> Vec<usize> {
        let group = self.datum.group();
        let set: BTreeSet<usize> = self.s_tilde.iter().copied().collect();
        (0..group.order())
            .filter(|&g| {
                self.s_tilde.iter().all(|&s| {
                    let x = if left { group.mul(g, s) } else { group.mul(s, g) };
                    set.contains(&x)
                })
            })
            .collect()
    }

    /// `{ g : gS̃ = S̃ }`.
    pub fn left_stabilizer(&self) -> Vec<usize> {
        self.stabilizer(true)
    }

    /// A type is simple when its left stabilizer is exactly `H`.
    pub fn is_simple(&self) -> bool {
        self.left_stabilizer() == self.datum.h.members()
    }

    /// The reflex type `(H', R)`.
    pub fn reflex(&self) -> Result<ReflexDatum, CmError> {
        let group = self.datum.group_arc().clone();
        let h_prime = Subgroup::new(&group, self.stabilizer(false))?;
        let cosets = CosetSpace::right(&group, &h_prime)?;
        let r: BTreeSet<usize> =
            self.s_tilde.iter().map(|&s| cosets.coset_of(group.inv(s))).collect();
        let r: Vec<usize> = r.into_iter().collect();

        // R must itself be a CM type for (G, H', τ); with a non-central τ this
        // can fail, and we refuse to continue rather than emit garbage.
        let tau = self.datum.tau;
        let pairs = conjugate_pairs(&group, &cosets, tau)
            .map_err(|e| CmError::ReflexNotCmType(e.to_string()))?;
        let g_reflex = pairs.len();
        for &c in &r {
            let ct = cosets.act(&group, c, tau);
            if r.binary_search(&ct).is_ok() {
                return Err(CmError::ReflexNotCmType(format!(
                    "cosets {} and {} are conjugate",
                    cosets.label(&group, c),
                    cosets.label(&group, ct)
                )));
            }
        }
        if r.len() != g_reflex {
            return Err(CmError::ReflexNotCmType(format!(
                "|R| = {} but H'\\G has {} conjugate pairs",
                r.len(),
                g_reflex
            )));
        }
        Ok(ReflexDatum { source: self.clone(), h_prime, cosets, r })
    }
}

/// The reflex type of a CM type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReflexDatum {
    source: CmType,
    h_prime: Subgroup,
    cosets: CosetSpace,
    r: Vec<usize>,
}

impl ReflexDatum {
    pub fn source(&self) -> &CmType {
        &self.source
    }

    pub fn h_prime(&self) -> &Subgroup {
        &self.h_prime
    }

    /// The coset space `H'\G`, i.e. the embeddings of the reflex field.
    pub fn cosets(&self) -> &CosetSpace {
        &self.cosets
    }

    /// Coset indices of `R` in `H'\G`, ascending.
    pub fn r(&self) -> &[usize] {
        &self.r
    }

    /// `[G : H']`, the degree of the reflex field.
    pub fn degree(&self) -> usize {
        self.cosets.len()
    }

    pub fn r_labels(&self) -> Vec<String> {
        let group = self.source.datum.group();
        self.r.iter().map(|&c| self.cosets.label(group, c).to_string()).collect()
    }

    /// `R` viewed as a CM type on the datum `(G, H', τ)`.
    pub fn as_cm_type(&self) -> Result<CmType, CmError> {
        let d = &self.source.datum;
        let datum = CmDatum::new(d.group.clone(), self.h_prime.clone(), d.tau)?;
        datum.cm_type(self.r.iter().copied())
    }
}

/// Summary used in reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReflexSummary {
    pub h_prime: Vec<String>,
    pub r: Vec<String>,
    pub reflex_degree: usize,
}

impl From<&ReflexDatum> for ReflexSummary {
    fn from(r: &ReflexDatum) -> Self {
        let group = r.source.datum.group();
        ReflexSummary {
            h_prime: r.h_prime.members().iter().map(|&x| group.label(x).to_string()).collect(),
            r: r.r_labels(),
            reflex_degree: r.degree(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quadratic() -> CmDatum {
        let group = Arc::new(GroupTable::from_table(vec![vec![0, 1], vec![1, 0]]).unwrap());
        let h = group.trivial_subgroup();
        CmDatum::new(group, h, 1).unwrap()
    }

    #[test]
    fn datum_validation() {
        let d5 = CmDatum::cyclotomic(5).unwrap();
        assert_eq!(d5.g(), 2);
        let d8 = CmDatum::cyclotomic(8).unwrap();
        assert_eq!(d8.g(), 2);

        let g = Arc::new(GroupTable::cyclotomic(5).unwrap());
        let h = Subgroup::from_labels(&g, &["1", "4"]).unwrap();
        let tau = g.element_by_label("4").unwrap();
        assert!(matches!(CmDatum::new(g.clone(), h, tau), Err(CmError::TauFixesACoset(_))));

        let triv = g.trivial_subgroup();
        let two = g.element_by_label("2").unwrap();
        assert_eq!(CmDatum::new(g.clone(), triv.clone(), two), Err(CmError::TauNotInvolution));
        assert_eq!(CmDatum::new(g.clone(), triv, 0), Err(CmError::TauNotInvolution));
    }

    #[test]
    fn odd_coset_count() {
        // Z/6 additive, H = {0, 2, 4} has 2 cosets; H = {0, 3} has 3
        let t: Vec<Vec<usize>> = (0..6).map(|a| (0..6).map(|b| (a + b) % 6).collect()).collect();
        let g = Arc::new(GroupTable::from_table(t).unwrap());
        let h = Subgroup::new(&g, [0, 3]).unwrap();
        assert_eq!(CmDatum::new(g, h, 3), Err(CmError::OddCosetCount(3)));
    }

    #[test]
    fn cm_type_validation() {
        let d5 = CmDatum::cyclotomic(5).unwrap();
        assert!(d5.cm_type_from_labels(&["1", "2"]).is_ok());
        assert!(matches!(
            d5.cm_type_from_labels(&["1", "4"]),
            Err(CmError::NotDisjointFromConjugate(a, b)) if a == "1" && b == "4"
        ));
        assert!(matches!(
            d5.cm_type_from_labels(&["1"]),
            Err(CmError::NotCovering { size: 1, g: 2 })
        ));
        let q = quadratic();
        let t = q.cm_type([0]).unwrap();
        assert_eq!(q.g(), 1);
        assert_eq!(t.s_tilde(), &[0]);
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(quadratic().enumerate_cm_types().unwrap().len(), 2);
        assert_eq!(CmDatum::cyclotomic(5).unwrap().enumerate_cm_types().unwrap().len(), 4);
        assert_eq!(CmDatum::cyclotomic(7).unwrap().enumerate_cm_types().unwrap().len(), 8);
        let first = &CmDatum::cyclotomic(7).unwrap().enumerate_cm_types().unwrap()[0];
        assert_eq!(first.s_labels(), vec!["1", "2", "3"]);
    }

    #[test]
    fn simplicity() {
        assert!(quadratic().cm_type([0]).unwrap().is_simple());
        let d5 = CmDatum::cyclotomic(5).unwrap();
        assert!(d5.cm_type_from_labels(&["1", "2"]).unwrap().is_simple());
        let d8 = CmDatum::cyclotomic(8).unwrap();
        let t = d8.cm_type_from_labels(&["1", "3"]).unwrap();
        assert!(!t.is_simple());
        let stab: Vec<&str> = t.left_stabilizer().iter().map(|&x| d8.group().label(x)).collect();
        assert_eq!(stab, vec!["1", "3"]);
    }

    #[test]
    fn reflex_examples() {
        let q = quadratic();
        let r = q.cm_type([0]).unwrap().reflex().unwrap();
        assert_eq!(r.h_prime().members(), &[0]);
        assert_eq!(r.r(), &[0]);

        let d5 = CmDatum::cyclotomic(5).unwrap();
        let r = d5.cm_type_from_labels(&["1", "2"]).unwrap().reflex().unwrap();
        assert_eq!(r.h_prime().order(), 1);
        assert_eq!(r.r_labels(), vec!["1", "3"]);
        assert_eq!(r.degree(), 4);

        let d8 = CmDatum::cyclotomic(8).unwrap();
        let r = d8.cm_type_from_labels(&["1", "3"]).unwrap().reflex().unwrap();
        let hp: Vec<&str> = r.h_prime().members().iter().map(|&x| d8.group().label(x)).collect();
        assert_eq!(hp, vec!["1", "3"]);
        assert_eq!(r.degree(), 2);
        assert_eq!(r.r().len(), 1);
        assert!(r.as_cm_type().is_ok());
    }
}
