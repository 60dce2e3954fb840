//! Finite groups stored as full Cayley tables, their subgroups and right
//! coset spaces.
//!
//! Elements are identified with indices `0..order`. All structures are
//! immutable after construction.

use std::collections::BTreeSet;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest group order accepted by the table constructors.
pub const MAX_ORDER: usize = 48;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("empty multiplication table")]
    Empty,
    #[error("group order {0} exceeds the supported maximum of {MAX_ORDER}")]
    TooLarge(usize),
    #[error("multiplication table row {row} has {len} entries, expected {order}")]
    RaggedTable { row: usize, len: usize, order: usize },
    #[error("table entry ({row}, {col}) = {value} is out of range for order {order}")]
    EntryOutOfRange { row: usize, col: usize, value: usize, order: usize },
    #[error("not a Latin square: {axis} {index} repeats element {element}")]
    NotLatinSquare { axis: &'static str, index: usize, element: usize },
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NonAssociative { a: usize, b: usize, c: usize },
    #[error("modulus {0} is too small (need m >= 3)")]
    ModulusTooSmall(u64),
    #[error("{count} labels supplied for a group of order {order}")]
    LabelCount { count: usize, order: usize },
    #[error("duplicate element label {0:?}")]
    DuplicateLabel(String),
    #[error("unknown element label {0:?}")]
    UnknownLabel(String),
    #[error("element index {0} out of range")]
    ElementOutOfRange(usize),
    #[error("subset is not a subgroup: {0}")]
    NotSubgroup(String),
}

/// A finite group given by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupTable {
    order: usize,
    mul: Vec<usize>,
    identity: usize,
    inv: Vec<usize>,
    labels: Vec<String>,
    /// For unit groups `(Z/m)^×`, the residue represented by each element.
    residues: Option<Vec<u64>>,
    /// Index of the element `-1 mod m`, when the group is a unit group.
    minus_one: Option<usize>,
}

impl GroupTable {
    /// Validates `mul` (row-major, `mul[a][b] = a*b`) and computes inverses.
    /// Elements are labelled by their index.
    pub fn from_table(mul: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        let labels = (0..mul.len()).map(|i| i.to_string()).collect();
        Self::from_labelled_table(mul, labels)
    }

    pub fn from_labelled_table(
        mul: Vec<Vec<usize>>,
        labels: Vec<String>,
    ) -> Result<Self, GroupError> {
        let order = mul.len();
        if order == 0 {
            return Err(GroupError::Empty);
        }
        if order > MAX_ORDER {
            return Err(GroupError::TooLarge(order));
        }
        if labels.len() != order {
            return Err(GroupError::LabelCount { count: labels.len(), order });
        }
        let mut seen = BTreeSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(GroupError::DuplicateLabel(l.clone()));
            }
        }
        for (row, r) in mul.iter().enumerate() {
            if r.len() != order {
                return Err(GroupError::RaggedTable { row, len: r.len(), order });
            }
            for (col, &value) in r.iter().enumerate() {
                if value >= order {
                    return Err(GroupError::EntryOutOfRange { row, col, value, order });
                }
            }
        }
        let flat: Vec<usize> = mul.into_iter().flatten().collect();
        let at = |a: usize, b: usize| flat[a * order + b];

        for row in 0..order {
            let mut hit = vec![false; order];
            for col in 0..order {
                let e = at(row, col);
                if std::mem::replace(&mut hit[e], true) {
                    return Err(GroupError::NotLatinSquare { axis: "row", index: row, element: e });
                }
            }
        }
        for col in 0..order {
            let mut hit = vec![false; order];
            for row in 0..order {
                let e = at(row, col);
                if std::mem::replace(&mut hit[e], true) {
                    return Err(GroupError::NotLatinSquare { axis: "column", index: col, element: e });
                }
            }
        }

        let identity = (0..order)
            .find(|&e| (0..order).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or(GroupError::NoIdentity)?;

        for a in 0..order {
            for b in 0..order {
                let ab = at(a, b);
                for c in 0..order {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(GroupError::NonAssociative { a, b, c });
                    }
                }
            }
        }

        // Latin rows guarantee a unique right inverse; associativity makes it two-sided.
        let inv = (0..order)
            .map(|a| (0..order).find(|&b| at(a, b) == identity).expect("latin row"))
            .collect();

        Ok(GroupTable { order, mul: flat, identity, inv, labels, residues: None, minus_one: None })
    }

    /// The unit group `(Z/m)^×` under multiplication, elements ordered by
    /// increasing residue and labelled by that residue.
    pub fn cyclotomic(m: u64) -> Result<Self, GroupError> {
        if m < 3 {
            return Err(GroupError::ModulusTooSmall(m));
        }
        let residues: Vec<u64> = (1..m).filter(|a| a.gcd(&m) == 1).collect();
        if residues.len() > MAX_ORDER {
            return Err(GroupError::TooLarge(residues.len()));
        }
        let index_of = |r: u64| residues.binary_search(&r).expect("unit residue");
        let mul = residues
            .iter()
            .map(|&a| residues.iter().map(|&b| index_of(a * b % m)).collect())
            .collect();
        let labels = residues.iter().map(|r| r.to_string()).collect();
        let mut table = Self::from_labelled_table(mul, labels)?;
        table.minus_one = Some(index_of(m - 1));
        table.residues = Some(residues);
        Ok(table)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn element_by_label(&self, label: &str) -> Result<usize, GroupError> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| GroupError::UnknownLabel(label.to_string()))
    }

    pub fn residues(&self) -> Option<&[u64]> {
        self.residues.as_deref()
    }

    pub fn minus_one(&self) -> Option<usize> {
        self.minus_one
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Least common multiple of all element orders.
    pub fn exponent(&self) -> usize {
        (0..self.order).fold(1, |acc, a| acc.lcm(&self.element_order(a)))
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn is_central(&self, a: usize) -> bool {
        (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a))
    }

    /// Row-major copy of the Cayley table.
    pub fn table(&self) -> Vec<Vec<usize>> {
        self.mul.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup { members: vec![self.identity] }
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup { members: (0..self.order).collect() }
    }

    pub fn check_element(&self, a: usize) -> Result<usize, GroupError> {
        if a < self.order {
            Ok(a)
        } else {
            Err(GroupError::ElementOutOfRange(a))
        }
    }
}

/// A subgroup, stored as the sorted list of its member indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Subgroup {
    members: Vec<usize>,
}

impl Subgroup {
    /// Checks that `members` contains the identity and is closed under
    /// multiplication and inversion in `group`.
    pub fn new(
        group: &GroupTable,
        members: impl IntoIterator<Item = usize>,
    ) -> Result<Self, GroupError> {
        let set: BTreeSet<usize> = members.into_iter().collect();
        for &a in &set {
            group.check_element(a)?;
        }
        if !set.contains(&group.identity()) {
            return Err(GroupError::NotSubgroup("missing the identity".into()));
        }
        for &a in &set {
            if !set.contains(&group.inv(a)) {
                return Err(GroupError::NotSubgroup(format!(
                    "inverse of {} is missing",
                    group.label(a)
                )));
            }
            for &b in &set {
                if !set.contains(&group.mul(a, b)) {
                    return Err(GroupError::NotSubgroup(format!(
                        "{}*{} is missing",
                        group.label(a),
                        group.label(b)
                    )));
                }
            }
        }
        Ok(Subgroup { members: set.into_iter().collect() })
    }

    pub fn from_labels<S: AsRef<str>>(group: &GroupTable, labels: &[S]) -> Result<Self, GroupError> {
        let members = labels
            .iter()
            .map(|l| group.element_by_label(l.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(group, members)
    }

    /// Closure of `gens` under multiplication.
    pub fn generated_by(group: &GroupTable, gens: &[usize]) -> Self {
        let mut set: BTreeSet<usize> = BTreeSet::from([group.identity()]);
        let mut frontier = vec![group.identity()];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = group.mul(x, g);
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        Subgroup { members: set.into_iter().collect() }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, a: usize) -> bool {
        self.members.binary_search(&a).is_ok()
    }
}

/// The right coset space `H\G`, i.e. the cosets `Hg`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetSpace {
    subgroup: Subgroup,
    reps: Vec<usize>,
    coset_of: Vec<usize>,
}

impl CosetSpace {
    /// Cosets are numbered by increasing canonical representative, which is
    /// the smallest element index in the coset.
    pub fn right(group: &GroupTable, subgroup: &Subgroup) -> Result<Self, GroupError> {
        // re-validate: callers may hand in a subgroup of a different group
        let subgroup = Subgroup::new(group, subgroup.members().iter().copied())?;
        let n = group.order();
        let mut coset_of = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for g in 0..n {
            if coset_of[g] != usize::MAX {
                continue;
            }
            let idx = reps.len();
            reps.push(g);
            for &h in subgroup.members() {
                coset_of[group.mul(h, g)] = idx;
            }
        }
        Ok(CosetSpace { subgroup, reps, coset_of })
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn reps(&self) -> &[usize] {
        &self.reps
    }

    pub fn rep(&self, coset: usize) -> usize {
        self.reps[coset]
    }

    #[inline]
    pub fn coset_of(&self, g: usize) -> usize {
        self.coset_of[g]
    }

    /// Right translation `Hx ↦ Hxg`.
    #[inline]
    pub fn act(&self, group: &GroupTable, coset: usize, g: usize) -> usize {
        self.coset_of[group.mul(self.reps[coset], g)]
    }

    /// All elements of the given coset, ascending.
    pub fn elements(&self, coset: usize) -> Vec<usize> {
        (0..self.coset_of.len()).filter(|&g| self.coset_of[g] == coset).collect()
    }

    /// Label used for a coset in reports: the label of its representative.
    pub fn label<'a>(&self, group: &'a GroupTable, coset: usize) -> &'a str {
        group.label(self.reps[coset])
    }

    pub fn coset_by_label(&self, group: &GroupTable, label: &str) -> Result<usize, GroupError> {
        Ok(self.coset_of(group.element_by_label(label)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zn_add(n: usize) -> Vec<Vec<usize>> {
        (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect()
    }

    #[test]
    fn trivial_group() {
        let g = GroupTable::from_table(vec![vec![0]]).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.identity(), 0);
        assert_eq!(g.inv(0), 0);
    }

    #[test]
    fn cyclic_four() {
        let g = GroupTable::from_table(zn_add(4)).unwrap();
        assert_eq!(g.order(), 4);
        assert_eq!(g.identity(), 0);
        assert_eq!(g.inv(1), 3);
        assert_eq!(g.element_order(1), 4);
        assert_eq!(g.exponent(), 4);
    }

    #[test]
    fn rejects_nonassociative_latin_square() {
        // a loop of order 5 (Latin square with identity 0) that is not a group
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(
            GroupTable::from_table(t),
            Err(GroupError::NonAssociative { .. })
        ));
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(matches!(
            GroupTable::from_table(vec![vec![0, 0], vec![1, 1]]),
            Err(GroupError::NotLatinSquare { axis: "row", index: 0, element: 0 })
        ));
        // Latin square without an identity: x * y = -x - y mod 3
        assert!(matches!(
            GroupTable::from_table(vec![vec![0, 2, 1], vec![2, 1, 0], vec![1, 0, 2]]),
            Err(GroupError::NoIdentity)
        ));
        assert!(matches!(
            GroupTable::from_table(vec![vec![0, 5], vec![1, 0]]),
            Err(GroupError::EntryOutOfRange { value: 5, .. })
        ));
        assert_eq!(GroupTable::from_table(vec![]), Err(GroupError::Empty));
    }

    #[test]
    fn cyclotomic_groups() {
        let g5 = GroupTable::cyclotomic(5).unwrap();
        assert_eq!(g5.order(), 4);
        let four = g5.element_by_label("4").unwrap();
        assert_eq!(g5.element_order(four), 2);
        assert_eq!(g5.minus_one(), Some(four));

        let g8 = GroupTable::cyclotomic(8).unwrap();
        assert_eq!(g8.order(), 4);
        assert_eq!(g8.exponent(), 2);

        let g12 = GroupTable::cyclotomic(12).unwrap();
        assert_eq!(g12.labels(), &["1", "5", "7", "11"]);

        assert_eq!(GroupTable::cyclotomic(2), Err(GroupError::ModulusTooSmall(2)));
    }

    #[test]
    fn coset_spaces() {
        let g = GroupTable::cyclotomic(8).unwrap();
        let whole = CosetSpace::right(&g, &g.whole()).unwrap();
        assert_eq!(whole.len(), 1);

        let triv = CosetSpace::right(&g, &g.trivial_subgroup()).unwrap();
        assert_eq!(triv.len(), 4);
        let mut seen: Vec<usize> = (0..4).map(|x| triv.coset_of(x)).collect();
        seen.sort();
        assert_eq!(seen, vec![0, 1, 2, 3]);

        let h = Subgroup::from_labels(&g, &["1", "3"]).unwrap();
        let cs = CosetSpace::right(&g, &h).unwrap();
        assert_eq!(cs.len(), 2);
        let rep_labels: Vec<&str> = cs.reps().iter().map(|&r| g.label(r)).collect();
        assert_eq!(rep_labels, vec!["1", "5"]);
    }

    #[test]
    fn not_a_subgroup() {
        let g = GroupTable::cyclotomic(5).unwrap();
        assert!(matches!(
            Subgroup::from_labels(&g, &["1", "2"]),
            Err(GroupError::NotSubgroup(_))
        ));
        assert!(matches!(
            Subgroup::from_labels(&g, &["4"]),
            Err(GroupError::NotSubgroup(_))
        ));
    }
}
