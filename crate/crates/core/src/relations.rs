//! The finite relation systems over the generator alphabet.
//!
//! `R` is the defining system of the full monoid (families `R1`..`R7`), `R-`
//! and `R+` are the subsystems `R1+R2` / `R3+R4` presenting the decreasing and
//! increasing submonoids, and `R'` is the reduced system on the minimal
//! generators `a1, ..., a(n-2), b(n-1)` obtained by eliminating `a(n-1)` and
//! `b1, ..., b(n-2)`.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kb::{self, RewriteRule};
use crate::word::{evaluate_word, Family, Letter, Word};

/// One relation `lhs = rhs`, tagged with the family it comes from
/// (`R1`..`R7`, or `R2'`..`R7'` for the reduced system).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Relation {
    pub label: String,
    pub lhs: Word,
    pub rhs: Word,
}

impl Relation {
    fn new(label: &str, lhs: impl IntoIterator<Item = Letter>, rhs: impl IntoIterator<Item = Letter>) -> Self {
        Relation {
            label: label.to_string(),
            lhs: Word::from_letters(lhs),
            rhs: Word::from_letters(rhs),
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} = {}", self.label, self.lhs, self.rhs)
    }
}

/// `a_i a_(n-1) = a_i`, `1 <= i <= n-1`.
pub(crate) fn rel_r1(i: usize, n: usize) -> Relation {
    assert!(n >= 2 && (1..n).contains(&i), "R1 index i={i} out of range for n={n}");
    Relation::new("R1", [Letter::a(i), Letter::a(n - 1)], [Letter::a(i)])
}

/// `a_i a_j = a_(j+1) a_i`, `1 <= i <= j <= n-2`.
pub(crate) fn rel_r2(i: usize, j: usize, n: usize) -> Relation {
    assert!(1 <= i && i <= j && j <= n - 2, "R2 indices (i={i}, j={j}) out of range for n={n}");
    Relation::new("R2", [Letter::a(i), Letter::a(j)], [Letter::a(j + 1), Letter::a(i)])
}

/// `b_i b_1 = b_i`, `1 <= i <= n-1`.
pub(crate) fn rel_r3(i: usize, n: usize) -> Relation {
    assert!(n >= 2 && (1..n).contains(&i), "R3 index i={i} out of range for n={n}");
    Relation::new("R3", [Letter::b(i), Letter::b(1)], [Letter::b(i)])
}

/// `b_i b_(j+1) = b_(j+1) b_(i+1)`, `1 <= i <= j <= n-2`.
pub(crate) fn rel_r4(i: usize, j: usize, n: usize) -> Relation {
    assert!(1 <= i && i <= j && j <= n - 2, "R4 indices (i={i}, j={j}) out of range for n={n}");
    Relation::new("R4", [Letter::b(i), Letter::b(j + 1)], [Letter::b(j + 1), Letter::b(i + 1)])
}

/// `b_i a_j = a_j b_i`, `1 <= i < j <= n-1`.
pub(crate) fn rel_r5(i: usize, j: usize, n: usize) -> Relation {
    assert!(1 <= i && i < j && j < n, "R5 indices (i={i}, j={j}) out of range for n={n}");
    Relation::new("R5", [Letter::b(i), Letter::a(j)], [Letter::a(j), Letter::b(i)])
}

/// `b_i a_1 = a_i`, `1 <= i <= n-1`.
pub(crate) fn rel_r6(i: usize, n: usize) -> Relation {
    assert!(n >= 2 && (1..n).contains(&i), "R6 index i={i} out of range for n={n}");
    Relation::new("R6", [Letter::b(i), Letter::a(1)], [Letter::a(i)])
}

/// `a_i b_(n-1) = b_i`, `1 <= i <= n-1`.
pub(crate) fn rel_r7(i: usize, n: usize) -> Relation {
    assert!(n >= 2 && (1..n).contains(&i), "R7 index i={i} out of range for n={n}");
    Relation::new("R7", [Letter::a(i), Letter::b(n - 1)], [Letter::b(i)])
}

/// Which relation system is meant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SystemName {
    R,
    RMinus,
    RPlus,
    RPrime,
}

impl SystemName {
    pub fn parse(text: &str) -> Option<Self> {
        match text {
            "R" => Some(SystemName::R),
            "R-" => Some(SystemName::RMinus),
            "R+" => Some(SystemName::RPlus),
            "R'" => Some(SystemName::RPrime),
            _ => None,
        }
    }
}

impl fmt::Display for SystemName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SystemName::R => write!(f, "R"),
            SystemName::RMinus => write!(f, "R-"),
            SystemName::RPlus => write!(f, "R+"),
            SystemName::RPrime => write!(f, "R'"),
        }
    }
}

impl Serialize for SystemName {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A named finite list of relations over a fixed chain size.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationSystem {
    pub name: SystemName,
    pub n: usize,
    pub relations: Vec<Relation>,
}

impl RelationSystem {
    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    /// Returns a copy with every relation of the given family removed.
    /// Used to probe that the verifier notices missing relations.
    pub fn without_family(&self, label: &str) -> RelationSystem {
        RelationSystem {
            name: self.name,
            n: self.n,
            relations: self.relations.iter().filter(|r| r.label != label).cloned().collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("system serializes")
    }
}

/// Closed-form relation counts: `(3n^2-n-2)/2` for `R`, `(n^2-n)/2` for `R-`
/// and `R+`, `(3n^2-7n+4)/2` for `R'`.
pub fn expected_count(n: usize, name: SystemName) -> usize {
    match name {
        SystemName::R => (3 * n * n - n - 2) / 2,
        SystemName::RMinus | SystemName::RPlus => (n * n - n) / 2,
        SystemName::RPrime => (3 * n * n - 7 * n + 4) / 2,
    }
}

/// Builds the named relation system for chain size `n`.
///
/// `R`, `R-`, `R+` exist for every `n >= 1` (empty at `n = 1`, where the
/// alphabet is empty). `R'` needs `n >= 3`: at smaller sizes the reduced
/// alphabet cannot even spell its relations.
pub fn relations(n: usize, name: SystemName) -> Result<RelationSystem> {
    if n == 0 {
        return Err(Error::ChainTooSmall { n, min: 1 });
    }
    let rels = match name {
        SystemName::R => {
            let mut rels = family_r1(n);
            rels.extend(family_r2(n));
            rels.extend(family_r3(n));
            rels.extend(family_r4(n));
            rels.extend(family_r5(n));
            rels.extend(family_r6(n));
            rels.extend(family_r7(n));
            rels
        }
        SystemName::RMinus => {
            let mut rels = family_r1(n);
            rels.extend(family_r2(n));
            rels
        }
        SystemName::RPlus => {
            let mut rels = family_r3(n);
            rels.extend(family_r4(n));
            rels
        }
        SystemName::RPrime => {
            if n < 3 {
                return Err(Error::UnsupportedChain { name: "R'".to_string(), n });
            }
            rprime_catalog(n)
        }
    };
    let system = RelationSystem { name, n, relations: rels };
    debug_assert_eq!(system.len(), expected_count(n, name));
    Ok(system)
}

fn family_r1(n: usize) -> Vec<Relation> {
    (1..n).map(|i| rel_r1(i, n)).collect()
}

fn family_r2(n: usize) -> Vec<Relation> {
    let mut rels = Vec::new();
    for i in 1..n.saturating_sub(1) {
        for j in i..=n - 2 {
            rels.push(rel_r2(i, j, n));
        }
    }
    rels
}

fn family_r3(n: usize) -> Vec<Relation> {
    (1..n).map(|i| rel_r3(i, n)).collect()
}

fn family_r4(n: usize) -> Vec<Relation> {
    let mut rels = Vec::new();
    for i in 1..n.saturating_sub(1) {
        for j in i..=n - 2 {
            rels.push(rel_r4(i, j, n));
        }
    }
    rels
}

fn family_r5(n: usize) -> Vec<Relation> {
    let mut rels = Vec::new();
    for i in 1..n.saturating_sub(1) {
        for j in i + 1..n {
            rels.push(rel_r5(i, j, n));
        }
    }
    rels
}

fn family_r6(n: usize) -> Vec<Relation> {
    (1..n).map(|i| rel_r6(i, n)).collect()
}

fn family_r7(n: usize) -> Vec<Relation> {
    (1..n).map(|i| rel_r7(i, n)).collect()
}

/// The reduced relation list on `a1, ..., a(n-2), b(n-1)`, in its catalog
/// order. Requires `n >= 3`.
pub fn rprime_catalog(n: usize) -> Vec<Relation> {
    assert!(n >= 3, "the reduced system needs n >= 3");
    let b = || Letter::b(n - 1);
    let mut rels = Vec::new();
    // R2': the pure-a commutations that survive, then the rewritten j = n-2 column.
    for i in 1..=n.saturating_sub(3) {
        for j in i..=n - 3 {
            rels.push(Relation::new(
                "R2'",
                [Letter::a(i), Letter::a(j)],
                [Letter::a(j + 1), Letter::a(i)],
            ));
        }
    }
    for i in 1..=n - 2 {
        rels.push(Relation::new(
            "R2'",
            [Letter::a(i), Letter::a(n - 2)],
            [b(), Letter::a(1), Letter::a(i)],
        ));
    }
    // R4': the b-family commutations after substitution.
    for i in 1..=n.saturating_sub(3) {
        for j in i..=n - 3 {
            rels.push(Relation::new(
                "R4'",
                [Letter::a(i), b(), Letter::a(j + 1), b()],
                [Letter::a(j + 1), b(), Letter::a(i + 1), b()],
            ));
        }
    }
    for i in 1..=n.saturating_sub(3) {
        rels.push(Relation::new(
            "R4'",
            [Letter::a(i), b(), b()],
            [b(), Letter::a(i + 1), b()],
        ));
    }
    rels.push(Relation::new("R4'", [Letter::a(n - 2), b(), b()], [b(), b()]));
    // R5': mixed commutations.
    for i in 1..=n - 2 {
        for j in i + 1..=n - 2 {
            rels.push(Relation::new(
                "R5'",
                [Letter::a(i), b(), Letter::a(j)],
                [Letter::a(j), Letter::a(i), b()],
            ));
        }
    }
    for i in 1..=n - 2 {
        rels.push(Relation::new(
            "R5'",
            [Letter::a(i), b(), b(), Letter::a(1)],
            [b(), Letter::a(1), Letter::a(i), b()],
        ));
    }
    // R6' and R7'.
    for i in 1..=n - 2 {
        rels.push(Relation::new("R6'", [Letter::a(i), b(), Letter::a(1)], [Letter::a(i)]));
    }
    rels.push(Relation::new("R7'", [b(), Letter::a(1), b()], [b()]));
    rels
}

/// True iff the generators satisfy every relation of the system under
/// evaluation into the monoid.
pub fn satisfies_relations(n: usize, system: &RelationSystem) -> bool {
    first_relation_failure(n, system).is_none()
}

/// The first relation whose two sides evaluate differently, if any.
pub fn first_relation_failure(n: usize, system: &RelationSystem) -> Option<String> {
    for rel in &system.relations {
        let left = evaluate_word(&rel.lhs, n);
        let right = evaluate_word(&rel.rhs, n);
        match (left, right) {
            (Ok(l), Ok(r)) if l == r => {}
            (Ok(l), Ok(r)) => {
                return Some(format!("{rel} evaluates to {l} vs {r}"));
            }
            _ => return Some(format!("{rel} does not evaluate over n={n}")),
        }
    }
    None
}

/// Substitution of the eliminated generators: `a(n-1) -> b(n-1) a1` and
/// `b_i -> a_i b(n-1)` for `i <= n-2`.
fn eliminate(word: &Word, n: usize) -> Word {
    let mut out = Vec::new();
    for l in word.letters() {
        match (l.family, l.index) {
            (Family::A, i) if i == n - 1 => {
                out.push(Letter::b(n - 1));
                out.push(Letter::a(1));
            }
            (Family::A, i) => out.push(Letter::a(i)),
            (Family::B, i) if i == n - 1 => out.push(Letter::b(n - 1)),
            (Family::B, i) => {
                out.push(Letter::a(i));
                out.push(Letter::b(n - 1));
            }
        }
    }
    Word(out)
}

fn orient_pair(u: Word, v: Word) -> (Word, Word) {
    match u.shortlex_cmp(&v) {
        Ordering::Less => (v, u),
        _ => (u, v),
    }
}

/// Substitutes the eliminated generators throughout `R`, drops the relations
/// that become trivial or deducible from the ones already kept (normalizing
/// both sides with the kept relations oriented by shortlex), and checks that
/// the survivors are exactly the `R'` catalog. Returns the catalog with its
/// family labels.
pub fn tietze_reduce(n: usize) -> Result<RelationSystem> {
    if n < 3 {
        return Err(Error::UnsupportedChain { name: "R'".to_string(), n });
    }
    let base = relations(n, SystemName::R)?;
    let mut kept: Vec<(Word, Word)> = Vec::new();
    let mut rules: Vec<RewriteRule> = Vec::new();
    for rel in &base.relations {
        let lhs = eliminate(&rel.lhs, n);
        let rhs = eliminate(&rel.rhs, n);
        if lhs == rhs {
            continue; // immediately trivial
        }
        if kb::reduce(&lhs, &rules) == kb::reduce(&rhs, &rules) {
            continue; // deducible from what is already kept
        }
        let (big, small) = orient_pair(lhs.clone(), rhs.clone());
        rules.push(RewriteRule { lhs: big, rhs: small });
        kept.push((lhs, rhs));
    }
    let catalog = rprime_catalog(n);
    let mut survivors: HashSet<(Word, Word)> =
        kept.into_iter().map(|(l, r)| orient_pair(l, r)).collect();
    for rel in &catalog {
        let key = orient_pair(rel.lhs.clone(), rel.rhs.clone());
        if !survivors.remove(&key) {
            return Err(Error::TietzeMismatch(format!(
                "expected relation {rel} did not survive elimination"
            )));
        }
    }
    if let Some((l, r)) = survivors.into_iter().next() {
        return Err(Error::TietzeMismatch(format!(
            "unexpected surviving relation {l} = {r}"
        )));
    }
    Ok(RelationSystem { name: SystemName::RPrime, n, relations: catalog })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_the_closed_forms() {
        for n in 1..=10 {
            for name in [SystemName::R, SystemName::RMinus, SystemName::RPlus] {
                let system = relations(n, name).unwrap();
                assert_eq!(system.len(), expected_count(n, name), "{name} at n={n}");
            }
            if n >= 3 {
                let system = relations(n, SystemName::RPrime).unwrap();
                assert_eq!(system.len(), expected_count(n, SystemName::RPrime));
            }
        }
        assert_eq!(relations(3, SystemName::R).unwrap().len(), 11);
        assert_eq!(relations(3, SystemName::RMinus).unwrap().len(), 3);
        assert_eq!(relations(3, SystemName::RPrime).unwrap().len(), 5);
    }

    #[test]
    fn r_family_breakdown_at_n3() {
        let system = relations(3, SystemName::R).unwrap();
        let count = |label: &str| system.relations.iter().filter(|r| r.label == label).count();
        assert_eq!(count("R1"), 2);
        assert_eq!(count("R2"), 1);
        assert_eq!(count("R3"), 2);
        assert_eq!(count("R4"), 1);
        assert_eq!(count("R5"), 1);
        assert_eq!(count("R6"), 2);
        assert_eq!(count("R7"), 2);
    }

    #[test]
    fn degenerate_sizes() {
        assert!(relations(1, SystemName::R).unwrap().is_empty());
        assert!(relations(1, SystemName::RMinus).unwrap().is_empty());
        assert_eq!(relations(2, SystemName::R).unwrap().len(), 4);
        assert!(relations(2, SystemName::RPrime).is_err());
        assert!(relations(0, SystemName::R).is_err());
    }

    #[test]
    fn all_systems_are_satisfied() {
        for n in 1..=8 {
            for name in [SystemName::R, SystemName::RMinus, SystemName::RPlus] {
                let system = relations(n, name).unwrap();
                assert!(satisfies_relations(n, &system), "{name} at n={n}");
            }
            if n >= 3 {
                let system = relations(n, SystemName::RPrime).unwrap();
                assert!(satisfies_relations(n, &system), "R' at n={n}");
            }
        }
    }

    #[test]
    fn fabricated_relation_is_rejected() {
        let mut system = relations(3, SystemName::R).unwrap();
        system.relations.push(Relation::new("bogus", [Letter::a(1)], [Letter::a(2)]));
        assert!(!satisfies_relations(3, &system));
        assert!(first_relation_failure(3, &system).unwrap().contains("bogus"));
    }

    #[test]
    fn tietze_counts() {
        assert_eq!(tietze_reduce(3).unwrap().len(), 5);
        assert_eq!(tietze_reduce(4).unwrap().len(), 12);
        assert_eq!(tietze_reduce(5).unwrap().len(), 22);
        assert!(tietze_reduce(2).is_err());
    }

    #[test]
    fn tietze_agrees_with_catalog_up_to_8() {
        for n in 3..=8 {
            let system = tietze_reduce(n).unwrap();
            assert_eq!(system.relations, rprime_catalog(n));
            assert_eq!(system.len(), expected_count(n, SystemName::RPrime));
        }
    }

    #[test]
    fn rprime_uses_only_the_reduced_alphabet() {
        for n in 3..=8 {
            for rel in rprime_catalog(n) {
                for letter in rel.lhs.letters().iter().chain(rel.rhs.letters()) {
                    match letter.family {
                        Family::A => assert!(letter.index <= n - 2),
                        Family::B => assert_eq!(letter.index, n - 1),
                    }
                }
            }
        }
    }

    #[test]
    fn mutation_helper_removes_a_family() {
        let system = relations(3, SystemName::R).unwrap();
        let mutated = system.without_family("R6");
        assert_eq!(mutated.len(), system.len() - 2);
        assert!(mutated.relations.iter().all(|r| r.label != "R6"));
    }

    #[test]
    fn json_schema() {
        let system = relations(2, SystemName::RMinus).unwrap();
        assert_eq!(
            system.to_json(),
            r#"{"name":"R-","n":2,"relations":[{"label":"R1","lhs":"a1 a1","rhs":"a1"}]}"#
        );
    }
}
