//! Generic string rewriting with shortlex orientation, critical pairs and
//! Knuth-Bendix completion.
//!
//! This is deliberately independent of the hand-built canonicalizer in
//! [`crate::canonical`]: a completed system counts its irreducible words,
//! which must agree with the monoid enumeration if and only if the
//! presentation is correct. The two routes never share rewriting code.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::relations::{RelationSystem, SystemName};
use crate::word::{Letter, Word};

/// A rewrite rule `lhs -> rhs` with `rhs` strictly below `lhs` in shortlex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct RewriteRule {
    pub lhs: Word,
    pub rhs: Word,
}

impl fmt::Display for RewriteRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.lhs, self.rhs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CompletionStatus {
    Complete,
    Incomplete,
    FuelExhausted,
}

impl fmt::Display for CompletionStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CompletionStatus::Complete => write!(f, "complete"),
            CompletionStatus::Incomplete => write!(f, "incomplete"),
            CompletionStatus::FuelExhausted => write!(f, "fuel_exhausted"),
        }
    }
}

/// An ordered rule list over a fixed alphabet, flagged with its completion
/// status. Only a system flagged complete may be used to count normal forms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RewriteSystem {
    pub n: usize,
    pub alphabet: Vec<Letter>,
    pub rules: Vec<RewriteRule>,
    pub status: CompletionStatus,
    /// Relations with identical sides dropped during orientation.
    pub dropped_trivial: usize,
}

impl RewriteSystem {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("system serializes")
    }
}

/// The generating alphabet each named system presents.
pub fn alphabet_for(name: SystemName, n: usize) -> Vec<Letter> {
    let mut letters = Vec::new();
    match name {
        SystemName::R => {
            letters.extend((1..n).map(Letter::a));
            letters.extend((1..n).map(Letter::b));
        }
        SystemName::RMinus => letters.extend((1..n).map(Letter::a)),
        SystemName::RPlus => letters.extend((1..n).map(Letter::b)),
        SystemName::RPrime => {
            letters.extend((1..n.saturating_sub(1)).map(Letter::a));
            letters.push(Letter::b(n - 1));
        }
    }
    letters
}

/// Orients every relation into a shortlex-decreasing rule under the letter
/// order `a1 < ... < a(n-1) < b1 < ... < b(n-1)`. Relations with identical
/// sides cannot be oriented and are dropped (counted in `dropped_trivial`).
pub fn orient(system: &RelationSystem) -> RewriteSystem {
    let mut rules: Vec<RewriteRule> = Vec::new();
    let mut dropped = 0;
    for rel in &system.relations {
        let rule = match rel.lhs.shortlex_cmp(&rel.rhs) {
            Ordering::Equal => {
                dropped += 1;
                continue;
            }
            Ordering::Greater => RewriteRule { lhs: rel.lhs.clone(), rhs: rel.rhs.clone() },
            Ordering::Less => RewriteRule { lhs: rel.rhs.clone(), rhs: rel.lhs.clone() },
        };
        if !rules.contains(&rule) {
            rules.push(rule);
        }
    }
    RewriteSystem {
        n: system.n,
        alphabet: alphabet_for(system.name, system.n),
        rules,
        status: CompletionStatus::Incomplete,
        dropped_trivial: dropped,
    }
}

/// Applies leftmost-position, lowest-rule-index reductions until irreducible.
/// Terminates because every rule is strictly shortlex-decreasing.
pub(crate) fn reduce(word: &Word, rules: &[RewriteRule]) -> Word {
    let mut current = word.clone();
    'outer: loop {
        let letters = current.letters();
        for pos in 0..letters.len() {
            for rule in rules {
                let l = rule.lhs.len();
                if pos + l <= letters.len() && letters[pos..pos + l] == rule.lhs.letters()[..] {
                    let mut next = letters[..pos].to_vec();
                    next.extend_from_slice(rule.rhs.letters());
                    next.extend_from_slice(&letters[pos + l..]);
                    current = Word(next);
                    continue 'outer;
                }
            }
        }
        return current;
    }
}

/// Normal form of `word` under the system's rules.
pub fn normalize(word: &Word, system: &RewriteSystem) -> Word {
    reduce(word, &system.rules)
}

fn orient_pair(u: Word, v: Word) -> (Word, Word) {
    match u.shortlex_cmp(&v) {
        Ordering::Less => (v, u),
        _ => (u, v),
    }
}

fn is_factor(needle: &Word, haystack: &Word) -> bool {
    let n = needle.letters();
    let h = haystack.letters();
    if n.len() > h.len() {
        return false;
    }
    (0..=h.len() - n.len()).any(|p| &h[p..p + n.len()] == n)
}

/// The two one-step reducts of every superposition of the rules' left-hand
/// sides: proper suffix-prefix overlaps and containments. `same_rule` skips
/// the trivial full self-overlap.
fn critical_reducts(r1: &RewriteRule, r2: &RewriteRule, same_rule: bool) -> Vec<(Word, Word)> {
    let l1 = r1.lhs.letters();
    let l2 = r2.lhs.letters();
    let mut out = Vec::new();
    for p in 0..l1.len() {
        if same_rule && p == 0 {
            continue;
        }
        if p + l2.len() <= l1.len() {
            if l1[p..p + l2.len()] == *l2 {
                // w = l1; reduce at the root by r1 or inside by r2.
                let mut inner = l1[..p].to_vec();
                inner.extend_from_slice(r2.rhs.letters());
                inner.extend_from_slice(&l1[p + l2.len()..]);
                out.push((r1.rhs.clone(), Word(inner)));
            }
        } else {
            let o = l1.len() - p;
            if o < l2.len() && l1[p..] == l2[..o] {
                // w = l1 . l2[o..]; reduce the left or the right redex.
                let mut left = r1.rhs.letters().to_vec();
                left.extend_from_slice(&l2[o..]);
                let mut right = l1[..p].to_vec();
                right.extend_from_slice(r2.rhs.letters());
                out.push((Word(left), Word(right)));
            }
        }
    }
    out
}

/// Conservative inter-reduction: normalize right-hand sides, drop exact
/// duplicates, and drop a rule whose equation is already derivable from the
/// remaining rules. Never loses derivability.
fn inter_reduce(rules: &mut Vec<RewriteRule>) {
    loop {
        let mut changed = false;
        for idx in 0..rules.len() {
            let reduced = reduce(&rules[idx].rhs, rules);
            if reduced != rules[idx].rhs {
                rules[idx].rhs = reduced;
                changed = true;
            }
        }
        let mut idx = 0;
        while idx < rules.len() {
            let subsumed = {
                let rule = &rules[idx];
                let others: Vec<RewriteRule> = rules
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != idx)
                    .map(|(_, r)| r.clone())
                    .collect();
                rules.iter().enumerate().any(|(k, other)| k != idx && is_factor(&other.lhs, &rule.lhs))
                    && reduce(&rule.lhs, &others) == reduce(&rule.rhs, &others)
            };
            if subsumed {
                rules.remove(idx);
                changed = true;
            } else {
                idx += 1;
            }
        }
        let mut seen = Vec::new();
        rules.retain(|r| {
            if seen.contains(r) {
                changed = true;
                false
            } else {
                seen.push(r.clone());
                true
            }
        });
        if !changed {
            return;
        }
    }
}

/// Knuth-Bendix completion. Critical pairs are processed in batches over the
/// current rule list (FIFO within a batch), new rules are added oriented by
/// shortlex, and the list is inter-reduced after each batch. Each examined
/// critical pair costs one unit of fuel; running out is reported in the
/// status, never silently treated as confluence.
pub fn complete(system: &RewriteSystem, fuel: u64) -> Result<RewriteSystem> {
    if fuel == 0 {
        return Err(Error::ZeroFuel);
    }
    let mut out = system.clone();
    let mut remaining = fuel;
    inter_reduce(&mut out.rules);
    loop {
        let mut new_pairs: Vec<(Word, Word)> = Vec::new();
        for i in 0..out.rules.len() {
            for j in 0..out.rules.len() {
                for (u, v) in critical_reducts(&out.rules[i], &out.rules[j], i == j) {
                    if remaining == 0 {
                        out.status = CompletionStatus::FuelExhausted;
                        return Ok(out);
                    }
                    remaining -= 1;
                    let nu = reduce(&u, &out.rules);
                    let nv = reduce(&v, &out.rules);
                    if nu != nv {
                        let pair = orient_pair(nu, nv);
                        if !new_pairs.contains(&pair) {
                            new_pairs.push(pair);
                        }
                    }
                }
            }
        }
        if new_pairs.is_empty() {
            out.status = CompletionStatus::Complete;
            return Ok(out);
        }
        for (lhs, rhs) in new_pairs {
            out.rules.push(RewriteRule { lhs, rhs });
        }
        inter_reduce(&mut out.rules);
    }
}

fn default_cap(n: usize) -> usize {
    let size = crate::monoid::cardinality_formula(n.max(1), crate::monoid::MonoidVariant::Io);
    (4 * size) as usize
}

/// All irreducible words of a complete system, in shortlex order, found by
/// breadth-first extension pruning words that contain a rule left-hand side.
/// Exceeding `cap` (default `4 |IO_n|`) aborts with a diagnostic: the
/// normal-form language of a correct presentation here is finite.
pub fn irreducible_words(system: &RewriteSystem, cap: Option<usize>) -> Result<Vec<Word>> {
    if system.status != CompletionStatus::Complete {
        return Err(Error::IncompleteSystem);
    }
    let cap = cap.unwrap_or_else(|| default_cap(system.n));
    let mut out = vec![Word::empty()];
    let mut frontier = vec![Word::empty()];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for w in &frontier {
            for &x in &system.alphabet {
                let mut letters = w.letters().to_vec();
                letters.push(x);
                let cand = Word(letters);
                // The prefix is irreducible, so any redex must end at the new
                // last letter: a suffix check suffices.
                let reducible = system.rules.iter().any(|r| {
                    let l = r.lhs.len();
                    l <= cand.len() && cand.letters()[cand.len() - l..] == r.lhs.letters()[..]
                });
                if !reducible {
                    if out.len() >= cap {
                        return Err(Error::IrreducibleCap { cap });
                    }
                    out.push(cand.clone());
                    next.push(cand);
                }
            }
        }
        frontier = next;
    }
    Ok(out)
}

/// Number of irreducible words of a complete system.
pub fn count_irreducible(system: &RewriteSystem, cap: Option<usize>) -> Result<usize> {
    irreducible_words(system, cap).map(|words| words.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::{cardinality_formula, enumerate_direct, MonoidVariant};
    use crate::relations::relations;
    use crate::word::evaluate_word;

    fn w(text: &str) -> Word {
        Word::parse(text).unwrap()
    }

    #[test]
    fn orientation_examples() {
        let system = relations(3, SystemName::R).unwrap();
        let oriented = orient(&system);
        // R1 instance a1 a2 = a1: shorter side wins.
        assert!(oriented
            .rules
            .contains(&RewriteRule { lhs: w("a1 a2"), rhs: w("a1") }));
        // R2 instance a1 a1 = a2 a1: same length, lex decides.
        assert!(oriented
            .rules
            .contains(&RewriteRule { lhs: w("a2 a1"), rhs: w("a1 a1") }));
        assert_eq!(oriented.dropped_trivial, 0);
        assert_eq!(oriented.status, CompletionStatus::Incomplete);
    }

    #[test]
    fn identical_sides_are_dropped() {
        let mut system = relations(3, SystemName::RMinus).unwrap();
        system.relations.push(crate::relations::Relation {
            label: "loop".to_string(),
            lhs: w("a1 a2"),
            rhs: w("a1 a2"),
        });
        let oriented = orient(&system);
        assert_eq!(oriented.dropped_trivial, 1);
        assert_eq!(oriented.rules.len(), 3);
    }

    #[test]
    fn normalize_examples() {
        let oriented = orient(&relations(3, SystemName::R).unwrap());
        assert_eq!(normalize(&w("a1 a2"), &oriented), w("a1"));
        let irreducible = w("a2 a1");
        // a2 a1 reduces by the oriented R2; its normal form is a fixpoint.
        let nf = normalize(&irreducible, &oriented);
        assert_eq!(normalize(&nf, &oriented), nf);
    }

    #[test]
    fn zero_fuel_is_an_error() {
        let oriented = orient(&relations(3, SystemName::R).unwrap());
        assert_eq!(complete(&oriented, 0), Err(Error::ZeroFuel));
    }

    #[test]
    fn completion_statuses() {
        let oriented = orient(&relations(3, SystemName::R).unwrap());
        let done = complete(&oriented, 100_000).unwrap();
        assert_eq!(done.status, CompletionStatus::Complete);
        let starved = complete(&oriented, 1).unwrap();
        assert_eq!(starved.status, CompletionStatus::FuelExhausted);
        assert!(count_irreducible(&starved, None).is_err());
    }

    #[test]
    fn completion_fits_in_modest_fuel_at_n3() {
        for name in [SystemName::R, SystemName::RPrime] {
            let oriented = orient(&relations(3, name).unwrap());
            let done = complete(&oriented, 10_000).unwrap();
            assert_eq!(done.status, CompletionStatus::Complete, "{name}");
        }
    }

    #[test]
    fn completion_is_deterministic() {
        let oriented = orient(&relations(4, SystemName::R).unwrap());
        let first = complete(&oriented, 100_000).unwrap();
        let second = complete(&oriented, 100_000).unwrap();
        assert_eq!(first.rules, second.rules);
    }

    #[test]
    fn irreducible_counts_match_the_monoids() {
        for n in 2..=5 {
            for (name, variant) in [
                (SystemName::R, MonoidVariant::Io),
                (SystemName::RMinus, MonoidVariant::IoMinus),
                (SystemName::RPlus, MonoidVariant::IoPlus),
            ] {
                let oriented = orient(&relations(n, name).unwrap());
                let done = complete(&oriented, 100_000).unwrap();
                assert_eq!(done.status, CompletionStatus::Complete, "{name} n={n}");
                let count = count_irreducible(&done, None).unwrap();
                assert_eq!(count as u64, cardinality_formula(n, variant), "{name} n={n}");
            }
            if n >= 3 {
                let oriented = orient(&relations(n, SystemName::RPrime).unwrap());
                let done = complete(&oriented, 100_000).unwrap();
                assert_eq!(done.status, CompletionStatus::Complete, "R' n={n}");
                let count = count_irreducible(&done, None).unwrap();
                assert_eq!(count as u64, cardinality_formula(n, MonoidVariant::Io));
            }
        }
    }

    #[test]
    fn normal_forms_separate_exactly_the_monoid_classes() {
        // normalize(u) == normalize(v) iff the words evaluate equally,
        // exhaustively over short words at small n.
        for n in 2..=4_usize {
            let done = complete(&orient(&relations(n, SystemName::R).unwrap()), 100_000).unwrap();
            let alphabet = alphabet_for(SystemName::R, n);
            let mut words = vec![Word::empty()];
            let mut frontier = vec![Word::empty()];
            for _ in 0..5 {
                let mut next = Vec::new();
                for w in &frontier {
                    for &x in &alphabet {
                        let mut letters = w.letters().to_vec();
                        letters.push(x);
                        next.push(Word(letters));
                    }
                }
                words.extend(next.iter().cloned());
                frontier = next;
            }
            for u in &words {
                let nu = normalize(u, &done);
                let eu = evaluate_word(u, n).unwrap();
                assert_eq!(evaluate_word(&nu, n).unwrap(), eu);
            }
            // Injectivity of normal forms over the classes: count them.
            let mut forms: Vec<Word> = words.iter().map(|u| normalize(u, &done)).collect();
            forms.sort();
            forms.dedup();
            let mut images: Vec<_> = words.iter().map(|u| evaluate_word(u, n).unwrap()).collect();
            images.sort();
            images.dedup();
            assert_eq!(forms.len(), images.len());
        }
    }

    #[test]
    fn irreducible_words_evaluate_onto_the_monoid() {
        for n in 2..=4 {
            let done = complete(&orient(&relations(n, SystemName::R).unwrap()), 100_000).unwrap();
            let words = irreducible_words(&done, None).unwrap();
            let mut images: Vec<_> = words.iter().map(|w| evaluate_word(w, n).unwrap()).collect();
            images.sort_unstable();
            let dedup_len = {
                let mut copy = images.clone();
                copy.dedup();
                copy.len()
            };
            assert_eq!(dedup_len, images.len(), "evaluation is injective on normal forms");
            assert_eq!(images, enumerate_direct(n, MonoidVariant::Io).unwrap().elements);
        }
    }

    #[test]
    fn kb_normal_form_and_canonical_form_denote_the_same_element() {
        for (n, max_len) in [(3usize, 5usize), (4, 4)] {
            let done = complete(&orient(&relations(n, SystemName::R).unwrap()), 100_000).unwrap();
            let alphabet = alphabet_for(SystemName::R, n);
            let mut frontier = vec![Word::empty()];
            for _ in 0..max_len {
                let mut next = Vec::new();
                for word in &frontier {
                    for &x in &alphabet {
                        let mut letters = word.letters().to_vec();
                        letters.push(x);
                        next.push(Word(letters));
                    }
                }
                for word in &next {
                    let via_kb = normalize(word, &done);
                    let (via_w, _, _) = crate::canonical::canonical_form(word, n).unwrap();
                    assert_eq!(
                        evaluate_word(&via_kb, n).unwrap(),
                        evaluate_word(&via_w, n).unwrap(),
                        "routes disagree on `{word}` at n={n}"
                    );
                }
                frontier = next;
            }
        }
    }

    #[test]
    fn cap_guards_against_runaway_languages() {
        // A single-letter alphabet with no rules has infinitely many
        // irreducible words; the cap must trip.
        let system = RewriteSystem {
            n: 2,
            alphabet: vec![Letter::a(1)],
            rules: vec![],
            status: CompletionStatus::Complete,
            dropped_trivial: 0,
        };
        assert_eq!(
            irreducible_words(&system, Some(10)),
            Err(Error::IrreducibleCap { cap: 10 })
        );
    }
}
