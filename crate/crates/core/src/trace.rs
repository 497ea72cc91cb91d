//! Derivation traces: checkable witnesses that two words are congruent.
//!
//! A trace records a start word and a sequence of single-relation
//! replacements. [`check_trace`] replays a trace against a relation system
//! without trusting the producer: every step must name a family present in
//! the system, match one side of one of its relations at the claimed position
//! in the claimed direction, and splice to exactly the claimed word.

use std::fmt;

use serde::Serialize;

use crate::relations::{Relation, RelationSystem};
use crate::word::Word;

/// Whether a step replaces the relation's left side by its right side or the
/// other way around.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Direction {
    #[serde(rename = "lhs->rhs")]
    Forward,
    #[serde(rename = "rhs->lhs")]
    Backward,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Direction::Forward => write!(f, "lhs->rhs"),
            Direction::Backward => write!(f, "rhs->lhs"),
        }
    }
}

/// One replacement: at `position`, a factor matching one side of a relation
/// from family `label` was replaced by the other side, yielding `after`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub position: usize,
    pub label: String,
    pub direction: Direction,
    pub after: Word,
}

/// A start word plus replacement steps; the derived word is the last `after`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DerivationTrace {
    pub start: Word,
    pub steps: Vec<TraceStep>,
}

impl DerivationTrace {
    pub fn result(&self) -> &Word {
        self.steps.last().map(|s| &s.after).unwrap_or(&self.start)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("trace serializes")
    }
}

fn splice(word: &Word, position: usize, from_len: usize, to: &Word) -> Word {
    let letters = word.letters();
    let mut out = letters[..position].to_vec();
    out.extend_from_slice(to.letters());
    out.extend_from_slice(&letters[position + from_len..]);
    Word(out)
}

fn step_matches(word: &Word, step: &TraceStep, rel: &Relation) -> bool {
    let (from, to) = match step.direction {
        Direction::Forward => (&rel.lhs, &rel.rhs),
        Direction::Backward => (&rel.rhs, &rel.lhs),
    };
    let letters = word.letters();
    if step.position + from.len() > letters.len() {
        return false;
    }
    if letters[step.position..step.position + from.len()] != from.letters()[..] {
        return false;
    }
    splice(word, step.position, from.len(), to) == step.after
}

/// Replays every step against the system. True iff each one is a legal
/// single-relation replacement.
pub fn check_trace(trace: &DerivationTrace, system: &RelationSystem) -> bool {
    let mut current = trace.start.clone();
    for step in &trace.steps {
        let ok = system
            .relations
            .iter()
            .filter(|rel| rel.label == step.label)
            .any(|rel| step_matches(&current, step, rel));
        if !ok {
            return false;
        }
        current = step.after.clone();
    }
    true
}

/// Incrementally builds a trace while rewriting a word. `apply` panics if the
/// named relation side does not match the factor at the given position: that
/// would be a bug in the calling algorithm, not a user error.
#[derive(Debug, Clone)]
pub struct TraceBuilder {
    start: Word,
    word: Word,
    steps: Vec<TraceStep>,
}

impl TraceBuilder {
    pub fn new(start: Word) -> Self {
        TraceBuilder { word: start.clone(), start, steps: Vec::new() }
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn letter(&self, position: usize) -> crate::word::Letter {
        self.word.letters()[position]
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn apply(&mut self, position: usize, rel: &Relation, direction: Direction) {
        let (from, to) = match direction {
            Direction::Forward => (&rel.lhs, &rel.rhs),
            Direction::Backward => (&rel.rhs, &rel.lhs),
        };
        let letters = self.word.letters();
        assert!(
            position + from.len() <= letters.len()
                && letters[position..position + from.len()] == from.letters()[..],
            "relation {rel} ({direction}) does not match `{}` at position {position}",
            self.word
        );
        self.word = splice(&self.word, position, from.len(), to);
        self.steps.push(TraceStep {
            position,
            label: rel.label.clone(),
            direction,
            after: self.word.clone(),
        });
    }

    pub fn finish(self) -> (Word, DerivationTrace) {
        (self.word.clone(), DerivationTrace { start: self.start, steps: self.steps })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relations::{relations, SystemName};

    fn w(text: &str) -> Word {
        Word::parse(text).unwrap()
    }

    #[test]
    fn empty_trace_is_reflexivity() {
        let system = relations(3, SystemName::R).unwrap();
        let trace = DerivationTrace { start: w("a1 b2"), steps: vec![] };
        assert_eq!(trace.result(), &w("a1 b2"));
        assert!(check_trace(&trace, &system));
    }

    #[test]
    fn builder_produces_checkable_steps() {
        let system = relations(3, SystemName::R).unwrap();
        let mut builder = TraceBuilder::new(w("a1 a2"));
        // a1 a2 = a1 is the R1 instance i=1.
        builder.apply(0, &crate::relations::rel_r1(1, 3), Direction::Forward);
        let (word, trace) = builder.finish();
        assert_eq!(word, w("a1"));
        assert_eq!(trace.result(), &w("a1"));
        assert!(check_trace(&trace, &system));
    }

    #[test]
    fn mismatched_position_is_rejected() {
        let system = relations(3, SystemName::R).unwrap();
        let trace = DerivationTrace {
            start: w("a1 a2"),
            steps: vec![TraceStep {
                position: 1,
                label: "R2".to_string(),
                direction: Direction::Forward,
                after: w("a1 a1"),
            }],
        };
        assert!(!check_trace(&trace, &system));
    }

    #[test]
    fn missing_family_invalidates_the_trace() {
        let full = relations(3, SystemName::R).unwrap();
        let mut builder = TraceBuilder::new(w("b1 a1"));
        builder.apply(0, &crate::relations::rel_r6(1, 3), Direction::Forward);
        let (_, trace) = builder.finish();
        assert!(check_trace(&trace, &full));
        assert!(!check_trace(&trace, &full.without_family("R6")));
    }

    #[test]
    fn backward_steps_are_checked_too() {
        let system = relations(3, SystemName::R).unwrap();
        let mut builder = TraceBuilder::new(w("b1"));
        // b1 = a1 b2 read right to left.
        builder.apply(0, &crate::relations::rel_r7(1, 3), Direction::Backward);
        let (word, trace) = builder.finish();
        assert_eq!(word, w("a1 b2"));
        assert!(check_trace(&trace, &system));
    }

    #[test]
    #[should_panic(expected = "does not match")]
    fn builder_rejects_wrong_factors() {
        let mut builder = TraceBuilder::new(w("a1 a1"));
        builder.apply(0, &crate::relations::rel_r1(1, 3), Direction::Forward);
    }

    #[test]
    fn trace_json_has_positions_and_labels() {
        let mut builder = TraceBuilder::new(w("b1 a1"));
        builder.apply(0, &crate::relations::rel_r6(1, 3), Direction::Forward);
        let (_, trace) = builder.finish();
        assert_eq!(
            trace.to_json(),
            r#"{"start":"b1 a1","steps":[{"position":0,"label":"R6","direction":"lhs->rhs","after":"a1"}]}"#
        );
    }
}
