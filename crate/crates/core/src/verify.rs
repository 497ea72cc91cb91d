//! The guess-and-prove presentation verifier.
//!
//! A presentation is accepted when four conditions hold together: the
//! generators satisfy every relation; every word over the alphabet (up to a
//! length bound, exhaustively) canonicalizes into the candidate normal-form
//! set with a replayable trace and unchanged evaluation; the candidate set is
//! no larger than the monoid, with equality; and evaluation restricted to the
//! candidate set is a bijection onto the monoid.
//!
//! The word sweep is data-parallel; failures are still reported for the first
//! offending word in enumeration order, so output is deterministic.

use std::fmt;

use serde::Serialize;

use crate::canonical::{canonical_a, canonical_b, canonical_form, enumerate_w, enumerate_w_minus, enumerate_w_plus, stratum_of};
use crate::error::Result;
use crate::kb::{self, CompletionStatus};
use crate::monoid::{enumerate_direct, MonoidVariant};
use crate::par;
use crate::relations::{first_relation_failure, RelationSystem, SystemName};
use crate::trace::check_trace;
use crate::transform::{all_transformations, generator, Transformation};
use crate::word::{evaluate_word, Family, Letter, Word};

/// The candidate normal-form set a system is verified against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CanonicalTarget {
    /// `W = W- + W1 + ... + W(n-1)` over the full alphabet.
    Full,
    /// `W-`: strictly decreasing `a`-words.
    Decreasing,
    /// `W+`: strictly increasing `b`-words.
    Increasing,
}

impl CanonicalTarget {
    /// The matching target for each presented system; `R'` has no hand-built
    /// canonicalizer and is verified through the rewriting oracle instead.
    pub fn for_system(name: SystemName) -> Option<CanonicalTarget> {
        match name {
            SystemName::R => Some(CanonicalTarget::Full),
            SystemName::RMinus => Some(CanonicalTarget::Decreasing),
            SystemName::RPlus => Some(CanonicalTarget::Increasing),
            SystemName::RPrime => None,
        }
    }

    pub fn variant(self) -> MonoidVariant {
        match self {
            CanonicalTarget::Full => MonoidVariant::Io,
            CanonicalTarget::Decreasing => MonoidVariant::IoMinus,
            CanonicalTarget::Increasing => MonoidVariant::IoPlus,
        }
    }

    pub fn alphabet(self, n: usize) -> Vec<Letter> {
        let mut letters = Vec::new();
        match self {
            CanonicalTarget::Full => {
                letters.extend((1..n).map(Letter::a));
                letters.extend((1..n).map(Letter::b));
            }
            CanonicalTarget::Decreasing => letters.extend((1..n).map(Letter::a)),
            CanonicalTarget::Increasing => letters.extend((1..n).map(Letter::b)),
        }
        letters
    }

    fn candidates(self, n: usize) -> Vec<Word> {
        match self {
            CanonicalTarget::Full => enumerate_w(n).into_iter().map(|(w, _)| w).collect(),
            CanonicalTarget::Decreasing => enumerate_w_minus(n),
            CanonicalTarget::Increasing => enumerate_w_plus(n),
        }
    }

    fn member(self, word: &Word, n: usize) -> bool {
        match self {
            CanonicalTarget::Full => stratum_of(word, n).is_some(),
            CanonicalTarget::Decreasing => {
                word.all_in_family(Family::A)
                    && word.letters().windows(2).all(|p| p[0].index > p[1].index)
            }
            CanonicalTarget::Increasing => {
                word.all_in_family(Family::B)
                    && word.letters().windows(2).all(|p| p[0].index < p[1].index)
            }
        }
    }

    fn name(self) -> &'static str {
        match self {
            CanonicalTarget::Full => "W",
            CanonicalTarget::Decreasing => "W-",
            CanonicalTarget::Increasing => "W+",
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    /// Exhaustive word length; defaults to 6 for `n <= 5`, else 4.
    pub max_word_len: Option<usize>,
    /// Hard cap on the number of words swept; exceeding it flags the report
    /// as incomplete instead of silently passing.
    pub max_words: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { max_word_len: None, max_words: 50_000_000 }
    }
}

pub fn default_max_word_len(n: usize) -> usize {
    if n <= 5 {
        6
    } else {
        4
    }
}

/// Structured outcome of the guess-and-prove procedure.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub n: usize,
    pub system: String,
    pub target: String,
    pub relation_count: usize,
    pub relations_hold: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relation_failure: Option<String>,
    pub max_word_len: usize,
    pub words_checked: u64,
    pub sample_complete: bool,
    pub canonicalization_ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub canonicalization_failure: Option<String>,
    pub candidate_count: u64,
    pub monoid_size: u64,
    pub counting_ok: bool,
    pub evaluation_bijective: bool,
    pub verdict: bool,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "presentation {} at n={} (normal forms: {})", self.system, self.n, self.target)?;
        writeln!(
            f,
            "  relations: {} listed, {}",
            self.relation_count,
            if self.relations_hold { "all satisfied".to_string() } else {
                format!("FAILED ({})", self.relation_failure.as_deref().unwrap_or("?"))
            }
        )?;
        writeln!(
            f,
            "  canonicalization: {} words up to length {}{}: {}",
            self.words_checked,
            self.max_word_len,
            if self.sample_complete { "" } else { " (INCOMPLETE SAMPLE)" },
            if self.canonicalization_ok { "all reach the target set with valid traces".to_string() } else {
                format!("FAILED ({})", self.canonicalization_failure.as_deref().unwrap_or("?"))
            }
        )?;
        writeln!(
            f,
            "  counting: |{}| = {}, |M| = {} ({})",
            self.target,
            self.candidate_count,
            self.monoid_size,
            if self.counting_ok { "equal" } else { "MISMATCH" }
        )?;
        writeln!(
            f,
            "  evaluation on {}: {}",
            self.target,
            if self.evaluation_bijective { "bijective onto the monoid" } else { "NOT bijective" }
        )?;
        write!(f, "  verdict: {}", if self.verdict { "PASS" } else { "FAIL" })
    }
}

/// All words over the alphabet of length at most `max_len`, in length-then-
/// lexicographic order, truncated at `cap` full generations.
fn words_up_to(alphabet: &[Letter], max_len: usize, cap: u64) -> (Vec<Word>, bool) {
    let mut all = vec![Word::empty()];
    let mut frontier = vec![Word::empty()];
    for _ in 0..max_len {
        if alphabet.is_empty() {
            break;
        }
        if (all.len() as u64).saturating_mul(alphabet.len() as u64) > cap {
            return (all, false);
        }
        let mut next = Vec::with_capacity(frontier.len() * alphabet.len());
        for word in &frontier {
            for &x in alphabet {
                let mut letters = word.letters().to_vec();
                letters.push(x);
                next.push(Word(letters));
            }
        }
        all.extend(next.iter().cloned());
        if all.len() as u64 > cap {
            return (all, false);
        }
        frontier = next;
    }
    (all, true)
}

fn bijectivity(candidates: &[Word], n: usize, monoid: &[Transformation]) -> bool {
    let images = par::map_slice(candidates, |w| evaluate_word(w, n).ok());
    let mut seen: Vec<Transformation> = Vec::with_capacity(images.len());
    for image in images {
        match image {
            Some(t) => seen.push(t),
            None => return false,
        }
    }
    seen.sort_unstable();
    let before = seen.len();
    seen.dedup();
    seen.len() == before && seen == monoid
}

/// Runs the four conditions of the guess-and-prove method for a system with a
/// hand-built canonicalizer.
pub fn verify_presentation(
    n: usize,
    system: &RelationSystem,
    target: CanonicalTarget,
    config: &VerifyConfig,
) -> Result<VerificationReport> {
    let monoid = enumerate_direct(n, target.variant())?;
    let relation_failure = first_relation_failure(n, system);
    let relations_hold = relation_failure.is_none();

    let max_word_len = config.max_word_len.unwrap_or_else(|| default_max_word_len(n));
    let alphabet = target.alphabet(n);
    let (words, sample_complete) = words_up_to(&alphabet, max_word_len, config.max_words);
    let failures = par::map_slice(&words, |word| -> Option<String> {
        let (canonical, trace) = match target {
            CanonicalTarget::Full => match canonical_form(word, n) {
                Ok((w, _, t)) => (w, t),
                Err(e) => return Some(format!("`{word}` failed to canonicalize: {e}")),
            },
            CanonicalTarget::Decreasing => match canonical_a(word, n) {
                Ok(pair) => pair,
                Err(e) => return Some(format!("`{word}` failed to canonicalize: {e}")),
            },
            CanonicalTarget::Increasing => match canonical_b(word, n) {
                Ok(pair) => pair,
                Err(e) => return Some(format!("`{word}` failed to canonicalize: {e}")),
            },
        };
        if !target.member(&canonical, n) {
            return Some(format!("`{word}` canonicalizes to `{canonical}`, outside {}", target.name()));
        }
        let (before, after) = match (evaluate_word(word, n), evaluate_word(&canonical, n)) {
            (Ok(b), Ok(a)) => (b, a),
            _ => return Some(format!("`{word}` or `{canonical}` does not evaluate")),
        };
        if before != after {
            return Some(format!("`{word}` -> `{canonical}` changes evaluation {before} -> {after}"));
        }
        if !check_trace(&trace, system) {
            return Some(format!("trace for `{word}` does not replay over the given relations"));
        }
        None
    });
    let canonicalization_failure = failures.into_iter().flatten().next();
    let canonicalization_ok = canonicalization_failure.is_none();

    let candidates = target.candidates(n);
    let candidate_count = candidates.len() as u64;
    let monoid_size = monoid.len() as u64;
    let counting_ok = candidate_count == monoid_size;
    let evaluation_bijective = bijectivity(&candidates, n, &monoid.elements);

    let verdict = relations_hold
        && canonicalization_ok
        && counting_ok
        && evaluation_bijective
        && sample_complete;
    Ok(VerificationReport {
        n,
        system: system.name.to_string(),
        target: target.name().to_string(),
        relation_count: system.len(),
        relations_hold,
        relation_failure,
        max_word_len,
        words_checked: words.len() as u64,
        sample_complete,
        canonicalization_ok,
        canonicalization_failure,
        candidate_count,
        monoid_size,
        counting_ok,
        evaluation_bijective,
        verdict,
    })
}

/// Guess-and-prove for the reduced system `R'`, with the completed rewriting
/// system's irreducible words as the candidate set (there is no hand-built
/// canonicalizer on the reduced alphabet).
pub fn verify_presentation_kb(
    n: usize,
    system: &RelationSystem,
    fuel: u64,
    config: &VerifyConfig,
) -> Result<VerificationReport> {
    let monoid = enumerate_direct(n, MonoidVariant::Io)?;
    let relation_failure = first_relation_failure(n, system);
    let relations_hold = relation_failure.is_none();

    let completed = kb::complete(&kb::orient(system), fuel)?;
    let complete = completed.status == CompletionStatus::Complete;
    let candidates = if complete { kb::irreducible_words(&completed, None)? } else { Vec::new() };

    let max_word_len = config.max_word_len.unwrap_or_else(|| default_max_word_len(n));
    let (words, sample_complete) =
        words_up_to(&completed.alphabet, max_word_len, config.max_words);
    let failures = if complete {
        par::map_slice(&words, |word| -> Option<String> {
            let nf = kb::normalize(word, &completed);
            let (before, after) = match (evaluate_word(word, n), evaluate_word(&nf, n)) {
                (Ok(b), Ok(a)) => (b, a),
                _ => return Some(format!("`{word}` or `{nf}` does not evaluate")),
            };
            if before != after {
                return Some(format!("`{word}` -> `{nf}` changes evaluation"));
            }
            if candidates.binary_search_by(|c| c.shortlex_cmp(&nf)).is_err() {
                return Some(format!("`{word}` normalizes to `{nf}`, not an irreducible word"));
            }
            None
        })
    } else {
        vec![Some(format!("completion did not finish within fuel {fuel}"))]
    };
    let canonicalization_failure = failures.into_iter().flatten().next();
    let canonicalization_ok = canonicalization_failure.is_none();

    let candidate_count = candidates.len() as u64;
    let monoid_size = monoid.len() as u64;
    let counting_ok = complete && candidate_count == monoid_size;
    let evaluation_bijective = complete && bijectivity(&candidates, n, &monoid.elements);

    let verdict = relations_hold
        && canonicalization_ok
        && counting_ok
        && evaluation_bijective
        && sample_complete;
    Ok(VerificationReport {
        n,
        system: system.name.to_string(),
        target: "KB normal forms".to_string(),
        relation_count: system.len(),
        relations_hold,
        relation_failure,
        max_word_len,
        words_checked: words.len() as u64,
        sample_complete,
        canonicalization_ok,
        canonicalization_failure,
        candidate_count,
        monoid_size,
        counting_ok,
        evaluation_bijective,
        verdict,
    })
}

/// Result of the flip-automorphism property battery.
#[derive(Debug, Clone, Serialize)]
pub struct FlipReport {
    pub n: usize,
    /// Which set the element and pair sweeps ranged over.
    pub domain: String,
    pub involution_ok: bool,
    pub predicate_swap_ok: bool,
    pub automorphism_ok: bool,
    pub automorphism_pairs: u64,
    pub generator_map_ok: bool,
    pub submonoid_swap_ok: bool,
    pub verdict: bool,
}

impl fmt::Display for FlipReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "flip suite at n={} over {}", self.n, self.domain)?;
        let line = |ok: bool| if ok { "ok" } else { "FAIL" };
        writeln!(f, "  involution (flip twice is the identity): {}", line(self.involution_ok))?;
        writeln!(f, "  exchanges decreasing and increasing: {}", line(self.predicate_swap_ok))?;
        writeln!(
            f,
            "  automorphism on {} ordered pairs: {}",
            self.automorphism_pairs,
            line(self.automorphism_ok)
        )?;
        writeln!(f, "  maps a_i to b_(n-i) and back: {}", line(self.generator_map_ok))?;
        writeln!(f, "  swaps the decreasing/increasing submonoids: {}", line(self.submonoid_swap_ok))?;
        write!(f, "  verdict: {}", if self.verdict { "PASS" } else { "FAIL" })
    }
}

fn compose_raw(a: &[usize], b: &[usize], out: &mut [usize]) {
    for (o, &v) in out.iter_mut().zip(a.iter()) {
        *o = b[v - 1];
    }
}

fn flip_raw(a: &[usize], out: &mut [usize]) {
    let n = a.len();
    for (x, o) in out.iter_mut().enumerate() {
        *o = n + 1 - a[n - 1 - x];
    }
}

/// Exhaustive flip checks. For `n <= 5` the element and pair sweeps cover all
/// `n^n` full transformations; beyond that they cover the interval-range
/// monoid (whose size stays manageable).
pub fn flip_suite(n: usize) -> Result<FlipReport> {
    let (domain, elements): (String, Vec<Transformation>) = if n <= 5 {
        ("all full transformations".to_string(), all_transformations(n))
    } else {
        (
            "the interval-range monoid".to_string(),
            enumerate_direct(n, MonoidVariant::Io)?.elements,
        )
    };
    let raw: Vec<&[usize]> = elements.iter().map(|t| t.images()).collect();
    let flipped: Vec<Vec<usize>> = raw
        .iter()
        .map(|a| {
            let mut out = vec![0; n];
            flip_raw(a, &mut out);
            out
        })
        .collect();

    let involution_ok = raw.iter().zip(&flipped).all(|(a, fa)| {
        let mut back = vec![0; n];
        flip_raw(fa, &mut back);
        back == *a
    });
    let predicate_swap_ok = elements
        .iter()
        .zip(&flipped)
        .all(|(t, ft)| {
            let ft = Transformation::new(n, ft.clone()).expect("flip stays in range");
            t.is_decreasing() == ft.is_increasing() && t.is_increasing() == ft.is_decreasing()
        });

    let results = par::map_range(0..raw.len(), |i| {
        let mut ab = vec![0; n];
        let mut flip_ab = vec![0; n];
        let mut fa_fb = vec![0; n];
        for j in 0..raw.len() {
            compose_raw(raw[i], raw[j], &mut ab);
            flip_raw(&ab, &mut flip_ab);
            compose_raw(&flipped[i], &flipped[j], &mut fa_fb);
            if flip_ab != fa_fb {
                return false;
            }
        }
        true
    });
    let automorphism_ok = results.into_iter().all(|ok| ok);
    let automorphism_pairs = (raw.len() as u64) * (raw.len() as u64);

    let generator_map_ok = n == 1
        || (1..n).all(|i| {
            let ai = generator(Letter::a(i), n).expect("valid generator");
            let bi = generator(Letter::b(i), n).expect("valid generator");
            ai.flip() == generator(Letter::b(n - i), n).expect("valid generator")
                && bi.flip() == generator(Letter::a(n - i), n).expect("valid generator")
        });

    let minus = enumerate_direct(n, MonoidVariant::IoMinus)?;
    let plus = enumerate_direct(n, MonoidVariant::IoPlus)?;
    let io = enumerate_direct(n, MonoidVariant::Io)?;
    let mut minus_flipped: Vec<Transformation> = minus.elements.iter().map(|t| t.flip()).collect();
    minus_flipped.sort_unstable();
    let mut io_flipped: Vec<Transformation> = io.elements.iter().map(|t| t.flip()).collect();
    io_flipped.sort_unstable();
    let submonoid_swap_ok = minus_flipped == plus.elements && io_flipped == io.elements;

    let verdict = involution_ok
        && predicate_swap_ok
        && automorphism_ok
        && generator_map_ok
        && submonoid_swap_ok;
    Ok(FlipReport {
        n,
        domain,
        involution_ok,
        predicate_swap_ok,
        automorphism_ok,
        automorphism_pairs,
        generator_map_ok,
        submonoid_swap_ok,
        verdict,
    })
}
