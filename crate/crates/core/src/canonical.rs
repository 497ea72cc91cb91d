//! Certified canonicalization of words into the normal-form sets
//! `W- , W1, ..., W(n-1)`.
//!
//! `W-` holds the strictly decreasing `a`-words; `Wl` holds the words
//! `a_{i1} ... a_{ik} b_{n-1}^l` with `i_k < ... < i_1 <= n-l+k-2`. Every
//! rewriting routine here is the constructive procedure extracted from the
//! corresponding congruence argument, not a search: it terminates by
//! construction and emits a [`DerivationTrace`] of primitive `R1`..`R7` steps
//! that [`crate::trace::check_trace`] can replay independently.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::monoid::binomial;
use crate::relations::{rel_r1, rel_r2, rel_r3, rel_r4, rel_r5, rel_r6, rel_r7};
use crate::trace::{DerivationTrace, Direction, TraceBuilder};
use crate::word::{Family, Letter, Word};

/// Which normal-form stratum a canonical word lies in: `ell = 0` is `W-`,
/// otherwise `W_ell`; `k` counts the `a`-letters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CanonicalStratum {
    pub ell: usize,
    pub k: usize,
}

impl fmt::Display for CanonicalStratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ell == 0 {
            write!(f, "W-")
        } else {
            write!(f, "W{}", self.ell)
        }
    }
}

fn check_word(word: &Word, n: usize, family: Option<Family>) -> Result<()> {
    for letter in word.letters() {
        letter.check_ambient(n)?;
        if let Some(required) = family {
            if letter.family != required {
                return Err(Error::UnexpectedLetter { letter: letter.to_string() });
            }
        }
    }
    Ok(())
}

/// Inserts the letters of `[start, end)` one at a time, keeping the prefix a
/// strictly decreasing `a`-word. Returns the new end of the region. Uses only
/// `R1` (drop against `a(n-1)`) and `R2` (slide the incoming letter left,
/// incrementing it past each smaller index).
fn canonical_a_region(b: &mut TraceBuilder, n: usize, start: usize, end: usize) -> usize {
    let mut end = end;
    let mut norm = 0usize;
    while start + norm < end {
        let pos = start + norm;
        let j = b.letter(pos).index;
        if norm == 0 {
            norm = 1;
            continue;
        }
        let smallest = b.letter(pos - 1).index;
        if j == n - 1 {
            b.apply(pos - 1, &rel_r1(smallest, n), Direction::Forward);
            end -= 1;
            continue;
        }
        if j < smallest {
            norm += 1;
            continue;
        }
        // Cascade: smallest <= j <= n-2, so at least one slide applies.
        let mut p = pos;
        let mut v = j;
        loop {
            if p == start {
                norm += 1;
                break;
            }
            let left = b.letter(p - 1).index;
            if v == n - 1 {
                b.apply(p - 1, &rel_r1(left, n), Direction::Forward);
                end -= 1;
                break;
            }
            if left > v {
                norm += 1;
                break;
            }
            b.apply(p - 1, &rel_r2(left, v, n), Direction::Forward);
            p -= 1;
            v += 1;
        }
    }
    end
}

/// Mirror image of [`canonical_a_region`]: keeps the prefix a strictly
/// increasing `b`-word using `R3` (drop against `b1`) and `R4` (slide the
/// incoming letter left, decrementing it past each larger index).
fn canonical_b_region(b: &mut TraceBuilder, n: usize, start: usize, end: usize) -> usize {
    let mut end = end;
    let mut norm = 0usize;
    while start + norm < end {
        let pos = start + norm;
        let j = b.letter(pos).index;
        if norm == 0 {
            norm = 1;
            continue;
        }
        let largest = b.letter(pos - 1).index;
        if j == 1 {
            b.apply(pos - 1, &rel_r3(largest, n), Direction::Forward);
            end -= 1;
            continue;
        }
        if j > largest {
            norm += 1;
            continue;
        }
        let mut p = pos;
        let mut v = j;
        loop {
            if p == start {
                norm += 1;
                break;
            }
            let left = b.letter(p - 1).index;
            if v == 1 {
                b.apply(p - 1, &rel_r3(left, n), Direction::Forward);
                end -= 1;
                break;
            }
            if left < v {
                norm += 1;
                break;
            }
            // b_left b_v = b_{v-1} b_left read right to left.
            b.apply(p - 1, &rel_r4(v - 1, left - 1, n), Direction::Backward);
            p -= 1;
            v -= 1;
        }
    }
    end
}

/// The seven primitive steps deriving `b_i a_j ~ a_{j-1} b_{i-1}` for
/// `2 <= j <= i <= n-1`, applied to the factor at position `p`.
fn ba_swap_steps(b: &mut TraceBuilder, p: usize, n: usize, i: usize, j: usize) {
    b.apply(p + 1, &rel_r6(j, n), Direction::Backward); // a_j -> b_j a_1
    b.apply(p, &rel_r4(j - 1, i - 1, n), Direction::Backward); // b_i b_j -> b_{j-1} b_i
    b.apply(p + 1, &rel_r6(i, n), Direction::Forward); // b_i a_1 -> a_i
    b.apply(p, &rel_r5(j - 1, i, n), Direction::Forward); // b_{j-1} a_i -> a_i b_{j-1}
    b.apply(p + 1, &rel_r7(j - 1, n), Direction::Backward); // b_{j-1} -> a_{j-1} b_{n-1}
    b.apply(p, &rel_r2(j - 1, i - 1, n), Direction::Backward); // a_i a_{j-1} -> a_{j-1} a_{i-1}
    b.apply(p + 1, &rel_r7(i - 1, n), Direction::Forward); // a_{i-1} b_{n-1} -> b_{i-1}
}

/// Standalone derivation of the swap `b_i a_j ~ a_{j-1} b_{i-1}`,
/// `2 <= j <= i <= n-1`, as a checkable trace over `R`.
pub fn derive_ba_swap(n: usize, i: usize, j: usize) -> Result<(Word, DerivationTrace)> {
    if !(2 <= j && j <= i && n >= 2 && i < n) {
        return Err(Error::Precondition(format!(
            "swap derivation needs 2 <= j <= i <= n-1, got i={i}, j={j}, n={n}"
        )));
    }
    let mut b = TraceBuilder::new(Word::from_letters([Letter::b(i), Letter::a(j)]));
    ba_swap_steps(&mut b, 0, n, i, j);
    Ok(b.finish())
}

/// Eliminates every factor `b_i a_j`, leftmost first, until the word is a
/// pure `a`-prefix followed by a pure `b`-suffix. Returns the boundary.
fn separate_region(b: &mut TraceBuilder, n: usize) -> usize {
    loop {
        let pos = b
            .word()
            .letters()
            .windows(2)
            .position(|pair| pair[0].family == Family::B && pair[1].family == Family::A);
        let Some(p) = pos else { break };
        let i = b.letter(p).index;
        let j = b.letter(p + 1).index;
        if j == 1 {
            b.apply(p, &rel_r6(i, n), Direction::Forward);
        } else if i < j {
            b.apply(p, &rel_r5(i, j, n), Direction::Forward);
        } else {
            ba_swap_steps(b, p, n, i, j);
        }
    }
    b.word().letters().iter().position(|l| l.family == Family::B).unwrap_or(b.len())
}

/// Rewrites a word into `u v` with `u` over `A` and `v` over `B`.
pub fn separate(word: &Word, n: usize) -> Result<(Word, Word, DerivationTrace)> {
    check_word(word, n, None)?;
    let mut b = TraceBuilder::new(word.clone());
    let boundary = separate_region(&mut b, n);
    let (result, trace) = b.finish();
    let (u, v) = result.letters().split_at(boundary);
    Ok((Word(u.to_vec()), Word(v.to_vec()), trace))
}

/// Rewrites the canonical `b`-word in `[start, end)` into `u' b_{n-1}^l`
/// where `l = end - start`. Round `t` turns the leftmost remaining `b`-letter
/// into `a_c b_{n-1}` (`R7` backwards) and pushes the fresh `b_{n-1}` right
/// through the remaining letters (`R4` backwards), decrementing each.
fn b_tail_region(b: &mut TraceBuilder, n: usize, start: usize, end: usize) -> usize {
    let ell = end - start;
    for t in 0..ell {
        let pos = start + t;
        let c = b.letter(pos).index;
        b.apply(pos, &rel_r7(c, n), Direction::Backward);
        for s in 0..ell - 1 - t {
            let q = pos + 1 + s;
            let m = b.letter(q + 1).index;
            b.apply(q, &rel_r4(m - 1, n - 2, n), Direction::Backward);
        }
    }
    ell
}

/// Rewrites a nonempty `b`-word `v` into `u' b_{n-1}^l` with `u'` over `A`
/// and `l` the length of the canonical form of `v`.
pub fn factor_b_tail(v: &Word, n: usize) -> Result<(Word, usize, DerivationTrace)> {
    if v.is_empty() {
        return Err(Error::EmptyWord);
    }
    check_word(v, n, Some(Family::B))?;
    let mut b = TraceBuilder::new(v.clone());
    let end = canonical_b_region(&mut b, n, 0, v.len());
    let ell = b_tail_region(&mut b, n, 0, end);
    let (result, trace) = b.finish();
    let u_prime = Word(result.letters()[..ell].to_vec());
    Ok((u_prime, ell, trace))
}

/// Absorbs the letter `a_c` at position `p` into the `b_{n-1}` tail that
/// follows it: one `R7` step, then `R4` shifts until the drifting letter
/// reaches index `n-1` and merges. Requires `c >= n - l` for tail length `l`.
fn absorb_letter_steps(b: &mut TraceBuilder, p: usize, n: usize) {
    let c = b.letter(p).index;
    b.apply(p, &rel_r7(c, n), Direction::Forward);
    let mut q = p;
    let mut v = c;
    while v < n - 1 {
        b.apply(q, &rel_r4(v, n - 2, n), Direction::Forward);
        q += 1;
        v += 1;
    }
}

/// Standalone derivation of the absorption `a_i b_{n-1}^l ~ b_{n-1}^l` for
/// `n-l <= i <= n-1`, as a checkable trace over `R`.
pub fn derive_tail_absorption(n: usize, i: usize, ell: usize) -> Result<(Word, DerivationTrace)> {
    if n < 2 || ell < 1 || ell > n - 1 {
        return Err(Error::ExponentRange { ell, max: n.saturating_sub(1) });
    }
    if !(n - ell <= i && i < n) {
        return Err(Error::Precondition(format!(
            "absorption needs n-l <= i <= n-1, got i={i}, l={ell}, n={n}"
        )));
    }
    let mut letters = vec![Letter::a(i)];
    letters.extend(std::iter::repeat_n(Letter::b(n - 1), ell));
    let mut b = TraceBuilder::new(Word(letters));
    absorb_letter_steps(&mut b, 0, n);
    Ok(b.finish())
}

/// Canonicalizes the `a`-part `[start, a_end)` (the tail `b_{n-1}^ell`
/// follows it) and, if its head index overflows the stratum bound, rotates
/// the high block to the back and absorbs it into the tail. Returns the
/// stratum of the resulting word.
fn absorb_region(
    b: &mut TraceBuilder,
    n: usize,
    start: usize,
    a_end: usize,
    ell: usize,
) -> CanonicalStratum {
    let a_end = canonical_a_region(b, n, start, a_end);
    let k = a_end - start;
    if k == 0 {
        return CanonicalStratum { ell, k: 0 };
    }
    let bound = n as isize - ell as isize + k as isize - 2;
    if (b.letter(start).index as isize) <= bound {
        return CanonicalStratum { ell, k };
    }
    // Overflow: find the cut t with i_t > n-l+k-t-1 > i_{t+1} (sentinel -1).
    let index_at = |b: &TraceBuilder, t: usize| -> isize {
        if t <= k {
            b.letter(start + t - 1).index as isize
        } else {
            -1
        }
    };
    let limit = |t: usize| n as isize - ell as isize + k as isize - t as isize - 1;
    let mut cut = None;
    for t in 1..=k {
        if index_at(b, t) > limit(t) && limit(t) > index_at(b, t + 1) {
            cut = Some(t);
            break;
        }
    }
    let t = cut.unwrap_or_else(|| {
        panic!(
            "no rotation cut exists in `{}` for tail length {ell}; \
             the canonicalization argument is violated",
            b.word()
        )
    });
    // Rotate rounds s = 1..=t: the head slides right past the remaining
    // block, losing one index per slide (R2 backwards).
    for s in 1..=t {
        for p in start..start + (k - s) {
            let head = b.letter(p).index;
            let next = b.letter(p + 1).index;
            b.apply(p, &rel_r2(next, head - 1, n), Direction::Backward);
        }
    }
    // Absorb the landed block, rightmost letter first (adjacent to the tail).
    for r in 0..t {
        let p = start + (k - r) - 1;
        let c = b.letter(p).index;
        assert!(
            c + ell >= n,
            "landed letter a{c} in `{}` cannot be absorbed by a tail of length {ell}",
            b.word()
        );
        absorb_letter_steps(b, p, n);
    }
    CanonicalStratum { ell, k: k - t }
}

/// Canonical form of a pure `a`-word: the strictly decreasing word of `W-`,
/// never longer than the input, derived with `R1`/`R2` steps only.
pub fn canonical_a(word: &Word, n: usize) -> Result<(Word, DerivationTrace)> {
    check_word(word, n, Some(Family::A))?;
    let mut b = TraceBuilder::new(word.clone());
    canonical_a_region(&mut b, n, 0, word.len());
    Ok(b.finish())
}

/// Canonical form of a pure `b`-word: the strictly increasing word of `W+`,
/// never longer than the input, derived with `R3`/`R4` steps only.
pub fn canonical_b(word: &Word, n: usize) -> Result<(Word, DerivationTrace)> {
    check_word(word, n, Some(Family::B))?;
    let mut b = TraceBuilder::new(word.clone());
    canonical_b_region(&mut b, n, 0, word.len());
    Ok(b.finish())
}

/// Rewrites `u b_{n-1}^ell` into a word of `W_ell`.
pub fn absorb_overflow(u: &Word, ell: usize, n: usize) -> Result<(Word, DerivationTrace)> {
    if n < 2 || ell < 1 || ell > n - 1 {
        return Err(Error::ExponentRange { ell, max: n.saturating_sub(1) });
    }
    check_word(u, n, Some(Family::A))?;
    let mut letters = u.letters().to_vec();
    letters.extend(std::iter::repeat_n(Letter::b(n - 1), ell));
    let mut b = TraceBuilder::new(Word(letters));
    absorb_region(&mut b, n, 0, u.len(), ell);
    Ok(b.finish())
}

/// Full canonicalization pipeline: separate, canonicalize and refactor the
/// `b`-part into a `b_{n-1}` tail, then canonicalize and absorb the `a`-part.
/// The result lies in exactly one stratum, evaluation is preserved, and the
/// trace is a single checkable chain over `R`.
pub fn canonical_form(word: &Word, n: usize) -> Result<(Word, CanonicalStratum, DerivationTrace)> {
    check_word(word, n, None)?;
    let mut b = TraceBuilder::new(word.clone());
    let boundary = separate_region(&mut b, n);
    let stratum = if boundary == b.len() {
        let end = canonical_a_region(&mut b, n, 0, boundary);
        CanonicalStratum { ell: 0, k: end }
    } else {
        let len = b.len();
        let end = canonical_b_region(&mut b, n, boundary, len);
        let ell = b_tail_region(&mut b, n, boundary, end);
        absorb_region(&mut b, n, 0, boundary + ell, ell)
    };
    let (result, trace) = b.finish();
    debug_assert_eq!(stratum_of(&result, n), Some(stratum), "canonical word `{result}`");
    Ok((result, stratum, trace))
}

/// Syntactic membership test for `W`: returns the stratum if the word is a
/// strictly decreasing `a`-word (`W-`) or `a_{i1} ... a_{ik} b_{n-1}^l` with
/// `i_1 <= n-l+k-2` (`W_l`), and `None` otherwise.
pub fn stratum_of(word: &Word, n: usize) -> Option<CanonicalStratum> {
    for letter in word.letters() {
        if letter.check_ambient(n).is_err() {
            return None;
        }
    }
    let letters = word.letters();
    let split = letters.iter().position(|l| l.family == Family::B).unwrap_or(letters.len());
    let (a_part, b_part) = letters.split_at(split);
    if b_part.iter().any(|l| l.family != Family::B || l.index != n - 1) {
        return None;
    }
    let ell = b_part.len();
    if ell + 1 > n {
        return None;
    }
    if !a_part.windows(2).all(|pair| pair[0].index > pair[1].index) {
        return None;
    }
    let k = a_part.len();
    if ell > 0 && k > 0 {
        let bound = n as isize - ell as isize + k as isize - 2;
        if a_part[0].index as isize > bound {
            return None;
        }
    }
    Some(CanonicalStratum { ell, k })
}

fn combinations(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > m {
        return out;
    }
    let mut current: Vec<usize> = (1..=k).collect();
    loop {
        out.push(current.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if current[i] != i + 1 + m - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        current[i] += 1;
        for j in i + 1..k {
            current[j] = current[j - 1] + 1;
        }
    }
}

/// The number of `W_ell` words with `k` `a`-letters (`ell = 0` reads as the
/// `W-` row). The index bound is `min(n-ell+k-2, n-1)`; the `k = 0` word
/// `b_{n-1}^ell` always exists, even where the raw bound is negative.
pub fn stratum_count(n: usize, ell: usize, k: usize) -> u64 {
    assert!(n >= 1);
    if k == 0 {
        return 1;
    }
    let m = (n as isize - ell as isize + k as isize - 2).min(n as isize - 1);
    if m < k as isize {
        0
    } else {
        binomial(m as usize, k)
    }
}

/// `|W|` by the stratum-counting convention; equals `(n+1) 2^(n-2)` for
/// `n >= 2` and `1` for `n = 1`.
pub fn w_size(n: usize) -> u64 {
    assert!(n >= 1);
    (0..n).map(|ell| (0..n).map(|k| stratum_count(n, ell, k)).sum::<u64>()).sum()
}

/// All canonical words with their strata: the `W-` block first, then
/// `W1, ..., W(n-1)`, each block ordered by `a`-letter count and then
/// lexicographically.
pub fn enumerate_w(n: usize) -> Vec<(Word, CanonicalStratum)> {
    assert!(n >= 1);
    let mut out = Vec::new();
    for ell in 0..n {
        let mut block: Vec<(Word, CanonicalStratum)> = Vec::new();
        for k in 0..n {
            if k == 0 {
                let word = Word::from_letters(std::iter::repeat_n(Letter::b(n - 1), ell));
                block.push((word, CanonicalStratum { ell, k: 0 }));
                continue;
            }
            let m = (n as isize - ell as isize + k as isize - 2).min(n as isize - 1);
            if m < k as isize {
                continue;
            }
            for combo in combinations(m as usize, k) {
                let mut letters: Vec<Letter> =
                    combo.iter().rev().map(|&i| Letter::a(i)).collect();
                letters.extend(std::iter::repeat_n(Letter::b(n - 1), ell));
                block.push((Word(letters), CanonicalStratum { ell, k }));
            }
        }
        block.sort_by(|x, y| x.1.k.cmp(&y.1.k).then_with(|| x.0.cmp(&y.0)));
        out.extend(block);
    }
    out
}

/// The strictly decreasing `a`-words, `W-` (in enumeration order).
pub fn enumerate_w_minus(n: usize) -> Vec<Word> {
    enumerate_w(n).into_iter().filter(|(_, s)| s.ell == 0).map(|(w, _)| w).collect()
}

/// The strictly increasing `b`-words, `W+`, ordered by length then
/// lexicographically.
pub fn enumerate_w_plus(n: usize) -> Vec<Word> {
    assert!(n >= 1);
    let mut out = Vec::new();
    for ell in 0..n {
        let mut block = Vec::new();
        for combo in combinations(n - 1, ell) {
            block.push(Word::from_letters(combo.iter().map(|&i| Letter::b(i))));
        }
        block.sort();
        out.extend(block);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relations::{relations, SystemName};
    use crate::trace::check_trace;
    use crate::word::evaluate_word;

    fn w(text: &str) -> Word {
        Word::parse(text).unwrap()
    }

    fn checked(n: usize, trace: &DerivationTrace) {
        let system = relations(n, SystemName::R).unwrap();
        assert!(check_trace(trace, &system), "trace over R failed: {trace:?}");
    }

    #[test]
    fn canonical_a_examples() {
        let (word, trace) = canonical_a(&w("a1 a1"), 3).unwrap();
        assert_eq!(word, w("a2 a1"));
        checked(3, &trace);
        let minus = relations(3, SystemName::RMinus).unwrap();
        assert!(check_trace(&trace, &minus), "trace must stay inside R-");

        let (word, trace) = canonical_a(&w("a1 a2"), 3).unwrap();
        assert_eq!(word, w("a1"));
        checked(3, &trace);

        let (word, trace) = canonical_a(&Word::empty(), 3).unwrap();
        assert_eq!(word, Word::empty());
        assert!(trace.is_empty());

        assert!(canonical_a(&w("b1"), 3).is_err());
    }

    #[test]
    fn canonical_b_examples() {
        let (word, trace) = canonical_b(&w("b2 b1"), 3).unwrap();
        assert_eq!(word, w("b2"));
        let plus = relations(3, SystemName::RPlus).unwrap();
        assert!(check_trace(&trace, &plus));

        let (word, _) = canonical_b(&w("b1 b2"), 3).unwrap();
        assert_eq!(word, w("b1 b2"));

        let (word, _) = canonical_b(&w("b1 b1"), 3).unwrap();
        assert_eq!(word, w("b1"));

        assert!(canonical_b(&w("a1"), 3).is_err());
    }

    #[test]
    fn canonical_words_are_never_longer_and_preserve_evaluation() {
        // Exhaustive over all a-words (resp. b-words) of length <= 5 at n = 4.
        let n = 4;
        let letters_a: Vec<Letter> = (1..n).map(Letter::a).collect();
        let letters_b: Vec<Letter> = (1..n).map(Letter::b).collect();
        let mut frontier = vec![Word::empty()];
        for _ in 0..5 {
            let mut next = Vec::new();
            for word in &frontier {
                for &x in letters_a.iter().chain(&letters_b) {
                    let mut ls = word.letters().to_vec();
                    ls.push(x);
                    next.push(Word(ls));
                }
            }
            for word in &next {
                if word.all_in_family(Family::A) {
                    let (nf, trace) = canonical_a(word, n).unwrap();
                    assert!(nf.len() <= word.len());
                    assert!(nf.letters().windows(2).all(|p| p[0].index > p[1].index));
                    assert_eq!(evaluate_word(&nf, n).unwrap(), evaluate_word(word, n).unwrap());
                    checked(n, &trace);
                }
                if word.all_in_family(Family::B) {
                    let (nf, trace) = canonical_b(word, n).unwrap();
                    assert!(nf.len() <= word.len());
                    assert!(nf.letters().windows(2).all(|p| p[0].index < p[1].index));
                    assert_eq!(evaluate_word(&nf, n).unwrap(), evaluate_word(word, n).unwrap());
                    checked(n, &trace);
                }
            }
            frontier = next;
        }
    }

    #[test]
    fn ba_swap_derivation_replays_for_all_indices() {
        for n in 2..=6 {
            let system = relations(n, SystemName::R).unwrap();
            for i in 2..n {
                for j in 2..=i {
                    let (word, trace) = derive_ba_swap(n, i, j).unwrap();
                    assert_eq!(word, Word::from_letters([Letter::a(j - 1), Letter::b(i - 1)]));
                    assert!(check_trace(&trace, &system), "swap i={i} j={j} n={n}");
                    assert_eq!(
                        evaluate_word(trace.result(), n).unwrap(),
                        evaluate_word(&trace.start, n).unwrap()
                    );
                }
            }
        }
        assert!(derive_ba_swap(3, 1, 1).is_err());
    }

    #[test]
    fn tail_absorption_derivation_replays_for_all_indices() {
        for n in 2..=6 {
            let system = relations(n, SystemName::R).unwrap();
            for ell in 1..n {
                for i in n - ell..n {
                    let (word, trace) = derive_tail_absorption(n, i, ell).unwrap();
                    let tail =
                        Word::from_letters(std::iter::repeat_n(Letter::b(n - 1), ell));
                    assert_eq!(word, tail);
                    assert!(check_trace(&trace, &system), "absorb i={i} l={ell} n={n}");
                }
            }
        }
        assert!(derive_tail_absorption(4, 1, 2).is_err());
        assert!(derive_tail_absorption(4, 2, 5).is_err());
    }

    #[test]
    fn separate_examples() {
        let (u, v, trace) = separate(&w("b2 a2"), 3).unwrap();
        assert_eq!((u, v), (w("a1"), w("b1")));
        checked(3, &trace);

        let (u, v, _) = separate(&w("b1 a1"), 3).unwrap();
        assert_eq!((u, v), (w("a1"), Word::empty()));

        let (u, v, trace) = separate(&w("a1 b2"), 3).unwrap();
        assert_eq!((u, v), (w("a1"), w("b2")));
        assert!(trace.is_empty());
    }

    #[test]
    fn factor_b_tail_examples() {
        let (u, ell, trace) = factor_b_tail(&w("b2"), 3).unwrap();
        assert_eq!((u, ell), (w("a2"), 1));
        checked(3, &trace);

        let (u, ell, trace) = factor_b_tail(&w("b1 b2"), 3).unwrap();
        assert_eq!((u.clone(), ell), (w("a1 a1"), 2));
        checked(3, &trace);
        assert_eq!(
            evaluate_word(&w("a1 a1 b2 b2"), 3).unwrap(),
            evaluate_word(&w("b1 b2"), 3).unwrap()
        );

        let (u, ell, _) = factor_b_tail(&w("b1"), 3).unwrap();
        assert_eq!((u, ell), (w("a1"), 1));

        assert!(factor_b_tail(&Word::empty(), 3).is_err());
        assert!(factor_b_tail(&w("a1"), 3).is_err());
    }

    #[test]
    fn factor_b_tail_replays_on_every_canonical_b_word() {
        for n in 2..=6 {
            let system = relations(n, SystemName::R).unwrap();
            for v in enumerate_w_plus(n) {
                if v.is_empty() {
                    continue;
                }
                let (u, ell, trace) = factor_b_tail(&v, n).unwrap();
                assert_eq!(u.len(), ell);
                assert!(check_trace(&trace, &system), "chain fails for {v} at n={n}");
                let mut expected = u.letters().to_vec();
                expected.extend(std::iter::repeat_n(Letter::b(n - 1), ell));
                assert_eq!(trace.result(), &Word(expected));
            }
        }
    }

    #[test]
    fn factor_b_tail_preserves_evaluation_exhaustively() {
        let n = 4;
        let letters: Vec<Letter> = (1..n).map(Letter::b).collect();
        let mut frontier: Vec<Word> = letters.iter().map(|&l| Word(vec![l])).collect();
        for _ in 0..4 {
            for v in &frontier {
                let (u, ell, trace) = factor_b_tail(v, n).unwrap();
                checked(n, &trace);
                assert_eq!(u.len(), ell);
                assert!(u.all_in_family(Family::A));
                assert_eq!(
                    evaluate_word(trace.result(), n).unwrap(),
                    evaluate_word(v, n).unwrap()
                );
            }
            let mut next = Vec::new();
            for word in &frontier {
                for &x in &letters {
                    let mut ls = word.letters().to_vec();
                    ls.push(x);
                    next.push(Word(ls));
                }
            }
            frontier = next;
        }
    }

    #[test]
    fn absorb_overflow_examples() {
        let (word, trace) = absorb_overflow(&w("a1 a1"), 2, 3).unwrap();
        assert_eq!(word, w("b2 b2"));
        checked(3, &trace);
        assert_eq!(
            evaluate_word(&w("a1 a1 b2 b2"), 3).unwrap(),
            evaluate_word(&w("b2 b2"), 3).unwrap()
        );

        let (word, _) = absorb_overflow(&w("a1"), 1, 3).unwrap();
        assert_eq!(word, w("a1 b2"));

        let (word, _) = absorb_overflow(&w("a2"), 2, 3).unwrap();
        assert_eq!(word, w("b2 b2"));

        assert!(absorb_overflow(&w("a1"), 0, 3).is_err());
        assert!(absorb_overflow(&w("a1"), 3, 3).is_err());
    }

    #[test]
    fn canonical_form_examples() {
        let (word, stratum, trace) = canonical_form(&w("b2 a2"), 3).unwrap();
        assert_eq!(word, w("a2 a1 b2"));
        assert_eq!(stratum, CanonicalStratum { ell: 1, k: 2 });
        checked(3, &trace);
        assert_eq!(evaluate_word(&word, 3).unwrap().images(), &[2, 2, 2]);

        let (word, stratum, trace) = canonical_form(&Word::empty(), 3).unwrap();
        assert_eq!(word, Word::empty());
        assert_eq!(stratum, CanonicalStratum { ell: 0, k: 0 });
        assert!(trace.is_empty());

        let (word, stratum, trace) = canonical_form(&w("a2 b2 b1"), 3).unwrap();
        assert_eq!(word, w("b2"));
        assert_eq!(stratum, CanonicalStratum { ell: 1, k: 0 });
        checked(3, &trace);
        assert_eq!(evaluate_word(&word, 3).unwrap().images(), &[2, 3, 3]);
    }

    #[test]
    fn canonical_form_works_at_tiny_sizes() {
        let (word, stratum, _) = canonical_form(&Word::empty(), 1).unwrap();
        assert_eq!(word, Word::empty());
        assert_eq!(stratum, CanonicalStratum { ell: 0, k: 0 });
        assert!(canonical_form(&w("a1"), 1).is_err());

        let (word, stratum, trace) = canonical_form(&w("b1 a1 b1 b1"), 2).unwrap();
        assert_eq!(word, w("b1"));
        assert_eq!(stratum, CanonicalStratum { ell: 1, k: 0 });
        checked(2, &trace);
    }

    #[test]
    fn stratum_membership() {
        assert_eq!(stratum_of(&Word::empty(), 3), Some(CanonicalStratum { ell: 0, k: 0 }));
        assert_eq!(stratum_of(&w("a2 a1"), 3), Some(CanonicalStratum { ell: 0, k: 2 }));
        assert_eq!(stratum_of(&w("a2 a1 b2"), 3), Some(CanonicalStratum { ell: 1, k: 2 }));
        assert_eq!(stratum_of(&w("b2 b2"), 3), Some(CanonicalStratum { ell: 2, k: 0 }));
        assert_eq!(stratum_of(&w("a1 a2"), 3), None, "not decreasing");
        assert_eq!(stratum_of(&w("a2 b2"), 3), None, "head exceeds the W1 bound");
        assert_eq!(stratum_of(&w("b1"), 3), None, "tail letters must be b2");
        assert_eq!(stratum_of(&w("b2 a1"), 3), None, "a after b");
        assert_eq!(stratum_of(&w("b2 b2 b2"), 3), None, "tail too long");
    }

    #[test]
    fn w_enumeration_at_n3_matches_the_hand_list() {
        let words: Vec<String> =
            enumerate_w(3).into_iter().map(|(w, _)| w.to_string()).collect();
        assert_eq!(
            words,
            vec!["e", "a1", "a2", "a2 a1", "b2", "a1 b2", "a2 a1 b2", "b2 b2"]
        );
    }

    #[test]
    fn w_sizes() {
        assert_eq!(w_size(2), 3);
        assert_eq!(w_size(4), 20);
        assert_eq!(w_size(1), 1);
        for n in 1..=8 {
            let words = enumerate_w(n);
            assert_eq!(words.len() as u64, w_size(n), "n={n}");
            let mut unique: Vec<&Word> = words.iter().map(|(w, _)| w).collect();
            unique.sort();
            unique.dedup();
            assert_eq!(unique.len(), words.len(), "no duplicates at n={n}");
            for (word, stratum) in &words {
                assert_eq!(stratum_of(word, n).as_ref(), Some(stratum));
            }
        }
    }

    #[test]
    fn w_minus_is_the_power_set() {
        for n in 1..=8_usize {
            let words = enumerate_w_minus(n);
            assert_eq!(words.len() as u64, 1 << (n - 1));
            // Bijection with subsets of {1..n-1}: index sets are exactly the
            // distinct subsets.
            let mut subsets: Vec<Vec<usize>> = words
                .iter()
                .map(|w| {
                    let mut ix: Vec<usize> = w.letters().iter().map(|l| l.index).collect();
                    ix.sort_unstable();
                    ix
                })
                .collect();
            subsets.sort();
            subsets.dedup();
            assert_eq!(subsets.len() as u64, 1 << (n - 1));
        }
    }

    #[test]
    fn w_plus_mirrors_w_minus() {
        for n in 1..=6 {
            assert_eq!(enumerate_w_plus(n).len(), enumerate_w_minus(n).len());
            for word in enumerate_w_plus(n) {
                assert!(word.all_in_family(Family::B));
                assert!(word.letters().windows(2).all(|p| p[0].index < p[1].index));
            }
        }
    }
}
