//! Words over the generator alphabet `{a1, ..., a(n-1), b1, ..., b(n-1)}`.
//!
//! The textual form of a word is whitespace-separated tokens `a<i>` / `b<i>`;
//! the empty word is spelled `e`.

use std::cmp::Ordering;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::transform::Transformation;

/// Which of the two generator families a letter belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    A,
    B,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::A => write!(f, "a"),
            Family::B => write!(f, "b"),
        }
    }
}

/// A single letter `a<i>` or `b<i>`, `1 <= i <= n-1` for the ambient `n`.
///
/// The derived order is the default letter order used everywhere:
/// `a1 < ... < a(n-1) < b1 < ... < b(n-1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub family: Family,
    pub index: usize,
}

impl Letter {
    pub fn a(index: usize) -> Self {
        Letter { family: Family::A, index }
    }

    pub fn b(index: usize) -> Self {
        Letter { family: Family::B, index }
    }

    /// Parses a single token such as `a2` or `b12`.
    pub fn parse(token: &str) -> Result<Self> {
        let err = || Error::WordToken { token: token.to_string() };
        let mut chars = token.chars();
        let family = match chars.next() {
            Some('a') => Family::A,
            Some('b') => Family::B,
            _ => return Err(err()),
        };
        let digits = chars.as_str();
        if digits.is_empty() || !digits.bytes().all(|c| c.is_ascii_digit()) {
            return Err(err());
        }
        let index: usize = digits.parse().map_err(|_| err())?;
        if index == 0 {
            return Err(err());
        }
        Ok(Letter { family, index })
    }

    /// Checks that the letter fits the alphabet for chain size `n`.
    pub fn check_ambient(&self, n: usize) -> Result<()> {
        if n < 2 || self.index > n - 1 {
            return Err(Error::IndexRange { index: self.index, max: n.saturating_sub(1) });
        }
        Ok(())
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.index)
    }
}

impl Serialize for Letter {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// A finite sequence of letters; the empty word is allowed.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        Word(letters.into_iter().collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    pub fn all_in_family(&self, family: Family) -> bool {
        self.0.iter().all(|l| l.family == family)
    }

    /// Parses the surface syntax: whitespace-separated tokens, `e` for the
    /// empty word.
    pub fn parse(text: &str) -> Result<Self> {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens.is_empty() || tokens == ["e"] {
            return Ok(Word::empty());
        }
        let mut letters = Vec::with_capacity(tokens.len());
        for token in tokens {
            letters.push(Letter::parse(token)?);
        }
        Ok(Word(letters))
    }

    /// Like [`Word::parse`], additionally checking every letter against `n`.
    pub fn parse_for(text: &str, n: usize) -> Result<Self> {
        let word = Word::parse(text)?;
        for letter in word.letters() {
            letter.check_ambient(n)?;
        }
        Ok(word)
    }

    /// Shortlex comparison: first by length, then by the letter order.
    pub fn shortlex_cmp(&self, other: &Word) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "e");
        }
        for (i, letter) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{letter}")?;
        }
        Ok(())
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        Word::parse(&text).map_err(D::Error::custom)
    }
}

/// Evaluates a word as the left-to-right product of generator transformations
/// on the chain `{1, ..., n}`. The empty word evaluates to the identity.
pub fn evaluate_word(word: &Word, n: usize) -> Result<Transformation> {
    let mut acc = Transformation::identity(n);
    for letter in word.letters() {
        let gen = crate::transform::generator(*letter, n)?;
        acc = acc.compose(&gen)?;
    }
    Ok(acc)
}
