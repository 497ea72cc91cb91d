//! Full transformations of the chain `{1, ..., n}` and the structural
//! predicates that carve out the interval-range monoid and its
//! order-decreasing / order-increasing submonoids.
//!
//! Composition is left-to-right: `x (ab) = (x a) b`. Both conventions exist in
//! the literature; this one matches the product tables the relation families
//! were read from, so it is fixed once here and never varied.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::word::{Family, Letter};

/// A generator name is exactly a letter of the presentation alphabet.
pub type GeneratorId = Letter;

/// A total map on `{1, ..., n}` stored as its image vector (1-based): entry
/// `x-1` holds the value of `x`.
///
/// Values are immutable; equality and hashing go through the image vector.
/// Arbitrary full transformations are representable so that the predicates
/// below are meaningful tests rather than construction invariants.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transformation {
    images: Vec<usize>,
}

impl Transformation {
    /// Builds a transformation of the chain `{1, ..., n}` from its image
    /// vector, validating length and range.
    pub fn new(n: usize, images: Vec<usize>) -> Result<Self> {
        if images.len() != n {
            return Err(Error::ImageLength { expected: n, got: images.len() });
        }
        for (position, &value) in images.iter().enumerate() {
            if value < 1 || value > n {
                return Err(Error::ImageRange { position: position + 1, value, n });
            }
        }
        Ok(Transformation { images })
    }

    pub fn identity(n: usize) -> Self {
        Transformation { images: (1..=n).collect() }
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    /// The value of `x` (1-based).
    pub fn apply(&self, x: usize) -> usize {
        self.images[x - 1]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| v == i + 1)
    }

    /// Left-to-right composition: `x (self other) = (x self) other`.
    pub fn compose(&self, other: &Transformation) -> Result<Transformation> {
        if self.n() != other.n() {
            return Err(Error::ChainMismatch { left: self.n(), right: other.n() });
        }
        let images = self.images.iter().map(|&y| other.images[y - 1]).collect();
        Ok(Transformation { images })
    }

    /// Weakly monotone image vector.
    pub fn is_order_preserving(&self) -> bool {
        self.images.windows(2).all(|w| w[0] <= w[1])
    }

    /// The image is a set of consecutive integers.
    pub fn has_interval_image(&self) -> bool {
        let lo = *self.images.iter().min().expect("nonempty chain");
        let hi = *self.images.iter().max().expect("nonempty chain");
        let mut seen = vec![false; hi - lo + 1];
        for &v in &self.images {
            seen[v - lo] = true;
        }
        seen.into_iter().all(|s| s)
    }

    /// `x alpha <= x` for every point.
    pub fn is_decreasing(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| v <= i + 1)
    }

    /// `x <= x alpha` for every point.
    pub fn is_increasing(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| v > i)
    }

    /// Image as a sorted, deduplicated vector.
    pub fn image_set(&self) -> Vec<usize> {
        let mut img = self.images.clone();
        img.sort_unstable();
        img.dedup();
        img
    }

    pub fn image_size(&self) -> usize {
        self.image_set().len()
    }

    /// The flip automorphism: `x -> n+1 - (n+1-x) alpha`. An involution that
    /// exchanges the decreasing and increasing predicates.
    pub fn flip(&self) -> Transformation {
        let n = self.n();
        let images = (1..=n).map(|x| n + 1 - self.images[n - x]).collect();
        Transformation { images }
    }
}

impl fmt::Display for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

impl Serialize for Transformation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.images.serialize(serializer)
    }
}

/// Every full transformation of the chain, in canonical order. There are
/// `n^n` of them; meant for exhaustive checks at small `n` only.
pub fn all_transformations(n: usize) -> Vec<Transformation> {
    assert!(n >= 1, "chain size must be positive");
    let total = (n as u64).pow(n as u32);
    let mut out = Vec::with_capacity(total as usize);
    for code in 0..total {
        let mut c = code;
        let mut images = Vec::with_capacity(n);
        for _ in 0..n {
            images.push((c % n as u64) as usize + 1);
            c /= n as u64;
        }
        out.push(Transformation { images });
    }
    out.sort_unstable();
    out
}

/// The generator `a_i` (fix `1..=i`, shift the rest down) or `b_i` (shift
/// `1..=i` up, fix the rest), for `1 <= i <= n-1`, `n >= 2`.
pub fn generator(g: GeneratorId, n: usize) -> Result<Transformation> {
    if n < 2 {
        return Err(Error::ChainTooSmall { n, min: 2 });
    }
    g.check_ambient(n)?;
    let i = g.index;
    let images = (1..=n)
        .map(|x| match g.family {
            Family::A => {
                if x <= i {
                    x
                } else {
                    x - 1
                }
            }
            Family::B => {
                if x <= i {
                    x + 1
                } else {
                    x
                }
            }
        })
        .collect();
    Ok(Transformation { images })
}
