//! Enumeration of the interval-range monoid and its decreasing/increasing
//! submonoids, closure under generators, cardinality formulas, undecomposable
//! elements, exact rank search and factorization through larger image sizes.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::par;
use crate::transform::Transformation;

/// Which of the three monoids is meant: the full interval-range monoid (`io`),
/// its order-decreasing part (`io-`) or its order-increasing part (`io+`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MonoidVariant {
    Io,
    IoMinus,
    IoPlus,
}

impl MonoidVariant {
    pub fn parse(text: &str) -> Option<Self> {
        match text {
            "io" => Some(MonoidVariant::Io),
            "io-" => Some(MonoidVariant::IoMinus),
            "io+" => Some(MonoidVariant::IoPlus),
            _ => None,
        }
    }

    /// The defining membership predicate of the variant.
    pub fn contains(&self, alpha: &Transformation) -> bool {
        let base = alpha.is_order_preserving() && alpha.has_interval_image();
        match self {
            MonoidVariant::Io => base,
            MonoidVariant::IoMinus => base && alpha.is_decreasing(),
            MonoidVariant::IoPlus => base && alpha.is_increasing(),
        }
    }
}

impl fmt::Display for MonoidVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonoidVariant::Io => write!(f, "io"),
            MonoidVariant::IoMinus => write!(f, "io-"),
            MonoidVariant::IoPlus => write!(f, "io+"),
        }
    }
}

impl Serialize for MonoidVariant {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// One labeled edge of the right Cayley graph: `elements[from] * gens[generator]
/// = elements[to]`, indices into the table's canonical element order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CayleyEdge {
    pub from: usize,
    pub generator: usize,
    pub to: usize,
}

/// A finite, composition-closed set of transformations in canonical
/// (lexicographic image vector) order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonoidTable {
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variant: Option<MonoidVariant>,
    pub elements: Vec<Transformation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<CayleyEdge>>,
}

impl MonoidTable {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, alpha: &Transformation) -> bool {
        self.elements.binary_search(alpha).is_ok()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("table serializes")
    }
}

/// Lists exactly the transformations satisfying the variant's predicates, in
/// canonical order. Generation picks the image interval and then a weakly
/// monotone surjection onto it (a breakpoint subset), so no `n^n` scan is
/// involved and the image-size stratification comes out by construction.
pub fn enumerate_direct(n: usize, variant: MonoidVariant) -> Result<MonoidTable> {
    if n == 0 {
        return Err(Error::ChainTooSmall { n, min: 1 });
    }
    let mut elements = Vec::new();
    // Breakpoint mask over {1, ..., n-1}: bit c set means the value steps up
    // between positions c and c+1. Image size is popcount + 1.
    for mask in 0u64..(1u64 << (n - 1)) {
        let k = mask.count_ones() as usize + 1;
        let lows: Vec<usize> = match variant {
            MonoidVariant::Io => (1..=n - k + 1).collect(),
            MonoidVariant::IoMinus => vec![1],
            MonoidVariant::IoPlus => vec![n - k + 1],
        };
        for lo in lows {
            let mut images = Vec::with_capacity(n);
            let mut value = lo;
            for x in 1..=n {
                if x > 1 && mask >> (x - 2) & 1 == 1 {
                    value += 1;
                }
                images.push(value);
            }
            elements.push(Transformation::new(n, images)?);
        }
    }
    elements.sort_unstable();
    debug_assert!(elements.windows(2).all(|w| w[0] != w[1]));
    Ok(MonoidTable { n, variant: Some(variant), elements, edges: None })
}

/// Breadth-first closure of the given generators under right multiplication,
/// always containing the identity (the empty product). Records the right
/// Cayley edges discovered along the way, relabeled to the canonical order.
pub fn enumerate_closure(n: usize, generators: &[Transformation]) -> Result<MonoidTable> {
    if n == 0 {
        return Err(Error::ChainTooSmall { n, min: 1 });
    }
    for g in generators {
        if g.n() != n {
            return Err(Error::ChainMismatch { left: n, right: g.n() });
        }
    }
    let identity = Transformation::identity(n);
    let mut order: Vec<Transformation> = vec![identity.clone()];
    let mut seen: HashMap<Transformation, usize> = HashMap::new();
    seen.insert(identity, 0);
    let mut queue: VecDeque<usize> = VecDeque::from([0]);
    let mut raw_edges: Vec<(usize, usize, usize)> = Vec::new();
    while let Some(from) = queue.pop_front() {
        for (gi, g) in generators.iter().enumerate() {
            let next = order[from].compose(g)?;
            let to = match seen.get(&next) {
                Some(&idx) => idx,
                None => {
                    let idx = order.len();
                    order.push(next.clone());
                    seen.insert(next, idx);
                    queue.push_back(idx);
                    idx
                }
            };
            raw_edges.push((from, gi, to));
        }
    }
    // Relabel to canonical order so runs are byte-reproducible.
    let mut sorted = order.clone();
    sorted.sort_unstable();
    let index_of: HashMap<&Transformation, usize> =
        sorted.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let edges = raw_edges
        .into_iter()
        .map(|(f, g, t)| CayleyEdge {
            from: index_of[&order[f]],
            generator: g,
            to: index_of[&order[t]],
        })
        .collect();
    Ok(MonoidTable { n, variant: None, elements: sorted, edges: Some(edges) })
}

pub(crate) fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc
}

/// Closed-form cardinality: `(n+1) 2^(n-2)` for the full monoid (`1` at
/// `n = 1`, where the monoid is trivial) and `2^(n-1)` for either submonoid.
/// Fits in 64 bits for `n <= 60`.
pub fn cardinality_formula(n: usize, variant: MonoidVariant) -> u64 {
    assert!((1..=60).contains(&n), "chain size must be in 1..=60");
    match variant {
        MonoidVariant::Io => {
            if n == 1 {
                1
            } else {
                (n as u64 + 1) << (n - 2)
            }
        }
        MonoidVariant::IoMinus | MonoidVariant::IoPlus => 1 << (n - 1),
    }
}

/// Number of elements with image size `k`: `(n-k+1) C(n-1, k-1)` for the full
/// monoid, `C(n-1, k-1)` for either submonoid.
pub fn count_by_image_size(n: usize, variant: MonoidVariant) -> BTreeMap<usize, u64> {
    assert!(n >= 1, "chain size must be positive");
    (1..=n)
        .map(|k| {
            let strata = binomial(n - 1, k - 1);
            let count = match variant {
                MonoidVariant::Io => (n - k + 1) as u64 * strata,
                MonoidVariant::IoMinus | MonoidVariant::IoPlus => strata,
            };
            (k, count)
        })
        .collect()
}

/// Elements that are not a product of two elements both distinct from
/// themselves. The identity is excluded by convention: it is the empty
/// product, so it never needs to appear in a generating set.
pub fn undecomposables(table: &MonoidTable) -> Vec<Transformation> {
    let elements = &table.elements;
    let flags = par::map_range(0..elements.len(), |mi| {
        let m = &elements[mi];
        if m.is_identity() {
            return false;
        }
        for p in elements {
            if p == m {
                continue;
            }
            for q in elements {
                if q == m {
                    continue;
                }
                if p.compose(q).expect("same chain") == *m {
                    return false;
                }
            }
        }
        true
    });
    elements
        .iter()
        .zip(flags)
        .filter(|&(_, keep)| keep)
        .map(|(m, _)| m.clone())
        .collect()
}

/// Outcome of the exact rank search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum RankOutcome {
    /// The minimum size of a generating set, with one witness of that size.
    Exact { rank: usize, witness: Vec<Transformation> },
    /// The budget ran out: the rank is at least `lower_bound`, but no
    /// generating set of the sizes examined so far was confirmed minimal.
    Unknown { lower_bound: usize, subsets_tested: u64 },
}

impl RankOutcome {
    pub fn rank(&self) -> Option<usize> {
        match self {
            RankOutcome::Exact { rank, .. } => Some(*rank),
            RankOutcome::Unknown { .. } => None,
        }
    }
}

/// Minimum cardinality of a generating set, by exhaustive subset search.
///
/// Undecomposable elements must belong to every generating set, so they both
/// give the lower bound and prune the search to their supersets. Subsets are
/// visited in lexicographic order of the canonical element order; `budget`
/// bounds the number of closure computations.
pub fn rank_exact(table: &MonoidTable, budget: u64) -> RankOutcome {
    let non_identity: Vec<&Transformation> =
        table.elements.iter().filter(|t| !t.is_identity()).collect();
    let required = undecomposables(table);
    let lower = required.len();
    let optional: Vec<&Transformation> = non_identity
        .iter()
        .copied()
        .filter(|t| !required.contains(t))
        .collect();
    let mut tested: u64 = 0;
    for size in lower..=non_identity.len() {
        let extra = size - lower;
        if extra > optional.len() {
            break;
        }
        let mut found: Option<Vec<Transformation>> = None;
        let mut try_subset = |indices: &[usize]| -> bool {
            if tested >= budget {
                return true; // out of budget, stop
            }
            tested += 1;
            let mut gens: Vec<Transformation> = required.clone();
            gens.extend(indices.iter().map(|&i| optional[i].clone()));
            let closure = enumerate_closure(table.n, &gens).expect("valid generators");
            if closure.elements == table.elements {
                found = Some(gens);
                return true;
            }
            false
        };
        let stopped = for_each_combination(optional.len(), extra, &mut try_subset);
        if let Some(witness) = found {
            return RankOutcome::Exact { rank: size, witness };
        }
        if stopped {
            // Stopped without success: the budget ran out mid-search.
            return RankOutcome::Unknown { lower_bound: lower, subsets_tested: tested };
        }
    }
    // The full non-identity set always generates: every element lists itself.
    RankOutcome::Unknown { lower_bound: lower, subsets_tested: tested }
}

/// Visits `k`-combinations of `0..m` in lexicographic order; `visit` returns
/// true to stop early. Returns whether iteration was stopped without success
/// (used to signal budget exhaustion by the caller).
fn for_each_combination(m: usize, k: usize, visit: &mut impl FnMut(&[usize]) -> bool) -> bool {
    let mut indices: Vec<usize> = (0..k).collect();
    if k > m {
        return false;
    }
    loop {
        if visit(&indices) {
            return true;
        }
        // Advance to the next combination.
        let mut i = k;
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            if indices[i] != i + m - k {
                break;
            }
            if i == 0 {
                return false;
            }
        }
        indices[i] += 1;
        for j in i + 1..k {
            indices[j] = indices[j - 1] + 1;
        }
    }
}

/// Writes an element of image size `k <= n-2` as a product of two elements of
/// image size `k+1` from the same variant, found by exhaustive search over the
/// enumerated monoid. A `FactorizationMissing` error would contradict the
/// generation argument and is surfaced loudly.
pub fn factor_through_larger_image(
    alpha: &Transformation,
    variant: MonoidVariant,
) -> Result<(Transformation, Transformation)> {
    let n = alpha.n();
    if n < 3 {
        return Err(Error::Precondition(format!("n = {n} is below 3")));
    }
    if !variant.contains(alpha) {
        return Err(Error::Precondition(format!("{alpha} is not in {variant}")));
    }
    let k = alpha.image_size();
    if k > n - 2 {
        return Err(Error::Precondition(format!(
            "image size {k} of {alpha} exceeds n-2 = {}",
            n - 2
        )));
    }
    let table = enumerate_direct(n, variant)?;
    let candidates: Vec<&Transformation> =
        table.elements.iter().filter(|t| t.image_size() == k + 1).collect();
    for p in &candidates {
        for q in &candidates {
            if p.compose(q)? == *alpha {
                return Ok(((*p).clone(), (*q).clone()));
            }
        }
    }
    Err(Error::FactorizationMissing { alpha: alpha.to_string(), target: k + 1 })
}
