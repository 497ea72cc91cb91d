//! Exact computation in the monoid of order-preserving transformations of a
//! finite chain whose image is an interval, together with its order-decreasing
//! and order-increasing submonoids.
//!
//! The crate provides:
//!
//! - [`transform`]: the transformations themselves, composition, the defining
//!   predicates, the standard generators and the flip automorphism;
//! - [`monoid`]: direct and closure-based enumeration, cardinality formulas,
//!   undecomposable elements and exact rank search;
//! - [`word`] / [`relations`]: words over the generator alphabet and the
//!   finite relation systems `R`, `R-`, `R+`, `R'`;
//! - [`trace`]: derivation traces (step-by-step rewriting certificates) and an
//!   independent trace checker;
//! - [`canonical`]: certified canonical-form rewriting into the word sets
//!   `W-`, `W1`, ..., and their enumeration;
//! - [`verify`]: the guess-and-prove presentation verifier;
//! - [`kb`]: a generic shortlex string-rewriting engine with Knuth-Bendix
//!   completion, used as an independent oracle for the presentations.
//!
//! Composition is left-to-right throughout: `x (ab) = (x a) b`. Chains are
//! `{1, ..., n}` and all indices are 1-based, including in serialized output.

pub mod canonical;
pub mod error;
pub mod kb;
pub mod monoid;
pub mod par;
pub mod relations;
pub mod trace;
pub mod transform;
pub mod verify;
pub mod word;

pub use error::{Error, Result};
pub use transform::{GeneratorId, Transformation};
pub use word::{Family, Letter, Word};
