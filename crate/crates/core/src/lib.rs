//! Conditions over the linearly ordered tree of finite sequences of
//! naturals, ordered by extension that preserves isolated points.
//!
//! - [`tree`]: nodes, the tree order, the linear order and its intervals.
//! - [`condition`]: finite unions of convergent sequences with their limits.
//! - [`order`]: extension, compatibility and blocking witnesses.
//! - [`sigma`]: the `(k, n, m)` partition and the pair coloring.
//! - [`antichain`]: antichain checks, maximum antichains, ladder gadgets.
//! - [`refuter`]: diagonalization against finite decompositions into
//!   classes with claimed antichain bounds.
//! - [`oracle`]: decomposition oracles, built-in and over a pipe.

pub mod antichain;
pub mod clique;
pub mod condition;
pub mod oracle;
pub mod order;
pub mod refuter;
pub mod sigma;
pub mod tree;

pub use condition::{Condition, ConditionError, RawCondition, Ray};
pub use tree::{Caps, Node, Stem};
