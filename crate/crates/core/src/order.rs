//! The ordering on conditions and the compatibility test.
//!
//! `F1` extends `F2` when `F1 ⊇ F2` and no isolated point of `F2` becomes an
//! accumulation point of `F1`. Two conditions are compatible iff their union
//! extends both, which reduces to two finite inclusions between accumulation
//! sets and member sets.

use std::fmt;

use rand::Rng;
use thiserror::Error;

use crate::condition::{random_node, Condition, RawCondition, Ray};
use crate::tree::Node;

/// Which condition of a pair a blocking point is isolated in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    First,
    Second,
}

/// A point isolated in one condition of a pair and an accumulation point of
/// the other. Its existence rules out any common extension.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Witness {
    pub point: Node,
    pub isolated_in: Side,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.point.fmt(f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("Incompatible: {0} is isolated in one condition and an accumulation point of the other")]
    Incompatible(Witness),
}

/// `f1 ≤ f2` in the ordering: `f1 ⊇ f2` and `f1^d ∩ f2 = f2^d`.
pub fn extends(f1: &Condition, f2: &Condition) -> bool {
    if !f2.subset(f1) {
        return false;
    }
    // f2^d ⊆ f1^d follows from f2^d ⊆ f2 ⊆ f1 only together with this check
    let kept = f1.d_set().iter().filter(|t| f2.member(t));
    kept.eq(f2.d_set().iter())
}

/// First point of `d_set(g) ∩ f` that is not in `d_set(f)`.
fn one_sided(f: &Condition, g: &Condition) -> Option<Node> {
    g.d_set().iter().find(|t| f.member(t) && !f.is_limit(t)).cloned()
}

/// A blocking point for the pair, if one exists.
pub fn orthogonal(f: &Condition, g: &Condition) -> Option<Witness> {
    if let Some(point) = one_sided(f, g) {
        return Some(Witness {
            point,
            isolated_in: Side::First,
        });
    }
    one_sided(g, f).map(|point| Witness {
        point,
        isolated_in: Side::Second,
    })
}

pub fn compatible(f: &Condition, g: &Condition) -> bool {
    orthogonal(f, g).is_none()
}

/// Checks a witness using only membership and accumulation sets.
pub fn verify_witness(f: &Condition, g: &Condition, w: &Witness) -> bool {
    let (iso, acc) = match w.isolated_in {
        Side::First => (f, g),
        Side::Second => (g, f),
    };
    iso.member(&w.point) && !iso.d_set().contains(&w.point) && acc.d_set().contains(&w.point)
}

/// The union, which extends both whenever the pair is compatible.
pub fn common_extension(f: &Condition, g: &Condition) -> Result<Condition, OrderError> {
    match orthogonal(f, g) {
        Some(w) => Err(OrderError::Incompatible(w)),
        None => Ok(f.union(g)),
    }
}

/// A random condition extending `f`, built from nodes of length `< max_len`
/// with entries `< width`.
pub fn random_extension<R: Rng>(f: &Condition, rng: &mut R, max_len: usize, width: u64) -> Condition {
    let mut raw: RawCondition = f.to_raw();
    for _ in 0..rng.gen_range(1..=3) {
        match rng.gen_range(0..3) {
            0 => raw.explicit.push(random_node(rng, max_len, width)),
            1 => {
                // a new accumulation point must not be a point of f
                let l = random_node(rng, max_len.saturating_sub(1).max(1), width);
                if !f.member(&l) {
                    raw.rays.push(Ray::new(l.clone(), rng.gen_range(0..3), Vec::new()));
                    raw.limits.push(l);
                }
            }
            _ => {
                if !f.limits().is_empty() {
                    let l = f.limits()[rng.gen_range(0..f.limits().len())].clone();
                    let suffix = if rng.gen_bool(0.5) {
                        vec![rng.gen_range(0..width)]
                    } else {
                        Vec::new()
                    };
                    raw.rays.push(Ray::new(l, rng.gen_range(0..3), suffix));
                }
            }
        }
    }
    Condition::canonical(raw)
}
