//! Finite descriptions of conditions: finite unions of convergent sequences
//! together with their limits.
//!
//! A convergent sequence is represented by a [`Ray`] `limit⌢⟨k⟩⌢suffix`,
//! `k ≥ index_from`, which descends onto `limit` in the linear order. A
//! [`Condition`] is a finite set of limits, a finite list of rays on those
//! limits and finitely many further points. Conditions are kept in a
//! canonical form so that structural equality is set equality.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::tree::{interval_contains, parse_nat, Caps, Node, Stem, TreeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConditionError {
    #[error("a condition must contain at least one point")]
    Empty,
    #[error("LimitWithoutRay: limit {0} is not the limit of any ray")]
    LimitWithoutRay(Node),
    #[error("RayLimitNotDeclared: ray limit {0} is not listed among the limits")]
    RayLimitNotDeclared(Node),
    #[error("ExplicitEqualsLimit: explicit point {0} is also a limit")]
    ExplicitEqualsLimit(Node),
    #[error("CapExceeded: {0}")]
    CapExceeded(#[from] TreeError),
    #[error("InvalidParams: {0}")]
    InvalidParams(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

impl ConditionError {
    /// Name of the violated invariant.
    pub fn name(&self) -> &'static str {
        match self {
            ConditionError::Empty => "Empty",
            ConditionError::LimitWithoutRay(_) => "LimitWithoutRay",
            ConditionError::RayLimitNotDeclared(_) => "RayLimitNotDeclared",
            ConditionError::ExplicitEqualsLimit(_) => "ExplicitEqualsLimit",
            ConditionError::CapExceeded(_) => "CapExceeded",
            ConditionError::InvalidParams(_) => "InvalidParams",
            ConditionError::Parse { .. } => "Parse",
        }
    }
}

/// The sequence `{ limit⌢⟨k⟩⌢suffix : k ≥ index_from }`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Ray {
    pub limit: Node,
    pub index_from: u64,
    pub suffix: Vec<u64>,
}

impl Ray {
    pub fn new(limit: Node, index_from: u64, suffix: Vec<u64>) -> Self {
        Ray {
            limit,
            index_from,
            suffix,
        }
    }

    /// The sibling fan `{ limit⌢⟨k⟩ : k ≥ 0 }`.
    pub fn fan(limit: Node) -> Self {
        Ray::new(limit, 0, Vec::new())
    }

    pub fn point(&self, k: u64) -> Node {
        let mut v = self.limit.entries().to_vec();
        v.push(k);
        v.extend_from_slice(&self.suffix);
        Node::new(v).unwrap()
    }

    /// Length of every generated point.
    pub fn point_len(&self) -> usize {
        self.limit.len() + 1 + self.suffix.len()
    }

    /// The index `k` with `t = limit⌢⟨k⟩⌢suffix`, ignoring `index_from`.
    pub fn index_of(&self, t: &Node) -> Option<u64> {
        if t.len() != self.point_len() {
            return None;
        }
        let l = self.limit.len();
        let e = t.entries();
        if e[..l] != *self.limit.entries() || e[l + 1..] != *self.suffix {
            return None;
        }
        Some(e[l])
    }

    pub fn generates(&self, t: &Node) -> bool {
        self.index_of(t).is_some_and(|k| k >= self.index_from)
    }

    fn check_caps(&self, caps: &Caps) -> Result<(), TreeError> {
        caps.check(&self.limit)?;
        let sample = self.point(self.index_from);
        caps.check_len(sample.len(), &sample)?;
        for &e in &self.suffix {
            caps.check_entry(e, &sample)?;
        }
        Ok(())
    }

    fn key(&self) -> (&Node, &[u64]) {
        (&self.limit, &self.suffix)
    }
}

impl Ord for Ray {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key()
            .cmp(&other.key())
            .then(self.index_from.cmp(&other.index_from))
    }
}

impl PartialOrd for Ray {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Ray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({};{};", self.limit, self.index_from)?;
        if self.suffix.is_empty() {
            f.write_str("-")?;
        } else {
            write!(f, "{}", Node::from_slice(&self.suffix))?;
        }
        f.write_str(")")
    }
}

/// A condition as written, before validation and canonicalization.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawCondition {
    pub limits: Vec<Node>,
    pub rays: Vec<Ray>,
    pub explicit: Vec<Node>,
}

impl RawCondition {
    pub fn new(limits: Vec<Node>, rays: Vec<Ray>, explicit: Vec<Node>) -> Self {
        RawCondition { limits, rays, explicit }
    }

    /// Checks every invariant of a condition and reports the first one
    /// violated.
    pub fn validate(&self, caps: &Caps) -> Result<(), ConditionError> {
        if self.limits.is_empty() && self.explicit.is_empty() {
            return Err(ConditionError::Empty);
        }
        for n in self.limits.iter().chain(&self.explicit) {
            caps.check(n)?;
        }
        for r in &self.rays {
            r.check_caps(caps)?;
        }
        let limits: BTreeSet<&Node> = self.limits.iter().collect();
        if let Some(r) = self.rays.iter().find(|r| !limits.contains(&r.limit)) {
            return Err(ConditionError::RayLimitNotDeclared(r.limit.clone()));
        }
        if let Some(l) = self.limits.iter().find(|l| !self.rays.iter().any(|r| &r.limit == *l)) {
            return Err(ConditionError::LimitWithoutRay(l.clone()));
        }
        if let Some(x) = self.explicit.iter().find(|x| limits.contains(x)) {
            return Err(ConditionError::ExplicitEqualsLimit(x.clone()));
        }
        Ok(())
    }
}

impl FromStr for RawCondition {
    type Err = ConditionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Parser::new(s).condition()
    }
}

/// A valid condition in canonical form.
///
/// Canonical form: limits and explicit points sorted in the linear order,
/// rays merged per `(limit, suffix)` with the smallest starting index that
/// keeps the represented set unchanged, and explicit points that are limits
/// or ray points dropped. Two conditions are equal iff they represent the
/// same set of nodes.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Condition {
    limits: Vec<Node>,
    rays: Vec<Ray>,
    explicit: Vec<Node>,
}

impl Condition {
    pub fn new(raw: RawCondition, caps: &Caps) -> Result<Self, ConditionError> {
        raw.validate(caps)?;
        Ok(Self::canonical(raw))
    }

    /// Parses and validates the text form.
    pub fn parse(s: &str, caps: &Caps) -> Result<Self, ConditionError> {
        Self::new(s.parse()?, caps)
    }

    /// The sibling fan at `limit` with no further points.
    pub fn fan(limit: Node) -> Self {
        Condition {
            limits: vec![limit.clone()],
            rays: vec![Ray::fan(limit)],
            explicit: Vec::new(),
        }
    }

    /// Canonicalizes without validating. Explicit points that are limits are
    /// absorbed rather than rejected.
    pub(crate) fn canonical(raw: RawCondition) -> Self {
        let limits: BTreeSet<Node> = raw.limits.into_iter().collect();
        let mut rays: Vec<Ray> = raw.rays;
        rays.sort();
        rays.dedup_by(|b, a| a.key() == b.key());
        let explicit: BTreeSet<Node> = raw.explicit.into_iter().collect();
        let mut c = Condition {
            limits: limits.into_iter().collect(),
            rays,
            explicit: explicit.into_iter().collect(),
        };
        // lowering a starting index only re-adds points already present
        for i in 0..c.rays.len() {
            while c.rays[i].index_from > 0 {
                let below = c.rays[i].point(c.rays[i].index_from - 1);
                if !c.member(&below) {
                    break;
                }
                c.rays[i].index_from -= 1;
            }
        }
        let explicit = std::mem::take(&mut c.explicit);
        c.explicit = explicit
            .into_iter()
            .filter(|x| c.limits.binary_search(x).is_err() && !c.rays.iter().any(|r| r.generates(x)))
            .collect();
        c
    }

    pub fn limits(&self) -> &[Node] {
        &self.limits
    }

    pub fn rays(&self) -> &[Ray] {
        &self.rays
    }

    pub fn explicit(&self) -> &[Node] {
        &self.explicit
    }

    pub fn to_raw(&self) -> RawCondition {
        RawCondition::new(self.limits.clone(), self.rays.clone(), self.explicit.clone())
    }

    pub fn is_valid(&self, caps: &Caps) -> Result<(), ConditionError> {
        self.to_raw().validate(caps)
    }

    pub fn member(&self, t: &Node) -> bool {
        self.limits.binary_search(t).is_ok()
            || self.explicit.binary_search(t).is_ok()
            || self.rays.iter().any(|r| r.generates(t))
    }

    /// The accumulation points of the represented set.
    pub fn d_set(&self) -> &[Node] {
        &self.limits
    }

    pub fn is_limit(&self, t: &Node) -> bool {
        self.limits.binary_search(t).is_ok()
    }

    pub fn union(&self, other: &Condition) -> Condition {
        let mut raw = self.to_raw();
        let o = other.to_raw();
        raw.limits.extend(o.limits);
        raw.rays.extend(o.rays);
        raw.explicit.extend(o.explicit);
        Condition::canonical(raw)
    }

    /// Whether the set represented by `self` is contained in that of `other`.
    pub fn subset(&self, other: &Condition) -> bool {
        if !self.limits.iter().chain(&self.explicit).all(|t| other.member(t)) {
            return false;
        }
        self.rays.iter().all(|r| ray_covered(r, other))
    }

    /// Exact description of `self ∩ (s, s⌢k)`.
    pub fn intersect_interval(&self, s: &Node, k: u64) -> Fragment {
        let mut points: BTreeSet<Node> = self
            .limits
            .iter()
            .chain(&self.explicit)
            .filter(|t| interval_contains(s, k, t))
            .cloned()
            .collect();
        let mut rays = Vec::new();
        for r in &self.rays {
            let l = r.limit.len();
            if s.len() < l {
                if s.is_prefix_of(&r.limit) && r.limit.entries()[s.len()] > k {
                    rays.push(r.clone());
                }
            } else if s.len() == l {
                if *s == r.limit {
                    rays.push(Ray::new(r.limit.clone(), r.index_from.max(k + 1), r.suffix.clone()));
                }
            } else if s.len() < r.point_len() && r.limit.is_proper_prefix_of(s) {
                // at most one point of the ray strictly extends s
                let j = s.entries()[l];
                if j >= r.index_from {
                    let p = r.point(j);
                    if interval_contains(s, k, &p) {
                        points.insert(p);
                    }
                }
            }
        }
        points.retain(|p| !rays.iter().any(|r| r.generates(p)));
        Fragment {
            points: points.into_iter().collect(),
            rays,
        }
    }

    /// All nodes of the represented set, taking ray indices up to `bound`.
    pub fn members_up_to(&self, bound: u64) -> Vec<Node> {
        let mut out: BTreeSet<Node> = self.limits.iter().chain(&self.explicit).cloned().collect();
        for r in &self.rays {
            for k in r.index_from..=bound.max(r.index_from) {
                out.insert(r.point(k));
            }
        }
        out.into_iter().collect()
    }

    /// Every node mentioned by the description, including the first point of
    /// each ray.
    fn named_nodes(&self) -> impl Iterator<Item = Node> + '_ {
        self.limits
            .iter()
            .chain(&self.explicit)
            .cloned()
            .chain(self.rays.iter().map(|r| r.point(r.index_from)))
    }

    /// Largest entry named anywhere except ray indices.
    pub fn max_entry(&self) -> u64 {
        self.limits
            .iter()
            .chain(&self.explicit)
            .flat_map(|n| n.entries().iter().copied())
            .chain(
                self.rays
                    .iter()
                    .flat_map(|r| r.suffix.iter().copied().chain([r.index_from])),
            )
            .max()
            .unwrap_or(0)
    }

    /// Longest node in the represented set.
    pub fn height(&self) -> usize {
        self.named_nodes().map(|n| n.len()).max().unwrap_or(0)
    }

    /// Replaces the prefix `from` by `to` in every node. Returns `None` if
    /// some node does not extend `from`.
    pub fn reroot(&self, from: &Stem, to: &Stem) -> Option<Condition> {
        let cut = from.len();
        let map = |n: &Node| -> Option<Node> {
            if !from.is_prefix_of(n) {
                return None;
            }
            to.concat(&n.entries()[cut..])
        };
        let limits = self.limits.iter().map(map).collect::<Option<Vec<_>>>()?;
        let explicit = self.explicit.iter().map(map).collect::<Option<Vec<_>>>()?;
        let rays = self
            .rays
            .iter()
            .map(|r| Some(Ray::new(map(&r.limit)?, r.index_from, r.suffix.clone())))
            .collect::<Option<Vec<_>>>()?;
        Some(Condition::canonical(RawCondition::new(limits, rays, explicit)))
    }

    /// Prepends `stem` to every node.
    pub fn transplant(&self, stem: &Stem) -> Condition {
        self.reroot(&Stem::Root, stem).expect("every node extends the root")
    }

    /// Whether every node of the represented set extends `stem`.
    pub fn supported_under(&self, stem: &Stem) -> bool {
        self.limits
            .iter()
            .chain(&self.explicit)
            .chain(self.rays.iter().map(|r| &r.limit))
            .all(|n| stem.is_prefix_of(n))
    }

    pub fn check_caps(&self, caps: &Caps) -> Result<(), TreeError> {
        for n in self.limits.iter().chain(&self.explicit) {
            caps.check(n)?;
        }
        for r in &self.rays {
            r.check_caps(caps)?;
        }
        Ok(())
    }
}

/// Whether every point of `r` is a member of `g`.
fn ray_covered(r: &Ray, g: &Condition) -> bool {
    if g.rays
        .iter()
        .any(|q| q.key() == r.key() && q.index_from <= r.index_from)
    {
        return true;
    }
    // g can contain infinitely many points of r only through a ray with the
    // same (limit, suffix); without one only finitely many are covered
    match g.rays.iter().find(|q| q.key() == r.key()) {
        Some(q) => (r.index_from..q.index_from).all(|k| g.member(&r.point(k))),
        None => false,
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_raw(), f)
    }
}

fn write_list<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T]) -> fmt::Result {
    f.write_str("[")?;
    for (i, x) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{x}")?;
    }
    f.write_str("]")
}

impl fmt::Display for RawCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{L:")?;
        write_list(f, &self.limits)?;
        f.write_str(";R:")?;
        write_list(f, &self.rays)?;
        f.write_str(";X:")?;
        write_list(f, &self.explicit)?;
        f.write_str("}")
    }
}

impl FromStr for Condition {
    type Err = ConditionError;

    /// Parses with the default caps.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Condition::parse(s, &Caps::default())
    }
}

/// A subset of a condition cut out by an open interval: finitely many points
/// and at most one tail per ray.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Fragment {
    pub points: Vec<Node>,
    pub rays: Vec<Ray>,
}

impl Fragment {
    pub fn is_empty(&self) -> bool {
        self.points.is_empty() && self.rays.is_empty()
    }

    pub fn contains(&self, t: &Node) -> bool {
        self.points.binary_search(t).is_ok() || self.rays.iter().any(|r| r.generates(t))
    }
}

impl fmt::Display for Fragment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{P:")?;
        write_list(f, &self.points)?;
        f.write_str(";R:")?;
        write_list(f, &self.rays)?;
        f.write_str("}")
    }
}

struct Parser<'a> {
    src: Vec<(usize, u8)>,
    at: usize,
    _text: &'a str,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            src: text
                .bytes()
                .enumerate()
                .filter(|(_, b)| !b.is_ascii_whitespace())
                .collect(),
            at: 0,
            _text: text,
        }
    }

    fn pos(&self) -> usize {
        self.src
            .get(self.at)
            .map(|&(p, _)| p)
            .unwrap_or_else(|| self.src.last().map_or(0, |&(p, _)| p + 1))
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ConditionError> {
        Err(ConditionError::Parse {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.at).map(|&(_, b)| b)
    }

    fn expect(&mut self, lit: &str) -> Result<(), ConditionError> {
        for want in lit.bytes() {
            if self.peek() != Some(want) {
                return self.err(format!("expected {lit:?}"));
            }
            self.at += 1;
        }
        Ok(())
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn nat(&mut self) -> Result<u64, ConditionError> {
        let start = self.at;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.at += 1;
        }
        let digits: String = self.src[start..self.at].iter().map(|&(_, b)| b as char).collect();
        match parse_nat(&digits) {
            Some(n) => Ok(n),
            None => {
                self.at = start;
                self.err("expected a natural number without leading zeros")
            }
        }
    }

    fn node(&mut self) -> Result<Node, ConditionError> {
        let mut v = vec![self.nat()?];
        while self.eat(b'.') {
            v.push(self.nat()?);
        }
        Ok(Node::new(v).unwrap())
    }

    fn list<T>(
        &mut self,
        mut item: impl FnMut(&mut Self) -> Result<T, ConditionError>,
    ) -> Result<Vec<T>, ConditionError> {
        self.expect("[")?;
        let mut out = Vec::new();
        if self.eat(b']') {
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if self.eat(b']') {
                return Ok(out);
            }
            self.expect(",")?;
        }
    }

    fn ray(&mut self) -> Result<Ray, ConditionError> {
        self.expect("(")?;
        let limit = self.node()?;
        self.expect(";")?;
        let index_from = self.nat()?;
        self.expect(";")?;
        let suffix = if self.eat(b'-') {
            Vec::new()
        } else {
            self.node()?.entries().to_vec()
        };
        self.expect(")")?;
        Ok(Ray::new(limit, index_from, suffix))
    }

    fn condition(mut self) -> Result<RawCondition, ConditionError> {
        self.expect("{L:")?;
        let limits = self.list(Self::node)?;
        self.expect(";R:")?;
        let rays = self.list(Self::ray)?;
        self.expect(";X:")?;
        let explicit = self.list(Self::node)?;
        self.expect("}")?;
        if self.at != self.src.len() {
            return self.err("trailing input");
        }
        Ok(RawCondition::new(limits, rays, explicit))
    }
}

/// Bounds for [`random_condition`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomParams {
    /// Number of limits is drawn from `1..=max_limits`.
    pub max_limits: usize,
    pub max_rays_per_limit: usize,
    /// Number of extra isolated points is drawn from `0..=max_explicit`.
    pub max_explicit: usize,
    /// Longest node allowed (ray points included).
    pub height: usize,
    /// Entries of named nodes are `< width`.
    pub width: u64,
    pub max_index_from: u64,
    pub max_suffix_len: usize,
}

impl Default for RandomParams {
    fn default() -> Self {
        RandomParams {
            max_limits: 3,
            max_rays_per_limit: 2,
            max_explicit: 3,
            height: 4,
            width: 4,
            max_index_from: 3,
            max_suffix_len: 1,
        }
    }
}

impl RandomParams {
    pub fn validate(&self) -> Result<(), ConditionError> {
        let bad = |m: &str| Err(ConditionError::InvalidParams(m.to_string()));
        if self.max_limits == 0 {
            return bad("a condition needs at least one limit");
        }
        if self.max_rays_per_limit == 0 {
            return bad("every limit needs a ray");
        }
        if self.height < 2 {
            return bad("height must be at least 2 to fit a ray");
        }
        if self.width == 0 {
            return bad("width must be positive");
        }
        Ok(())
    }

    pub fn caps(&self) -> Caps {
        Caps::new(Some(self.height), None)
    }
}

pub fn random_node<R: Rng>(rng: &mut R, max_len: usize, width: u64) -> Node {
    let len = rng.gen_range(1..=max_len);
    Node::new((0..len).map(|_| rng.gen_range(0..width)).collect()).unwrap()
}

/// Draws a condition from an explicit generator state.
pub fn random_condition_with<R: Rng>(params: &RandomParams, rng: &mut R) -> Result<Condition, ConditionError> {
    params.validate()?;
    let n_limits = rng.gen_range(1..=params.max_limits);
    let mut limits = BTreeSet::new();
    for _ in 0..n_limits {
        limits.insert(random_node(rng, params.height - 1, params.width));
    }
    let mut rays = Vec::new();
    for l in &limits {
        let room = params.height - l.len() - 1;
        for _ in 0..rng.gen_range(1..=params.max_rays_per_limit) {
            let slen = rng.gen_range(0..=params.max_suffix_len.min(room));
            let suffix = (0..slen).map(|_| rng.gen_range(0..params.width)).collect();
            rays.push(Ray::new(l.clone(), rng.gen_range(0..=params.max_index_from), suffix));
        }
    }
    let explicit = (0..rng.gen_range(0..=params.max_explicit))
        .map(|_| random_node(rng, params.height, params.width))
        .filter(|x| !limits.contains(x))
        .collect();
    Condition::new(
        RawCondition::new(limits.into_iter().collect(), rays, explicit),
        &params.caps(),
    )
}

/// Deterministic in `seed`.
pub fn random_condition(params: &RandomParams, seed: u64) -> Result<Condition, ConditionError> {
    random_condition_with(params, &mut ChaCha8Rng::seed_from_u64(seed))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> Condition {
        s.parse().unwrap()
    }

    fn n(s: &str) -> Node {
        s.parse().unwrap()
    }

    fn raw(s: &str) -> RawCondition {
        s.parse().unwrap()
    }

    #[test]
    fn validity_examples() {
        let caps = Caps::default();
        assert!(raw("{L:[0];R:[(0;0;-)];X:[]}").validate(&caps).is_ok());
        assert_eq!(
            raw("{L:[0];R:[];X:[0.1]}").validate(&caps),
            Err(ConditionError::LimitWithoutRay(n("0")))
        );
        assert_eq!(
            raw("{L:[0];R:[(0;0;-)];X:[0]}").validate(&caps),
            Err(ConditionError::ExplicitEqualsLimit(n("0")))
        );
        assert_eq!(
            raw("{L:[];R:[(1;0;-)];X:[2]}").validate(&caps),
            Err(ConditionError::RayLimitNotDeclared(n("1")))
        );
        assert_eq!(raw("{L:[];R:[];X:[]}").validate(&caps), Err(ConditionError::Empty));
        let short = Caps::new(Some(2), None);
        assert!(matches!(
            raw("{L:[0.1];R:[(0.1;0;-)];X:[]}").validate(&short),
            Err(ConditionError::CapExceeded(_))
        ));
        let narrow = Caps::new(None, Some(3));
        assert!(matches!(
            raw("{L:[0];R:[(0;0;5)];X:[]}").validate(&narrow),
            Err(ConditionError::CapExceeded(_))
        ));
        // the running index is never capped
        assert!(raw("{L:[0];R:[(0;9;-)];X:[]}").validate(&narrow).is_ok());
    }

    #[test]
    fn membership_examples() {
        let f = c("{L:[0];R:[(0;0;-)];X:[]}");
        assert!(f.member(&n("0.41")));
        assert!(!f.member(&n("0.41.2")));
        let g = c("{L:[0];R:[(0;3;5)];X:[]}");
        assert!(!g.member(&n("0.2.5")));
        assert!(g.member(&n("0.3.5")));
    }

    #[test]
    fn d_set_examples() {
        assert_eq!(c("{L:[0];R:[(0;0;-)];X:[1.1,2]}").d_set(), &[n("0")]);
        let two = c("{L:[0,0.4];R:[(0;0;-),(0.4;0;-)];X:[]}");
        assert_eq!(two.d_set(), &[n("0"), n("0.4")]);
    }

    #[test]
    fn union_examples() {
        let f = c("{L:[0];R:[(0;0;-)];X:[1]}");
        let g = c("{L:[1];R:[(1;0;-)];X:[]}");
        assert_eq!(f.union(&f), f);
        assert_eq!(f.union(&g).to_string(), "{L:[1,0];R:[(1;0;-),(0;0;-)];X:[]}");
        let h = c("{L:[5];R:[(5;2;3)];X:[6.6]}");
        let u = g.union(&h);
        assert_eq!(u.limits(), &[n("5"), n("1")]);
        assert_eq!(u.explicit(), &[n("6.6")]);
        assert_eq!(u.rays().len(), 2);
    }

    #[test]
    fn canonical_form_is_extensional() {
        // the same set written three ways
        let a = c("{L:[0];R:[(0;0;-)];X:[]}");
        let b = c("{L:[0];R:[(0;2;-)];X:[0.0,0.1]}");
        let d = c("{L:[0];R:[(0;3;-),(0;1;-)];X:[0.0,0.7]}");
        assert_eq!(a, b);
        assert_eq!(a, d);
        // a ray point that is another limit counts as present
        let e = c("{L:[0,0.3];R:[(0;4;-),(0.3;0;-)];X:[]}");
        let e2 = c("{L:[0,0.3];R:[(0;3;-),(0.3;0;-)];X:[]}");
        assert_eq!(e, e2);
        assert_eq!(e.rays()[0].index_from, 3);
    }

    #[test]
    fn subset_examples() {
        let f = c("{L:[0];R:[(0;0;-)];X:[1]}");
        let g = c("{L:[1];R:[(1;0;-)];X:[]}");
        assert!(f.subset(&f.union(&g)));
        assert!(c("{L:[0];R:[(0;5;-)];X:[]}").subset(&c("{L:[0];R:[(0;2;-)];X:[]}")));
        assert!(!c("{L:[0];R:[(0;2;-)];X:[]}").subset(&c("{L:[0];R:[(0;5;-)];X:[]}")));
        // exceptions covered explicitly (canonical form absorbs them)
        let covered = c("{L:[0];R:[(0;5;-)];X:[0.2,0.3,0.4]}");
        assert!(c("{L:[0];R:[(0;2;-)];X:[]}").subset(&covered));
        // exceptions covered by another ray of the larger condition
        let by_ray = c("{L:[0,0.2];R:[(0;5;-),(0.2;0;-)];X:[0.3,0.4]}");
        assert!(c("{L:[0];R:[(0;2;-)];X:[]}").subset(&by_ray));
        assert!(!c("{L:[0];R:[(0;0;-)];X:[]}").subset(&c("{L:[0];R:[(0;0;1)];X:[]}")));
    }

    #[test]
    fn interval_fragments() {
        let f = c("{L:[0];R:[(0;0;-)];X:[]}");
        let frag = f.intersect_interval(&n("0"), 3);
        assert!(frag.points.is_empty());
        assert_eq!(frag.rays, vec![Ray::new(n("0"), 4, vec![])]);
        assert!(f.intersect_interval(&n("5"), 0).is_empty());
        let g = c("{L:[0];R:[(0;0;-)];X:[0.2.9]}");
        let frag = g.intersect_interval(&n("0"), 1);
        assert_eq!(frag.rays, vec![Ray::new(n("0"), 2, vec![])]);
        assert_eq!(frag.points, vec![n("0.2.9")]);
        // a deeper ray seen from an ancestor limit: entirely inside or outside
        let h = c("{L:[0,0.5];R:[(0;6;-),(0.5;0;1)];X:[]}");
        let frag = h.intersect_interval(&n("0"), 4);
        assert!(frag.contains(&n("0.5")) && frag.contains(&n("0.5.3.1")) && frag.contains(&n("0.7")));
        assert!(!frag.contains(&n("0.4")));
        // one point of a shallower ray strictly extends a deeper node
        let frag = h.intersect_interval(&n("0.5.3"), 0);
        assert_eq!(frag.points, vec![n("0.5.3.1")]);
    }

    #[test]
    fn parse_round_trip_and_whitespace() {
        let f = c(" { L : [0 , 0.4] ; R:[ (0;0;-), (0.4;0;7.1)] ; X:[3] } ");
        assert_eq!(f.to_string(), "{L:[0,0.4];R:[(0;0;-),(0.4;0;7.1)];X:[3]}");
        assert_eq!(c(&f.to_string()), f);
        for bad in [
            "{L:[0];R:[(0;0;-)]}",
            "{L:[00];R:[(00;0;-)];X:[]}",
            "{L:[0];R:[(0;0)];X:[]}x",
        ] {
            assert!(
                matches!(bad.parse::<RawCondition>(), Err(ConditionError::Parse { .. })),
                "{bad}"
            );
        }
    }

    #[test]
    fn random_conditions() {
        let p = RandomParams::default();
        let a = random_condition(&p, 1).unwrap();
        assert!(a.is_valid(&p.caps()).is_ok());
        assert_eq!(a, random_condition(&p, 1).unwrap());
        let none = RandomParams {
            max_limits: 0,
            ..p.clone()
        };
        assert!(matches!(
            random_condition(&none, 1),
            Err(ConditionError::InvalidParams(_))
        ));
    }

    #[test]
    fn reroot_moves_all_nodes() {
        let f = c("{L:[2];R:[(2;1;0)];X:[2.5.5]}");
        let g = f.transplant(&Stem::Node(n("7.1")));
        assert_eq!(g.to_string(), "{L:[7.1.2];R:[(7.1.2;1;0)];X:[7.1.2.5.5]}");
        assert_eq!(g.reroot(&Stem::Node(n("7.1")), &Stem::Root).unwrap(), f);
        assert!(f.reroot(&Stem::Node(n("3")), &Stem::Root).is_none());
    }
}
