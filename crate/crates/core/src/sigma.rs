//! Partition of conditions into the classes `P(k, n, m)` and the pair
//! coloring used to show each class has no infinite antichain.
//!
//! For a condition `F`, `k(F)` is the least `k` such that no interval
//! `(s, s⌢k)` with `s ∈ F^d` meets `F^d`; `R(F)` is what is left of `F` after
//! removing `F^d` and those intervals. The signature of `F` is
//! `(k(F), |F^d|, |R(F)|)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::clique::{max_clique, Graph};
use crate::condition::{Condition, Fragment};
use crate::order::orthogonal;
use crate::tree::{interval_contains, parse_nat, Node};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SigmaError {
    #[error("SignatureMismatch: {0} vs {1}")]
    SignatureMismatch(Signature, Signature),
    #[error("cannot parse {0:?}")]
    Parse(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature {
    pub k: u64,
    pub n: usize,
    pub m: usize,
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.k, self.n, self.m)
    }
}

impl FromStr for Signature {
    type Err = SigmaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || SigmaError::Parse(s.to_string());
        let inner = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(err)?;
        let parts: Vec<u64> = inner.split(',').map(parse_nat).collect::<Option<_>>().ok_or_else(err)?;
        match parts[..] {
            [k, n, m] => Ok(Signature {
                k,
                n: n as usize,
                m: m as usize,
            }),
            _ => Err(err()),
        }
    }
}

/// One of the four pair colors. For families 1 and 3 `second` is an index
/// into the accumulation points, for families 2 and 4 into `R(F)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Color {
    pub family: u8,
    pub n: usize,
    pub second: usize,
}

impl Color {
    pub fn new(family: u8, n: usize, second: usize) -> Self {
        assert!((1..=4).contains(&family));
        Color { family, n, second }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}/{}", self.family, self.n, self.second)
    }
}

impl FromStr for Color {
    type Err = SigmaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || SigmaError::Parse(s.to_string());
        let (fam, rest) = s.split_once(':').ok_or_else(err)?;
        let (a, b) = rest.split_once('/').ok_or_else(err)?;
        let family = parse_nat(fam).filter(|f| (1..=4).contains(f)).ok_or_else(err)? as u8;
        let n = parse_nat(a).ok_or_else(err)? as usize;
        let second = parse_nat(b).ok_or_else(err)? as usize;
        Ok(Color { family, n, second })
    }
}

/// Least `k` such that the intervals `(s, s⌢k)`, `s ∈ F^d`, avoid `F^d`.
/// Zero when `F` has no accumulation points.
pub fn k_of(f: &Condition) -> u64 {
    let d = f.d_set();
    // s' ∈ (s, s⌢k) iff s ⊊ s' and s'(|s|) > k
    d.iter()
        .flat_map(|s| {
            d.iter()
                .filter(move |t| s.is_proper_prefix_of(t))
                .map(move |t| t.entries()[s.len()])
        })
        .max()
        .unwrap_or(0)
}

/// Whether `t` falls in some interval `(s, s⌢k)` with `s ∈ F^d`.
fn in_some_interval(f: &Condition, k: u64, t: &Node) -> bool {
    f.d_set().iter().any(|s| interval_contains(s, k, t))
}

/// The finite remainder `F \ (⋃ (s, s⌢k(F)) ∪ F^d)`, in linear order.
pub fn r_set(f: &Condition) -> Vec<Node> {
    let k = k_of(f);
    let mut out = BTreeSet::new();
    for x in f.explicit() {
        if !in_some_interval(f, k, x) {
            out.insert(x.clone());
        }
    }
    for r in f.rays() {
        // indices above k fall inside the ray's own limit interval
        for j in r.index_from..=k {
            let p = r.point(j);
            if !f.is_limit(&p) && !in_some_interval(f, k, &p) {
                out.insert(p);
            }
        }
    }
    out.into_iter().collect()
}

pub fn signature(f: &Condition) -> Signature {
    Signature {
        k: k_of(f),
        n: f.d_set().len(),
        m: r_set(f).len(),
    }
}

/// Precomputed pieces of a condition needed for coloring.
struct Split<'a> {
    limits: &'a [Node],
    rest: Vec<Node>,
    pieces: Vec<Fragment>,
}

impl<'a> Split<'a> {
    fn new(f: &'a Condition, k: u64) -> Self {
        Split {
            limits: f.d_set(),
            rest: r_set(f),
            pieces: f.d_set().iter().map(|s| f.intersect_interval(s, k)).collect(),
        }
    }
}

/// Colors one ordered side of the pair: families 1 and 2 when `a` comes
/// first, families 3 and 4 when it comes second.
fn color_side(a: &Split, b: &Split, shift: u8, out: &mut BTreeSet<Color>) {
    for (n, s) in a.limits.iter().enumerate() {
        for (n2, piece) in b.pieces.iter().enumerate() {
            if piece.contains(s) {
                out.insert(Color::new(1 + shift, n, n2));
            }
        }
        if let Ok(m) = b.rest.binary_search(s) {
            out.insert(Color::new(2 + shift, n, m));
        }
    }
}

/// All colors the ordered pair `(fi, fj)` obtains. Both must lie in the
/// same class.
pub fn color_pair(fi: &Condition, fj: &Condition) -> Result<BTreeSet<Color>, SigmaError> {
    let (si, sj) = (signature(fi), signature(fj));
    if si != sj {
        return Err(SigmaError::SignatureMismatch(si, sj));
    }
    let (a, b) = (Split::new(fi, si.k), Split::new(fj, si.k));
    let mut out = BTreeSet::new();
    color_side(&a, &b, 0, &mut out);
    color_side(&b, &a, 2, &mut out);
    Ok(out)
}

fn common_signature(family: &[Condition]) -> Result<Option<Signature>, SigmaError> {
    let mut sigs = family.iter().map(signature);
    let Some(first) = sigs.next() else {
        return Ok(None);
    };
    match sigs.find(|s| *s != first) {
        Some(other) => Err(SigmaError::SignatureMismatch(first, other)),
        None => Ok(Some(first)),
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CoverageReport {
    pub signature: Option<Signature>,
    pub pairs: usize,
    pub orthogonal_pairs: usize,
    /// Orthogonal pairs `(i, j)` that obtained no color. Should be empty.
    pub violations: Vec<(usize, usize)>,
    /// How many orthogonal pairs obtained at least one color of each family.
    pub family_counts: [usize; 4],
    /// Colors of every pair `(i, j)`, `i < j`.
    pub colors: BTreeMap<(usize, usize), BTreeSet<Color>>,
}

impl CoverageReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that every orthogonal pair of a single-class family obtains a
/// color.
pub fn coverage_check(family: &[Condition]) -> Result<CoverageReport, SigmaError> {
    let mut report = CoverageReport {
        signature: common_signature(family)?,
        ..Default::default()
    };
    for i in 0..family.len() {
        for j in i + 1..family.len() {
            let colors = color_pair(&family[i], &family[j])?;
            report.pairs += 1;
            if orthogonal(&family[i], &family[j]).is_some() {
                report.orthogonal_pairs += 1;
                if colors.is_empty() {
                    report.violations.push((i, j));
                }
                for fam in 1..=4u8 {
                    if colors.iter().any(|c| c.family == fam) {
                        report.family_counts[fam as usize - 1] += 1;
                    }
                }
            }
            report.colors.insert((i, j), colors);
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homogeneous {
    /// Indices into the family, ascending.
    pub members: Vec<usize>,
    pub exact: bool,
}

/// Families up to this size are searched exactly.
pub const HOMOGENEOUS_EXACT_LIMIT: usize = 20;

/// Largest subfamily in which every pair `i < j` obtains `color`.
pub fn max_homogeneous(family: &[Condition], color: Color) -> Result<Homogeneous, SigmaError> {
    common_signature(family)?;
    let n = family.len();
    let mut g = Graph::new(n);
    for i in 0..n {
        for j in i + 1..n {
            if color_pair(&family[i], &family[j])?.contains(&color) {
                g.add_edge(i, j);
            }
        }
    }
    let exact = n <= HOMOGENEOUS_EXACT_LIMIT;
    // a zero budget leaves only the greedy seed
    let budget = if exact { u64::MAX } else { 0 };
    let rank: Vec<usize> = (0..n).collect();
    let r = max_clique(&g, &rank, budget);
    Ok(Homogeneous {
        members: r.members,
        exact: r.exact,
    })
}
