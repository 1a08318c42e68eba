//! The tree of nonempty finite sequences of naturals.
//!
//! Nodes are ordered two ways: by the tree order (prefix inclusion) and by a
//! linear order that extends it. In the linear order a node sits below all of
//! its extensions, and at the first position where two nodes differ the one
//! with the *larger* entry is the smaller node. Immediate successors of a node
//! therefore form a descending sequence whose infimum is the node itself.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("node {node} exceeds height cap {cap}")]
    HeightCap { node: String, cap: usize },
    #[error("entry {entry} in {node} exceeds width cap {cap}")]
    WidthCap { node: String, entry: u64, cap: u64 },
    #[error("cannot parse node from {0:?}")]
    Parse(String),
}

/// Optional bounds on the part of the tree a computation may touch.
///
/// `height` bounds the length of a node; `width` bounds every entry
/// (entries must be `< width`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub height: Option<usize>,
    pub width: Option<u64>,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            height: Some(8),
            width: None,
        }
    }
}

impl Caps {
    pub const UNBOUNDED: Caps = Caps {
        height: None,
        width: None,
    };

    pub fn new(height: Option<usize>, width: Option<u64>) -> Self {
        Caps { height, width }
    }

    pub fn check_len(&self, len: usize, node: &dyn fmt::Display) -> Result<(), TreeError> {
        match self.height {
            Some(cap) if len > cap => Err(TreeError::HeightCap {
                node: node.to_string(),
                cap,
            }),
            _ => Ok(()),
        }
    }

    pub fn check_entry(&self, entry: u64, node: &dyn fmt::Display) -> Result<(), TreeError> {
        match self.width {
            Some(cap) if entry >= cap => Err(TreeError::WidthCap {
                node: node.to_string(),
                entry,
                cap,
            }),
            _ => Ok(()),
        }
    }

    pub fn check(&self, node: &Node) -> Result<(), TreeError> {
        self.check_len(node.len(), node)?;
        for &e in node.entries() {
            self.check_entry(e, node)?;
        }
        Ok(())
    }
}

/// A member of the tree: a nonempty finite sequence of naturals.
///
/// `Ord` is the linear order of the tree, not lexicographic order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Node(Vec<u64>);

impl Node {
    pub fn new(entries: Vec<u64>) -> Option<Node> {
        if entries.is_empty() {
            None
        } else {
            Some(Node(entries))
        }
    }

    /// Panics on an empty slice.
    pub fn from_slice(entries: &[u64]) -> Node {
        Node::new(entries.to_vec()).expect("a node has at least one entry")
    }

    pub fn entries(&self) -> &[u64] {
        &self.0
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn last(&self) -> u64 {
        *self.0.last().unwrap()
    }

    /// `self ⊆ other` in the tree order.
    pub fn is_prefix_of(&self, other: &Node) -> bool {
        tree_leq(self, other)
    }

    /// `self ⊊ other`.
    pub fn is_proper_prefix_of(&self, other: &Node) -> bool {
        self.len() < other.len() && tree_leq(self, other)
    }

    pub fn child(&self, k: u64) -> Node {
        let mut v = self.0.clone();
        v.push(k);
        Node(v)
    }

    /// Node followed by all entries of `tail`.
    pub fn concat(&self, tail: &[u64]) -> Node {
        let mut v = self.0.clone();
        v.extend_from_slice(tail);
        Node(v)
    }

    pub fn parent(&self) -> Stem {
        if self.len() == 1 {
            Stem::Root
        } else {
            Stem::Node(Node(self.0[..self.len() - 1].to_vec()))
        }
    }
}

impl Ord for Node {
    fn cmp(&self, other: &Self) -> Ordering {
        lin_cmp(self, other)
    }
}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{self}>")
    }
}

/// Parses a decimal natural with no sign, no whitespace and no leading zeros.
pub(crate) fn parse_nat(s: &str) -> Option<u64> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    if s.len() > 1 && s.starts_with('0') {
        return None;
    }
    s.parse().ok()
}

impl FromStr for Node {
    type Err = TreeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let entries = s
            .split('.')
            .map(parse_nat)
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| TreeError::Parse(s.to_string()))?;
        Node::new(entries).ok_or_else(|| TreeError::Parse(s.to_string()))
    }
}

/// A node, or the empty sequence used only as a seed for stems.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Stem {
    Root,
    Node(Node),
}

#[allow(clippy::len_without_is_empty)]
impl Stem {
    pub fn len(&self) -> usize {
        match self {
            Stem::Root => 0,
            Stem::Node(n) => n.len(),
        }
    }

    pub fn is_root(&self) -> bool {
        matches!(self, Stem::Root)
    }

    pub fn entries(&self) -> &[u64] {
        match self {
            Stem::Root => &[],
            Stem::Node(n) => n.entries(),
        }
    }

    pub fn as_node(&self) -> Option<&Node> {
        match self {
            Stem::Root => None,
            Stem::Node(n) => Some(n),
        }
    }

    /// Every node extends the root.
    pub fn is_prefix_of(&self, t: &Node) -> bool {
        match self {
            Stem::Root => true,
            Stem::Node(s) => tree_leq(s, t),
        }
    }

    pub fn is_prefix_of_stem(&self, t: &Stem) -> bool {
        match t {
            Stem::Root => self.is_root(),
            Stem::Node(t) => self.is_prefix_of(t),
        }
    }

    pub fn child(&self, k: u64) -> Node {
        match self {
            Stem::Root => Node(vec![k]),
            Stem::Node(s) => s.child(k),
        }
    }

    pub fn concat(&self, tail: &[u64]) -> Option<Node> {
        let mut v = self.entries().to_vec();
        v.extend_from_slice(tail);
        Node::new(v)
    }
}

impl From<Node> for Stem {
    fn from(n: Node) -> Self {
        Stem::Node(n)
    }
}

impl fmt::Display for Stem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stem::Root => f.write_str("^"),
            Stem::Node(n) => n.fmt(f),
        }
    }
}

impl FromStr for Stem {
    type Err = TreeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "^" {
            Ok(Stem::Root)
        } else {
            s.parse().map(Stem::Node)
        }
    }
}

/// Tree order: `s` is a prefix of `t`.
pub fn tree_leq(s: &Node, t: &Node) -> bool {
    s.len() <= t.len() && t.entries()[..s.len()] == *s.entries()
}

/// The linear order of the tree.
pub fn lin_cmp(s: &Node, t: &Node) -> Ordering {
    match s.entries().iter().zip(t.entries()).find(|(a, b)| a != b) {
        // larger entry at the first difference is the smaller node
        Some((a, b)) => b.cmp(a),
        None => s.len().cmp(&t.len()),
    }
}

/// `s⌢k`, subject to `caps`.
pub fn succ(s: &Stem, k: u64, caps: &Caps) -> Result<Node, TreeError> {
    let node = s.child(k);
    caps.check_len(node.len(), &node)?;
    caps.check_entry(k, &node)?;
    Ok(node)
}

/// Whether `t` lies in the open interval `(s, s⌢k)`.
///
/// Equivalent to: `t` strictly extends `s` and `t(|s|) > k`.
pub fn interval_contains(s: &Node, k: u64, t: &Node) -> bool {
    t.len() > s.len() && t.entries()[s.len()] > k && tree_leq(s, t)
}

/// Same relation as [`interval_contains`], evaluated with two comparisons in
/// the linear order.
pub fn interval_contains_by_cmp(s: &Node, k: u64, t: &Node) -> bool {
    lin_cmp(s, t) == Ordering::Less && lin_cmp(t, &s.child(k)) == Ordering::Less
}

/// Longest common prefix.
pub fn meet(s: &Node, t: &Node) -> Stem {
    let n = s.entries().iter().zip(t.entries()).take_while(|(a, b)| a == b).count();
    match n {
        0 => Stem::Root,
        _ => Stem::Node(Node(s.entries()[..n].to_vec())),
    }
}

/// All nodes of length `1..=height` with entries `< width`, in linear order.
pub fn enumerate_nodes(height: usize, width: u64) -> Vec<Node> {
    let mut out = Vec::new();
    let mut frontier: Vec<Vec<u64>> = vec![vec![]];
    for _ in 0..height {
        let mut next = Vec::new();
        for prefix in &frontier {
            for e in 0..width {
                let mut v = prefix.clone();
                v.push(e);
                out.push(Node(v.clone()));
                next.push(v);
            }
        }
        frontier = next;
    }
    out.sort();
    out
}
