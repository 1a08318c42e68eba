//! Antichains of conditions: verification with witnesses, exact maximum
//! antichain search, and the ladder gadget.

use std::fmt;

use crate::clique::{max_clique, Graph};
use crate::condition::{Condition, RawCondition, Ray};
use crate::order::{orthogonal, Witness};
use crate::tree::{succ, Caps, Stem, TreeError};

/// Families up to this many conditions are always solved exactly.
pub const EXACT_VERTEX_LIMIT: usize = 40;

/// Default branch-and-bound node budget.
pub const DEFAULT_BUDGET: u64 = 2_000_000;

/// Pairwise compatibility graph of a family. Antichains of the family are
/// exactly the independent sets of this graph.
#[derive(Clone, Debug)]
pub struct CompatGraph {
    pub vertices: Vec<Condition>,
    compat: Graph,
    witnesses: Vec<Vec<Option<Witness>>>,
}

impl CompatGraph {
    pub fn build(family: &[Condition]) -> Self {
        let n = family.len();
        let mut compat = Graph::new(n);
        let mut witnesses = vec![vec![None; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                match orthogonal(&family[i], &family[j]) {
                    Some(w) => witnesses[i][j] = Some(w),
                    None => compat.add_edge(i, j),
                }
            }
        }
        CompatGraph {
            vertices: family.to_vec(),
            compat,
            witnesses,
        }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn compatible(&self, i: usize, j: usize) -> bool {
        self.compat.has_edge(i, j)
    }

    pub fn edge_count(&self) -> usize {
        self.compat.edge_count()
    }

    /// Blocking witness for `i < j`, if orthogonal.
    pub fn witness(&self, i: usize, j: usize) -> Option<&Witness> {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        self.witnesses[a][b].as_ref()
    }

    /// Ranks of the vertices in serialization order, for tie breaking.
    fn text_rank(&self) -> Vec<usize> {
        let texts: Vec<String> = self.vertices.iter().map(|c| c.to_string()).collect();
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.sort_by(|&a, &b| texts[a].cmp(&texts[b]).then(a.cmp(&b)));
        let mut rank = vec![0; self.len()];
        for (r, &v) in idx.iter().enumerate() {
            rank[v] = r;
        }
        rank
    }
}

pub fn build_graph(family: &[Condition]) -> CompatGraph {
    CompatGraph::build(family)
}

/// One pair of a family with its verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairVerdict {
    pub i: usize,
    pub j: usize,
    pub witness: Option<Witness>,
}

impl fmt::Display for PairVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            Some(w) => write!(f, "{} {} ORTHO witness={}", self.i, self.j, w.point),
            None => write!(f, "{} {} COMPAT", self.i, self.j),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AntichainCheck {
    pub is_antichain: bool,
    pub size: usize,
    pub pairs: Vec<PairVerdict>,
}

impl AntichainCheck {
    /// Witnesses of the orthogonal pairs.
    pub fn witnesses(&self) -> impl Iterator<Item = &Witness> {
        self.pairs.iter().filter_map(|p| p.witness.as_ref())
    }
}

impl fmt::Display for AntichainCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.is_antichain {
            "ANTICHAIN"
        } else {
            "NOT_ANTICHAIN"
        };
        writeln!(f, "{verdict} size={}", self.size)?;
        for p in &self.pairs {
            writeln!(f, "{p}")?;
        }
        Ok(())
    }
}

/// Checks that the family is pairwise orthogonal, recording every verdict.
pub fn is_antichain(family: &[Condition]) -> AntichainCheck {
    let mut pairs = Vec::new();
    for i in 0..family.len() {
        for j in i + 1..family.len() {
            pairs.push(PairVerdict {
                i,
                j,
                witness: orthogonal(&family[i], &family[j]),
            });
        }
    }
    AntichainCheck {
        is_antichain: pairs.iter().all(|p| p.witness.is_some()),
        size: family.len(),
        pairs,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AntichainResult {
    /// Indices into the family, ascending.
    pub members: Vec<usize>,
    pub exact: bool,
}

impl AntichainResult {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// Maximum antichain of the family.
///
/// Runs branch and bound on the orthogonality graph. Families of at most
/// [`EXACT_VERTEX_LIMIT`] vertices are searched without a budget; larger ones
/// stop after `budget` expansions and may come back with `exact == false`.
pub fn max_antichain(family: &[Condition], budget: u64) -> AntichainResult {
    max_antichain_in(&CompatGraph::build(family), budget)
}

pub fn max_antichain_in(graph: &CompatGraph, budget: u64) -> AntichainResult {
    let budget = if graph.len() <= EXACT_VERTEX_LIMIT {
        u64::MAX
    } else {
        budget
    };
    let ortho = graph.compat.complement();
    let r = max_clique(&ortho, &graph.text_rank(), budget);
    AntichainResult {
        members: r.members,
        exact: r.exact,
    }
}

/// `A` pairwise orthogonal fans above `s`: condition `j` is the fan at
/// `s⌢j` decorated with the isolated points `s⌢i`, `i ≠ j`.
pub fn ladder(s: &Stem, size: u64, caps: &Caps) -> Result<Vec<Condition>, TreeError> {
    if size == 0 {
        return Ok(Vec::new());
    }
    let top = succ(s, size - 1, caps)?;
    let ray_point = top.child(0);
    caps.check_len(ray_point.len(), &ray_point)?;
    Ok((0..size)
        .map(|j| {
            let limit = s.child(j);
            let explicit = (0..size).filter(|&i| i != j).map(|i| s.child(i)).collect();
            Condition::canonical(RawCondition::new(vec![limit.clone()], vec![Ray::fan(limit)], explicit))
        })
        .collect())
}

/// Formats the report for a chosen subfamily: the verdict line, then one
/// line per pair of chosen members (indices refer to the full family).
pub fn antichain_report(family: &[Condition], result: &AntichainResult) -> String {
    let mut out = format!(
        "ANTICHAIN size={} exact={} members={}\n",
        result.size(),
        result.exact,
        result
            .members
            .iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(",")
    );
    for (a, &i) in result.members.iter().enumerate() {
        for &j in &result.members[a + 1..] {
            let v = PairVerdict {
                i,
                j,
                witness: orthogonal(&family[i], &family[j]),
            };
            out.push_str(&format!("{v}\n"));
        }
    }
    out
}
