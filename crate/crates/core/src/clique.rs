//! Exact maximum clique by branch and bound with a greedy-coloring bound.
//!
//! Maximum antichains (independent sets of the compatibility graph) and
//! maximum color-homogeneous subfamilies are both cliques of some derived
//! graph, so both searches run through here.

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bitset {
    words: Vec<u64>,
}

impl Bitset {
    pub fn new(len: usize) -> Self {
        Bitset {
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn intersect(&self, other: &Bitset) -> Bitset {
        Bitset {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }
}

/// Undirected graph on `0..n` stored as adjacency bitsets.
#[derive(Clone, Debug)]
pub struct Graph {
    adj: Vec<Bitset>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            adj: vec![Bitset::new(n); n],
        }
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn add_edge(&mut self, i: usize, j: usize) {
        if i != j {
            self.adj[i].insert(j);
            self.adj[j].insert(i);
        }
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i].contains(j)
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].count()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Bitset::count).sum::<usize>() / 2
    }

    pub fn complement(&self) -> Graph {
        let n = self.len();
        let mut g = Graph::new(n);
        for i in 0..n {
            for j in i + 1..n {
                if !self.has_edge(i, j) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    pub fn is_clique(&self, vs: &[usize]) -> bool {
        vs.iter()
            .enumerate()
            .all(|(a, &i)| vs[a + 1..].iter().all(|&j| self.has_edge(i, j)))
    }
}

/// Outcome of a clique search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueResult {
    /// Vertex indices, ascending.
    pub members: Vec<usize>,
    /// The search finished within budget, so `members` is a maximum clique.
    pub exact: bool,
    /// Search-tree nodes expanded.
    pub nodes: u64,
}

struct Search<'a> {
    g: &'a Graph,
    // position of each vertex in the branching order
    order: Vec<usize>,
    best: Vec<usize>,
    budget: u64,
    nodes: u64,
    aborted: bool,
}

impl Search<'_> {
    /// Greedy sequential coloring of `p` in branching order. Returns the
    /// vertices with their color numbers, colors ascending.
    fn color(&self, p: &Bitset) -> Vec<(usize, usize)> {
        let mut verts: Vec<usize> = p.iter().collect();
        verts.sort_by_key(|&v| self.order[v]);
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for v in verts {
            match classes.iter_mut().find(|cl| cl.iter().all(|&u| !self.g.has_edge(u, v))) {
                Some(cl) => cl.push(v),
                None => classes.push(vec![v]),
            }
        }
        classes
            .into_iter()
            .enumerate()
            .flat_map(|(c, cl)| cl.into_iter().map(move |v| (v, c + 1)))
            .collect()
    }

    fn expand(&mut self, r: &mut Vec<usize>, mut p: Bitset) {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.aborted = true;
            return;
        }
        let colored = self.color(&p);
        for &(v, c) in colored.iter().rev() {
            if r.len() + c <= self.best.len() || self.aborted {
                return;
            }
            r.push(v);
            let next = p.intersect(&self.g.adj[v]);
            if next.is_empty() {
                if r.len() > self.best.len() {
                    self.best = r.clone();
                }
            } else {
                self.expand(r, next);
            }
            r.pop();
            p.remove(v);
        }
    }
}

/// Maximum clique of `g`.
///
/// Vertices are branched on in order of decreasing degree, ties broken by
/// `tie_rank` (smaller first). A greedy clique seeds the incumbent. The
/// search stops after `budget` expansions, reporting the best clique found
/// and `exact = false`. Fully deterministic.
pub fn max_clique(g: &Graph, tie_rank: &[usize], budget: u64) -> CliqueResult {
    let n = g.len();
    if n == 0 {
        return CliqueResult {
            members: Vec::new(),
            exact: true,
            nodes: 0,
        };
    }
    let mut by_degree: Vec<usize> = (0..n).collect();
    by_degree.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), tie_rank[v], v));
    let mut order = vec![0; n];
    for (pos, &v) in by_degree.iter().enumerate() {
        order[v] = pos;
    }

    let mut greedy: Vec<usize> = Vec::new();
    for &v in &by_degree {
        if greedy.iter().all(|&u| g.has_edge(u, v)) {
            greedy.push(v);
        }
    }

    let mut all = Bitset::new(n);
    (0..n).for_each(|v| all.insert(v));
    let mut s = Search {
        g,
        order,
        best: greedy,
        budget,
        nodes: 0,
        aborted: false,
    };
    s.expand(&mut Vec::new(), all);
    let mut members = s.best;
    members.sort_unstable();
    CliqueResult {
        members,
        exact: !s.aborted,
        nodes: s.nodes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Maximum clique by enumerating all `2^n` vertex subsets. Only
    /// practical for `n ≤ 22` or so.
    fn brute_force_max_clique(g: &Graph) -> usize {
        let n = g.len();
        assert!(n < 64);
        let masks: Vec<u64> = (0..n)
            .map(|i| (0..n).filter(|&j| g.has_edge(i, j)).fold(0u64, |m, j| m | 1 << j))
            .collect();
        // is_clique[set] built from the set with its lowest vertex removed
        let mut is_clique = vec![false; 1usize << n];
        is_clique[0] = true;
        let mut best = 0;
        for set in 1u64..(1u64 << n) {
            let low = set.trailing_zeros() as usize;
            let rest = set & (set - 1);
            let ok = is_clique[rest as usize] && rest & !masks[low] == 0;
            is_clique[set as usize] = ok;
            if ok {
                best = best.max(set.count_ones() as usize);
            }
        }
        best
    }

    #[test]
    fn bitset_basics() {
        let mut b = Bitset::new(130);
        for i in [0, 63, 64, 129] {
            b.insert(i);
        }
        assert_eq!(b.iter().collect::<Vec<_>>(), vec![0, 63, 64, 129]);
        b.remove(63);
        assert_eq!(b.count(), 3);
        assert!(!b.contains(63));
    }

    #[test]
    fn small_graphs() {
        let empty = Graph::new(0);
        assert_eq!(max_clique(&empty, &[], 100).members, Vec::<usize>::new());
        let mut g = Graph::new(5);
        for (i, j) in [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4)] {
            g.add_edge(i, j);
        }
        let r = max_clique(&g, &[0; 5], 1000);
        assert_eq!(r.members, vec![0, 1, 2]);
        assert!(r.exact);
    }

    #[test]
    fn agrees_with_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let n = rng.gen_range(1..16);
            let p = rng.gen_range(0.1..0.9);
            let mut g = Graph::new(n);
            for i in 0..n {
                for j in i + 1..n {
                    if rng.gen_bool(p) {
                        g.add_edge(i, j);
                    }
                }
            }
            let r = max_clique(&g, &vec![0; n], u64::MAX);
            assert!(g.is_clique(&r.members));
            assert_eq!(r.members.len(), brute_force_max_clique(&g));
        }
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 60;
        let mut g = Graph::new(n);
        for i in 0..n {
            for j in i + 1..n {
                if rng.gen_bool(0.5) {
                    g.add_edge(i, j);
                }
            }
        }
        let r = max_clique(&g, &vec![0; n], 5);
        assert!(!r.exact);
        assert!(g.is_clique(&r.members));
        assert!(!r.members.is_empty());
    }
}
