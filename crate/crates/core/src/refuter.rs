//! Refutes a claimed decomposition into finitely many classes with bounded
//! antichains by building an antichain that exceeds some class's bound.
//!
//! The engine fixes a stem `s` above which the per-class antichain estimates
//! no longer drop, then repeats rounds: copy every class's current antichain
//! to a fresh child `s⌢n_i`, build the diagonal condition at `s` whose
//! isolated points are accumulation points of all copied members, and ask the
//! oracle for its class `j`. The diagonal is orthogonal to every copied
//! member, so the copy of class `j` plus the diagonal is an antichain in
//! class `j` one larger than before.
//!
//! Only decompositions into finitely many classes are handled; then finitely
//! many rounds at finite tree height suffice.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::antichain::{is_antichain, ladder, max_antichain};
use crate::condition::{random_condition_with, Condition, RandomParams, RawCondition, Ray};
use crate::oracle::{CheckedOracle, OracleError};
use crate::order::{orthogonal, verify_witness};
use crate::tree::{Caps, Node, Stem};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RefuteError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("BudgetExhausted: deepest stem {deepest}")]
    BudgetExhausted { deepest: Stem },
    #[error("NoWitness: member {member} has no accumulation point above {above}")]
    NoWitness { member: String, above: Node },
}

/// What goes into the search universe and how far stabilization probes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniverseParams {
    /// Ladders of every size up to this are included above each probe stem.
    pub ladder_max: u64,
    /// Random conditions included above each probe stem.
    pub random_count: usize,
    pub random: RandomParams,
    /// Probe stems extend the start stem by at most this many entries...
    pub probe_depth: usize,
    /// ...each `< probe_width`.
    pub probe_width: u64,
}

impl Default for UniverseParams {
    fn default() -> Self {
        UniverseParams {
            ladder_max: 8,
            random_count: 8,
            random: RandomParams {
                max_limits: 2,
                max_rays_per_limit: 1,
                max_explicit: 2,
                height: 3,
                width: 3,
                max_index_from: 2,
                max_suffix_len: 1,
            },
            probe_depth: 1,
            probe_width: 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefuterConfig {
    pub caps: Caps,
    pub start: Stem,
    pub universe: UniverseParams,
    /// Branch-and-bound budget for each antichain search.
    pub search_budget: u64,
    pub max_rounds: usize,
    pub seed: u64,
}

impl Default for RefuterConfig {
    fn default() -> Self {
        RefuterConfig {
            caps: Caps::default(),
            start: Stem::Node(Node::from_slice(&[0])),
            universe: UniverseParams::default(),
            search_budget: 200_000,
            max_rounds: 64,
            seed: 0,
        }
    }
}

/// A fixed, finite set of conditions the estimates range over.
#[derive(Clone, Debug)]
pub struct Universe {
    pub conditions: Vec<Condition>,
    /// Stems the stabilization step may descend to, start stem first.
    pub stems: Vec<Stem>,
}

impl Universe {
    /// Gadgets rooted at the empty sequence; every probe stem gets a
    /// transplanted copy.
    fn base(params: &UniverseParams, seed: u64) -> Vec<Condition> {
        let mut base = Vec::new();
        for a in 1..=params.ladder_max {
            base.extend(ladder(&Stem::Root, a, &Caps::UNBOUNDED).expect("unbounded caps"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..params.random_count {
            if let Ok(c) = random_condition_with(&params.random, &mut rng) {
                base.push(c);
            }
        }
        base
    }

    pub fn probe_stems(start: &Stem, params: &UniverseParams, caps: &Caps) -> Vec<Stem> {
        let mut stems = vec![start.clone()];
        let mut frontier = vec![start.clone()];
        for _ in 0..params.probe_depth {
            let mut next = Vec::new();
            for s in &frontier {
                for a in 0..params.probe_width {
                    let t = Stem::Node(s.child(a));
                    if caps.check(t.as_node().unwrap()).is_ok() {
                        next.push(t);
                    }
                }
            }
            stems.extend(next.iter().cloned());
            frontier = next;
        }
        stems
    }

    pub fn around(start: &Stem, params: &UniverseParams, caps: &Caps, seed: u64) -> Self {
        let base = Self::base(params, seed);
        let stems = Self::probe_stems(start, params, caps);
        let mut conditions = Vec::new();
        for s in &stems {
            for b in &base {
                let c = b.transplant(s);
                if c.check_caps(caps).is_ok() && !conditions.contains(&c) {
                    conditions.push(c);
                }
            }
        }
        Universe { conditions, stems }
    }

    /// Members with some accumulation point extending `s`.
    pub fn above<'a>(&'a self, s: &'a Stem) -> impl Iterator<Item = &'a Condition> + 'a {
        self.conditions
            .iter()
            .filter(move |c| c.d_set().iter().any(|t| s.is_prefix_of(t)))
    }
}

/// A lower bound on the largest antichain of a class above a stem, with the
/// antichain that proves it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Estimate {
    pub size: usize,
    pub members: Vec<Condition>,
    pub exact: bool,
}

fn best_antichain(
    oracle: &mut CheckedOracle,
    class: usize,
    candidates: Vec<&Condition>,
    budget: u64,
) -> Result<Estimate, RefuteError> {
    let mut family = Vec::new();
    for c in candidates {
        if oracle.classify(c)? == class {
            family.push(c.clone());
        }
    }
    let r = max_antichain(&family, budget);
    Ok(Estimate {
        size: r.size(),
        members: r.members.iter().map(|&i| family[i].clone()).collect(),
        exact: r.exact,
    })
}

/// Largest antichain found among universe members of class `class` having an
/// accumulation point above `s`.
pub fn estimate_f(
    oracle: &mut CheckedOracle,
    class: usize,
    s: &Stem,
    universe: &Universe,
    budget: u64,
) -> Result<Estimate, RefuteError> {
    best_antichain(oracle, class, universe.above(s).collect(), budget)
}

/// Largest antichain among universe members of class `class` lying entirely
/// above `s`; these can be moved to any other stem.
fn supported_estimate(
    oracle: &mut CheckedOracle,
    class: usize,
    s: &Stem,
    universe: &Universe,
    budget: u64,
) -> Result<Estimate, RefuteError> {
    let candidates = universe.conditions.iter().filter(|c| c.supported_under(s)).collect();
    best_antichain(oracle, class, candidates, budget)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StableStem {
    pub stem: Stem,
    pub estimates: Vec<Estimate>,
    pub descents: usize,
}

fn all_estimates(
    oracle: &mut CheckedOracle,
    s: &Stem,
    universe: &Universe,
    budget: u64,
) -> Result<Vec<Estimate>, RefuteError> {
    (0..oracle.class_count())
        .map(|i| estimate_f(oracle, i, s, universe, budget))
        .collect()
}

/// Descends from `start` through the universe's probe stems while some
/// class's estimate drops, and returns the first stem where none does.
///
/// Estimates are non-increasing along extensions and bounded by the claimed
/// bounds, so there are at most `Σ b_i` descents.
pub fn find_stable_stem(
    oracle: &mut CheckedOracle,
    start: &Stem,
    universe: &Universe,
    budget: u64,
) -> Result<StableStem, RefuteError> {
    if universe.conditions.is_empty() || !universe.stems.contains(start) {
        return Err(RefuteError::BudgetExhausted { deepest: start.clone() });
    }
    let max_descents: usize = oracle.bounds().iter().sum();
    let mut s = start.clone();
    let mut est = all_estimates(oracle, &s, universe, budget)?;
    let mut descents = 0;
    'descend: loop {
        let probes: Vec<Stem> = universe
            .stems
            .iter()
            .filter(|t| t.len() > s.len() && s.is_prefix_of_stem(t))
            .cloned()
            .collect();
        for t in probes {
            let est_t = all_estimates(oracle, &t, universe, budget)?;
            if est_t.iter().zip(&est).any(|(a, b)| a.size < b.size) {
                descents += 1;
                if descents > max_descents {
                    return Err(RefuteError::BudgetExhausted { deepest: t });
                }
                s = t;
                est = est_t;
                continue 'descend;
            }
        }
        return Ok(StableStem {
            stem: s,
            estimates: est,
            descents,
        });
    }
}

/// The condition `{s} ∪ {s⌢k : k} ∪ {witnesses}`, where each member
/// contributes one of its accumulation points above `s⌢n` for its assigned
/// `n`. It is orthogonal to every member.
pub fn build_diagonal(s: &Node, members: &[(Condition, u64)]) -> Result<Condition, RefuteError> {
    let mut witnesses = Vec::new();
    for (m, n) in members {
        let above = s.child(*n);
        match m.d_set().iter().find(|t| above.is_prefix_of(t)) {
            Some(t) => witnesses.push(t.clone()),
            None => {
                return Err(RefuteError::NoWitness {
                    member: m.to_string(),
                    above,
                })
            }
        }
    }
    Ok(Condition::canonical(RawCondition::new(
        vec![s.clone()],
        vec![Ray::fan(s.clone())],
        witnesses,
    )))
}

/// One completed or stalled round.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundLog {
    pub round: usize,
    pub diagonal_class: usize,
    /// Evidence size of that class after the round.
    pub size: usize,
    pub grew: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Violation {
        class: usize,
        bound: usize,
        members: Vec<Condition>,
    },
    BudgetExhausted {
        deepest: Stem,
        best: Vec<usize>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefutationReport {
    pub outcome: Outcome,
    pub bounds: Vec<usize>,
    pub stem: Stem,
    pub rounds: usize,
    pub log: Vec<RoundLog>,
}

impl RefutationReport {
    pub fn is_violation(&self) -> bool {
        matches!(self.outcome, Outcome::Violation { .. })
    }
}

fn join<T: fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for RefutationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.outcome {
            Outcome::Violation { class, bound, members } => {
                writeln!(f, "VIOLATION class={class} bound={bound} size={}", members.len())?
            }
            Outcome::BudgetExhausted { .. } => writeln!(f, "BUDGET_EXHAUSTED rounds={}", self.rounds)?,
        }
        writeln!(
            f,
            "# decomposition into {} classes (finitely many), bounds={}",
            self.bounds.len(),
            join(&self.bounds)
        )?;
        writeln!(f, "# stem={} rounds={}", self.stem, self.rounds)?;
        for r in &self.log {
            writeln!(
                f,
                "# round {}: diagonal in class {}, evidence {}{}",
                r.round,
                r.diagonal_class,
                r.size,
                if r.grew { "" } else { " (stalled)" }
            )?;
        }
        match &self.outcome {
            Outcome::Violation { members, .. } => {
                for (i, m) in members.iter().enumerate() {
                    writeln!(f, "member {i} {m}")?;
                }
                write!(f, "{}", is_antichain(members))
            }
            Outcome::BudgetExhausted { deepest, best } => {
                writeln!(f, "# deepest stem={deepest}")?;
                for (i, b) in best.iter().enumerate() {
                    writeln!(f, "best class={i} size={b}")?;
                }
                Ok(())
            }
        }
    }
}

/// Independently re-checks a violation: pairwise orthogonality through the
/// witness predicate and class membership through fresh oracle calls.
pub fn verify_violation(
    oracle: &mut CheckedOracle,
    class: usize,
    bound: usize,
    members: &[Condition],
) -> Result<bool, RefuteError> {
    if members.len() < bound {
        return Ok(false);
    }
    for (a, f) in members.iter().enumerate() {
        for g in &members[a + 1..] {
            match orthogonal(f, g) {
                Some(w) if verify_witness(f, g, &w) => {}
                _ => return Ok(false),
            }
        }
    }
    for m in members {
        if oracle.reclassify(m)? != class {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Runs the diagonalization until some class's antichain reaches its bound
/// or the round budget runs out.
pub fn refute(oracle: &mut CheckedOracle, config: &RefuterConfig) -> Result<RefutationReport, RefuteError> {
    let bounds = oracle.bounds().to_vec();
    let universe = Universe::around(&config.start, &config.universe, &config.caps, config.seed);
    let exhausted = |deepest: Stem, best: Vec<usize>, stem: Stem, rounds, log| RefutationReport {
        outcome: Outcome::BudgetExhausted { deepest, best },
        bounds: bounds.clone(),
        stem,
        rounds,
        log,
    };

    let stable = if universe.conditions.is_empty() {
        None
    } else {
        match find_stable_stem(oracle, &config.start, &universe, config.search_budget) {
            Ok(st) => Some(st),
            Err(RefuteError::BudgetExhausted { deepest }) => {
                return Ok(exhausted(
                    deepest.clone(),
                    vec![0; bounds.len()],
                    deepest,
                    0,
                    Vec::new(),
                ))
            }
            Err(e) => return Err(e),
        }
    };
    let stem_node = match stable.as_ref().map_or(&config.start, |st| &st.stem) {
        Stem::Node(n) => n.clone(),
        Stem::Root => Node::from_slice(&[0]),
    };
    let stem = Stem::Node(stem_node.clone());
    if config.caps.check_len(stem_node.len() + 1, &stem).is_err() {
        return Ok(exhausted(stem.clone(), vec![0; bounds.len()], stem, 0, Vec::new()));
    }

    let violation = |class: usize, members: Vec<Condition>, rounds, log| RefutationReport {
        outcome: Outcome::Violation {
            class,
            bound: bounds[class],
            members: members.into_iter().take(bounds[class]).collect(),
        },
        bounds: bounds.clone(),
        stem: stem.clone(),
        rounds,
        log,
    };

    if let Some(st) = stable.as_ref().filter(|st| st.stem == stem) {
        if let Some(i) = (0..bounds.len()).find(|&i| st.estimates[i].size >= bounds[i]) {
            return Ok(violation(i, st.estimates[i].members.clone(), 0, Vec::new()));
        }
    }

    let mut evidence: Vec<Vec<Condition>> = Vec::with_capacity(bounds.len());
    for i in 0..bounds.len() {
        evidence.push(supported_estimate(oracle, i, &stem, &universe, config.search_budget)?.members);
    }
    if let Some(i) = (0..bounds.len()).find(|&i| evidence[i].len() >= bounds[i]) {
        return Ok(violation(i, evidence[i].clone(), 0, Vec::new()));
    }

    // fresh sibling indices above everything already placed at the stem
    let depth = stem_node.len();
    let mut next_index = evidence
        .iter()
        .flatten()
        .flat_map(|c| c.limits().iter().chain(c.explicit()))
        .filter(|t| t.len() > depth)
        .map(|t| t.entries()[depth] + 1)
        .max()
        .unwrap_or(0);

    let mut log = Vec::new();
    for round in 1..=config.max_rounds {
        let mut gathered: Vec<Vec<Condition>> = Vec::with_capacity(bounds.len());
        let mut members: Vec<(Condition, u64)> = Vec::new();
        for (i, ev) in evidence.iter().enumerate() {
            let n = next_index;
            next_index += 1;
            let target = Stem::Node(stem_node.child(n));
            let mut copy = Vec::new();
            for c in ev {
                let moved = match c.reroot(&stem, &target) {
                    Some(m) if m.check_caps(&config.caps).is_ok() => m,
                    _ => {
                        let best = evidence.iter().map(Vec::len).collect();
                        return Ok(exhausted(target, best, stem.clone(), round - 1, log));
                    }
                };
                // an oracle that is not transplant-invariant may move it
                if oracle.classify(&moved)? == i {
                    members.push((moved.clone(), n));
                    copy.push(moved);
                }
            }
            gathered.push(copy);
        }
        let diagonal = build_diagonal(&stem_node, &members)?;
        let j = oracle.classify(&diagonal)?;
        let mut candidate = std::mem::take(&mut gathered[j]);
        candidate.push(diagonal);
        let grew = candidate.len() > evidence[j].len();
        if grew {
            evidence[j] = candidate;
        }
        log.push(RoundLog {
            round,
            diagonal_class: j,
            size: evidence[j].len(),
            grew,
        });
        if evidence[j].len() >= bounds[j] {
            return Ok(violation(j, evidence[j].clone(), round, log));
        }
    }
    let best = evidence.iter().map(Vec::len).collect();
    Ok(exhausted(stem.clone(), best, stem, config.max_rounds, log))
}
