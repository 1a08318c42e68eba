//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tcc_core::antichain::{is_antichain, ladder, max_antichain, DEFAULT_BUDGET};
use tcc_core::condition::{random_condition, RandomParams};
use tcc_core::oracle::{BuiltinKind, BuiltinOracle, CheckedOracle, DecompositionOracle};
use tcc_core::order::{compatible, extends, orthogonal, random_extension, verify_witness};
use tcc_core::refuter::{refute, verify_violation, Outcome, RefutationReport, RefuterConfig};
use tcc_core::sigma::{color_pair, k_of, max_homogeneous, r_set, signature, Color, Signature};
use tcc_core::tree::{enumerate_nodes, interval_contains, interval_contains_by_cmp, lin_cmp, succ};
use tcc_core::{Caps, Condition, Node, Stem};

const TCC: &str = env!("CARGO_BIN_EXE_tcc");
const ORACLE: &str = env!("CARGO_BIN_EXE_tcc-oracle");

const PROBE: u64 = 20;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn check(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn node(v: Vec<u64>) -> Node {
    Node::new(v).unwrap()
}

fn params(max_limits: usize, height: usize, width: u64) -> RandomParams {
    RandomParams {
        max_limits,
        max_rays_per_limit: 2,
        max_explicit: 2,
        height,
        width,
        max_index_from: 2,
        max_suffix_len: 1,
    }
}

fn corpus(p: &RandomParams, from: u64, count: usize) -> Vec<Condition> {
    (from..from + count as u64)
        .map(|s| random_condition(p, s).unwrap())
        .collect()
}

fn random_entries<R: Rng>(rng: &mut R, max_len: usize, width: u64) -> Vec<u64> {
    let len = rng.gen_range(1..=max_len);
    (0..len).map(|_| rng.gen_range(0..width)).collect()
}

fn reference_cmp(a: &[u64], b: &[u64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        if x != y {
            return if x > y { Ordering::Less } else { Ordering::Greater };
        }
    }
    a.len().cmp(&b.len())
}

/// Members with ray indices up to `bound`, built from the raw description.
fn members(f: &Condition, bound: u64) -> BTreeSet<Node> {
    let mut out: BTreeSet<Node> = f.limits().iter().chain(f.explicit()).cloned().collect();
    for r in f.rays() {
        for k in r.index_from..=bound {
            let mut v = r.limit.entries().to_vec();
            v.push(k);
            v.extend(&r.suffix);
            out.insert(node(v));
        }
    }
    out
}

/// Pairwise orthogonality straight from the topology: some point is
/// isolated in one condition and an accumulation point of the other.
fn blocked(f: &Condition, g: &Condition) -> bool {
    let isolated_in = |a: &Condition, t: &Node| a.member(t) && !a.is_limit(t);
    g.d_set().iter().any(|t| isolated_in(f, t)) || f.d_set().iter().any(|t| isolated_in(g, t))
}

// 1
fn order_laws() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..10_000 {
        let v: Vec<Vec<u64>> = (0..3).map(|_| random_entries(&mut rng, 8, 32)).collect();
        let n: Vec<Node> = v.iter().cloned().map(node).collect();
        for a in 0..3 {
            for b in 0..3 {
                let c = lin_cmp(&n[a], &n[b]);
                check(c == reference_cmp(&v[a], &v[b]), || format!("{} vs {}", n[a], n[b]))?;
                check(c == lin_cmp(&n[b], &n[a]).reverse(), || {
                    format!("antisymmetry {} {}", n[a], n[b])
                })?;
                check((c == Ordering::Equal) == (n[a] == n[b]), || {
                    format!("totality {} {}", n[a], n[b])
                })?;
            }
        }
        for p in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
            let (x, y, z) = (&n[p[0]], &n[p[1]], &n[p[2]]);
            if lin_cmp(x, y).is_le() && lin_cmp(y, z).is_le() {
                check(lin_cmp(x, z).is_le(), || format!("transitivity {x} {y} {z}"))?;
            }
        }
    }
    for _ in 0..1_000 {
        let s = Node::new(random_entries(&mut rng, 8, 32).split_off(1)).map_or(Stem::Root, Stem::Node);
        let k = rng.gen_range(0..31);
        let (a, b) = (
            succ(&s, k, &Caps::UNBOUNDED).unwrap(),
            succ(&s, k + 1, &Caps::UNBOUNDED).unwrap(),
        );
        check(lin_cmp(&b, &a) == Ordering::Less, || format!("siblings {a} {b}"))?;
    }
    Ok("10000 triples, 1000 sibling pairs".into())
}

// 2
fn interval_equivalence() -> Verdict {
    let nodes = enumerate_nodes(4, 6);
    let mut triples = 0u64;
    for s in &nodes {
        for k in 0..=6 {
            for t in &nodes {
                triples += 1;
                check(interval_contains(s, k, t) == interval_contains_by_cmp(s, k, t), || {
                    format!("mismatch at ({s}, {k}, {t})")
                })?;
            }
        }
    }
    Ok(format!("{} nodes, {triples} triples", nodes.len()))
}

// 3
fn topology_oracle() -> Verdict {
    let family = corpus(&params(3, 4, 4), 3_000, 1_000);
    for f in &family {
        let pts = members(f, PROBE + 5);
        let probed: BTreeSet<Node> = pts
            .iter()
            .filter(|t| (0..=PROBE).all(|k| pts.iter().any(|u| u != *t && interval_contains_by_cmp(t, k, u))))
            .cloned()
            .collect();
        let d: BTreeSet<Node> = f.d_set().iter().cloned().collect();
        check(d == probed, || format!("{f}: d_set {d:?} vs probed {probed:?}"))?;
    }
    Ok("1000 conditions, probe bound 20".into())
}

/// Extension chains with branches, closed under unions of compatible
/// members.
fn closed_corpus(seed: u64) -> Vec<Condition> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = random_condition(&params(2, 3, 3), seed).unwrap();
    let mut out = vec![base];
    for _ in 0..8 {
        let from = out.choose(&mut rng).unwrap().clone();
        out.push(random_extension(&from, &mut rng, 3, 4));
    }
    for i in 0..out.len() {
        for j in i + 1..out.len() {
            if compatible(&out[i], &out[j]) {
                let u = out[i].union(&out[j]);
                if !out.contains(&u) {
                    out.push(u);
                }
            }
        }
    }
    out
}

// 4
fn extension_laws() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let corpora: Vec<Vec<Condition>> = (0..100).map(closed_corpus).collect();
    // above[c][i]: members of corpus c extending member i
    let above: Vec<Vec<Vec<usize>>> = corpora
        .iter()
        .map(|c| {
            (0..c.len())
                .map(|i| (0..c.len()).filter(|&j| extends(&c[j], &c[i])).collect())
                .collect()
        })
        .collect();
    let mut proper = 0;
    for _ in 0..10_000 {
        let n = rng.gen_range(0..corpora.len());
        let c = &corpora[n];
        let a = rng.gen_range(0..c.len());
        check(above[n][a].contains(&a), || format!("reflexivity {}", c[a]))?;
        let b = *above[n][a].choose(&mut rng).unwrap();
        let d = *above[n][b].choose(&mut rng).unwrap();
        proper += (a != b && b != d) as usize;
        check(extends(&c[d], &c[a]), || {
            format!("transitivity {} <= {} <= {}", c[a], c[b], c[d])
        })?;
    }
    check(proper > 1_000, || format!("only {proper} proper chains sampled"))?;
    let sizes: usize = corpora.iter().map(Vec::len).sum();
    Ok(format!(
        "10000 sampled chains ({proper} proper) in 100 closed corpora of {sizes} conditions"
    ))
}

// 5
fn compatibility_contract() -> Verdict {
    let p = params(2, 3, 3);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut compat = 0;
    for i in 0..10_000u64 {
        let f = random_condition(&p, 50_000 + 2 * i).unwrap();
        let g = if i % 2 == 0 {
            random_condition(&p, 50_001 + 2 * i).unwrap()
        } else {
            random_extension(&f, &mut rng, 3, 3)
        };
        let u = f.union(&g);
        let c = compatible(&f, &g);
        compat += c as usize;
        check(c == (extends(&u, &f) && extends(&u, &g)), || format!("{f} / {g}"))?;
    }
    let mut ortho = 0;
    let mut seed = 90_000;
    while ortho < 1_000 {
        let (f, g) = (
            random_condition(&p, seed).unwrap(),
            random_condition(&p, seed + 1).unwrap(),
        );
        seed += 2;
        let Some(w) = orthogonal(&f, &g) else { continue };
        ortho += 1;
        for _ in 0..1_000 {
            let f2 = random_extension(&f, &mut rng, 3, 4);
            let g2 = random_extension(&g, &mut rng, 3, 4);
            check(extends(&f2, &f) && extends(&g2, &g), || format!("sampler: {f2} / {g2}"))?;
            check(verify_witness(&f2, &g2, &w), || {
                format!("witness {} lost: {f2} / {g2}", w.point)
            })?;
        }
    }
    Ok(format!(
        "10000 pairs ({compat} compatible), {ortho} orthogonal pairs x 1000 extensions"
    ))
}

fn minimal_k(f: &Condition) -> u64 {
    let d = f.d_set();
    (0..)
        .find(|&k| !d.iter().any(|s| d.iter().any(|t| interval_contains_by_cmp(s, k, t))))
        .unwrap()
}

fn formula_r(f: &Condition, k: u64, bound: u64) -> BTreeSet<Node> {
    let d = f.d_set();
    members(f, bound)
        .into_iter()
        .filter(|t| !f.is_limit(t) && !d.iter().any(|s| interval_contains_by_cmp(s, k, t)))
        .collect()
}

// 6
fn partition() -> Verdict {
    let family = corpus(&params(4, 4, 3), 6_000, 1_000);
    let mut positive = 0;
    for f in &family {
        let k = k_of(f);
        let r: BTreeSet<Node> = r_set(f).into_iter().collect();
        let near = formula_r(f, minimal_k(f), PROBE);
        check(near == formula_r(f, minimal_k(f), PROBE + 10), || {
            format!("{f}: remainder not finite")
        })?;
        check(r == near, || format!("{f}: r_set {r:?} vs formula {near:?}"))?;
        let d = f.d_set();
        let separates = |k| !d.iter().any(|s| d.iter().any(|t| interval_contains_by_cmp(s, k, t)));
        check(separates(k), || format!("{f}: k={k} does not separate"))?;
        if k > 0 {
            positive += 1;
            check(!separates(k - 1), || format!("{f}: k={k} not minimal"))?;
        }
    }
    check(positive >= 50, || format!("only {positive} conditions with k > 0"))?;
    Ok(format!("1000 conditions, {positive} with k > 0"))
}

fn buckets(family: Vec<Condition>) -> BTreeMap<Signature, Vec<Condition>> {
    let mut out: BTreeMap<Signature, Vec<Condition>> = BTreeMap::new();
    for f in family {
        out.entry(signature(&f)).or_default().push(f);
    }
    out
}

// 7
fn coverage() -> Verdict {
    let pool = buckets(corpus(&params(2, 3, 3), 100_000, 6_000));
    let classes: Vec<&Vec<Condition>> = pool.values().filter(|b| b.len() > 1).collect();
    let weights: Vec<usize> = classes.iter().map(|b| b.len() * b.len()).collect();
    let dist = rand::distributions::WeightedIndex::new(&weights).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut seen, mut tries, mut used) = (0, 0, BTreeSet::new());
    while seen < 10_000 {
        tries += 1;
        check(tries < 2_000_000, || format!("only {seen} orthogonal pairs found"))?;
        let c = rng.sample(&dist);
        let (i, j) = (rng.gen_range(0..classes[c].len()), rng.gen_range(0..classes[c].len()));
        let (f, g) = (&classes[c][i], &classes[c][j]);
        if i == j || orthogonal(f, g).is_none() {
            continue;
        }
        used.insert(c);
        seen += 1;
        let colors = color_pair(f, g).map_err(|e| e.to_string())?;
        check(!colors.is_empty(), || format!("uncolored orthogonal pair {f} / {g}"))?;
    }
    Ok(format!("10000 orthogonal pairs from {} signature classes", used.len()))
}

/// Largest subfamily whose pairs `i < j` all have `color`, by exhaustive
/// search.
fn brute_homogeneous(colors: &BTreeMap<(usize, usize), BTreeSet<Color>>, n: usize, color: &Color) -> usize {
    fn grow(chosen: &mut Vec<usize>, next: usize, n: usize, ok: &dyn Fn(usize, usize) -> bool, best: &mut usize) {
        *best = (*best).max(chosen.len());
        for v in next..n {
            if chosen.iter().all(|&u| ok(u, v)) {
                chosen.push(v);
                grow(chosen, v + 1, n, ok, best);
                chosen.pop();
            }
        }
    }
    let ok = |i: usize, j: usize| colors[&(i, j)].contains(color);
    let mut best = 0;
    grow(&mut Vec::new(), 0, n, &ok, &mut best);
    best
}

fn pair_colors(family: &[Condition]) -> Result<BTreeMap<(usize, usize), BTreeSet<Color>>, String> {
    let mut out = BTreeMap::new();
    for i in 0..family.len() {
        for j in i + 1..family.len() {
            out.insert((i, j), color_pair(&family[i], &family[j]).map_err(|e| e.to_string())?);
        }
    }
    Ok(out)
}

// 8
fn homogeneity() -> Verdict {
    let mut families: Vec<Vec<Condition>> = Vec::new();
    for (i, (p, from)) in [
        (params(2, 3, 3), 100_000),
        (params(3, 4, 3), 200_000),
        (params(2, 4, 4), 300_000),
    ]
    .into_iter()
    .enumerate()
    {
        for b in buckets(corpus(&p, from, 3_000)).into_values() {
            families.extend(b.chunks(40 + 10 * i).map(|c| c.to_vec()));
        }
    }
    for a in 2..=10 {
        families.push(ladder(&Stem::Root, a, &Caps::default()).unwrap());
    }
    let mut triples = 0u64;
    for fam in &families {
        let colors = pair_colors(fam)?;
        let n = fam.len();
        for i in 0..n {
            for j in i + 1..n {
                let ij: Vec<&Color> = colors[&(i, j)]
                    .iter()
                    .filter(|c| c.family == 2 || c.family == 4)
                    .collect();
                for l in j + 1..n {
                    triples += 1;
                    if let Some(c) = ij
                        .iter()
                        .find(|c| colors[&(i, l)].contains(c) && colors[&(j, l)].contains(c))
                    {
                        return Err(format!("{c}-homogeneous triple {} / {} / {}", fam[i], fam[j], fam[l]));
                    }
                }
            }
        }
    }

    // height-4 universes, chunks small enough for exhaustive search
    let (mut largest, mut searched) = (0, 0);
    let universe = [params(3, 4, 3), params(4, 4, 2), params(2, 4, 4)];
    for (u, p) in universe.iter().enumerate() {
        for b in buckets(corpus(p, 400_000 + 10_000 * u as u64, 4_000)).into_values() {
            for chunk in b.chunks(20) {
                check(chunk.iter().all(|f| f.height() <= 4), || {
                    "universe exceeds height 4".into()
                })?;
                let colors = pair_colors(chunk)?;
                let family_one: BTreeSet<Color> =
                    colors.values().flatten().filter(|c| c.family == 1).cloned().collect();
                for c in family_one {
                    searched += 1;
                    let size = brute_homogeneous(&colors, chunk.len(), &c);
                    let lib = max_homogeneous(chunk, c).map_err(|e| e.to_string())?;
                    check(lib.exact && lib.members.len() == size, || {
                        format!("max_homogeneous {} vs exhaustive {size} for {c}", lib.members.len())
                    })?;
                    largest = largest.max(size);
                    check(size <= 5, || format!("{c}-homogeneous family of size {size}"))?;
                }
            }
        }
    }
    Ok(format!(
        "{triples} triples over {} families; largest (1,.,.)-homogeneous {largest} over {searched} searches",
        families.len()
    ))
}

fn exhaustive_antichain(family: &[Condition]) -> usize {
    let n = family.len();
    let mut ortho = vec![0u32; n];
    for i in 0..n {
        for j in 0..n {
            if i != j && blocked(&family[i], &family[j]) {
                ortho[i] |= 1 << j;
            }
        }
    }
    let mut ok = vec![false; 1 << n];
    ok[0] = true;
    let mut best = 0;
    for mask in 1u32..1 << n {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        ok[mask as usize] = ok[rest as usize] && rest & !ortho[low] == 0;
        if ok[mask as usize] {
            best = best.max(mask.count_ones() as usize);
        }
    }
    best
}

// 9
fn antichain_search() -> Verdict {
    let mut sizes = BTreeMap::new();
    for t in 0..50u64 {
        let p = params(1 + (t % 3) as usize, 3, 3);
        let family = corpus(&p, 500_000 + 100 * t, 20);
        let want = exhaustive_antichain(&family);
        let got = max_antichain(&family, DEFAULT_BUDGET);
        check(got.exact && got.size() == want, || {
            format!("family {t}: search {} vs exhaustive {want}", got.size())
        })?;
        let chosen: Vec<Condition> = got.members.iter().map(|&i| family[i].clone()).collect();
        check(is_antichain(&chosen).is_antichain, || {
            format!("family {t}: result is not an antichain")
        })?;
        *sizes.entry(want).or_insert(0) += 1;
    }
    for a in 2..=12 {
        let lad = ladder(&Stem::Root, a, &Caps::default()).unwrap();
        let c = is_antichain(&lad);
        check(c.is_antichain && c.size == a as usize, || format!("ladder {a}"))?;
        check(
            c.pairs
                .iter()
                .all(|p| verify_witness(&lad[p.i], &lad[p.j], p.witness.as_ref().unwrap())),
            || format!("ladder {a}: witness"),
        )?;
        let m = max_antichain(&lad, DEFAULT_BUDGET);
        check(m.exact && m.size() == a as usize, || {
            format!("ladder {a}: search found {}", m.size())
        })?;
    }
    Ok(format!("50 families of 20 (maximum sizes {sizes:?}), ladders 2..=12"))
}

fn tcc(args: &[&str]) -> Output {
    Command::new(TCC).args(args).output().unwrap()
}

/// Re-checks a reported violation with nothing but the text: parse the
/// members, test orthogonality from the topology, reclassify with a fresh
/// oracle.
fn reverify_text(text: &str, kind: &BuiltinKind, bounds: &[usize]) -> Result<(), String> {
    let header = text.lines().next().unwrap_or("");
    let field = |name: &str| -> usize {
        header
            .split(' ')
            .find_map(|w| w.strip_prefix(name))
            .and_then(|v| v.parse().ok())
            .unwrap()
    };
    let (class, bound, size) = (field("class="), field("bound="), field("size="));
    let family: Vec<Condition> = text
        .lines()
        .filter_map(|l| l.strip_prefix("member "))
        .map(|l| l.split_once(' ').unwrap().1.parse().unwrap())
        .collect();
    check(family.len() == size && size >= bound && bounds[class] == bound, || {
        format!("header {header}")
    })?;
    for i in 0..size {
        for j in i + 1..size {
            check(blocked(&family[i], &family[j]), || {
                format!("members {i} and {j} are compatible")
            })?;
        }
    }
    let mut fresh = BuiltinOracle::new(kind.clone(), bounds.to_vec()).unwrap();
    for f in &family {
        check(fresh.classify(f).unwrap() == class, || {
            format!("{f} is not in class {class}")
        })?;
    }
    Ok(())
}

fn timed_refute(kind: BuiltinKind, bounds: &[usize], limit: Duration) -> Result<(RefutationReport, Duration), String> {
    let mut o = BuiltinOracle::new(kind.clone(), bounds.to_vec()).unwrap();
    let start = Instant::now();
    let report = {
        let mut checked = CheckedOracle::new(&mut o).unwrap();
        refute(&mut checked, &RefuterConfig::default()).map_err(|e| e.to_string())?
    };
    let took = start.elapsed();
    check(took < limit, || format!("{} took {took:?}", kind.name()))?;
    let Outcome::Violation { class, bound, members } = &report.outcome else {
        return Err(format!(
            "{}: {}",
            kind.name(),
            report.to_string().lines().next().unwrap()
        ));
    };
    let mut fresh = BuiltinOracle::new(kind.clone(), bounds.to_vec()).unwrap();
    let mut fresh = CheckedOracle::new(&mut fresh).unwrap();
    check(verify_violation(&mut fresh, *class, *bound, members).unwrap(), || {
        "verify_violation failed".into()
    })?;
    reverify_text(&report.to_string(), &kind, bounds)?;
    Ok((report, took))
}

// 10
fn refuter() -> Verdict {
    let (a, ta) = timed_refute(BuiltinKind::Constant, &[6], Duration::from_secs(10))?;
    check(a.to_string().starts_with("VIOLATION class=0 bound=6 size=6\n"), || {
        a.to_string()
    })?;
    let (b, tb) = timed_refute(BuiltinKind::SigM, &[4, 4], Duration::from_secs(120))?;

    let inproc = tcc(&["refute", "--oracle", "builtin:sig-m", "--bounds", "4,4"]);
    let exec = format!("exec:{ORACLE}");
    let external = tcc(&[
        "refute",
        "--oracle",
        &exec,
        "--oracle-arg",
        "sig-m",
        "--oracle-arg",
        "4,4",
    ]);
    check(
        inproc.status.code() == Some(0) && external.status.code() == Some(0),
        || "refute exit codes".into(),
    )?;
    check(inproc.stdout == external.stdout, || {
        "exec report differs from builtin".into()
    })?;
    check(inproc.stdout == b.to_string().into_bytes(), || {
        "CLI report differs from library".into()
    })?;

    // further runs where the diagonal rounds do the work
    let mut extra = 0;
    for (name, kind, bounds) in [
        ("sig-m", BuiltinKind::SigM, "4,4"),
        ("sig-k", BuiltinKind::SigK, "3,5"),
        ("sig-sum", BuiltinKind::SigSum, "2,3,4"),
        ("constant", BuiltinKind::Constant, "6"),
    ] {
        let spec = format!("builtin:{name}");
        let o = tcc(&[
            "refute",
            "--oracle",
            &spec,
            "--bounds",
            bounds,
            "--ladder-max",
            "0",
            "--random-count",
            "0",
        ]);
        check(o.status.code() == Some(0), || {
            format!("{name}: exit {:?}", o.status.code())
        })?;
        let b: Vec<usize> = bounds.split(',').map(|x| x.parse().unwrap()).collect();
        reverify_text(&String::from_utf8(o.stdout).unwrap(), &kind, &b)?;
        extra += 1;
    }
    Ok(format!(
        "constant/6 in {ta:.2?}, sig-m/(4,4) in {tb:.2?} ({} rounds), exec report identical, {} violations re-verified",
        b.rounds,
        2 + extra
    ))
}

// 11
fn determinism() -> Verdict {
    let dir = std::env::temp_dir().join(format!("tcc-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let random = dir.join("random.txt");
    let lad = dir.join("ladder.txt");
    let pair = dir.join("pair.txt");
    std::fs::write(
        &random,
        tcc(&["gen", "--kind", "random", "--count", "40", "--seed", "11"]).stdout,
    )
    .unwrap();
    std::fs::write(&lad, tcc(&["gen", "--kind", "ladder", "--size", "6"]).stdout).unwrap();
    let two: String = String::from_utf8(tcc(&["gen", "--kind", "ladder", "--size", "2"]).stdout).unwrap();
    std::fs::write(&pair, two).unwrap();
    let (r, l, p) = (random.to_str().unwrap(), lad.to_str().unwrap(), pair.to_str().unwrap());
    let exec = format!("exec:{ORACLE}");
    let runs: Vec<Vec<&str>> = vec![
        vec!["gen", "--kind", "random", "--count", "40", "--seed", "11"],
        vec!["gen", "--kind", "ladder", "--size", "7", "--stem", "1.2"],
        vec!["validate", r],
        vec!["compat", p],
        vec!["classify", r],
        vec!["color", l],
        vec!["antichain", r],
        vec!["antichain", "--budget", "10", r],
        vec![
            "refute",
            "--oracle",
            "builtin:random:5",
            "--bounds",
            "3,3",
            "--seed",
            "9",
        ],
        vec![
            "refute",
            "--oracle",
            "builtin:sig-k",
            "--bounds",
            "3,5",
            "--max-rounds",
            "2",
            "--ladder-max",
            "0",
        ],
        vec![
            "refute",
            "--oracle",
            &exec,
            "--oracle-arg",
            "sig-sum",
            "--oracle-arg",
            "2,3,4",
        ],
    ];
    for args in &runs {
        let (a, b) = (tcc(args), tcc(args));
        check(a.stdout == b.stdout && a.status.code() == b.status.code(), || {
            format!("tcc {} differs between runs", args.join(" "))
        })?;
        check(!a.stdout.is_empty(), || {
            format!("tcc {} printed nothing", args.join(" "))
        })?;
    }
    std::fs::remove_dir_all(&dir).ok();
    Ok(format!("{} commands run twice", runs.len()))
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("order laws", order_laws),
        ("interval forms agree", interval_equivalence),
        ("accumulation points match probing", topology_oracle),
        ("extension is a preorder", extension_laws),
        ("compatibility and blocking witnesses", compatibility_contract),
        ("remainder formula and minimal k", partition),
        ("coloring coverage", coverage),
        ("homogeneity bounds", homogeneity),
        ("maximum antichain search", antichain_search),
    ];
    let started = Instant::now();
    let mut results: Vec<(usize, &str, Verdict, Duration)> = std::thread::scope(|scope| {
        let handles: Vec<_> = criteria
            .iter()
            .enumerate()
            .map(|(i, &(name, run))| {
                scope.spawn(move || {
                    let t = Instant::now();
                    (i + 1, name, run(), t.elapsed())
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    // timed criteria run alone
    for (i, name, run) in [
        (10, "refuter end to end", refuter as fn() -> Verdict),
        (11, "determinism", determinism),
    ] {
        let t = Instant::now();
        results.push((i, name, run(), t.elapsed()));
    }

    let mut failed = 0;
    for (i, name, verdict, took) in &results {
        match verdict {
            Ok(detail) => println!("criterion {i:>2} PASS  {name}: {detail} [{took:.1?}]"),
            Err(why) => {
                failed += 1;
                println!("criterion {i:>2} FAIL  {name}: {why} [{took:.1?}]");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed in {:.1?}",
        results.len() - failed,
        started.elapsed()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
