//! Seeded instances with maximum degree `n - 4` and at least `7n` edges,
//! aimed at a chosen regime.
//!
//! Layout: vertex 1 is the root, adjacent to every vertex of H; three
//! further vertices play `u1, u2, u3`. The triple's H-neighbourhoods and
//! the edges among the triple are drawn first. H starts complete, then
//! just enough H-H edges are removed to keep every degree at most `n - 4`,
//! then random H-H edges are dropped down to a sampled edge count. Vertex
//! ids other than the root are shuffled.
//!
//! Since every H vertex spends one edge on the root, H-H edges are capped
//! by the triple's demand, and small `n` cannot reach `7n` edges in some
//! regimes. [`min_vertices`] gives the exact threshold per regime.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::decompose::{classify_regime, decompose, Regime};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

/// Which kind of instance to generate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum RegimeTarget {
    /// Independent triple, every `d'(u_i) >= 4`.
    Main,
    /// As `Main`, with at least one edge inside the triple.
    MainTripleEdges,
    DegenI1,
    DegenI2,
    DegenI3,
    DiscU3Isolated,
    DiscTripleComponent,
    /// Some vertex of H sees all three `u_i`.
    CommonNeighbour,
}

impl RegimeTarget {
    pub const ALL: [RegimeTarget; 8] = [
        RegimeTarget::Main,
        RegimeTarget::MainTripleEdges,
        RegimeTarget::DegenI1,
        RegimeTarget::DegenI2,
        RegimeTarget::DegenI3,
        RegimeTarget::DiscU3Isolated,
        RegimeTarget::DiscTripleComponent,
        RegimeTarget::CommonNeighbour,
    ];

    /// The targets handled by a construction.
    pub const CONSTRUCTIVE: [RegimeTarget; 7] = [
        RegimeTarget::Main,
        RegimeTarget::DegenI1,
        RegimeTarget::DegenI2,
        RegimeTarget::DegenI3,
        RegimeTarget::MainTripleEdges,
        RegimeTarget::DiscU3Isolated,
        RegimeTarget::DiscTripleComponent,
    ];

    pub fn regime(self) -> Regime {
        match self {
            RegimeTarget::Main | RegimeTarget::MainTripleEdges => Regime::Main,
            RegimeTarget::DegenI1 => Regime::DegenI1,
            RegimeTarget::DegenI2 => Regime::DegenI2,
            RegimeTarget::DegenI3 => Regime::DegenI3,
            RegimeTarget::DiscU3Isolated => Regime::DiscU3Isolated,
            RegimeTarget::DiscTripleComponent => Regime::DiscTripleComponent,
            RegimeTarget::CommonNeighbour => Regime::CommonNeighbourFallback,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            RegimeTarget::Main => "main",
            RegimeTarget::MainTripleEdges => "main-triple",
            RegimeTarget::DegenI1 => "degen-i1",
            RegimeTarget::DegenI2 => "degen-i2",
            RegimeTarget::DegenI3 => "degen-i3",
            RegimeTarget::DiscU3Isolated => "disc-u3-isolated",
            RegimeTarget::DiscTripleComponent => "disc-triple-component",
            RegimeTarget::CommonNeighbour => "common-neighbour",
        }
    }

    /// Range of `d'` for each role, given `cap = n - 4`.
    fn ranges(self, cap: usize) -> [(usize, usize); 3] {
        let big = (4, cap);
        let small = (1, 3);
        match self {
            RegimeTarget::Main | RegimeTarget::MainTripleEdges => [big; 3],
            RegimeTarget::DegenI1 => [small; 3],
            RegimeTarget::DegenI2 => [big, small, small],
            RegimeTarget::DegenI3 => [big, big, small],
            RegimeTarget::DiscU3Isolated => [(1, cap), (1, cap), (0, 0)],
            RegimeTarget::DiscTripleComponent => [(0, 0); 3],
            RegimeTarget::CommonNeighbour => [(1, cap); 3],
        }
    }

    /// Admissible subsets of the triple edges, as bitmasks over
    /// `[bc, ac, ab]` (roles a, b, c).
    fn triple_masks(self) -> Vec<u8> {
        match self {
            RegimeTarget::Main => vec![0],
            RegimeTarget::MainTripleEdges => (1..8).collect(),
            RegimeTarget::DiscU3Isolated => vec![0, 0b100],
            RegimeTarget::DiscTripleComponent => vec![0b011, 0b101, 0b110, 0b111],
            _ => (0..8).collect(),
        }
    }

    /// Upper bound on the number of triple-to-H edges.
    fn u_cap(self, h: usize) -> usize {
        if self == RegimeTarget::CommonNeighbour {
            3 * h
        } else {
            2 * h
        }
    }
}

impl fmt::Display for RegimeTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RegimeTarget {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        RegimeTarget::ALL
            .iter()
            .copied()
            .find(|t| t.as_str() == key)
            .ok_or_else(|| format!("unknown regime target `{s}`"))
    }
}

const TRIPLE_PAIRS: [(usize, usize); 3] = [(1, 2), (0, 2), (0, 1)];

fn triple_degrees(mask: u8) -> [usize; 3] {
    let mut deg = [0; 3];
    for (bit, &(a, b)) in TRIPLE_PAIRS.iter().enumerate() {
        if mask & (1 << bit) != 0 {
            deg[a] += 1;
            deg[b] += 1;
        }
    }
    deg
}

/// Largest edge count reachable with `t` triple edges and `u` triple-to-H
/// edges: every H vertex keeps one slot for the root, and each triple-to-H
/// edge costs half an H-H edge.
fn max_edges(h: usize, t: usize, u: usize) -> usize {
    h + t + u + (h * (h - 1) - u) / 2
}

/// Per-role `d'` ranges under `mask`, or `None` if some range is empty.
fn role_ranges(target: RegimeTarget, h: usize, mask: u8) -> Option<[(usize, usize); 3]> {
    let deg = triple_degrees(mask);
    let mut out = target.ranges(h);
    for i in 0..3 {
        out[i].1 = out[i].1.min(h - deg[i]);
        if out[i].0 > out[i].1 {
            return None;
        }
    }
    Some(out)
}

fn feasible(n: usize, target: RegimeTarget) -> bool {
    if n < 16 {
        return false;
    }
    let h = n - 4;
    target.triple_masks().into_iter().any(|mask| {
        role_ranges(target, h, mask).is_some_and(|r| {
            let lo: usize = r.iter().map(|x| x.0).sum();
            let hi = r.iter().map(|x| x.1).sum::<usize>().min(target.u_cap(h));
            lo <= hi && max_edges(h, mask.count_ones() as usize, hi) >= 7 * n
        })
    })
}

/// Smallest `n` for which `target` admits an instance with `m >= 7n`.
pub fn min_vertices(target: RegimeTarget) -> usize {
    (16..)
        .find(|&n| feasible(n, target))
        .expect("dense enough for large n")
}

const ATTEMPTS: usize = 200;

/// A graph on `n` vertices that decomposes and classifies as `target`.
pub fn gen_instance(n: usize, target: RegimeTarget, seed: u64) -> Result<Graph> {
    if n < 16 {
        return Err(Error::InfeasibleRegime(format!(
            "n = {n}: m >= 7n with maximum degree n-4 forces n >= 16"
        )));
    }
    if !feasible(n, target) {
        return Err(Error::InfeasibleRegime(format!(
            "{target} needs n >= {} to reach 7n edges, got n = {n}",
            min_vertices(target)
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..ATTEMPTS {
        if let Some(g) = attempt(n, target, &mut rng) {
            return Ok(g);
        }
    }
    Err(Error::GenerationFailed(ATTEMPTS))
}

fn attempt(n: usize, target: RegimeTarget, rng: &mut ChaCha8Rng) -> Option<Graph> {
    let h = n - 4;
    let need = 7 * n;
    let masks = target.triple_masks();
    let mask = *masks.choose(rng)?;
    let ranges = role_ranges(target, h, mask)?;
    let t = mask.count_ones() as usize;
    let dp = ranges.map(|(lo, hi)| rng.gen_range(lo..=hi));
    let total: usize = dp.iter().sum();
    if total > target.u_cap(h) || max_edges(h, t, total) < need {
        return None;
    }

    // Internal layout: 0 = root, 1..=h = H, h+1.. = roles a, b, c.
    let hs: Vec<Vertex> = (1..=h).collect();
    let role = |i: usize| h + 1 + i;
    let mut perm = hs.clone();
    perm.shuffle(rng);
    let mut nbrs: [Vec<Vertex>; 3] = Default::default();
    if target == RegimeTarget::CommonNeighbour {
        for i in 0..3 {
            nbrs[i] = perm[..dp[i]].to_vec();
        }
    } else {
        nbrs[0] = perm[..dp[0]].to_vec();
        nbrs[1] = perm[h - dp[1]..].to_vec();
        let both: Vec<Vertex> = nbrs[0]
            .iter()
            .copied()
            .filter(|v| nbrs[1].contains(v))
            .collect();
        let mut rest: Vec<Vertex> = hs.iter().copied().filter(|v| !both.contains(v)).collect();
        if rest.len() < dp[2] {
            return None;
        }
        rest.shuffle(rng);
        nbrs[2] = rest[..dp[2]].to_vec();
    }

    let mut demand = vec![0usize; h + 1];
    for list in &nbrs {
        for &v in list {
            demand[v] += 1;
        }
    }
    if demand.iter().sum::<usize>() % 2 == 1 {
        let pick = *hs.choose(rng)?;
        demand[pick] += 1;
    }
    let removed = removal_graph(&demand, rng)?;

    let mut hh: Vec<(Vertex, Vertex)> = Vec::new();
    for a in 1..=h {
        for b in a + 1..=h {
            if !removed.contains(&(a, b)) {
                hh.push((a, b));
            }
        }
    }
    let fixed = h + t + total;
    let current = fixed + hh.len();
    if current < need {
        return None;
    }
    let target_m = rng.gen_range(need..=current);
    hh.shuffle(rng);
    hh.truncate(target_m - fixed);

    let mut edges: Vec<(Vertex, Vertex)> = (1..=h).map(|v| (0, v)).collect();
    for (i, list) in nbrs.iter().enumerate() {
        edges.extend(list.iter().map(|&v| (role(i), v)));
    }
    for (bit, &(a, b)) in TRIPLE_PAIRS.iter().enumerate() {
        if mask & (1 << bit) != 0 {
            edges.push((role(a), role(b)));
        }
    }
    edges.extend(hh);

    let mut relabel: Vec<Vertex> = (1..n).collect();
    relabel.shuffle(rng);
    let map = |v: Vertex| if v == 0 { 0 } else { relabel[v - 1] };
    let mut edges: Vec<(Vertex, Vertex)> = edges
        .into_iter()
        .map(|(a, b)| {
            let (a, b) = (map(a), map(b));
            if rng.gen_bool(0.5) {
                (a, b)
            } else {
                (b, a)
            }
        })
        .collect();
    edges.shuffle(rng);
    let g = Graph::from_edges(n, edges).ok()?;
    let d = decompose(&g).ok()?;
    let fits = classify_regime(&g, &d) == target.regime()
        && (target != RegimeTarget::MainTripleEdges || !d.triple_edges.is_empty());
    fits.then_some(g)
}

/// A simple graph on H in which vertex `v` has degree exactly `demand[v]`,
/// built greedily (largest remaining demand first). Pairs are `(a, b)`
/// with `a < b`.
fn removal_graph(demand: &[usize], rng: &mut ChaCha8Rng) -> Option<Vec<(Vertex, Vertex)>> {
    let mut left = demand.to_vec();
    let mut out = Vec::new();
    let mut order: Vec<Vertex> = (1..left.len()).collect();
    loop {
        order.shuffle(rng);
        order.sort_by_key(|&v| std::cmp::Reverse(left[v]));
        let v = order[0];
        if left[v] == 0 {
            return Some(out);
        }
        let k = left[v];
        left[v] = 0;
        let partners: Vec<Vertex> = order[1..]
            .iter()
            .copied()
            .filter(|&x| left[x] > 0 && !out.contains(&(v.min(x), v.max(x))))
            .take(k)
            .collect();
        if partners.len() < k {
            return None;
        }
        for x in partners {
            left[x] -= 1;
            out.push((v.min(x), v.max(x)));
        }
    }
}

/// An instance for `target` with `n` drawn from `n_range` (clipped to what
/// the regime can reach), seeded by `seed`. Returns `(n, graph)`.
pub fn gen_sampled(
    target: RegimeTarget,
    n_range: (usize, usize),
    seed: u64,
) -> Result<(usize, Graph)> {
    let lo = n_range.0.max(min_vertices(target));
    let hi = n_range.1;
    if lo > hi {
        return Err(Error::InfeasibleRegime(format!(
            "{target} needs n >= {lo}, range ends at {hi}"
        )));
    }
    let n = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15).gen_range(lo..=hi);
    Ok((n, gen_instance(n, target, seed)?))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusEntry {
    pub target: RegimeTarget,
    pub n: usize,
    pub seed: u64,
    pub graph: Graph,
}

/// `count` instances cycling through `regimes`; instance `i` uses seed
/// `seed + i`.
pub fn gen_corpus(
    count: usize,
    n_range: (usize, usize),
    regimes: &[RegimeTarget],
    seed: u64,
) -> Result<Vec<CorpusEntry>> {
    if regimes.is_empty() {
        return Ok(Vec::new());
    }
    (0..count)
        .map(|i| {
            let target = regimes[i % regimes.len()];
            let s = seed.wrapping_add(i as u64);
            let (n, graph) = gen_sampled(target, n_range, s)?;
            Ok(CorpusEntry {
                target,
                n,
                seed: s,
                graph,
            })
        })
        .collect()
}

/// A random graph on `n` vertices in which vertex 1 is adjacent to all
/// others; the remaining pairs appear with a seeded random density.
pub fn gen_universal(n: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p: f64 = rng.gen_range(0.0..=1.0);
    let mut edges: Vec<(Vertex, Vertex)> = (1..n).map(|v| (0, v)).collect();
    for a in 1..n {
        for b in a + 1..n {
            if rng.gen_bool(p) {
                edges.push((a, b));
            }
        }
    }
    edges.shuffle(&mut rng);
    Graph::from_edges(n, edges).expect("simple by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decompose::InstanceDecomposition;

    fn check(g: &Graph, target: RegimeTarget) -> InstanceDecomposition {
        let n = g.vertex_count();
        assert_eq!(g.max_degree(), n - 4);
        assert!(g.edge_count() >= 7 * n);
        let d = decompose(g).unwrap();
        assert_eq!(classify_regime(g, &d), target.regime());
        for i in 0..2 {
            assert!(g.degree(d.u[i]) >= g.degree(d.u[i + 1]));
        }
        d
    }

    #[test]
    fn thresholds() {
        let got: Vec<usize> = RegimeTarget::ALL.iter().map(|&t| min_vertices(t)).collect();
        assert_eq!(got, vec![19, 19, 20, 20, 19, 19, 21, 18]);
    }

    #[test]
    fn every_target_is_generated() {
        for target in RegimeTarget::ALL {
            for seed in 1..=5 {
                let n = min_vertices(target) + seed as usize;
                let g = gen_instance(n, target, seed).unwrap();
                let d = check(&g, target);
                if target == RegimeTarget::MainTripleEdges {
                    assert!(!d.triple_edges.is_empty());
                }
            }
        }
    }

    #[test]
    fn rejects_small_n() {
        for target in RegimeTarget::ALL {
            for n in [8, 12, 15] {
                assert!(matches!(
                    gen_instance(n, target, 1),
                    Err(Error::InfeasibleRegime(_))
                ));
            }
        }
        // m >= 7n is out of reach for MAIN at n = 16.
        assert!(matches!(
            gen_instance(16, RegimeTarget::Main, 7),
            Err(Error::InfeasibleRegime(_))
        ));
    }

    #[test]
    fn main_at_threshold() {
        let g = gen_instance(19, RegimeTarget::Main, 7).unwrap();
        check(&g, RegimeTarget::Main);
        assert!(g.edge_count() >= 133);
    }

    #[test]
    fn degen_i3_degrees() {
        let g = gen_instance(20, RegimeTarget::DegenI3, 1).unwrap();
        let d = check(&g, RegimeTarget::DegenI3);
        assert!(d.d_prime[2] <= 3 && d.d_prime[1] >= 4);
    }

    #[test]
    fn corpus_is_round_robin_and_deterministic() {
        let regimes = RegimeTarget::CONSTRUCTIVE;
        let a = gen_corpus(14, (16, 30), &regimes, 1).unwrap();
        let b = gen_corpus(14, (16, 30), &regimes, 1).unwrap();
        assert_eq!(a, b);
        for t in regimes {
            assert_eq!(a.iter().filter(|e| e.target == t).count(), 2);
        }
        for e in &a {
            assert!(e.n >= min_vertices(e.target) && e.n <= 30);
            assert!(e.graph.edge_count() >= 7 * e.n);
        }
    }

    #[test]
    fn target_names_parse() {
        for t in RegimeTarget::ALL {
            assert_eq!(t.as_str().parse::<RegimeTarget>().unwrap(), t);
        }
        assert_eq!(
            "DEGEN_I2".parse::<RegimeTarget>().unwrap(),
            RegimeTarget::DegenI2
        );
    }

    #[test]
    fn universal_graphs() {
        for n in 3..=9 {
            let g = gen_universal(n, n as u64);
            assert_eq!(g.degree(0), n - 1);
        }
    }
}
