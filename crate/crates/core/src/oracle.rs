//! Ground truth for small graphs and a fallback for graphs outside the
//! construction's reach.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::labelling::Labelling;
use crate::verify::verify_antimagic;

pub const EXHAUSTIVE_LIMIT: usize = 9;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExhaustiveOutcome {
    Found(Labelling),
    /// Every bijection was tried and each had a repeated sum.
    ProvenNone,
}

fn sums_distinct(g: &Graph, labels: &[usize], sums: &mut [u64]) -> bool {
    sums.iter_mut().for_each(|s| *s = 0);
    for (e, &(a, b)) in g.edges().iter().enumerate() {
        sums[a] += labels[e] as u64;
        sums[b] += labels[e] as u64;
    }
    let mut sorted = sums.to_vec();
    sorted.sort_unstable();
    sorted.windows(2).all(|w| w[0] != w[1])
}

/// Tries every bijection onto `1..=m` (Heap's algorithm).
pub fn exhaustive_search(g: &Graph) -> Result<ExhaustiveOutcome> {
    let m = g.edge_count();
    if m > EXHAUSTIVE_LIMIT {
        return Err(Error::TooLarge {
            m,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    let mut labels: Vec<usize> = (1..=m).collect();
    let mut sums = vec![0u64; g.vertex_count()];
    let found = |labels: &[usize]| {
        let l = Labelling::from_labels(g, labels.to_vec());
        debug_assert!(verify_antimagic(g, &l).is_antimagic());
        Ok(ExhaustiveOutcome::Found(l))
    };
    if sums_distinct(g, &labels, &mut sums) {
        return found(&labels);
    }
    let mut c = vec![0usize; m];
    let mut i = 0;
    while i < m {
        if c[i] < i {
            if i % 2 == 0 {
                labels.swap(0, i);
            } else {
                labels.swap(c[i], i);
            }
            if sums_distinct(g, &labels, &mut sums) {
                return found(&labels);
            }
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(ExhaustiveOutcome::ProvenNone)
}

/// Number of vertices that share their sum with an earlier vertex.
struct Clashes {
    count: HashMap<u64, u32>,
    excess: u64,
}

impl Clashes {
    fn new(sums: &[u64]) -> Self {
        let mut c = Clashes {
            count: HashMap::new(),
            excess: 0,
        };
        for &s in sums {
            c.add(s);
        }
        c
    }

    fn add(&mut self, s: u64) {
        let k = self.count.entry(s).or_insert(0);
        if *k > 0 {
            self.excess += 1;
        }
        *k += 1;
    }

    fn remove(&mut self, s: u64) {
        let k = self.count.get_mut(&s).expect("sum tracked");
        *k -= 1;
        if *k > 0 {
            self.excess -= 1;
        }
    }

    fn clashing(&self, s: u64) -> bool {
        self.count.get(&s).is_some_and(|&k| k > 1)
    }
}

/// Hill climbing over label transpositions, restarting from a fresh
/// shuffle whenever progress stalls. Deterministic in `(g, budget, seed)`.
pub fn randomized_search(g: &Graph, budget: u64, seed: u64) -> Result<Labelling> {
    let n = g.vertex_count();
    let m = g.edge_count();
    if !g.has_antimagic_shape() {
        return Err(Error::SearchFailed { iterations: 0 });
    }
    if m == 0 {
        return Ok(Labelling::from_labels(g, Vec::new()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let patience = 50 * (m as u64) + 1000;
    let mut iterations = 0u64;
    while iterations < budget {
        let mut labels: Vec<usize> = (1..=m).collect();
        labels.shuffle(&mut rng);
        let mut l = Labelling::from_labels(g, labels);
        let mut clashes = Clashes::new(l.sums());
        let mut best = clashes.excess;
        let mut stale = 0u64;
        while iterations < budget && stale < patience {
            if clashes.excess == 0 {
                debug_assert!(verify_antimagic(g, &l).is_antimagic());
                return Ok(l);
            }
            iterations += 1;
            stale += 1;
            // One end of the move touches a clashing vertex.
            let bad: Vec<usize> = (0..n).filter(|&v| clashes.clashing(l.sum(v))).collect();
            let v = bad[rng.gen_range(0..bad.len())];
            let inc = g.incident_edges(v);
            let e = inc[rng.gen_range(0..inc.len())];
            let f = rng.gen_range(0..m);
            if e == f {
                continue;
            }
            let touched = {
                let (a, b) = g.endpoints(e);
                let (c, d) = g.endpoints(f);
                let mut t = vec![a, b, c, d];
                t.sort_unstable();
                t.dedup();
                t
            };
            let before = clashes.excess;
            for &x in &touched {
                clashes.remove(l.sum(x));
            }
            l.swap_edges(g, e, f);
            for &x in &touched {
                clashes.add(l.sum(x));
            }
            if clashes.excess > before {
                for &x in &touched {
                    clashes.remove(l.sum(x));
                }
                l.swap_edges(g, e, f);
                for &x in &touched {
                    clashes.add(l.sum(x));
                }
            } else if clashes.excess < best {
                best = clashes.excess;
                stale = 0;
            }
        }
        if clashes.excess == 0 {
            return Ok(l);
        }
    }
    Err(Error::SearchFailed { iterations })
}
