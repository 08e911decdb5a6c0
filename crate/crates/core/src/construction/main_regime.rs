use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::colouring::{balance_classes, koenig_colour, order_classes_for_vertex, vizing_colour};
use crate::decompose::{InstanceDecomposition, Regime};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph};
use crate::labelling::PartialLabelling;

use super::{
    assemble, label_root_edges, label_triple_edges, proof_violation, Interval, StageOneResult,
    StageVariant,
};

/// The bipartite part coloured first: all of `u3`'s edges into H plus the
/// `d'(u3)` lowest-id H-edges of `u1` and of `u2`.
pub fn main_g1_edges(g: &Graph, d: &InstanceDecomposition) -> Vec<EdgeId> {
    let k = d.d_prime[2];
    let mut edges = Vec::with_capacity(3 * k);
    for i in 0..3 {
        edges.extend(d.h_edges_of(g, i).into_iter().take(k));
    }
    edges
}

pub fn label_main(g: &Graph, d: &InstanceDecomposition) -> Result<StageOneResult> {
    label_main_with(g, d, None)
}

/// As [`label_main`]; with a seed, the H-H edges that fall outside every
/// interval are labelled in shuffled rather than edge-id order.
pub fn label_main_with(
    g: &Graph,
    d: &InstanceDecomposition,
    shuffle: Option<u64>,
) -> Result<StageOneResult> {
    let n = g.vertex_count();
    let m = g.edge_count();
    let k = d.d_prime[2];
    if k < 4 || m < 7 * n || d.has_common_neighbour(g) {
        return Err(Error::HypothesisViolated(format!(
            "main construction needs d'(u3) >= 4, m >= 7n and no common neighbour \
             (d' = {:?}, n = {n}, m = {m})",
            d.d_prime
        )));
    }
    let slots = n - 5;
    let top = |j: usize| m - 4 * (j - 1) - 1;
    let [u1, u2, _] = d.u;
    let mut p = PartialLabelling::new(g);
    label_triple_edges(g, d, &mut p);

    let g1 = main_g1_edges(g, d);
    let c1 = koenig_colour(g, &g1, k)?;
    if c1.class_sizes() != vec![3; k] {
        return Err(proof_violation(
            g,
            format!("first colouring has class sizes {:?}", c1.class_sizes()),
        ));
    }
    let mut intervals = Vec::with_capacity(slots);
    for (c, class) in c1.classes().iter().enumerate() {
        let j = c + 1;
        let mut by_u = [0; 3];
        for &e in class {
            let (a, b) = g.endpoints(e);
            let i = d
                .u_index(a)
                .or(d.u_index(b))
                .expect("edge touches the triple");
            by_u[i] = e;
        }
        let ys: BTreeSet<_> = (0..3).map(|i| g.other(by_u[i], d.u[i])).collect();
        if ys.len() != 3 {
            return Err(proof_violation(
                g,
                format!("interval {j} repeats an H endpoint"),
            ));
        }
        let labels = vec![top(j), top(j) - 1, top(j) - 2];
        for (&e, &l) in by_u.iter().zip(&labels) {
            p.assign(g, e, l);
        }
        intervals.push(Interval {
            index: j,
            labels,
            edges: by_u.to_vec(),
        });
    }

    let in_g1: BTreeSet<EdgeId> = g1.iter().copied().collect();
    let g2: Vec<EdgeId> =
        d.e2.iter()
            .copied()
            .filter(|&e| !p.is_labelled(e) && !in_g1.contains(&e))
            .collect();
    let q = slots - k;
    let c2 = balance_classes(g, &vizing_colour(g, &g2).pad_to(q), 3)?;
    let extra_u1 = d.d_prime[0] - k;
    let c2 = order_classes_for_vertex(g, &c2, u1, extra_u1)?;
    for (c, class) in c2.classes().iter().take(q).enumerate() {
        let j = k + 1 + c;
        let mut chosen: Vec<EdgeId> = Vec::with_capacity(3);
        if let Some(&e) = class
            .iter()
            .find(|&&e| g.endpoints(e).0 == u1 || g.endpoints(e).1 == u1)
        {
            chosen.push(e);
        }
        let first = chosen.first().copied();
        let room = 3 - chosen.len();
        chosen.extend(
            class
                .iter()
                .copied()
                .filter(|&e| Some(e) != first)
                .take(room),
        );
        let labels = vec![top(j), top(j) - 1, top(j) - 2];
        for (&e, &l) in chosen.iter().zip(&labels) {
            p.assign(g, e, l);
        }
        intervals.push(Interval {
            index: j,
            labels,
            edges: chosen,
        });
    }

    // Remaining edges take the small labels: plain edges first, then u2's,
    // then u1's, so u1 keeps the larger leftovers.
    let touches = |e: EdgeId, x| {
        let (a, b) = g.endpoints(e);
        a == x || b == x
    };
    let unlabelled: Vec<EdgeId> =
        d.e2.iter()
            .copied()
            .filter(|&e| !p.is_labelled(e))
            .collect();
    let mut plain: Vec<EdgeId> = unlabelled
        .iter()
        .copied()
        .filter(|&e| !touches(e, u1) && !touches(e, u2))
        .collect();
    if let Some(seed) = shuffle {
        plain.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    p.assign_smallest(g, &plain);
    for x in [u2, u1] {
        let group: Vec<EdgeId> = unlabelled
            .iter()
            .copied()
            .filter(|&e| touches(e, x))
            .collect();
        p.assign_smallest(g, &group);
    }

    let root_labels: Vec<usize> = (0..=slots).rev().map(|j| m - 4 * j).collect();
    if p.free_labels() != root_labels {
        return Err(proof_violation(
            g,
            "reserved labels not exactly consumed by the intervals",
        ));
    }
    let h_sorted = label_root_edges(g, d.r, &root_labels, &mut p);
    assemble(
        g,
        d,
        p,
        intervals,
        h_sorted,
        Regime::Main,
        StageVariant::Main,
    )
}
