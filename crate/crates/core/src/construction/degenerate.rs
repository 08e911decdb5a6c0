//! Constructions for instances where some `u_i` has at most three edges
//! into H. The index `i` of the first such vertex picks the variant.

use std::collections::BTreeSet;

use crate::colouring::{balance_classes, koenig_colour, order_classes_for_vertex, vizing_colour};
use crate::decompose::{degenerate_index, InstanceDecomposition, Regime};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph};
use crate::labelling::PartialLabelling;
use crate::verify::verify_antimagic;

use super::{
    assemble, h_edges_by_endpoint, label_root_edges, label_triple_edges, proof_violation, Interval,
    StageOneResult, StageVariant,
};

fn require_index(g: &Graph, d: &InstanceDecomposition, want: usize) -> Result<()> {
    let n = g.vertex_count();
    let m = g.edge_count();
    if degenerate_index(d) != Some(want) || m < 7 * n || d.has_common_neighbour(g) {
        return Err(Error::HypothesisViolated(format!(
            "case i={want} needs min{{j : d'(u_j) <= 3}} = {want}, m >= 7n and no common \
             neighbour (d' = {:?}, n = {n}, m = {m})",
            d.d_prime
        )));
    }
    Ok(())
}

fn regime_for(i: usize) -> Regime {
    match i {
        1 => Regime::DegenI1,
        2 => Regime::DegenI2,
        _ => Regime::DegenI3,
    }
}

fn unlabelled_non_root(d: &InstanceDecomposition, p: &PartialLabelling) -> Vec<EdgeId> {
    d.e2.iter()
        .copied()
        .filter(|&e| !p.is_labelled(e))
        .collect()
}

/// Every `u_i` has at most three H-edges: the triple takes the smallest
/// labels (u3's edges, then u2's, then u1's), the root the largest.
pub fn label_case_i1(g: &Graph, d: &InstanceDecomposition) -> Result<StageOneResult> {
    require_index(g, d, 1)?;
    let mut p = PartialLabelling::new(g);
    label_triple_edges(g, d, &mut p);
    for i in [2, 1, 0] {
        p.assign_smallest(g, &h_edges_by_endpoint(g, d, i));
    }
    p.assign_smallest(g, &unlabelled_non_root(d, &p));
    let top = p.free_labels();
    let h_sorted = label_root_edges(g, d.r, &top, &mut p);
    let s = assemble(
        g,
        d,
        p,
        Vec::new(),
        h_sorted,
        regime_for(1),
        StageVariant::CaseI1,
    )?;
    if let Some(c) = verify_antimagic(g, &s.labelling).conflicts.first() {
        return Err(proof_violation(
            g,
            format!(
                "case i=1 left vertices {} and {} at sum {}",
                c.a, c.b, c.sum
            ),
        ));
    }
    Ok(s)
}

/// `u1` has at least four H-edges, `u2` and `u3` at most three. Root edges
/// take odd offsets below `m`, u1's edges the even ones near the top plus
/// one just below the root block.
pub fn label_case_i2(g: &Graph, d: &InstanceDecomposition) -> Result<StageOneResult> {
    require_index(g, d, 2)?;
    let n = g.vertex_count();
    let m = g.edge_count();
    let slots = n - 5;
    let mut p = PartialLabelling::new(g);
    label_triple_edges(g, d, &mut p);
    for i in [2, 1] {
        p.assign_smallest(g, &h_edges_by_endpoint(g, d, i));
    }

    let root_labels: Vec<usize> = (0..=slots).rev().map(|j| m - 1 - 2 * j).collect();
    let d1 = d.d_prime[0];
    let mut u1_labels: Vec<usize> = (0..=d1 - 2).map(|j| m - 2 * j).collect();
    u1_labels.push(m - 2 * slots - 2);
    let u1_edges = h_edges_by_endpoint(g, d, 0);
    let mut intervals = Vec::new();
    for (&e, &l) in u1_edges.iter().zip(&u1_labels) {
        p.assign(g, e, l);
    }
    intervals.push(Interval {
        index: 0,
        labels: u1_labels,
        edges: u1_edges,
    });

    let reserved: BTreeSet<usize> = root_labels.iter().copied().collect();
    let rest = unlabelled_non_root(d, &p);
    let pool: Vec<usize> = p
        .free_labels()
        .into_iter()
        .filter(|l| !reserved.contains(l))
        .collect();
    debug_assert_eq!(pool.len(), rest.len());
    for (&e, &l) in rest.iter().zip(&pool) {
        p.assign(g, e, l);
    }
    let h_sorted = label_root_edges(g, d.r, &root_labels, &mut p);
    assemble(
        g,
        d,
        p,
        intervals,
        h_sorted,
        regime_for(2),
        StageVariant::CaseI2,
    )
}

/// `u1` and `u2` have at least four H-edges, `u3` at most three. Root
/// edges take every third label from the top; the two labels between
/// consecutive root labels form an interval handed to one colour class.
pub fn label_case_i3(g: &Graph, d: &InstanceDecomposition) -> Result<StageOneResult> {
    require_index(g, d, 3)?;
    let n = g.vertex_count();
    let m = g.edge_count();
    let slots = n - 5;
    let high = |j: usize| m - 3 * j - 1;
    let [u1, u2, _] = d.u;
    let mut p = PartialLabelling::new(g);
    label_triple_edges(g, d, &mut p);
    p.assign_smallest(g, &h_edges_by_endpoint(g, d, 2));

    let k2 = d.d_prime[1];
    let mut g1: Vec<EdgeId> = d.h_edges_of(g, 0).into_iter().take(k2).collect();
    g1.extend(d.h_edges_of(g, 1));
    let c1 = koenig_colour(g, &g1, k2)?;
    if c1.class_sizes() != vec![2; k2] {
        return Err(proof_violation(
            g,
            format!("first colouring has class sizes {:?}", c1.class_sizes()),
        ));
    }
    let touches = |e: EdgeId, x| {
        let (a, b) = g.endpoints(e);
        a == x || b == x
    };
    let mut intervals = Vec::with_capacity(slots);
    for (j, class) in c1.classes().iter().enumerate() {
        let e1 = *class
            .iter()
            .find(|&&e| touches(e, u1))
            .expect("u1 edge in class");
        let e2 = *class
            .iter()
            .find(|&&e| touches(e, u2))
            .expect("u2 edge in class");
        let labels = vec![high(j), high(j) - 1];
        p.assign(g, e1, labels[0]);
        p.assign(g, e2, labels[1]);
        intervals.push(Interval {
            index: j + 1,
            labels,
            edges: vec![e1, e2],
        });
    }

    let in_g1: BTreeSet<EdgeId> = g1.iter().copied().collect();
    let g2: Vec<EdgeId> = unlabelled_non_root(d, &p)
        .into_iter()
        .filter(|e| !in_g1.contains(e))
        .collect();
    // u2 may reach all of H (only when u3 has no H-edges); its last class
    // then sits below the root block.
    let q = slots.saturating_sub(k2);
    let c2 = balance_classes(g, &vizing_colour(g, &g2).pad_to(q), 2)?;
    let extra_u1 = d.d_prime[0] - k2;
    let c2 = order_classes_for_vertex(g, &c2, u1, extra_u1)?;
    for (c, class) in c2.classes().iter().take(q).enumerate() {
        let j = k2 + c;
        let mut chosen: Vec<EdgeId> = class.iter().copied().filter(|&e| touches(e, u1)).collect();
        chosen.extend(
            class
                .iter()
                .copied()
                .filter(|&e| !touches(e, u1))
                .take(2 - chosen.len()),
        );
        let labels = vec![high(j), high(j) - 1];
        for (&e, &l) in chosen.iter().zip(&labels) {
            p.assign(g, e, l);
        }
        intervals.push(Interval {
            index: j + 1,
            labels,
            edges: chosen,
        });
    }
    // When u1 reaches every vertex of H it can have one edge more than there
    // are intervals; that edge continues the pattern below the root block.
    let overflow: Vec<EdgeId> = d
        .h_edges_of(g, 0)
        .into_iter()
        .filter(|&e| !p.is_labelled(e))
        .collect();
    for (t, &e) in overflow.iter().enumerate() {
        let l = high(intervals.len() + t);
        if !p.is_free(l) {
            return Err(proof_violation(
                g,
                format!("overflow label {l} already used"),
            ));
        }
        p.assign(g, e, l);
    }

    p.assign_smallest(g, &unlabelled_non_root(d, &p));
    let root_labels: Vec<usize> = (0..=slots).rev().map(|j| m - 3 * j).collect();
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
        regime_for(3),
        StageVariant::CaseI3,
    )
}
