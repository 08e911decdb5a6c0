//! Stage-one labellings, one constructor per regime.
//!
//! Every constructor hands out labels through a pool of unused values, so
//! the result is a bijection by construction; the regime's gap properties
//! are then re-checked by [`verify_stage_properties`] and any failure is
//! raised as [`Error::ProofViolation`] with the graph attached.

mod degenerate;
mod delta_n1;
mod main_regime;

use std::collections::BTreeMap;

use serde::Serialize;

pub use degenerate::{label_case_i1, label_case_i2, label_case_i3};
pub use delta_n1::label_delta_n1;
pub use main_regime::{label_main, label_main_with, main_g1_edges};

use crate::decompose::{classify_regime, degenerate_index, InstanceDecomposition, Regime};
use crate::error::{Error, Result};
use crate::format::write_graph;
use crate::graph::{EdgeId, Graph, Vertex};
use crate::labelling::{Labelling, PartialLabelling};
use crate::verify::{verify_bijection, verify_stage_properties};

/// Which construction produced a stage-one result; decides the property
/// suite and the exchange menu.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StageVariant {
    Main,
    CaseI1,
    CaseI2,
    CaseI3,
    TripleComponent,
    DeltaN1,
}

/// A block of consecutive reserved labels handed to one colour class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Interval {
    /// 1-based, counting down from the largest labels.
    pub index: usize,
    /// Largest first.
    pub labels: Vec<usize>,
    /// `edges[i]` carries `labels[i]`.
    pub edges: Vec<EdgeId>,
}

#[derive(Debug, Clone)]
pub struct StageOneResult {
    pub labelling: Labelling,
    /// Offset `i` -> H-endpoint of the triple-to-H edge labelled `m - i`.
    pub y_map: BTreeMap<usize, Vertex>,
    /// Offset `i` -> H-endpoint of the root edge labelled `m - i`.
    pub w_map: BTreeMap<usize, Vertex>,
    pub intervals: Vec<Interval>,
    /// H in the order its root edges were labelled (ascending partial sum).
    pub h_sorted: Vec<Vertex>,
    pub regime: Regime,
    pub variant: StageVariant,
}

pub(crate) fn proof_violation(g: &Graph, what: impl Into<String>) -> Error {
    Error::ProofViolation {
        what: what.into(),
        reproducer: write_graph(g),
    }
}

/// Edges among the triple, in the order u2u3, u1u3, u1u2.
pub(crate) fn triple_edge_ids(g: &Graph, d: &InstanceDecomposition) -> Vec<EdgeId> {
    d.triple_edges
        .iter()
        .map(|&(a, b)| g.edge_between(d.u[a], d.u[b]).expect("triple edge present"))
        .collect()
}

/// Gives the triple's edges the smallest labels, u2u3 first.
pub(crate) fn label_triple_edges(g: &Graph, d: &InstanceDecomposition, p: &mut PartialLabelling) {
    p.assign_smallest(g, &triple_edge_ids(g, d));
}

/// `u[i]`'s edges into H, ordered by H-endpoint id.
pub(crate) fn h_edges_by_endpoint(g: &Graph, d: &InstanceDecomposition, i: usize) -> Vec<EdgeId> {
    let mut edges = d.h_edges_of(g, i);
    edges.sort_by_key(|&e| g.other(e, d.u[i]));
    edges
}

/// Sorts the root's neighbours by partial sum (ties by id) and hands them
/// `labels`, which must be ascending.
pub(crate) fn label_root_edges(
    g: &Graph,
    r: Vertex,
    labels: &[usize],
    p: &mut PartialLabelling,
) -> Vec<Vertex> {
    let mut order: Vec<Vertex> = g.neighbours(r).to_vec();
    order.sort_by_key(|&v| (p.partial_sum(v), v));
    debug_assert_eq!(order.len(), labels.len());
    debug_assert!(labels.windows(2).all(|w| w[0] < w[1]));
    for (&v, &label) in order.iter().zip(labels) {
        let e = g.edge_between(r, v).expect("root edge");
        p.assign(g, e, label);
    }
    order
}

/// Offsets below `m` of labels sitting on triple-to-H and root edges.
pub(crate) fn offset_maps(
    g: &Graph,
    d: &InstanceDecomposition,
    l: &Labelling,
) -> (BTreeMap<usize, Vertex>, BTreeMap<usize, Vertex>) {
    let m = g.edge_count();
    let (mut y, mut w) = (BTreeMap::new(), BTreeMap::new());
    for (e, &(a, b)) in g.edges().iter().enumerate() {
        let offset = m - l.label_of(e);
        for (x, other) in [(a, b), (b, a)] {
            if x == d.r {
                w.insert(offset, other);
            } else if d.u_index(x).is_some() && d.is_in_h(other) {
                y.insert(offset, other);
            }
        }
    }
    (y, w)
}

/// Bijection and regime-property checks shared by every constructor.
pub(crate) fn check_stage(g: &Graph, d: &InstanceDecomposition, s: &StageOneResult) -> Result<()> {
    let bijection = verify_bijection(g, &s.labelling);
    if !bijection.is_ok() {
        return Err(proof_violation(
            g,
            format!("not a bijection: {bijection:?}"),
        ));
    }
    let report = verify_stage_properties(g, s, d);
    if let Some(fail) = report.failures().next() {
        return Err(proof_violation(
            g,
            format!(
                "{} stage property `{}` fails by {}: {}",
                s.regime,
                fail.name,
                -fail.margin,
                fail.witness.as_deref().unwrap_or("")
            ),
        ));
    }
    Ok(())
}

pub(crate) fn assemble(
    g: &Graph,
    d: &InstanceDecomposition,
    p: PartialLabelling,
    intervals: Vec<Interval>,
    h_sorted: Vec<Vertex>,
    regime: Regime,
    variant: StageVariant,
) -> Result<StageOneResult> {
    let labelling = p.finish(g);
    let (y_map, w_map) = offset_maps(g, d, &labelling);
    let s = StageOneResult {
        labelling,
        y_map,
        w_map,
        intervals,
        h_sorted,
        regime,
        variant,
    };
    check_stage(g, d, &s)?;
    Ok(s)
}

/// Disconnected instances: either `u3` is isolated, handled by the
/// degenerate constructor matching `d'`, or the triple is its own
/// component, labelled first with the root's component labelled after it
/// by the universal-vertex construction.
pub fn label_disconnected(g: &Graph, d: &InstanceDecomposition) -> Result<StageOneResult> {
    if !g.has_antimagic_shape() {
        return Err(Error::NotAntimagicShape);
    }
    let regime = classify_regime(g, d);
    match regime {
        Regime::DiscTripleComponent => {
            let mut p = PartialLabelling::new(g);
            label_triple_edges(g, d, &mut p);
            let rest: Vec<EdgeId> =
                d.e2.iter()
                    .copied()
                    .filter(|&e| !p.is_labelled(e))
                    .collect();
            p.assign_smallest(g, &rest);
            let top = p.free_labels();
            let h_sorted = label_root_edges(g, d.r, &top, &mut p);
            assemble(
                g,
                d,
                p,
                Vec::new(),
                h_sorted,
                regime,
                StageVariant::TripleComponent,
            )
        }
        Regime::DiscU3Isolated => {
            let mut s = match degenerate_index(d) {
                Some(1) => label_case_i1(g, d)?,
                Some(2) => label_case_i2(g, d)?,
                _ => label_case_i3(g, d)?,
            };
            s.regime = regime;
            Ok(s)
        }
        other => Err(Error::HypothesisViolated(format!(
            "graph is in regime {other}, not a disconnected one"
        ))),
    }
}
