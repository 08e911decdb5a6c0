use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, Vertex};
use crate::labelling::{Labelling, PartialLabelling};
use crate::verify::verify_antimagic;

use super::{label_root_edges, proof_violation};

/// Labelling for a graph where `r` is adjacent to every other vertex.
///
/// Edges away from `r` take `1..=m-(n-1)` in edge-id order. The other
/// vertices are then sorted by partial sum and the star edges take the
/// top `n-1` labels in that order, so sums increase strictly along the
/// sort and `r` ends up with the largest sum.
pub fn label_delta_n1(g: &Graph, r: Vertex) -> Result<Labelling> {
    let n = g.vertex_count();
    if r >= n || g.degree(r) + 1 != n {
        return Err(Error::NotUniversalVertex(r + 1));
    }
    if n == 2 {
        return Err(Error::NotAntimagicShape);
    }
    let mut p = PartialLabelling::new(g);
    let rest: Vec<EdgeId> = (0..g.edge_count())
        .filter(|&e| {
            let (a, b) = g.endpoints(e);
            a != r && b != r
        })
        .collect();
    p.assign_smallest(g, &rest);
    let top = p.free_labels();
    label_root_edges(g, r, &top, &mut p);
    let l = p.finish(g);
    let report = verify_antimagic(g, &l);
    if let Some(c) = report.conflicts.first() {
        return Err(proof_violation(
            g,
            format!("vertices {} and {} share sum {}", c.a, c.b, c.sum),
        ));
    }
    Ok(l)
}
