use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, Vertex};

/// Edge labels with cached vertex sums.
///
/// Construction outputs are bijections onto `1..=m`; a `Labelling` parsed
/// from a file may not be, which is what the verification module checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labelling {
    labels: Vec<usize>,
    sums: Vec<u64>,
}

impl Labelling {
    pub fn from_labels(g: &Graph, labels: Vec<usize>) -> Self {
        assert_eq!(labels.len(), g.edge_count(), "one label per edge");
        let mut sums = vec![0u64; g.vertex_count()];
        for (e, &l) in labels.iter().enumerate() {
            let (a, b) = g.endpoints(e);
            sums[a] += l as u64;
            sums[b] += l as u64;
        }
        Labelling { labels, sums }
    }

    pub fn label_of(&self, e: EdgeId) -> usize {
        self.labels[e]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn sum(&self, v: Vertex) -> u64 {
        self.sums[v]
    }

    pub fn sums(&self) -> &[u64] {
        &self.sums
    }

    pub fn edge_with_label(&self, label: usize) -> Option<EdgeId> {
        self.labels.iter().position(|&l| l == label)
    }

    /// Exchanges the labels of two edges, updating the affected sums.
    pub fn swap_edges(&mut self, g: &Graph, e: EdgeId, f: EdgeId) {
        let (le, lf) = (self.labels[e] as i64, self.labels[f] as i64);
        for (edge, delta) in [(e, lf - le), (f, le - lf)] {
            let (a, b) = g.endpoints(edge);
            for x in [a, b] {
                self.sums[x] = (self.sums[x] as i64 + delta) as u64;
            }
        }
        self.labels.swap(e, f);
    }

    /// Exchanges the edges carrying labels `a` and `b`.
    pub fn swap_labels(&mut self, g: &Graph, a: usize, b: usize) -> Result<(EdgeId, EdgeId)> {
        let ea = self.edge_with_label(a).ok_or(Error::LabelMissing(a))?;
        let eb = self.edge_with_label(b).ok_or(Error::LabelMissing(b))?;
        self.swap_edges(g, ea, eb);
        Ok((ea, eb))
    }
}

/// A labelling under construction: labels are handed out from a pool of
/// unused values in `1..=m`, and partial sums are kept current.
#[derive(Debug, Clone)]
pub(crate) struct PartialLabelling {
    labels: Vec<usize>,
    partial: Vec<u64>,
    free: BTreeSet<usize>,
}

impl PartialLabelling {
    pub fn new(g: &Graph) -> Self {
        let m = g.edge_count();
        PartialLabelling {
            labels: vec![0; m],
            partial: vec![0; g.vertex_count()],
            free: (1..=m).collect(),
        }
    }

    pub fn assign(&mut self, g: &Graph, e: EdgeId, label: usize) {
        assert_eq!(self.labels[e], 0, "edge {e} already labelled");
        assert!(self.free.remove(&label), "label {label} not available");
        self.labels[e] = label;
        let (a, b) = g.endpoints(e);
        self.partial[a] += label as u64;
        self.partial[b] += label as u64;
    }

    pub fn is_labelled(&self, e: EdgeId) -> bool {
        self.labels[e] != 0
    }

    pub fn is_free(&self, label: usize) -> bool {
        self.free.contains(&label)
    }

    pub fn smallest_free(&self) -> Option<usize> {
        self.free.first().copied()
    }

    /// Unused labels, ascending.
    pub fn free_labels(&self) -> Vec<usize> {
        self.free.iter().copied().collect()
    }

    pub fn partial_sum(&self, v: Vertex) -> u64 {
        self.partial[v]
    }

    /// Hands the smallest free labels to `edges`, in order.
    pub fn assign_smallest(&mut self, g: &Graph, edges: &[EdgeId]) {
        for &e in edges {
            let l = self.smallest_free().expect("labels remain");
            self.assign(g, e, l);
        }
    }

    pub fn finish(self, g: &Graph) -> Labelling {
        assert!(self.free.is_empty(), "{} labels unused", self.free.len());
        Labelling::from_labels(g, self.labels)
    }
}
