//! Immutable simple undirected graphs with stable edge indices.
//!
//! Vertices are `0..n` internally. The public constructor [`build_graph`]
//! takes 1-based ids, the convention used by every text format in the crate.

use std::collections::HashMap;

use crate::error::{Error, Result};

pub type Vertex = usize;
pub type EdgeId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
    adjacency: Vec<Vec<Vertex>>,
    incident: Vec<Vec<EdgeId>>,
    index: HashMap<(Vertex, Vertex), EdgeId>,
}

fn key(u: Vertex, v: Vertex) -> (Vertex, Vertex) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Builds a graph from 1-based vertex pairs; edge ids follow input order.
pub fn build_graph(n: usize, edge_pairs: &[(usize, usize)]) -> Result<Graph> {
    let mut zero_based = Vec::with_capacity(edge_pairs.len());
    for &(u, v) in edge_pairs {
        for x in [u, v] {
            if x == 0 || x > n {
                return Err(Error::VertexOutOfRange { vertex: x, n });
            }
        }
        zero_based.push((u - 1, v - 1));
    }
    Graph::from_edges(n, zero_based)
}

impl Graph {
    /// Builds a graph from 0-based vertex pairs.
    pub fn from_edges(n: usize, edges: Vec<(Vertex, Vertex)>) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); n];
        let mut incident = vec![Vec::new(); n];
        let mut index = HashMap::with_capacity(edges.len());
        for (id, &(u, v)) in edges.iter().enumerate() {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x + 1, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u + 1));
            }
            if index.insert(key(u, v), id).is_some() {
                return Err(Error::DuplicateEdge(u + 1, v + 1));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
            incident[u].push(id);
            incident[v].push(id);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Graph {
            n,
            edges,
            adjacency,
            incident,
            index,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn endpoints(&self, e: EdgeId) -> (Vertex, Vertex) {
        self.edges[e]
    }

    /// The endpoint of `e` that is not `v`.
    pub fn other(&self, e: EdgeId, v: Vertex) -> Vertex {
        let (a, b) = self.edges[e];
        if a == v {
            b
        } else {
            debug_assert_eq!(b, v);
            a
        }
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Neighbours of `v` in increasing id order.
    pub fn neighbours(&self, v: Vertex) -> &[Vertex] {
        &self.adjacency[v]
    }

    /// Edge ids incident to `v`, in increasing id order.
    pub fn incident_edges(&self, v: Vertex) -> &[EdgeId] {
        &self.incident[v]
    }

    pub fn edge_between(&self, u: Vertex, v: Vertex) -> Option<EdgeId> {
        self.index.get(&key(u, v)).copied()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.edge_between(u, v).is_some()
    }

    pub fn isolated_vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.n).filter(|&v| self.adjacency[v].is_empty())
    }

    /// True when some connected component is a single edge.
    pub fn has_isolated_edge(&self) -> bool {
        self.edges
            .iter()
            .any(|&(u, v)| self.degree(u) == 1 && self.degree(v) == 1)
    }

    /// Graphs with an isolated edge or two isolated vertices have no
    /// antimagic labelling: both endpoints (or both vertices) share a sum.
    pub fn has_antimagic_shape(&self) -> bool {
        !self.has_isolated_edge() && self.isolated_vertices().nth(1).is_none()
    }
}
