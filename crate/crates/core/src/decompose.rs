//! Splitting an instance with Δ = n−4 into the root, its three
//! non-neighbours, and the remaining subgraph `H`, then picking the
//! construction that applies.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, Vertex};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceDecomposition {
    /// Root: the smallest-id vertex of degree n−4.
    pub r: Vertex,
    /// The three non-neighbours of `r`, ordered by (degree, H-degree) descending.
    pub u: [Vertex; 3],
    /// The n−4 neighbours of `r`, in increasing id order.
    pub h_vertices: Vec<Vertex>,
    /// Number of edges from each `u[i]` into `H`.
    pub d_prime: [usize; 3],
    /// Present edges among the triple, as index pairs into `u`.
    pub triple_edges: Vec<(usize, usize)>,
    /// Edges incident to `r`.
    pub e1: Vec<EdgeId>,
    /// Every other edge.
    pub e2: Vec<EdgeId>,
    pub n_h: usize,
    pub m_h: usize,
    in_h: Vec<bool>,
}

impl InstanceDecomposition {
    pub fn is_in_h(&self, v: Vertex) -> bool {
        self.in_h[v]
    }

    /// Position of `v` in the triple, if it is one of `u1, u2, u3`.
    pub fn u_index(&self, v: Vertex) -> Option<usize> {
        self.u.iter().position(|&x| x == v)
    }

    /// Edges from `u[i]` into `H`, in increasing edge id order.
    pub fn h_edges_of(&self, g: &Graph, i: usize) -> Vec<EdgeId> {
        let u = self.u[i];
        g.incident_edges(u)
            .iter()
            .copied()
            .filter(|&e| self.in_h[g.other(e, u)])
            .collect()
    }

    /// Number of edges among the triple incident to `u[i]`.
    pub fn triple_degree(&self, i: usize) -> usize {
        self.triple_edges
            .iter()
            .filter(|&&(a, b)| a == i || b == i)
            .count()
    }

    /// True when some vertex of `H` is adjacent to all three `u_i`.
    pub fn has_common_neighbour(&self, g: &Graph) -> bool {
        self.h_vertices
            .iter()
            .any(|&v| self.u.iter().all(|&u| g.has_edge(u, v)))
    }
}

/// Which construction a graph is routed to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Regime {
    #[serde(rename = "MAIN")]
    Main,
    #[serde(rename = "DEGEN_I1")]
    DegenI1,
    #[serde(rename = "DEGEN_I2")]
    DegenI2,
    #[serde(rename = "DEGEN_I3")]
    DegenI3,
    #[serde(rename = "DISC_U3_ISOLATED")]
    DiscU3Isolated,
    #[serde(rename = "DISC_TRIPLE_COMPONENT")]
    DiscTripleComponent,
    #[serde(rename = "YILMA_FALLBACK")]
    CommonNeighbourFallback,
    #[serde(rename = "DELTA_N1")]
    DeltaN1,
    #[serde(rename = "UNSUPPORTED")]
    Unsupported,
}

impl Regime {
    pub const ALL: [Regime; 9] = [
        Regime::Main,
        Regime::DegenI1,
        Regime::DegenI2,
        Regime::DegenI3,
        Regime::DiscU3Isolated,
        Regime::DiscTripleComponent,
        Regime::CommonNeighbourFallback,
        Regime::DeltaN1,
        Regime::Unsupported,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Main => "MAIN",
            Regime::DegenI1 => "DEGEN_I1",
            Regime::DegenI2 => "DEGEN_I2",
            Regime::DegenI3 => "DEGEN_I3",
            Regime::DiscU3Isolated => "DISC_U3_ISOLATED",
            Regime::DiscTripleComponent => "DISC_TRIPLE_COMPONENT",
            Regime::CommonNeighbourFallback => "YILMA_FALLBACK",
            Regime::DeltaN1 => "DELTA_N1",
            Regime::Unsupported => "UNSUPPORTED",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Regime {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let upper = s.trim().to_ascii_uppercase().replace('-', "_");
        Regime::ALL
            .iter()
            .copied()
            .find(|r| r.as_str() == upper)
            .ok_or_else(|| format!("unknown regime `{s}`"))
    }
}

/// Index `i = min{j : d'(u_j) <= 3}` (1-based), if any.
pub fn degenerate_index(d: &InstanceDecomposition) -> Option<usize> {
    d.d_prime.iter().position(|&x| x <= 3).map(|j| j + 1)
}

pub fn decompose(g: &Graph) -> Result<InstanceDecomposition> {
    let n = g.vertex_count();
    if n < 8 {
        return Err(Error::TooSmall(n));
    }
    let delta = g.max_degree();
    if delta != n - 4 {
        return Err(Error::WrongMaxDegree {
            found: delta,
            expected: n - 4,
        });
    }
    let r = (0..n)
        .find(|&v| g.degree(v) == delta)
        .expect("max degree attained");

    let mut in_h = vec![false; n];
    for &v in g.neighbours(r) {
        in_h[v] = true;
    }
    let h_vertices: Vec<Vertex> = (0..n).filter(|&v| in_h[v]).collect();
    let mut triple: Vec<Vertex> = (0..n).filter(|&v| v != r && !in_h[v]).collect();
    debug_assert_eq!(triple.len(), 3);

    let h_degree = |u: Vertex| g.neighbours(u).iter().filter(|&&v| in_h[v]).count();
    triple.sort_by(|&a, &b| {
        g.degree(b)
            .cmp(&g.degree(a))
            .then(h_degree(b).cmp(&h_degree(a)))
            .then(a.cmp(&b))
    });
    let u = [triple[0], triple[1], triple[2]];
    let d_prime = [h_degree(u[0]), h_degree(u[1]), h_degree(u[2])];
    // Follows from the ordering: triple degrees differ by at most one.
    assert!(
        d_prime[0] >= d_prime[1] && d_prime[1] >= d_prime[2],
        "H-degree order broken: {d_prime:?}"
    );

    let triple_edges = [(1, 2), (0, 2), (0, 1)]
        .into_iter()
        .filter(|&(a, b)| g.has_edge(u[a], u[b]))
        .collect();

    let (e1, e2): (Vec<EdgeId>, Vec<EdgeId>) = (0..g.edge_count()).partition(|&e| {
        let (a, b) = g.endpoints(e);
        a == r || b == r
    });
    let m_h = g
        .edges()
        .iter()
        .filter(|&&(a, b)| in_h[a] && in_h[b])
        .count();

    Ok(InstanceDecomposition {
        r,
        u,
        n_h: h_vertices.len(),
        h_vertices,
        d_prime,
        triple_edges,
        e1,
        e2,
        m_h,
        in_h,
    })
}

pub fn classify_regime(g: &Graph, d: &InstanceDecomposition) -> Regime {
    let n = g.vertex_count();
    if g.edge_count() < 7 * n || !g.has_antimagic_shape() {
        return Regime::Unsupported;
    }
    if d.has_common_neighbour(g) {
        return Regime::CommonNeighbourFallback;
    }
    if d.d_prime == [0, 0, 0] && d.triple_edges.len() >= 2 {
        return Regime::DiscTripleComponent;
    }
    if g.degree(d.u[2]) == 0 && d.d_prime[0] > 0 {
        return Regime::DiscU3Isolated;
    }
    match degenerate_index(d) {
        Some(1) => Regime::DegenI1,
        Some(2) => Regime::DegenI2,
        Some(_) => Regime::DegenI3,
        None => {
            assert!(n >= 16, "m >= 7n with Δ = n-4 forces n >= 16");
            Regime::Main
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;

    /// n = 8: vertex 1 adjacent to 2..5, non-neighbours 6, 7, 8.
    fn small() -> Graph {
        build_graph(
            8,
            &[
                (1, 2),
                (1, 3),
                (1, 4),
                (1, 5),
                (6, 2),
                (6, 3),
                (7, 2),
                (8, 4),
                (7, 8),
            ],
        )
        .unwrap()
    }

    #[test]
    fn decomposes_small_instance() {
        let g = small();
        let d = decompose(&g).unwrap();
        assert_eq!(d.r, 0);
        assert_eq!(d.h_vertices, vec![1, 2, 3, 4]);
        // deg: 6 -> 2 (d' 2), 7 -> 2 (d' 1), 8 -> 2 (d' 1); tie on 7, 8 -> id.
        assert_eq!(d.u, [5, 6, 7]);
        assert_eq!(d.d_prime, [2, 1, 1]);
        assert_eq!(d.triple_edges, vec![(1, 2)]);
        assert_eq!(d.e1.len(), 4);
        assert_eq!(d.e1.len() + d.e2.len(), g.edge_count());
        assert_eq!(d.m_h, 0);
    }

    #[test]
    fn root_is_smallest_max_degree_vertex() {
        // Vertices 1 and 2 both have degree 4 = n-4.
        let g = build_graph(
            8,
            &[
                (2, 3),
                (2, 4),
                (2, 5),
                (2, 1),
                (1, 3),
                (1, 4),
                (1, 5),
                (6, 7),
            ],
        )
        .unwrap();
        assert_eq!(decompose(&g).unwrap().r, 0);
    }

    #[test]
    fn hypothesis_gate() {
        let star = build_graph(6, &[(1, 2), (1, 3), (1, 4), (1, 5), (1, 6)]).unwrap();
        assert!(matches!(decompose(&star), Err(Error::TooSmall(6))));
        let star9 = build_graph(9, &(2..=9).map(|v| (1, v)).collect::<Vec<_>>()).unwrap();
        assert_eq!(
            decompose(&star9),
            Err(Error::WrongMaxDegree {
                found: 8,
                expected: 5
            })
        );
    }

    #[test]
    fn regime_parse_round_trip() {
        for r in Regime::ALL {
            assert_eq!(r.as_str().parse::<Regime>().unwrap(), r);
        }
        assert_eq!("degen-i3".parse::<Regime>().unwrap(), Regime::DegenI3);
    }

    #[test]
    fn sparse_is_unsupported() {
        let g = small();
        let d = decompose(&g).unwrap();
        assert_eq!(classify_regime(&g, &d), Regime::Unsupported);
    }
}
