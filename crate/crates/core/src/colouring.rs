//! Proper edge colourings over subsets of a graph's edges.
//!
//! - [`koenig_colour`]: Δ-colouring of bipartite edge sets by edge insertion
//!   with alternating-path recolouring.
//! - [`vizing_colour`]: (Δ+1)-colouring of arbitrary edge sets, Misra–Gries
//!   fan rotation.
//! - [`balance_classes`]: moves edges between classes along two-coloured
//!   paths until every class reaches a minimum size.
//! - [`order_classes_for_vertex`]: permutes classes so the ones holding a
//!   given vertex's edges come first.

use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, Vertex};

/// A partition of an edge set into matchings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeColouring {
    classes: Vec<Vec<EdgeId>>,
    colour_of: BTreeMap<EdgeId, usize>,
}

impl EdgeColouring {
    /// Builds a colouring from explicit classes. Each class is kept sorted.
    pub fn from_classes(mut classes: Vec<Vec<EdgeId>>) -> Self {
        let mut colour_of = BTreeMap::new();
        for (c, class) in classes.iter_mut().enumerate() {
            class.sort_unstable();
            for &e in class.iter() {
                let prev = colour_of.insert(e, c);
                assert!(prev.is_none(), "edge {e} in two classes");
            }
        }
        EdgeColouring { classes, colour_of }
    }

    fn from_assignment(colours: &BTreeMap<EdgeId, usize>, count: usize) -> Self {
        let mut classes = vec![Vec::new(); count];
        for (&e, &c) in colours {
            classes[c].push(e);
        }
        // Drop trailing empty classes; the palette may exceed what was used.
        while classes.last().is_some_and(Vec::is_empty) {
            classes.pop();
        }
        Self::from_classes(classes)
    }

    pub fn classes(&self) -> &[Vec<EdgeId>] {
        &self.classes
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    pub fn colour_of(&self, e: EdgeId) -> Option<usize> {
        self.colour_of.get(&e).copied()
    }

    pub fn edge_count(&self) -> usize {
        self.colour_of.len()
    }

    /// Appends empty classes until there are at least `count`.
    pub fn pad_to(mut self, count: usize) -> Self {
        while self.classes.len() < count {
            self.classes.push(Vec::new());
        }
        self
    }

    /// No two edges of one class share an endpoint.
    pub fn is_proper(&self, g: &Graph) -> bool {
        self.classes.iter().all(|class| {
            let mut seen = std::collections::HashSet::new();
            class.iter().all(|&e| {
                let (a, b) = g.endpoints(e);
                seen.insert(a) && seen.insert(b)
            })
        })
    }
}

fn subset_degrees(g: &Graph, edges: &[EdgeId]) -> Vec<usize> {
    let mut deg = vec![0; g.vertex_count()];
    for &e in edges {
        let (a, b) = g.endpoints(e);
        deg[a] += 1;
        deg[b] += 1;
    }
    deg
}

/// Per-vertex table `colour -> edge` for the colour-exchange algorithms.
struct Palette {
    at: Vec<Vec<Option<EdgeId>>>,
    colour: HashMap<EdgeId, usize>,
}

impl Palette {
    fn new(n: usize, colours: usize) -> Self {
        Palette {
            at: vec![vec![None; colours]; n],
            colour: HashMap::new(),
        }
    }

    fn free(&self, v: Vertex) -> usize {
        self.at[v]
            .iter()
            .position(Option::is_none)
            .expect("palette larger than degree")
    }

    fn is_free(&self, v: Vertex, c: usize) -> bool {
        self.at[v][c].is_none()
    }

    fn set(&mut self, g: &Graph, e: EdgeId, c: usize) {
        let (a, b) = g.endpoints(e);
        debug_assert!(self.at[a][c].is_none() && self.at[b][c].is_none());
        self.at[a][c] = Some(e);
        self.at[b][c] = Some(e);
        self.colour.insert(e, c);
    }

    fn unset(&mut self, g: &Graph, e: EdgeId) -> Option<usize> {
        let c = self.colour.remove(&e)?;
        let (a, b) = g.endpoints(e);
        self.at[a][c] = None;
        self.at[b][c] = None;
        Some(c)
    }

    /// Swaps colours `c` and `d` on the maximal path leaving `start` along
    /// a `c`-edge. `start` must have `d` free.
    fn flip_path(&mut self, g: &Graph, start: Vertex, c: usize, d: usize) {
        let mut path = Vec::new();
        let (mut cur, mut col) = (start, c);
        while let Some(e) = self.at[cur][col] {
            path.push((e, if col == c { d } else { c }));
            cur = g.other(e, cur);
            col = if col == c { d } else { c };
        }
        for &(e, _) in &path {
            self.unset(g, e);
        }
        for &(e, c) in &path {
            self.set(g, e, c);
        }
    }

    fn into_map(self) -> BTreeMap<EdgeId, usize> {
        self.colour.into_iter().collect()
    }
}

/// Colours a bipartite edge subset with at most `k` colours.
pub fn koenig_colour(g: &Graph, edges: &[EdgeId], k: usize) -> Result<EdgeColouring> {
    let deg = subset_degrees(g, edges);
    let max = deg.iter().copied().max().unwrap_or(0);
    if max > k {
        return Err(Error::DegreeExceedsColours {
            degree: max,
            colours: k,
        });
    }
    check_bipartite(g, edges)?;
    if edges.is_empty() {
        return Ok(EdgeColouring::from_classes(Vec::new()));
    }

    let mut palette = Palette::new(g.vertex_count(), k);
    for &e in edges {
        let (a, b) = g.endpoints(e);
        let alpha = palette.free(a);
        if !palette.is_free(b, alpha) {
            let beta = palette.free(b);
            // The alpha/beta path from b cannot reach a in a bipartite graph.
            palette.flip_path(g, b, alpha, beta);
        }
        palette.set(g, e, alpha);
    }
    Ok(EdgeColouring::from_assignment(&palette.into_map(), k))
}

fn check_bipartite(g: &Graph, edges: &[EdgeId]) -> Result<()> {
    let mut adj: HashMap<Vertex, Vec<Vertex>> = HashMap::new();
    for &e in edges {
        let (a, b) = g.endpoints(e);
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    let mut side: HashMap<Vertex, bool> = HashMap::new();
    let mut starts: Vec<Vertex> = adj.keys().copied().collect();
    starts.sort_unstable();
    for s in starts {
        if side.contains_key(&s) {
            continue;
        }
        side.insert(s, false);
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            let sx = side[&x];
            for &y in &adj[&x] {
                match side.get(&y) {
                    Some(&sy) if sy == sx => return Err(Error::NotBipartite),
                    Some(_) => {}
                    None => {
                        side.insert(y, !sx);
                        queue.push_back(y);
                    }
                }
            }
        }
    }
    Ok(())
}

/// Colours an edge subset with at most Δ+1 colours (Misra–Gries).
pub fn vizing_colour(g: &Graph, edges: &[EdgeId]) -> EdgeColouring {
    let deg = subset_degrees(g, edges);
    let palette_size = deg.iter().copied().max().unwrap_or(0) + 1;
    let mut incident: Vec<Vec<EdgeId>> = vec![Vec::new(); g.vertex_count()];
    for &e in edges {
        let (a, b) = g.endpoints(e);
        incident[a].push(e);
        incident[b].push(e);
    }

    let mut palette = Palette::new(g.vertex_count(), palette_size);
    for &e0 in edges {
        let (u, v0) = g.endpoints(e0);

        // Maximal fan at u starting with e0.
        let mut fan: Vec<(Vertex, EdgeId)> = vec![(v0, e0)];
        let mut in_fan = vec![e0];
        loop {
            let last = fan.last().unwrap().0;
            let next = incident[u].iter().copied().find(|&e| {
                !in_fan.contains(&e)
                    && palette
                        .colour
                        .get(&e)
                        .is_some_and(|&c| palette.is_free(last, c))
            });
            match next {
                Some(e) => {
                    fan.push((g.other(e, u), e));
                    in_fan.push(e);
                }
                None => break,
            }
        }

        let c = palette.free(u);
        let d = palette.free(fan.last().unwrap().0);
        if c != d {
            // Path from u alternating d, c; afterwards d is free at u.
            palette.flip_path(g, u, d, c);
        }

        let w = fan
            .iter()
            .position(|&(x, _)| palette.is_free(x, d))
            .expect("some fan vertex has d free");
        let shifted: Vec<usize> = (1..=w).map(|i| palette.colour[&fan[i].1]).collect();
        for &(_, e) in &fan[1..=w] {
            palette.unset(g, e);
        }
        for (i, &col) in shifted.iter().enumerate() {
            palette.set(g, fan[i].1, col);
        }
        palette.set(g, fan[w].1, d);
    }
    let result = EdgeColouring::from_assignment(&palette.into_map(), palette_size);
    debug_assert!(result.is_proper(g));
    result
}

/// Rebalances classes until each holds at least `min_size` edges.
///
/// Each round takes the smallest class `i` and the largest class `j`, and
/// swaps the two colours along a component of the `i`/`j` subgraph that
/// begins and ends with a `j`-edge (smallest edge id wins among candidates).
pub fn balance_classes(g: &Graph, c: &EdgeColouring, min_size: usize) -> Result<EdgeColouring> {
    let total = c.edge_count();
    let count = c.class_count();
    if total < min_size * count {
        return Err(Error::InfeasibleBalance {
            edges: total,
            classes: count,
            min_size,
        });
    }
    let mut classes: Vec<Vec<EdgeId>> = c.classes.clone();
    let deficit =
        |cl: &[Vec<EdgeId>]| -> usize { cl.iter().map(|x| min_size.saturating_sub(x.len())).sum() };
    loop {
        let small = (0..count)
            .min_by_key(|&i| (classes[i].len(), i))
            .unwrap_or(0);
        if count == 0 || classes[small].len() >= min_size {
            break;
        }
        let big = (0..count)
            .max_by_key(|&i| (classes[i].len(), std::cmp::Reverse(i)))
            .unwrap();
        debug_assert!(classes[big].len() > min_size);
        let before = deficit(&classes);

        let path = surplus_path(g, &classes[small], &classes[big]);
        let on_path: std::collections::HashSet<EdgeId> = path.iter().copied().collect();
        let (mut to_small, mut to_big) = (Vec::new(), Vec::new());
        for &e in &classes[small] {
            if on_path.contains(&e) {
                to_big.push(e);
            }
        }
        for &e in &classes[big] {
            if on_path.contains(&e) {
                to_small.push(e);
            }
        }
        classes[small].retain(|e| !on_path.contains(e));
        classes[big].retain(|e| !on_path.contains(e));
        classes[small].extend(to_small);
        classes[big].extend(to_big);
        classes[small].sort_unstable();
        classes[big].sort_unstable();

        assert!(deficit(&classes) < before, "balance made no progress");
    }
    let result = EdgeColouring::from_classes(classes);
    debug_assert!(result.is_proper(g));
    Ok(result)
}

/// A component of `small ∪ big` with one more `big` edge than `small` edge.
fn surplus_path(g: &Graph, small: &[EdgeId], big: &[EdgeId]) -> Vec<EdgeId> {
    let mut at: HashMap<Vertex, Vec<EdgeId>> = HashMap::new();
    let mut is_big: HashMap<EdgeId, bool> = HashMap::new();
    for (&e, flag) in small
        .iter()
        .map(|e| (e, false))
        .chain(big.iter().map(|e| (e, true)))
    {
        let (a, b) = g.endpoints(e);
        at.entry(a).or_default().push(e);
        at.entry(b).or_default().push(e);
        is_big.insert(e, flag);
    }
    let mut all: Vec<EdgeId> = is_big.keys().copied().collect();
    all.sort_unstable();
    let mut seen = std::collections::HashSet::new();
    for start in all {
        if !seen.insert(start) {
            continue;
        }
        let mut component = vec![start];
        let mut stack = vec![start];
        while let Some(e) = stack.pop() {
            let (a, b) = g.endpoints(e);
            for x in [a, b] {
                for &f in &at[&x] {
                    if seen.insert(f) {
                        component.push(f);
                        stack.push(f);
                    }
                }
            }
        }
        let bigs = component.iter().filter(|e| is_big[e]).count();
        if 2 * bigs == component.len() + 1 {
            return component;
        }
    }
    unreachable!("a larger class always leaves a surplus path")
}

/// Moves the classes containing `v`'s first `k` coloured edges to the front,
/// preserving the relative order of both groups.
pub fn order_classes_for_vertex(
    g: &Graph,
    c: &EdgeColouring,
    v: Vertex,
    k: usize,
) -> Result<EdgeColouring> {
    let mut holding: Vec<usize> = g
        .incident_edges(v)
        .iter()
        .filter_map(|&e| c.colour_of(e))
        .collect();
    holding.sort_unstable();
    if holding.len() < k {
        return Err(Error::NotEnoughClasses {
            vertex: v,
            found: holding.len(),
            wanted: k,
        });
    }
    holding.truncate(k);
    let mut order = holding.clone();
    order.extend((0..c.class_count()).filter(|i| !holding.contains(i)));
    Ok(EdgeColouring::from_classes(
        order.into_iter().map(|i| c.classes[i].clone()).collect(),
    ))
}
