//! Independent checks on labellings.
//!
//! Nothing here reads the cached sums of a [`Labelling`]: every vertex sum
//! is recomputed from the graph's edge list and the raw labels.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::construction::{StageOneResult, StageVariant};
use crate::decompose::InstanceDecomposition;
use crate::graph::{Graph, Vertex};
use crate::labelling::Labelling;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct BijectionReport {
    pub duplicates: Vec<usize>,
    pub missing: Vec<usize>,
    pub out_of_range: Vec<usize>,
}

impl BijectionReport {
    pub fn is_ok(&self) -> bool {
        self.duplicates.is_empty() && self.missing.is_empty() && self.out_of_range.is_empty()
    }
}

pub fn verify_bijection(g: &Graph, l: &Labelling) -> BijectionReport {
    let m = g.edge_count();
    let mut seen = vec![0usize; m + 1];
    let mut report = BijectionReport::default();
    for &label in l.labels() {
        if label == 0 || label > m {
            report.out_of_range.push(label);
        } else {
            seen[label] += 1;
        }
    }
    for (label, &count) in seen.iter().enumerate().skip(1) {
        match count {
            0 => report.missing.push(label),
            1 => {}
            _ => report.duplicates.push(label),
        }
    }
    report.out_of_range.sort_unstable();
    report.out_of_range.dedup();
    report
}

/// Vertex sums from scratch; isolated vertices sum to 0.
pub fn recompute_sums(g: &Graph, l: &Labelling) -> Vec<u64> {
    let mut sums = vec![0u64; g.vertex_count()];
    for (e, &(a, b)) in g.edges().iter().enumerate() {
        let label = l.labels()[e] as u64;
        sums[a] += label;
        sums[b] += label;
    }
    sums
}

/// Two vertices sharing a sum, with the labels around each (1-based ids).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Conflict {
    pub a: Vertex,
    pub b: Vertex,
    pub sum: u64,
    pub labels_a: Vec<usize>,
    pub labels_b: Vec<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct AntimagicReport {
    pub conflicts: Vec<Conflict>,
}

impl AntimagicReport {
    pub fn is_antimagic(&self) -> bool {
        self.conflicts.is_empty()
    }
}

fn incident_labels(g: &Graph, l: &Labelling, v: Vertex) -> Vec<usize> {
    let mut out: Vec<usize> = g.incident_edges(v).iter().map(|&e| l.labels()[e]).collect();
    out.sort_unstable();
    out
}

pub fn verify_antimagic(g: &Graph, l: &Labelling) -> AntimagicReport {
    let sums = recompute_sums(g, l);
    let mut by_sum: BTreeMap<u64, Vec<Vertex>> = BTreeMap::new();
    for (v, &s) in sums.iter().enumerate() {
        by_sum.entry(s).or_default().push(v);
    }
    let mut conflicts = Vec::new();
    for (&sum, group) in &by_sum {
        for (i, &a) in group.iter().enumerate() {
            for &b in &group[i + 1..] {
                conflicts.push(Conflict {
                    a: a + 1,
                    b: b + 1,
                    sum,
                    labels_a: incident_labels(g, l, a),
                    labels_b: incident_labels(g, l, b),
                });
            }
        }
    }
    AntimagicReport { conflicts }
}

/// One inequality of the stage-property suite. `margin >= 0` means it holds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyCheck {
    pub name: String,
    pub margin: i64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub checks: Vec<PropertyCheck>,
}

impl PropertyReport {
    pub fn is_ok(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &PropertyCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn margin(&self, name: &str) -> Option<i64> {
        self.checks
            .iter()
            .find(|c| c.name == name)
            .map(|c| c.margin)
    }

    fn push(&mut self, name: &str, margin: i64, witness: impl FnOnce() -> String) {
        let passed = margin >= 0;
        self.checks.push(PropertyCheck {
            name: name.to_string(),
            margin,
            passed,
            witness: (!passed).then(witness),
        });
    }
}

/// Smallest gap between consecutive sorted H sums, minus `required`.
fn h_gap(sums: &[u64], d: &InstanceDecomposition, required: i64) -> (i64, String) {
    let mut h: Vec<(u64, Vertex)> = d.h_vertices.iter().map(|&v| (sums[v], v)).collect();
    h.sort_unstable();
    let mut worst = (i64::MAX, String::new());
    for w in h.windows(2) {
        let gap = w[1].0 as i64 - w[0].0 as i64 - required;
        if gap < worst.0 {
            worst = (
                gap,
                format!(
                    "vertices {} and {} with sums {} and {}",
                    w[0].1 + 1,
                    w[1].1 + 1,
                    w[0].0,
                    w[1].0
                ),
            );
        }
    }
    if h.len() < 2 {
        worst.0 = 0;
    }
    worst
}

/// Number of (vertex, interval) pairs holding more than one label. Interval
/// `j` is the set of offsets `step*j + 1 ..= step*j + step - 1` below `m`.
fn interval_overflows(
    g: &Graph,
    labels: &[usize],
    d: &InstanceDecomposition,
    step: usize,
    intervals: usize,
) -> (i64, String) {
    let m = g.edge_count();
    let mut bad = 0i64;
    let mut witness = String::new();
    for v in 0..g.vertex_count() {
        if v == d.r {
            continue;
        }
        let mut hits = vec![0usize; intervals];
        for &e in g.incident_edges(v) {
            let offset = m - labels[e];
            if !offset.is_multiple_of(step) && offset / step < intervals {
                hits[offset / step] += 1;
            }
        }
        for (j, &h) in hits.iter().enumerate() {
            if h > 1 {
                bad += 1;
                if witness.is_empty() {
                    witness = format!("vertex {} holds {h} labels of interval {}", v + 1, j + 1);
                }
            }
        }
    }
    (-bad, witness)
}

/// Checks the gap properties the construction for `s.variant` promises.
pub fn verify_stage_properties(
    g: &Graph,
    s: &StageOneResult,
    d: &InstanceDecomposition,
) -> PropertyReport {
    let sums = recompute_sums(g, &s.labelling);
    let n = g.vertex_count();
    let sig = |v: Vertex| sums[v] as i64;
    let [u1, u2, u3] = d.u;
    let r = d.r;
    let max_h = d.h_vertices.iter().map(|&v| sig(v)).max().unwrap_or(0);
    let min_h = d.h_vertices.iter().map(|&v| sig(v)).min().unwrap_or(0);
    let max_other = (0..n).filter(|&v| v != r).map(sig).max().unwrap_or(0);
    let arg = |target: i64| {
        (0..n)
            .filter(|&v| v != r && sig(v) == target)
            .map(|v| (v + 1).to_string())
            .collect::<Vec<_>>()
            .join(",")
    };
    let labels = s.labelling.labels();
    let mut report = PropertyReport::default();

    match s.variant {
        StageVariant::Main => {
            report.push("sigma(u3)+4 <= sigma(u2)", sig(u2) - sig(u3) - 4, || {
                format!("sigma(u3)={}, sigma(u2)={}", sig(u3), sig(u2))
            });
            report.push("sigma(u2)+4 <= sigma(u1)", sig(u1) - sig(u2) - 4, || {
                format!("sigma(u2)={}, sigma(u1)={}", sig(u2), sig(u1))
            });
            report.push("sigma(r) >= sigma(x)+4", sig(r) - max_other - 4, || {
                format!(
                    "sigma(r)={}, vertex {} has {}",
                    sig(r),
                    arg(max_other),
                    max_other
                )
            });
            let (gap, w) = h_gap(&sums, d, 4);
            report.push("H gap >= 4", gap, || w);
            let (over, w) = interval_overflows(g, labels, d, 4, n - 5);
            report.push("interval discipline", over, || w);
        }
        StageVariant::CaseI1 => {
            report.push("sigma(u1) <= 38", 38 - sig(u1), || {
                format!("sigma(u1)={}", sig(u1))
            });
            report.push("min H sum >= 101", min_h - 101, || {
                format!("min H sum {min_h}")
            });
            let (gap, w) = h_gap(&sums, d, 1);
            report.push("H gap >= 1", gap, || w);
        }
        StageVariant::CaseI2 => {
            let (gap, w) = h_gap(&sums, d, 2);
            report.push("H gap >= 2", gap, || w);
            report.push("sigma(r) >= sigma(v)+4 on H", sig(r) - max_h - 4, || {
                format!("sigma(r)={}, max H sum {max_h}", sig(r))
            });
            report.push("sigma(u2)+4 <= sigma(u1)", sig(u1) - sig(u2) - 4, || {
                format!("sigma(u2)={}, sigma(u1)={}", sig(u2), sig(u1))
            });
            report.push("sigma(u2) < 30", 29 - sig(u2), || {
                format!("sigma(u2)={}", sig(u2))
            });
            report.push("min H sum >= 89", min_h - 89, || {
                format!("min H sum {min_h}")
            });
        }
        StageVariant::CaseI3 => {
            let (gap, w) = h_gap(&sums, d, 3);
            report.push("H gap >= 3", gap, || w);
            report.push("sigma(u1)+4 <= sigma(r)", sig(r) - sig(u1) - 4, || {
                format!("sigma(u1)={}, sigma(r)={}", sig(u1), sig(r))
            });
            report.push("sigma(u2)+4 <= sigma(u1)", sig(u1) - sig(u2) - 4, || {
                format!("sigma(u2)={}, sigma(u1)={}", sig(u2), sig(u1))
            });
            report.push("sigma(u3) <= 18", 18 - sig(u3), || {
                format!("sigma(u3)={}", sig(u3))
            });
            report.push("sigma(r) >= sigma(v)+4 on H", sig(r) - max_h - 4, || {
                format!("sigma(r)={}, max H sum {max_h}", sig(r))
            });
            let (over, w) = interval_overflows(g, labels, d, 3, n - 5);
            report.push("interval discipline", over, || w);
        }
        StageVariant::TripleComponent | StageVariant::DeltaN1 => {
            let conflicts = verify_antimagic(g, &s.labelling).conflicts.len() as i64;
            report.push("antimagic", -conflicts, || {
                format!("{conflicts} conflicting pairs")
            });
        }
    }
    if s.variant != StageVariant::CaseI2 {
        report.push("sigma(r) unique max", sig(r) - max_other - 1, || {
            format!(
                "sigma(r)={}, vertex {} has {}",
                sig(r),
                arg(max_other),
                max_other
            )
        });
    }
    report
}
