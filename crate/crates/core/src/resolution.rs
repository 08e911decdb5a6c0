//! Label exchanges that remove the equal-sum pairs a stage-one labelling
//! may leave between a triple vertex and a vertex of H.
//!
//! Every exchange swaps the labels `m - offset` and `m - offset - 1`, so no
//! sum moves by more than one per exchange. The menus below list the plans
//! the case analysis says will work; each is applied to a copy and fully
//! re-verified, and the first that passes is kept. If none does, every
//! plan of length at most two over the regime's exchanges is tried as a
//! safety net, and a success there is reported as a proof gap.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::construction::{proof_violation, StageOneResult, StageVariant};
use crate::decompose::InstanceDecomposition;
use crate::error::Result;
use crate::graph::{Graph, Vertex};
use crate::labelling::Labelling;
use crate::verify::verify_antimagic;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Lambda,
    Gamma,
    Mu,
    Rho,
    Named,
}

impl Family {
    fn symbol(self) -> &'static str {
        match self {
            Family::Lambda => "lambda",
            Family::Gamma => "gamma",
            Family::Mu => "mu",
            Family::Rho => "rho",
            Family::Named => "swap",
        }
    }
}

/// Swap of the labels `m - offset` and `m - offset - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Exchange {
    pub family: Family,
    pub offset: usize,
}

impl Exchange {
    pub const fn new(family: Family, offset: usize) -> Self {
        Exchange { family, offset }
    }

    pub fn labels(self, m: usize) -> (usize, usize) {
        (m - self.offset, m - self.offset - 1)
    }
}

impl fmt::Display for Exchange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.family.symbol(), self.offset)
    }
}

const fn family(f: Family, offsets: [usize; 4]) -> [Exchange; 4] {
    [
        Exchange::new(f, offsets[0]),
        Exchange::new(f, offsets[1]),
        Exchange::new(f, offsets[2]),
        Exchange::new(f, offsets[3]),
    ]
}

pub const MAIN_LAMBDA: [Exchange; 4] = family(Family::Lambda, [1, 5, 9, 13]);
pub const MAIN_GAMMA: [Exchange; 4] = family(Family::Gamma, [2, 6, 10, 14]);
pub const MAIN_MU: [Exchange; 4] = family(Family::Mu, [0, 4, 8, 12]);
pub const MAIN_RHO: [Exchange; 4] = family(Family::Rho, [3, 7, 11, 15]);
pub const I3_LAMBDA: [Exchange; 4] = family(Family::Lambda, [1, 4, 7, 10]);
pub const I3_MU: [Exchange; 4] = family(Family::Mu, [0, 3, 6, 9]);
pub const I3_RHO: [Exchange; 4] = family(Family::Rho, [2, 5, 8, 11]);

/// Equal-sum pairs, plus each triple vertex's closest vertex of H.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ConflictSet {
    pub pairs: Vec<(Vertex, Vertex)>,
    pub rivals: [Option<Vertex>; 3],
}

impl ConflictSet {
    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn involves(&self, v: Vertex) -> bool {
        self.pairs.iter().any(|&(a, b)| a == v || b == v)
    }

    /// Which of `u1, u2, u3` share a sum with another vertex.
    pub fn conflicted(&self, d: &InstanceDecomposition) -> [bool; 3] {
        d.u.map(|u| self.involves(u))
    }
}

pub fn find_conflicts(l: &Labelling, d: &InstanceDecomposition) -> ConflictSet {
    let mut by_sum: BTreeMap<u64, Vec<Vertex>> = BTreeMap::new();
    for (v, &s) in l.sums().iter().enumerate() {
        by_sum.entry(s).or_default().push(v);
    }
    let mut pairs = Vec::new();
    for group in by_sum.values() {
        for (i, &a) in group.iter().enumerate() {
            pairs.extend(group[i + 1..].iter().map(|&b| (a, b)));
        }
    }
    let rivals = d.u.map(|u| {
        let target = l.sum(u);
        d.h_vertices
            .iter()
            .copied()
            .min_by_key(|&v| (l.sum(v).abs_diff(target), v))
    });
    ConflictSet { pairs, rivals }
}

/// Swaps the labels named by `x`.
pub fn apply_exchange(g: &Graph, l: &Labelling, x: Exchange) -> Result<Labelling> {
    let (a, b) = x.labels(g.edge_count());
    let mut out = l.clone();
    out.swap_labels(g, a, b)?;
    Ok(out)
}

/// Plans suggested by the case analysis, then the exhaustive tail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanMenu {
    pub case: String,
    pub directed: Vec<Vec<Exchange>>,
    pub safety_net: Vec<Vec<Exchange>>,
}

fn singles(xs: &[Exchange]) -> Vec<Vec<Exchange>> {
    xs.iter().map(|&x| vec![x]).collect()
}

fn pairs(first: &[Exchange], second: &[Exchange]) -> Vec<Vec<Exchange>> {
    first
        .iter()
        .flat_map(|&a| second.iter().map(move |&b| vec![a, b]))
        .collect()
}

fn safety_net(pool: &[Exchange]) -> Vec<Vec<Exchange>> {
    let mut plans = singles(pool);
    for &a in pool {
        for &b in pool {
            if a != b {
                plans.push(vec![a, b]);
            }
        }
    }
    plans
}

fn main_menu(c: &ConflictSet, s: &StageOneResult, d: &InstanceDecomposition) -> PlanMenu {
    let sig = |v: Vertex| s.labelling.sum(v) as i64;
    let y = |i: usize| s.y_map.get(&i).copied();
    let [v1, v2, v3] = c.rivals;
    let [u1, u2, u3] = d.u;
    let gap = |u: Vertex, v: Option<Vertex>| v.map(|v| sig(v) - sig(u));
    let conflicted = c.conflicted(d);
    let mut directed = Vec::new();
    let case: String = match conflicted {
        [true, true, true] => {
            let ok: Vec<Exchange> = MAIN_LAMBDA
                .iter()
                .copied()
                .filter(|x| y(x.offset) != v1 && y(x.offset + 1) != v2)
                .collect();
            directed.extend(singles(&ok));
            directed.extend(pairs(&ok, &MAIN_RHO));
            "1".into()
        }
        [true, true, false] => {
            directed.extend(singles(&MAIN_LAMBDA));
            "2".into()
        }
        [false, true, true] => {
            directed.extend(singles(&MAIN_GAMMA));
            "3".into()
        }
        [true, false, true] => {
            if gap(u2, v2).is_none_or(|x| x.abs() >= 2) {
                let ok: Vec<Exchange> = MAIN_LAMBDA
                    .iter()
                    .copied()
                    .filter(|x| y(x.offset) != v1 && y(x.offset) != v2)
                    .collect();
                directed.extend(singles(&ok));
                directed.extend(pairs(&ok, &MAIN_RHO));
                "4.1".into()
            } else {
                directed.extend(singles(&MAIN_RHO));
                directed.extend(singles(&MAIN_MU));
                directed.extend(pairs(&MAIN_MU, &MAIN_RHO));
                "4.2".into()
            }
        }
        [true, false, false] => {
            directed.extend(singles(&MAIN_MU));
            "5".into()
        }
        [false, false, true] => {
            directed.extend(singles(&MAIN_RHO));
            "6".into()
        }
        [false, true, false] => {
            let g1 = gap(u1, v1);
            let g3 = gap(u3, v3);
            if g1.is_none_or(|x| x.abs() >= 2) {
                directed.extend(singles(&MAIN_LAMBDA));
                "7.1".into()
            } else if g1 == Some(1) {
                directed.extend(singles(&MAIN_LAMBDA));
                "7.2".into()
            } else if g3.is_none_or(|x| x.abs() >= 2) {
                directed.extend(singles(&MAIN_GAMMA));
                "7.3".into()
            } else if g3 == Some(-1) {
                directed.extend(singles(&MAIN_GAMMA));
                "7.4".into()
            } else {
                directed.extend(singles(&MAIN_MU));
                for mu in MAIN_MU {
                    for lambda in MAIN_LAMBDA {
                        if lambda.offset != mu.offset + 1 {
                            directed.push(vec![mu, lambda]);
                        }
                    }
                }
                "7.5".into()
            }
        }
        [false, false, false] => "outside case analysis".into(),
    };
    let pool: Vec<Exchange> = [MAIN_LAMBDA, MAIN_GAMMA, MAIN_MU, MAIN_RHO].concat();
    PlanMenu {
        case,
        directed,
        safety_net: safety_net(&pool),
    }
}

/// The exchange menu for a stage-one result with conflicts `c`.
pub fn candidate_plans(
    g: &Graph,
    c: &ConflictSet,
    s: &StageOneResult,
    d: &InstanceDecomposition,
) -> PlanMenu {
    if c.is_empty() {
        return PlanMenu {
            case: "none".into(),
            directed: Vec::new(),
            safety_net: Vec::new(),
        };
    }
    match s.variant {
        StageVariant::Main => main_menu(c, s, d),
        StageVariant::CaseI2 => {
            let below = 2 * (g.vertex_count() - 5) + 1;
            let pool = [
                Exchange::new(Family::Named, 0),
                Exchange::new(Family::Named, below),
            ];
            PlanMenu {
                case: "i2".into(),
                directed: singles(&pool),
                safety_net: safety_net(&pool),
            }
        }
        StageVariant::CaseI3 => {
            let (case, directed) = match c.conflicted(d) {
                [true, true, _] => ("i3.1", singles(&I3_LAMBDA)),
                [true, false, _] => ("i3.2", singles(&I3_MU)),
                [false, true, _] => ("i3.3", singles(&I3_RHO)),
                _ => ("i3 outside case analysis", Vec::new()),
            };
            PlanMenu {
                case: case.into(),
                directed,
                safety_net: safety_net(&[I3_LAMBDA, I3_MU, I3_RHO].concat()),
            }
        }
        StageVariant::CaseI1 | StageVariant::TripleComponent | StageVariant::DeltaN1 => PlanMenu {
            case: "no exchanges".into(),
            directed: Vec::new(),
            safety_net: Vec::new(),
        },
    }
}

/// A plan that was tried and turned down.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rejection {
    pub plan: Vec<Exchange>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ResolutionTrace {
    pub case: String,
    pub plans_tried: usize,
    pub applied: Vec<Exchange>,
    pub rejected: Vec<Rejection>,
    /// The accepted plan came from the safety net rather than the case
    /// analysis.
    pub proof_gap: bool,
}

/// Applies `plan` and checks the result; `Err` carries the rejection
/// reason.
fn try_plan(
    g: &Graph,
    base: &Labelling,
    r: Vertex,
    plan: &[Exchange],
) -> std::result::Result<Labelling, String> {
    let mut l = base.clone();
    for &x in plan {
        let (a, b) = x.labels(g.edge_count());
        l.swap_labels(g, a, b).map_err(|e| e.to_string())?;
    }
    if let Some(c) = verify_antimagic(g, &l).conflicts.first() {
        return Err(format!("vertices {} and {} share sum {}", c.a, c.b, c.sum));
    }
    for v in 0..g.vertex_count() {
        if l.sum(v).abs_diff(base.sum(v)) > 2 {
            return Err(format!("sum of vertex {} moves by more than 2", v + 1));
        }
    }
    if base.sum(r) > l.sum(r) + 1 {
        return Err("root sum drops by more than 1".into());
    }
    if (0..g.vertex_count()).any(|v| v != r && l.sum(v) >= l.sum(r)) {
        return Err("root sum no longer the strict maximum".into());
    }
    Ok(l)
}

/// Removes the conflicts left by stage one.
pub fn resolve(
    g: &Graph,
    s: &StageOneResult,
    d: &InstanceDecomposition,
) -> Result<(Labelling, ResolutionTrace)> {
    let c = find_conflicts(&s.labelling, d);
    if c.is_empty() {
        return Ok((
            s.labelling.clone(),
            ResolutionTrace {
                case: "none".into(),
                ..Default::default()
            },
        ));
    }
    let outside_triple = c
        .pairs
        .iter()
        .find(|&&(a, b)| d.u_index(a).is_none() && d.u_index(b).is_none());
    if let Some(&(a, b)) = outside_triple {
        return Err(proof_violation(
            g,
            format!(
                "{} stage one left vertices {} and {} with equal sums",
                s.regime,
                a + 1,
                b + 1
            ),
        ));
    }
    let menu = candidate_plans(g, &c, s, d);
    let mut trace = ResolutionTrace {
        case: menu.case.clone(),
        ..Default::default()
    };
    for (net, plans) in [(false, &menu.directed), (true, &menu.safety_net)] {
        for plan in plans {
            trace.plans_tried += 1;
            match try_plan(g, &s.labelling, d.r, plan) {
                Ok(l) => {
                    trace.applied = plan.clone();
                    trace.proof_gap = net;
                    return Ok((l, trace));
                }
                Err(reason) => trace.rejected.push(Rejection {
                    plan: plan.clone(),
                    reason,
                }),
            }
        }
    }
    let pairs: Vec<String> = c
        .pairs
        .iter()
        .map(|&(a, b)| format!("{}~{}", a + 1, b + 1))
        .collect();
    Err(proof_violation(
        g,
        format!(
            "{} case {}: no exchange plan removes conflicts [{}] ({} plans tried)",
            s.regime,
            menu.case,
            pairs.join(", "),
            trace.plans_tried
        ),
    ))
}
