//! End-to-end labelling: decompose, construct, resolve, verify.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::construction::{
    label_case_i1, label_case_i2, label_case_i3, label_delta_n1, label_disconnected,
    label_main_with, StageOneResult,
};
use crate::decompose::{classify_regime, decompose, InstanceDecomposition, Regime};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::labelling::Labelling;
use crate::oracle::randomized_search;
use crate::resolution::{resolve, Exchange, ResolutionTrace};
use crate::verify::{verify_antimagic, verify_bijection, verify_stage_properties};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelOptions {
    /// Seed for the fallback search and, with `shuffle`, for the MAIN
    /// leftover order.
    pub seed: u64,
    pub fallback_iters: u64,
    /// Route the graph to this regime's constructor regardless of
    /// classification.
    pub force_regime: Option<Regime>,
    pub shuffle: bool,
}

impl Default for LabelOptions {
    fn default() -> Self {
        LabelOptions {
            seed: 0,
            fallback_iters: 1_000_000,
            force_regime: None,
            shuffle: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LabelStatus {
    /// Produced by a construction (plus exchanges).
    Constructed,
    /// Produced by the randomized fallback search.
    SearchedFallback,
}

#[derive(Debug, Clone)]
pub struct LabelOutcome {
    pub status: LabelStatus,
    pub regime: Regime,
    pub labelling: Labelling,
    pub stage: Option<StageOneResult>,
    pub decomposition: Option<InstanceDecomposition>,
    pub resolution: Option<ResolutionTrace>,
    pub warnings: Vec<String>,
}

pub fn label(g: &Graph) -> Result<LabelOutcome> {
    label_with(g, &LabelOptions::default())
}

pub fn label_with(g: &Graph, opts: &LabelOptions) -> Result<LabelOutcome> {
    if !g.has_antimagic_shape() {
        return Err(Error::NotAntimagicShape);
    }
    let n = g.vertex_count();
    if n >= 2 && g.max_degree() == n - 1 {
        let r = (0..n)
            .find(|&v| g.degree(v) == n - 1)
            .expect("max degree attained");
        let l = label_delta_n1(g, r)?;
        return finish(
            g,
            l,
            LabelStatus::Constructed,
            Regime::DeltaN1,
            None,
            None,
            None,
            Vec::new(),
        );
    }
    let d = match decompose(g) {
        Ok(d) => d,
        Err(_) => return fallback(g, opts, Regime::Unsupported, None, Vec::new()),
    };
    let regime = opts.force_regime.unwrap_or_else(|| classify_regime(g, &d));
    let stage = match regime {
        Regime::Main => label_main_with(g, &d, opts.shuffle.then_some(opts.seed))?,
        Regime::DegenI1 => label_case_i1(g, &d)?,
        Regime::DegenI2 => label_case_i2(g, &d)?,
        Regime::DegenI3 => label_case_i3(g, &d)?,
        Regime::DiscU3Isolated | Regime::DiscTripleComponent => label_disconnected(g, &d)?,
        Regime::DeltaN1 => {
            return Err(Error::HypothesisViolated(format!(
                "maximum degree is {}, not n-1",
                g.max_degree()
            )))
        }
        Regime::CommonNeighbourFallback | Regime::Unsupported => {
            let warnings = vec![format!(
                "regime {regime} has no construction; used randomized search"
            )];
            return fallback(g, opts, regime, Some(d), warnings);
        }
    };
    let (l, trace) = resolve(g, &stage, &d)?;
    let mut warnings = Vec::new();
    if trace.proof_gap {
        warnings.push(format!(
            "ProofGapWarning: case {} resolved by exhaustive exchange search",
            trace.case
        ));
    }
    let regime = stage.regime;
    finish(
        g,
        l,
        LabelStatus::Constructed,
        regime,
        Some(stage),
        Some(d),
        Some(trace),
        warnings,
    )
}

fn fallback(
    g: &Graph,
    opts: &LabelOptions,
    regime: Regime,
    d: Option<InstanceDecomposition>,
    warnings: Vec<String>,
) -> Result<LabelOutcome> {
    let l = randomized_search(g, opts.fallback_iters, opts.seed)?;
    finish(
        g,
        l,
        LabelStatus::SearchedFallback,
        regime,
        None,
        d,
        None,
        warnings,
    )
}

#[allow(clippy::too_many_arguments)]
fn finish(
    g: &Graph,
    labelling: Labelling,
    status: LabelStatus,
    regime: Regime,
    stage: Option<StageOneResult>,
    decomposition: Option<InstanceDecomposition>,
    resolution: Option<ResolutionTrace>,
    warnings: Vec<String>,
) -> Result<LabelOutcome> {
    let b = verify_bijection(g, &labelling);
    if !b.is_ok() {
        return Err(crate::construction::proof_violation(
            g,
            format!("final labelling is not a bijection: {b:?}"),
        ));
    }
    if let Some(c) = verify_antimagic(g, &labelling).conflicts.first() {
        return Err(crate::construction::proof_violation(
            g,
            format!(
                "final labelling repeats sum {} at vertices {} and {}",
                c.sum, c.a, c.b
            ),
        ));
    }
    Ok(LabelOutcome {
        status,
        regime,
        labelling,
        stage,
        decomposition,
        resolution,
        warnings,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceDecomposition {
    pub r: usize,
    pub u: [usize; 3],
    pub d_prime: [usize; 3],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceProperties {
    /// Property name -> margin; negative means it failed.
    pub gaps: BTreeMap<String, i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceResolution {
    pub case: String,
    pub plans_tried: usize,
    pub applied: Vec<Exchange>,
}

/// Serializable run summary. Vertex ids are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Trace {
    pub regime: Regime,
    pub decomposition: Option<TraceDecomposition>,
    /// Vertex sums after stage one, indexed by vertex.
    pub stage_sums: Vec<u64>,
    pub properties: TraceProperties,
    pub resolution: Option<TraceResolution>,
    pub status: LabelStatus,
    pub warnings: Vec<String>,
}

impl Trace {
    pub fn new(g: &Graph, out: &LabelOutcome) -> Self {
        let decomposition = out.decomposition.as_ref().map(|d| TraceDecomposition {
            r: d.r + 1,
            u: d.u.map(|v| v + 1),
            d_prime: d.d_prime,
        });
        let mut gaps = BTreeMap::new();
        if let (Some(s), Some(d)) = (&out.stage, &out.decomposition) {
            for c in verify_stage_properties(g, s, d).checks {
                gaps.insert(c.name, c.margin);
            }
        }
        Trace {
            regime: out.regime,
            decomposition,
            stage_sums: out
                .stage
                .as_ref()
                .map(|s| s.labelling.sums().to_vec())
                .unwrap_or_default(),
            properties: TraceProperties { gaps },
            resolution: out.resolution.as_ref().map(|r| TraceResolution {
                case: r.case.clone(),
                plans_tried: r.plans_tried,
                applied: r.applied.clone(),
            }),
            status: out.status,
            warnings: out.warnings.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trace serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::{gen_instance, gen_universal, RegimeTarget};
    use crate::graph::build_graph;

    #[test]
    fn constructs_every_supported_regime() {
        for target in RegimeTarget::CONSTRUCTIVE {
            let n = crate::generator::min_vertices(target) + 2;
            let g = gen_instance(n, target, 11).unwrap();
            let out = label(&g).unwrap();
            assert_eq!(out.status, LabelStatus::Constructed);
            assert_eq!(out.regime, target.regime());
            assert!(verify_antimagic(&g, &out.labelling).is_antimagic());
        }
    }

    #[test]
    fn common_neighbour_goes_to_search() {
        let g = gen_instance(20, RegimeTarget::CommonNeighbour, 1).unwrap();
        let out = label(&g).unwrap();
        assert_eq!(out.status, LabelStatus::SearchedFallback);
        assert_eq!(out.regime, Regime::CommonNeighbourFallback);
        assert!(!out.warnings.is_empty());
    }

    #[test]
    fn sparse_graph_is_unsupported_but_labelled() {
        let g = build_graph(5, &[(1, 2), (2, 3), (3, 4), (4, 5)]).unwrap();
        let out = label(&g).unwrap();
        assert_eq!(out.status, LabelStatus::SearchedFallback);
        assert_eq!(out.regime, Regime::Unsupported);
    }

    #[test]
    fn universal_vertex_path() {
        let g = gen_universal(9, 4);
        let out = label(&g).unwrap();
        assert_eq!(out.regime, Regime::DeltaN1);
        assert_eq!(out.status, LabelStatus::Constructed);
    }

    #[test]
    fn k2_is_rejected() {
        let g = build_graph(2, &[(1, 2)]).unwrap();
        assert_eq!(label(&g).unwrap_err(), Error::NotAntimagicShape);
    }

    #[test]
    fn forcing_a_wrong_regime_fails_cleanly() {
        let g = gen_instance(21, RegimeTarget::DegenI1, 2).unwrap();
        let opts = LabelOptions {
            force_regime: Some(Regime::Main),
            ..Default::default()
        };
        assert!(matches!(
            label_with(&g, &opts),
            Err(Error::HypothesisViolated(_))
        ));
    }

    #[test]
    fn trace_is_deterministic() {
        let g = gen_instance(23, RegimeTarget::MainTripleEdges, 5).unwrap();
        let a = label(&g).unwrap();
        let b = label(&g).unwrap();
        assert_eq!(a.labelling, b.labelling);
        let ta = Trace::new(&g, &a).to_json();
        assert_eq!(ta, Trace::new(&g, &b).to_json());
        assert!(ta.contains("\"regime\": \"MAIN\""));
    }
}
