//! Antimagic edge labellings for graphs with maximum degree `n - 4` and at
//! least `7n` edges.
//!
//! The pipeline is: [`decompose`] the graph around a maximum-degree root,
//! [`classify_regime`], build a stage-one labelling for that regime, then
//! [`resolve`] any remaining equal-sum pairs with small label exchanges.
//! [`label`] runs the whole thing and falls back to a randomized search
//! outside the supported hypotheses.
//!
//! ```
//! use antimagic_core::{gen_instance, label, verify_antimagic, RegimeTarget};
//!
//! let g = gen_instance(20, RegimeTarget::Main, 3).unwrap();
//! let out = label(&g).unwrap();
//! assert!(verify_antimagic(&g, &out.labelling).is_antimagic());
//! ```

pub mod colouring;
pub mod construction;
pub mod decompose;
pub mod error;
pub mod format;
pub mod generator;
pub mod graph;
pub mod labelling;
pub mod oracle;
pub mod pipeline;
pub mod resolution;
pub mod verify;

pub use colouring::{
    balance_classes, koenig_colour, order_classes_for_vertex, vizing_colour, EdgeColouring,
};
pub use construction::{
    label_case_i1, label_case_i2, label_case_i3, label_delta_n1, label_disconnected, label_main,
    label_main_with, main_g1_edges, Interval, StageOneResult, StageVariant,
};
pub use decompose::{classify_regime, decompose, degenerate_index, InstanceDecomposition, Regime};
pub use error::{Error, Result};
pub use format::{parse_graph, parse_labelling, write_graph, write_labelling};
pub use generator::{
    gen_corpus, gen_instance, gen_sampled, gen_universal, min_vertices, CorpusEntry, RegimeTarget,
};
pub use graph::{build_graph, EdgeId, Graph, Vertex};
pub use labelling::Labelling;
pub use oracle::{exhaustive_search, randomized_search, ExhaustiveOutcome};
pub use pipeline::{label, label_with, LabelOptions, LabelOutcome, LabelStatus, Trace};
pub use resolution::{
    apply_exchange, candidate_plans, find_conflicts, resolve, ConflictSet, Exchange, Family,
    PlanMenu, ResolutionTrace,
};
pub use verify::{
    recompute_sums, verify_antimagic, verify_bijection, verify_stage_properties, AntimagicReport,
    BijectionReport, PropertyReport,
};
