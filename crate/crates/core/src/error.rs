use thiserror::Error;

use crate::graph::Vertex;

/// Every failure the library can report.
///
/// Vertex ids inside error payloads are 1-based, matching the text formats.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(Vertex, Vertex),
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("maximum degree is {found}, expected n-4 = {expected}")]
    WrongMaxDegree { found: usize, expected: usize },
    #[error("graph too small: n = {0}, need n >= 8")]
    TooSmall(usize),
    #[error("edge subset is not bipartite")]
    NotBipartite,
    #[error("degree {degree} exceeds colour count {colours}")]
    DegreeExceedsColours { degree: usize, colours: usize },
    #[error("cannot balance {edges} edges into {classes} classes of size >= {min_size}")]
    InfeasibleBalance {
        edges: usize,
        classes: usize,
        min_size: usize,
    },
    #[error("vertex {vertex} has {found} coloured edges, {wanted} requested")]
    NotEnoughClasses {
        vertex: Vertex,
        found: usize,
        wanted: usize,
    },
    #[error("vertex {0} is not adjacent to every other vertex")]
    NotUniversalVertex(Vertex),
    #[error("construction hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("proof violation: {what}")]
    ProofViolation {
        what: String,
        /// Graph in the text format, enough to replay the failure.
        reproducer: String,
    },
    #[error("graph has an isolated edge or several isolated vertices; it cannot be antimagic")]
    NotAntimagicShape,
    #[error("label {0} is not present in the labelling")]
    LabelMissing(usize),
    #[error("exhaustive search limited to m <= {limit}, got m = {m}")]
    TooLarge { m: usize, limit: usize },
    #[error("randomized search exhausted {iterations} iterations")]
    SearchFailed { iterations: u64 },
    #[error("regime cannot be generated: {0}")]
    InfeasibleRegime(String),
    #[error("generation failed after {0} attempts")]
    GenerationFailed(usize),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
