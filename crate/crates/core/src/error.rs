use thiserror::Error;

/// Errors raised while assembling or querying a [`crate::SurfaceComplex`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("p must be at least 3, got {0}")]
    BadSideCount(usize),
    #[error("duplicate {kind} id {id}")]
    DuplicateId { kind: &'static str, id: usize },
    #[error("{kind} ids must be dense 0..{len}, found {id}")]
    NonDenseId {
        kind: &'static str,
        id: usize,
        len: usize,
    },
    #[error("face {face} references undefined edge {edge}")]
    DanglingEdgeReference { face: usize, edge: usize },
    #[error("face {face} has {found} sides, expected {expected}")]
    WrongSideCount {
        face: usize,
        found: usize,
        expected: usize,
    },
    #[error("edge type {value} outside 1..={p}")]
    BadEdgeType { value: usize, p: usize },
    #[error("complex is not closed: edge {0} is not used once in each direction")]
    NotClosed(usize),
    #[error("vertex {vertex} has degree {degree}, expected 4")]
    NotRightAngled { vertex: usize, degree: usize },
    #[error("complex is untyped")]
    Untyped,
}

/// Errors from the tessellation builders and subdivisions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TessellationError {
    #[error("face count 8(g-1)/(p-4) = {numerator}/{denominator} is not an integer")]
    NonIntegralFaceCount { numerator: i64, denominator: i64 },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("bad divisibility: {0}")]
    BadDivisibility(String),
    #[error("construction failed: {0}")]
    ConstructionFailure(String),
    #[error("no chord system produces a valid subdivision: {0}")]
    CutSystemFailure(String),
    #[error("sequence is not {kind}-symmetric about axis {axis}")]
    SymmetryViolation { kind: usize, axis: usize },
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Errors from loop analysis and homology queries.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LoopError {
    #[error("chain is not a cycle (boundary is nonzero)")]
    NotACycle,
    #[error("chain has length {found}, expected {expected}")]
    ChainLength { found: usize, expected: usize },
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Errors from the good-coloring solver and holonomy transport.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColoringError {
    #[error("geodesic loop {0} traverses an edge in both directions")]
    DegenerateLoop(usize),
    #[error("exhaustive search needs E <= {limit}, complex has {edges} edges")]
    TooLargeForExhaustive { edges: usize, limit: usize },
    #[error("walk is not closed")]
    NotClosed,
    #[error("walk step {0} does not continue from the previous step")]
    Discontinuous(usize),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Errors from group assignment and the existence decision.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("not a good coloring: {0}")]
    NotGoodColoring(String),
    #[error("sequence is not alternating non-coprime")]
    NotAlternatingNonCoprime,
    #[error("face {face} gets inconsistent face groups at its corners")]
    FaceGroupInconsistency { face: usize },
    #[error("sequence has length {found}, expected {expected}")]
    SequenceLength { found: usize, expected: usize },
    #[error("sequence entries must be at least 2, found {0}")]
    ThicknessTooSmall(u64),
    #[error("odd p = {0} is not supported")]
    OddPUnsupported(usize),
    #[error("bad divisibility: {0}")]
    BadDivisibility(String),
    #[error("certification pipeline failed: {0}")]
    InternalError(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Tessellation(#[from] TessellationError),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error(transparent)]
    Loop(#[from] LoopError),
}

/// Errors reading or writing artifact files.
#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("expected format {expected:?}, found {found:?}")]
    WrongFormat {
        expected: &'static str,
        found: String,
    },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}
