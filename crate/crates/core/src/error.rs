use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("identifier `{0}` must match [A-Za-z0-9_]+")]
    BadIdentifier(String),
    #[error("vertex `{0}` declared twice")]
    DuplicateVertex(String),
    #[error("edge `{0}` declared twice")]
    DuplicateEdge(String),
    #[error("vertex `{0}` used before declaration")]
    UndeclaredVertex(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("vertex set is not hereditary and C-saturated")]
    NotHereditarySaturated,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("malformed line `{0}`")]
    Malformed(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiteralError {
    #[error("empty literal")]
    Empty,
    #[error("malformed symbol `{0}`")]
    BadSymbol(String),
    #[error("malformed term `{0}`")]
    BadTerm(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Errors raised by the analyses.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("trivial path given where a non-trivial one is required")]
    TrivialPath,
    #[error("word is not an admissible path")]
    NotAdmissible,
    #[error("paths have different sources")]
    SourceMismatch,
    #[error("vertex `{0}` is not branching")]
    NotBranching(String),
    #[error("graph has a branching vertex `{0}`")]
    HasBranchingVertex(String),
    #[error("graph is not its own branching subgraph (vertex `{0}` hooks no branching vertex)")]
    NotOwnBranchingSubgraph(String),
    #[error("graph does not satisfy Condition (N) at `{0}`")]
    ConditionNFails(String),
    #[error("edge `{edge}` matches {count} classification cases")]
    ClassificationConflict { edge: String, count: usize },
    #[error("orientation is {0}")]
    BadOrientation(String),
    #[error("orientation does not cover edge `{0}`")]
    MissingSign(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("internal verification failed: {0}")]
    Internal(String),
    #[error("word is outside the domain of the configuration")]
    OutOfDomain,
    #[error("depth {depth} is too small, need at least {needed}")]
    DepthTooSmall { depth: usize, needed: usize },
    #[error("configuration constraints are inconsistent")]
    Inconsistent,
}
