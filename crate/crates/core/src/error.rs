use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    // corpus
    #[error("input is not valid UTF-8 (first invalid byte at offset {offset})")]
    InvalidEncoding { offset: usize },
    #[error("control character U+{code:04X} at character offset {offset}")]
    ControlCharacter { code: u32, offset: usize },
    #[error("document contains no tokens")]
    EmptyDocument,
    #[error("segment count must be at least 1")]
    ZeroSegments,
    #[error("segment count {requested} exceeds the token count {tokens}")]
    SegmentCountTooLarge { requested: usize, tokens: usize },
    #[error("term list is empty")]
    NoTerms,

    // entities
    #[error("mention file does not match the import schema: {0}")]
    Schema(String),
    #[error("mention record {index}: text at {start}..{end} is {found:?}, record says {expected:?}")]
    SpanMismatch {
        index: usize,
        start: usize,
        end: usize,
        expected: String,
        found: String,
    },
    #[error("mention record {index}: span {start}..{end} is outside the document ({len} characters)")]
    OutOfBounds {
        index: usize,
        start: usize,
        end: usize,
        len: usize,
    },
    #[error("mention record {index}: span {start}..{end} crosses a sentence boundary")]
    CrossSentenceSpan { index: usize, start: usize, end: usize },
    #[error("alias {alias:?} maps to both {first:?} and {second:?}")]
    ConflictingAlias {
        alias: String,
        first: String,
        second: String,
    },
    #[error("no entity satisfies min_refs={min_refs}, min_interactions={min_interactions}")]
    EmptySelection {
        min_refs: usize,
        min_interactions: usize,
    },

    // graph
    #[error("graph has no edges (total edge weight is zero)")]
    EmptyGraph,
    #[error("node index {index} out of range for a graph with {nodes} nodes")]
    NodeOutOfRange { index: usize, nodes: usize },
    #[error("self-loop on node {0}")]
    SelfLoop(usize),
    #[error("partition covers {got} nodes, graph has {expected}")]
    PartitionSize { expected: usize, got: usize },

    // factors
    #[error("need at least 2 entities for factor analysis, got {0}")]
    TooFewEntities(usize),
    #[error("every column of the feature matrix has zero variance")]
    AllColumnsDegenerate,
    #[error("matrix must be standardized before PCA")]
    NotStandardized,
    #[error("component count {k} must be in 1..={max}")]
    InvalidComponentCount { k: usize, max: usize },
    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps")]
    ConvergenceFailure { sweeps: usize },
    #[error("cluster count {k} must be in 1..={n}")]
    InvalidClusterCount { k: usize, n: usize },

    // export
    #[error("trend chart needs at least 2 segments, got {0}")]
    DegenerateSeries(usize),
    #[error("frequency table is empty")]
    EmptyTable,
    #[error("malformed GraphML: {0}")]
    GraphMl(String),

    // pipeline / io
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("missing prerequisite file {0} (run the earlier stage first)")]
    MissingPrerequisite(PathBuf),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for failures of the environment or the configuration rather than
    /// of the analysis itself.
    pub fn is_usage_error(&self) -> bool {
        matches!(
            self,
            Error::Io { .. }
                | Error::Config(_)
                | Error::MissingPrerequisite(_)
                | Error::Schema(_)
                | Error::InvalidEncoding { .. }
                | Error::ControlCharacter { .. }
                | Error::ConflictingAlias { .. }
                | Error::ZeroSegments
                | Error::SegmentCountTooLarge { .. }
        )
    }
}
