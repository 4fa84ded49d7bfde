use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("node {node} out of range for a network with {nodes} nodes")]
    NodeOutOfRange { node: usize, nodes: usize },

    #[error("edge pair must satisfy u < v, got v = {v}, u = {u}")]
    NotLowerTriangular { v: usize, u: usize },

    #[error("edge index {index} out of range (edge count {edges})")]
    EdgeOutOfRange { index: usize, edges: usize },

    #[error("a network needs at least 2 nodes, got {0}")]
    TooFewNodes(usize),

    #[error("{0} is not a triangular edge count")]
    NotAnEdgeCount(usize),

    #[error("dimension mismatch in {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("asymmetric adjacency matrix at row {row}, column {col}")]
    Asymmetric { row: usize, col: usize },

    #[error("non-binary value {value:?} at row {row}, column {col}")]
    NonBinary { row: usize, col: usize, value: String },

    #[error("non-finite similarity at edge {0}")]
    NonFinite(usize),

    #[error("probability {0} outside the open interval (0, 1)")]
    InvalidProbability(f64),

    #[error("invalid mixture weights: {0}")]
    InvalidWeights(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("invalid hyperparameter {name}: {reason}")]
    InvalidHyperParameter { name: &'static str, reason: String },

    #[error("invalid sampler configuration: {0}")]
    InvalidSamplerConfig(String),

    #[error("dataset is empty")]
    EmptyData,

    #[error("test undefined: the fit contains a single group")]
    SingleGroup,

    #[error("group {0} is absent from the training subjects")]
    GroupAbsentFromTraining(u8),

    #[error("degenerate marginal at edge {0} with differing group conditionals")]
    DegenerateMarginal(usize),

    #[error("exhaustive enumeration supports at most 5 nodes, got {0}")]
    TooLargeForEnumeration(usize),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unknown config key {key:?} at line {line}")]
    UnknownConfigKey { key: String, line: usize },

    #[error("duplicate subject id {0:?}")]
    DuplicateSubject(String),

    #[error("invalid node metadata: {0}")]
    InvalidMetadata(String),

    #[error("invalid test setting: {0}")]
    InvalidTestSetting(String),

    #[error("label must be 0 or 1, got {0:?}")]
    InvalidLabel(String),

    #[error("malformed draw archive: {0}")]
    Archive(String),

    #[error("data checksum mismatch: archive was fitted to {archive}, data hashes to {data}")]
    ChecksumMismatch { archive: String, data: String },

    #[error("{path}: {source}")]
    InFile {
        path: String,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        Error::Io {
            path: path.display().to_string(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
