use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("schema violation at `{field}`: {reason}")]
    Schema { field: String, reason: String },

    #[error("gate {gate}: non-unitary matchgate block (max |u†u - I| = {deviation:.3e})")]
    NonUnitary { gate: usize, deviation: f64 },

    #[error("gate {gate}: mode index {mode} out of range for {n} modes")]
    ModeOutOfRange { gate: usize, mode: usize, n: usize },

    #[error("gate {gate}: non-nearest-neighbor matchgate on modes ({p}, {q})")]
    NonNearestNeighbor { gate: usize, p: usize, q: usize },

    #[error("gate {gate}: controlled-phase gate acts twice on mode {mode}")]
    RepeatedMode { gate: usize, mode: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid bitstring: {0}")]
    InvalidBitstring(String),

    #[error("{name} out of domain: {reason}")]
    Domain { name: &'static str, reason: String },

    #[error("exact enumeration refused: {k} random controlled-phase branches exceeds cap {cap}")]
    ExactCapExceeded { k: usize, cap: usize },

    #[error("dense oracle refused: {n} modes exceeds cap {cap}")]
    OracleCapExceeded { n: usize, cap: usize },

    #[error("requested precision unreachable within {rounds} refinement rounds (achieved {achieved:.3e})")]
    PrecisionUnreachable { rounds: u32, achieved: f64 },

    #[error("item {index}: {source}")]
    Item {
        index: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn schema(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Schema {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn domain(name: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            name,
            reason: reason.into(),
        }
    }

    /// True for refusals caused by exponential-cost caps rather than bad input.
    pub fn is_capability_refusal(&self) -> bool {
        match self {
            Error::ExactCapExceeded { .. }
            | Error::OracleCapExceeded { .. }
            | Error::PrecisionUnreachable { .. } => true,
            Error::Item { source, .. } => source.is_capability_refusal(),
            _ => false,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
