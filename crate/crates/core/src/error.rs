use thiserror::Error;

use crate::lattice::VertexId;

/// Errors raised across the library.
///
/// The variants are grouped so that the CLI can map them onto its exit-code
/// contract: input problems, pipeline-not-applicable, and internal assertion
/// failures.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed grid file: {0}")]
    Parse(String),

    #[error("pipeline not applicable: {0}")]
    NotApplicable(String),

    #[error("vertex {0:?} is not live")]
    NotLive(usize),

    #[error("vertex {vertex} has degree {degree}, expected 2")]
    WrongDegree { vertex: usize, degree: usize },

    #[error("path has no boundary-to-boundary crossing")]
    NoCrossing,

    #[error("V-path {k} does not cross stripe {j}")]
    MissingBridge { j: usize, k: usize },

    #[error("abutment closures are not totally ordered on H-path {j}: {detail}")]
    TotalOrder { j: usize, detail: String },

    #[error("junction ({j},{k}) could not be reduced: {detail}")]
    Junction { j: usize, k: usize, detail: String },

    #[error("no boundary spacer between bridges on H-path {j} for column {k}")]
    NoSpacer { j: usize, k: usize },

    #[error("identified subgraph is not a subdivision of the target lattice: {0}")]
    Topology(String),

    #[error("size limit exceeded: {size} > {limit}")]
    SizeLimit { size: usize, limit: usize },

    #[error("vertex {0:?} out of bounds")]
    OutOfBounds(VertexId),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for failures that indicate a broken invariant inside the
    /// concentration pipeline rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::TotalOrder { .. }
                | Error::Junction { .. }
                | Error::NoSpacer { .. }
                | Error::Topology(_)
                | Error::MissingBridge { .. }
                | Error::NoCrossing
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
