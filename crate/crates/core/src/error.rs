use thiserror::Error;

use crate::index::PartitionIndex;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("rank n={n} is not supported here (need n >= {min})")]
    UnsupportedRank { n: u32, min: u32 },

    #[error("index {index} is not a Schubert class for n={n}")]
    InvalidIndex { index: PartitionIndex, n: u32 },

    #[error("rank mismatch: n={left} vs n={right}")]
    RankMismatch { left: u32, right: u32 },

    #[error("class {index} of degree {degree} is not generated by tau_1 and tau_(1,1)")]
    GenerationFailure { index: PartitionIndex, degree: i64 },

    #[error("structure constant for {lambda} * {mu} at {nu} q^{d} is not an integer: {value}")]
    NonIntegral {
        lambda: PartitionIndex,
        mu: PartitionIndex,
        nu: PartitionIndex,
        d: u32,
        value: String,
    },

    #[error("malformed deformation: {0}")]
    MalformedDeformation(String),

    #[error("quadratic term in unknowns while expanding sigma_(1,1) * sigma_{mu}")]
    QuadraticTerm { mu: PartitionIndex },

    #[error("elimination exceeded the ceiling of {limit} intermediate constraints")]
    ResourceCap { limit: usize },

    #[error("constraint system is infeasible")]
    Infeasible,

    #[error("display `{display}` does not match the engine expansion: {detail}")]
    Mismatch { display: String, detail: String },

    #[error("invalid document: {0}")]
    InvalidDocument(String),

    #[error("syntax error at byte {offset}: expected {}, found {found}", expected.join(" | "))]
    Syntax {
        offset: usize,
        expected: Vec<String>,
        found: String,
    },

    #[error("invalid rational `{0}`")]
    InvalidRational(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
