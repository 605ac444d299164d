use thiserror::Error;

use crate::qstate::PovmViolation;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension must be positive")]
    EmptyDimension,

    #[error("{len} entries do not form a {dim}x{dim} matrix")]
    NotSquare { dim: usize, len: usize },

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("not hermitian (defect {0:e})")]
    NotHermitian(f64),

    #[error("trace is not 1 (got {0})")]
    InvalidTrace(f64),

    #[error("not positive semidefinite ({0:e})")]
    NotPositive(f64),

    #[error("exceeds the identity ({0:e})")]
    AboveIdentity(f64),

    #[error("invalid POVM: {0}")]
    InvalidPovm(PovmViolation),

    #[error("zero vector does not span a ray")]
    ZeroVector,

    #[error("qubit-only operation on dimension {0}")]
    QubitOnly(usize),

    #[error("Bloch vector has norm {0}, expected 1")]
    NotUnitBloch(f64),

    #[error("mixing weight {0} outside [0, 1]")]
    MixingWeight(f64),

    #[error("duplicate ontic state identifier {0:?}")]
    DuplicateNode(String),

    #[error("negative quadrature weight at node {0}")]
    NegativeWeight(usize),

    #[error("negative density at node {0}")]
    NegativeDensity(usize),

    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("measure has zero total mass")]
    ZeroMass,

    #[error("measures live on different ontic spaces")]
    SpaceMismatch,

    #[error("no density matrix is associated with {0}")]
    DmapUndefined(String),

    #[error("{model} has no response to experiment {experiment}")]
    UnsupportedExperiment { model: String, experiment: String },

    #[error("response at node {node} is not a probability distribution: {detail}")]
    InvalidResponse { node: usize, detail: String },

    #[error("ray list is empty")]
    EmptyRayList,

    #[error("moment systems support 1..=20 rays, got {0}")]
    RayCount(usize),

    #[error("overlap of rays {0} and {1} is not rational")]
    IrrationalOverlap(usize, usize),

    #[error("malformed linear system: {0}")]
    LinearSystem(String),

    #[error("{}", format_definition(*line, message))]
    Definition { line: Option<usize>, message: String },
}

fn format_definition(line: Option<usize>, message: &str) -> String {
    match line {
        Some(l) => format!("line {l}: {message}"),
        None => message.to_string(),
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
