//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by profile validation, map construction, ray solving and
/// the higher-level aggregation operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("decisions and weights have different lengths ({decisions} vs {weights})")]
    MismatchedLengths { decisions: usize, weights: usize },

    #[error("weight at index {index} is negative ({value})")]
    NegativeWeight { index: usize, value: f64 },

    #[error("weight at index {index} is not finite ({value})")]
    NonFiniteWeight { index: usize, value: f64 },

    #[error("weight vector is identically zero")]
    ZeroWeightVector,

    #[error("profile must contain at least one entry")]
    EmptyProfile,

    #[error("decision points have inconsistent dimensions ({expected} vs {found} at index {index})")]
    InconsistentDimensions {
        expected: usize,
        found: usize,
        index: usize,
    },

    #[error("weight must be strictly positive, got {0}")]
    NonPositiveWeight(f64),

    #[error("ratio of the two generators is not strictly monotone on the interval")]
    NonMonotoneRatio,

    #[error("second generator vanishes or changes sign on the interval")]
    ZeroCrossingInF2,

    #[error("target ratio {target} lies outside the generator ratio's range on the interval")]
    RootNotBracketed { target: f64 },

    #[error("vector lies outside the cone of the image")]
    OutsideCone,

    #[error("root-finder exceeded its iteration budget or stalled")]
    ConvergenceFailure,

    #[error("operation requires range dimension {expected}, map has {found}")]
    WrongDimension { expected: usize, found: usize },

    #[error("grid must contain at least two distinct points")]
    InsufficientGrid,

    #[error("decision {point:?} lies outside the map domain")]
    DomainViolation { point: Vec<f64> },

    #[error("decision must be strictly positive, got {0}")]
    NonPositiveDecision(f64),

    #[error("decisions are all equal; synergy sign is undefined for constant profiles")]
    ConstantDecisions,

    #[error("shape mismatch: {0}")]
    MismatchedShapes(String),

    #[error("delegated and direct aggregation disagree (discrepancy {discrepancy:.3e})")]
    DelegationMismatch { discrepancy: f64 },

    #[error("sample images do not span the range space; the linear fit is underdetermined")]
    RankDeficientSamples,

    #[error("linear map is singular on the inner image span")]
    SingularLinearMap,

    #[error("coalition stability needs at least three parties, got {0}")]
    TooFewParties(usize),

    #[error("quota {quota} is not in (0, total = {total}]")]
    InvalidQuota { quota: f64, total: f64 },

    #[error("could not sample the requested region after {attempts} attempts")]
    RegionSamplingFailed { attempts: usize },

    #[error("invalid map spec `{spec}`: {reason}")]
    InvalidMapSpec { spec: String, reason: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("linear feasibility solver did not terminate")]
    SolverStalled,
}

pub type Result<T> = std::result::Result<T, Error>;
