//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("sample space must contain at least one element")]
    EmptySampleSpace,

    #[error("sample space of size {size} exceeds the supported maximum of {max} elements")]
    SpaceTooLarge { size: usize, max: usize },

    #[error("generator references element {index}, outside a space of size {size}")]
    GeneratorOutOfRange { index: usize, size: usize },

    #[error("operands live on different sample spaces ({left} vs {right} elements)")]
    MismatchedSpaces { left: usize, right: usize },

    #[error("algebra would have {atoms} atoms; at most {max} are supported")]
    AtomLimitExceeded { atoms: usize, max: usize },

    #[error("generators mention {tags} distinct observable tags; at most {max} are supported")]
    TagLimitExceeded { tags: usize, max: usize },

    #[error("event carries observable tag {name:?} absent from the compatibility relation")]
    UnknownObservable { name: String },

    #[error("expected {expected} atom weights, got {got}")]
    WeightCount { expected: usize, got: usize },

    #[error("expected {expected} generator tag lists, got {got}")]
    TagListCount { expected: usize, got: usize },

    #[error("weight {text:?} is not a rational number of the form p/q")]
    MalformedWeight { text: String },

    #[error("event is not a member of the algebra")]
    EventNotInAlgebra,

    #[error("random quantity values must not be NaN (element {index})")]
    NanValue { index: usize },

    #[error("semiopen interval requires lo < hi, got ({lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("angle theta = {theta} outside the required range [0, pi]")]
    ThetaOutOfRange { theta: f64 },

    #[error("at least one physical state is required")]
    EmptySample,

    #[error("per-context sample count must be at least {min}, got {got}")]
    SampleCountTooSmall { got: u64, min: u64 },

    #[error("probability {value} outside [0, 1]")]
    InvalidProbability { value: f64 },

    #[error("triad {index} repeats direction {name:?}")]
    RepeatedTriadDirection { index: usize, name: String },

    #[error("triad {index} references unknown direction {name:?}")]
    UnknownTriadDirection { index: usize, name: String },

    #[error("direction list repeats {name:?}")]
    RepeatedDirection { name: String },

    #[error("malformed input document: {0}")]
    MalformedInput(#[from] serde_json::Error),
}
