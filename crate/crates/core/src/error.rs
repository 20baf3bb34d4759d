use alloc::string::String;

use crate::moments::HankelKind;

/// Errors raised by the core pipeline.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,
    #[error("negative probability p({index}) = {value:e}")]
    NegativeProbability { index: usize, value: f64 },
    #[error("non-finite probability at index {index}")]
    NonFiniteProbability { index: usize },
    #[error("probabilities sum to {sum:.17} which lies outside [{lower:.17}, {upper:.17}]")]
    NormalizationError { sum: f64, lower: f64, upper: f64 },
    #[error("invalid tail bound {0:e}")]
    InvalidTailBound(f64),
    #[error("parameter `{name}` = {value} is invalid: {reason}")]
    InvalidParameter { name: String, value: f64, reason: &'static str },
    #[error("missing parameter `{0}`")]
    MissingParameter(String),
    #[error("unknown parameter `{0}`")]
    UnknownParameter(String),
    #[error("tail target {tail_target:e} not reachable below the cutoff cap {cap}")]
    TailNotReachable { tail_target: f64, cap: usize },
    #[error("{components} components but {weights} weights, or weights not a probability vector")]
    WeightMismatch { components: usize, weights: usize },
    #[error("order {order} of {kind:?} needs q_{needed} but n_max = {n_max} with nonzero tail")]
    OrderTooLarge { kind: HankelKind, order: usize, needed: usize, n_max: usize },
    #[error("matrix is not Hermitian: |M[{row},{col}] - conj(M[{col},{row}])| = {deviation:e}")]
    NonHermitian { row: usize, col: usize, deviation: f64 },
    #[error("negative diagonal entry {value:e} at {index}")]
    NegativeDiagonal { index: usize, value: f64 },
    #[error("matrix dimension {got} does not match basis dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("no beam-splitter generator sign satisfies the Heisenberg relations (residual {residual:e})")]
    HeisenbergCheckFailed { residual: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;
