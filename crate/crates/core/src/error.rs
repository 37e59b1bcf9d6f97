use thiserror::Error;

pub type Result<T> = std::result::Result<T, EvalError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("dataset is empty")]
    EmptyDataset,

    #[error("score at index {index} is not finite ({score})")]
    NonFiniteScore { index: usize, score: f64 },

    #[error("threshold is not finite ({0})")]
    NonFiniteThreshold(f64),

    #[error("dataset needs at least one positive and one negative (got {n_pos} positive, {n_neg} negative)")]
    MissingClass { n_pos: usize, n_neg: usize },

    #[error("confusion matrix has no counts")]
    EmptyMatrix,

    #[error("curve x-range [{lo}, {hi}] does not span [0, 1]")]
    CurveRange { lo: f64, hi: f64 },

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("internal error: {0}")]
    Internal(String),
}
