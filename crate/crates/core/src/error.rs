use thiserror::Error;

use crate::sew::SewReport;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("degree error: {0}")]
    Degree(String),

    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("permutation error: {0}")]
    Permutation(String),

    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("divergent gauge: r = {r} is not below the homogeneity {homogeneity}")]
    DivergentGauge { r: f64, homogeneity: f64 },

    #[error("budget exceeded: k*n = {cost} > {cap}")]
    Budget { cost: usize, cap: usize },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("sewing did not converge: {reason}")]
    NonConvergent {
        reason: String,
        report: Box<SewReport>,
    },

    #[error("oracle error: {0}")]
    Oracle(String),

    #[error("syntax error at position {position}: expected {expected}")]
    Syntax { position: usize, expected: String },

    #[error("unknown identifier `{name}` at position {position}")]
    UnknownIdentifier { name: String, position: usize },

    #[error("function `{name}` takes {expected} argument(s), got {got}")]
    Arity {
        name: String,
        expected: usize,
        got: usize,
    },

    #[error("domain error: {0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;
