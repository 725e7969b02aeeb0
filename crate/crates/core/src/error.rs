use thiserror::Error;

use crate::model::Violation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {}", join_violations(.0))]
    InvalidParams(Vec<Violation>),

    #[error("steady state unavailable: {0}")]
    SteadyStateUnavailable(String),

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("non-physical input: {0}")]
    NonPhysicalInput(String),

    #[error("degenerate state: {0}")]
    DegenerateState(String),

    #[error("argument {0} outside the domain of the entropy function (x >= 1)")]
    DomainError(f64),

    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    #[error("invalid step: {0}")]
    InvalidStep(String),

    #[error("unknown figure `{0}`")]
    UnknownFigure(String),

    #[error("unknown parameter `{0}`")]
    UnknownParameter(String),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
}
