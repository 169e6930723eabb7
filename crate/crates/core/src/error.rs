use thiserror::Error;

use crate::series::Chart;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("chart mismatch: {left:?} vs {right:?}")]
    ChartMismatch { left: Chart, right: Chart },

    #[error("eps-order underflow: eps^{eps} is below the truncation floor eps^{min}")]
    EpsUnderflow { eps: i32, min: i32 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("particle and guiding-center variables mixed at {pos}")]
    ChartMixing { pos: usize },

    #[error("negative power of {what} at {pos} (only B and eps may carry negative exponents)")]
    NegativePower { pos: usize, what: String },

    #[error("Hamiltonian is not a polynomial in J; residual: {residual}")]
    NotReducibleToJ { residual: String },

    #[error("electrostatic potential generators present where none are allowed")]
    FieldPresent,

    #[error("series contains noncommutative words and cannot be evaluated pointwise")]
    WordPresent,

    #[error("evaluation point outside the model domain: {0}")]
    DomainViolation(String),

    #[error("field model error: {0}")]
    Model(String),
}

pub type Result<T> = std::result::Result<T, Error>;
