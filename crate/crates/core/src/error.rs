use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: n = {left} vs n = {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("coordinate index {index} out of range for n = {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("series must start with constant term 1, found {found}")]
    NonUnitConstant { found: String },

    #[error("expression is not U(1)-invariant{}", context_suffix(.context))]
    NotInvariant { context: String },

    #[error("expression is not homogeneous{}", context_suffix(.context))]
    NotHomogeneous { context: String },

    #[error("not in the ideal: reduction at order {order} is nonzero ({residue})")]
    NotInIdeal { order: usize, residue: String },

    #[error("the two D-series agree to the requested order; there is no first divergence")]
    NoDivergence,

    #[error("insufficient truncation order: need {needed}, have {have}")]
    InsufficientOrder { needed: usize, have: usize },

    #[error("momentum value must be a negative rational, got {0}")]
    InvalidMomentum(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

fn context_suffix(context: &str) -> String {
    if context.is_empty() {
        String::new()
    } else {
        format!(": {context}")
    }
}

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }
}
