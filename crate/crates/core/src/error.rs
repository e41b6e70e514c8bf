use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("beta_{0} is zero; representation parameters must be nonzero")]
    ZeroBeta(usize),
    #[error("expected {expected} parameters, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("index {index} outside 0..={max}")]
    RangeError { index: usize, max: usize },
    #[error("conjugation is only defined for the principal root (root index {0})")]
    UnsupportedRoot(usize),
    #[error("dimension {needed} exceeds the cap {cap}")]
    DimensionCap { needed: usize, cap: usize },
    #[error("symbol {0} is not a theta or theta-bar generator")]
    UnsupportedSymbol(String),
    #[error("x_p * xbar_p must equal (p)_q!")]
    BadNormalization,
    #[error("{configs} spin configurations exceed the brute-force cap {cap}")]
    TooLarge { configs: u128, cap: u128 },
    #[error("parameter {0} must be nonzero")]
    ZeroParameter(&'static str),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
