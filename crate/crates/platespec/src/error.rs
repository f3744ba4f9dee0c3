use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("negative frequency r = {0}")]
    NegativeFrequency(f64),
    #[error("regime not covered: {0}")]
    Regime(String),
    #[error("zone selection contains no quadrature nodes")]
    EmptyZone,
    #[error("fit failed: {0}")]
    Fit(String),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("physical profile unknown for custom data")]
    CustomFamily,
}

pub type Result<T> = std::result::Result<T, Error>;
