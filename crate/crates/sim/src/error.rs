use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimError {
    #[error(transparent)]
    Core(#[from] umac_core::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
    #[error("unknown preset or missing file: {0}")]
    UnknownPreset(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    /// The target PUPE is not met even at the top of the search bracket.
    #[error("target PUPE {target} not reached at {ebn0_db} dB (measured {pupe}): saturated")]
    Saturated { target: f64, ebn0_db: f64, pupe: f64 },
}

pub type Result<T> = std::result::Result<T, SimError>;
