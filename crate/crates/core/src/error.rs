use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("index {index} out of range for grid of {len} points")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("grid mismatch between sampled functions")]
    GridMismatch,

    #[error("non-finite sample at x = {x}")]
    NonFinite { x: f64 },

    #[error("Gamma function pole at x = {0}")]
    GammaPole(f64),

    #[error("hypergeometric parameter {0} is a non-positive integer")]
    HypergeometricPole(f64),

    #[error("series did not converge within {0} terms")]
    NoConvergence(usize),

    #[error("negative polynomial degree {0}")]
    NegativeDegree(i64),

    #[error("potential has no analytic spectrum")]
    NoAnalyticSpectrum,

    #[error("bound state index {m} out of range ({available} known levels)")]
    LevelOutOfRange { m: usize, available: usize },

    #[error("grid too narrow: norm of bound state deviates from 1 by {deviation:e}")]
    GridTooNarrow { deviation: f64 },

    #[error("factorization energy {epsilon} collides with eigenvalue {level}")]
    EnergyCollision { epsilon: f64, level: f64 },

    #[error("no solution vanishing on the {side} side: {reason}")]
    NotVanishing { side: &'static str, reason: String },

    #[error("x = {x} outside the sampled range [{xmin}, {xmax}]")]
    OutOfDomain { x: f64, xmin: f64, xmax: f64 },

    #[error("singular transformation: w vanishes near x = {x} (nu = {nu})")]
    Singular { x: f64, nu: f64 },

    #[error("E_n = {energy} coincides with the factorization energy")]
    SeedLevel { energy: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("malformed potential file, line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
