use thiserror::Error;

/// Errors raised by the model, the integrator and the surrounding tooling.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("degenerate resource stock: y = {0} (must be > 0)")]
    DegenerateResource(f64),

    #[error("non-finite value for `{quantity}` at t = {t}")]
    NonFinite { quantity: &'static str, t: f64 },

    #[error("invariant `{name}` violated at t = {t}: {detail}")]
    Invariant { name: &'static str, t: f64, detail: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("shares undefined: total value added = {0}")]
    UndefinedShares(f64),

    #[error("debt ratio undefined: total net output = {0}")]
    UndefinedDebtRatio(f64),

    #[error("information metrics undefined: total system throughput is zero")]
    ZeroThroughput,

    #[error("(1 - A) is singular (determinant {0}); the economy is infeasible")]
    SingularLeontief(f64),

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),

    #[error("simulation aborted after sample {last_sample}: {source}")]
    Aborted {
        last_sample: usize,
        #[source]
        source: Box<ModelError>,
    },
}

/// Configuration and file-format errors.
#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: malformed entry `{text}`")]
    Malformed { line: usize, text: String },

    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },

    #[error("line {line}: unknown section `[{section}]`")]
    UnknownSection { line: usize, section: String },

    #[error("line {line}: invalid value `{value}` for `{key}`")]
    InvalidValue { line: usize, key: String, value: String },

    #[error("invalid configuration: {0}")]
    Invalid(String),

    #[error(transparent)]
    Model(#[from] ModelError),

    #[error("csv: {0}")]
    Csv(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = ModelError> = std::result::Result<T, E>;
