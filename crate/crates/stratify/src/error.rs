use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown id `{0}`")]
    UnknownId(String),

    #[error("missing degree for `{0}`")]
    MissingDegree(String),

    #[error("zero polynomial has no minimal exponent")]
    ZeroPolynomial,

    #[error("negative exponent of `{var}` survives restriction to {var} = 0")]
    NegativeExponent { var: String },

    #[error("parse error in `{input}` at byte {pos}: {msg}")]
    Parse { input: String, pos: usize, msg: String },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("invalid poset: {0}")]
    InvalidPoset(String),

    #[error("chart for chain {chain}: {msg}")]
    Chart { chain: String, msg: String },

    #[error("no chart for chain {0}")]
    MissingChart(String),

    #[error("lattice: {0}")]
    Lattice(String),

    #[error("not a Hodge-type stratification: {0}")]
    NotHodge(String),

    #[error("fan: {0}")]
    Fan(String),

    #[error("ring: {0}")]
    Ring(String),

    #[error("bound exceeded: {0}")]
    Bound(String),

    #[error("subduction: {0}")]
    Subduction(String),

    #[error("root system: {0}")]
    RootSystem(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
