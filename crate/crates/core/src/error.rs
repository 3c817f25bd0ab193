use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("space has no points")]
    EmptySpace,

    #[error("space has no injectivity-radius map")]
    MissingInjectivity,

    #[error("point {0} is not in the space")]
    PointOutOfRange(usize),

    #[error("map is not defined on point {0}, which lies in B(p1, R+1)")]
    MapUndefined(usize),

    #[error("invalid net parameters: {0}")]
    InvalidParams(String),

    #[error("insufficient skeleton: b_{k} needs simplices of dimension {needed}, complex is capped at {k_max}")]
    InsufficientSkeleton { k: usize, needed: usize, k_max: usize },

    #[error("complex too large for the oracle: {0} vertices (limit {1})")]
    OracleSizeLimit(usize, usize),

    #[error("ball has {0} vertices, above the canonical-labeling cap of {1}")]
    BallTooLarge(usize, usize),

    #[error("canonical labeling search exceeded {0} leaves")]
    SearchLimit(usize),

    #[error("profile radius mismatch: {0} vs {1}")]
    RadiusMismatch(usize, usize),

    #[error("dimension {0} is below the d >= 4 hypothesis of the tube bound")]
    DimensionTooLow(u32),

    #[error("bound not applicable at ell = {ell}: need ell < {threshold}")]
    BoundNotApplicable { ell: f64, threshold: f64 },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("config error: {0}")]
    Config(String),

    #[error("scale {scale}, seed {seed}: {source}")]
    Cell {
        scale: u64,
        seed: u64,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}
