use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("word must contain at least one bit")]
    EmptyWord,

    #[error("invalid bit character {0:?}, expected '0' or '1'")]
    InvalidBit(char),

    #[error("window [{have_lo}, {have_hi}] does not cover [{need_lo}, {need_hi}]")]
    Coverage {
        need_lo: i64,
        need_hi: i64,
        have_lo: i64,
        have_hi: i64,
    },

    #[error("position {0} is outside the window")]
    OutOfBounds(i64),

    #[error("probability {0} outside the open interval (0, 1)")]
    InvalidProbability(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown set name {0:?}")]
    UnknownSet(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("named sets do not partition the points: {0}")]
    NotPartition(String),

    #[error("weights are not invariant under the permutation (point {0})")]
    NotInvariant(usize),

    #[error("target needs {need_ones} ones and {need_zeros} zeros but the window has {have_ones} and {have_zeros}")]
    Infeasible {
        need_ones: usize,
        need_zeros: usize,
        have_ones: usize,
        have_zeros: usize,
    },

    #[error("requested size {requested} exceeds available {available}")]
    SizeExceeds { requested: usize, available: usize },

    #[error("search outside exhaustive bounds: {0}")]
    SearchBounds(String),

    #[error("witness does not satisfy its invariant against the matrix")]
    InvalidWitness,

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Json(err.to_string())
    }
}
