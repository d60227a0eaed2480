use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("depth mismatch: {left} vs {right}")]
    DepthMismatch { left: usize, right: usize },

    #[error("depth {depth} exceeds the cap of {cap}")]
    DepthCap { depth: usize, cap: usize },

    #[error("invalid tensor: {0}")]
    InvalidTensor(String),

    #[error("not a group element: {0}")]
    NotGroupElement(String),

    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    #[error("invalid interval [{start}, {end}] on a grid with {points} points")]
    InvalidInterval { start: usize, end: usize, points: usize },

    #[error("index order violated: {i} > {j}")]
    IndexOrder { i: usize, j: usize },

    #[error("parameter violation: {0}")]
    Parameter(String),

    #[error("non-uniform grid: {0} requires a uniform grid, resample the path first")]
    NonUniformGrid(&'static str),

    #[error("grid mismatch: paths must share one time grid")]
    GridMismatch,

    #[error("solution left the validity box at t = {time}")]
    BlowUp { time: f64 },

    #[error("oracle size cap exceeded: {points} grid points (max {cap})")]
    OracleSizeCap { points: usize, cap: usize },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
