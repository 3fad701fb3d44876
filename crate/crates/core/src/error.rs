use thiserror::Error;

/// Errors raised by the geoft library.
#[derive(Debug, Error)]
pub enum GeoftError {
    #[error("matrix is not square: {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },

    #[error("bilinear form is degenerate: |det| = {det:e} <= tolerance {tol:e}")]
    Degenerate { det: f64, tol: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("operation is not realizable on the grid: {0}")]
    NotGridRealizable(String),

    #[error("frequency list is empty")]
    EmptyFrequencyList,

    #[error("unsupported grid mode: {0}")]
    UnsupportedMode(String),

    #[error("grids do not match: {0}")]
    GridMismatch(String),

    #[error("axis {axis} out of range for dimension {dim}")]
    AxisOutOfRange { axis: usize, dim: usize },

    #[error("plane wave is not commensurate with the periodic grid: {0}")]
    IncommensurateWave(String),

    #[error("lattice enumeration would produce more than {cap} points")]
    RadiusTooLarge { cap: usize },

    #[error("truncation radii too small: tail bound {bound:e} exceeds tolerance {tol:e}")]
    TailBoundViolated { bound: f64, tol: f64 },

    #[error("geometric structure is not positive definite")]
    NotPositiveDefinite,

    #[error("field is not on a periodic grid")]
    NotPeriodic,

    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unknown check id `{0}`")]
    UnknownCheck(String),

    #[error("check `{id}` failed a precondition: {source}")]
    PreconditionFailed {
        id: String,
        #[source]
        source: Box<GeoftError>,
    },

    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, GeoftError>;
