use thiserror::Error;

/// Errors produced by the simulation kernels.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum OamError {
    /// Two sampled wavefunctions (or a wavefunction and a plate) live on
    /// different angular grids.
    #[error("angular grid mismatch: {left} points vs {right} points")]
    GridMismatch { left: usize, right: usize },

    #[error("invalid angular grid: {0}")]
    InvalidGrid(String),

    #[error("invalid plate: {0}")]
    InvalidPlate(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The collapse derivation only holds for half-integer spiral analyzers.
    #[error("unsupported analyzer: {0}")]
    UnsupportedAnalyzer(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// All four coincidence probabilities entering a correlation vanish.
    #[error("degenerate fringe: correlation denominator is zero at x={x}, y={y}")]
    DegenerateFringe { x: f64, y: f64 },

    #[error("oracle mismatch for {quantity}: closed form {closed_form}, oracle {oracle}")]
    OracleMismatch {
        quantity: String,
        closed_form: f64,
        oracle: f64,
    },
}

pub type Result<T> = std::result::Result<T, OamError>;
