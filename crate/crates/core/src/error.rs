use thiserror::Error;

use crate::fock::ModeVector;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Component-wise subtraction produced a negative occupation: the target
    /// Fock state does not exist.
    #[error("state {n} - {d} does not exist (negative occupation)")]
    InvalidSubspace { n: ModeVector, d: ModeVector },

    /// α = 0: level 1 is decoupled and the survival indicators are undefined.
    #[error("degenerate coupling: level 1 is decoupled (alpha = 0)")]
    DegenerateCoupling,

    /// Falling-factorial product is not representable as an f64.
    #[error("matrix element overflow for occupations {n} lowered by {d}")]
    Overflow { n: ModeVector, d: ModeVector },

    #[error("state has {state} amplitudes but the block has dimension {block}")]
    DimensionMismatch { state: usize, block: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
