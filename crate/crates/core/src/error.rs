use thiserror::Error;

use crate::vertex::Vertex;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown generator symbol `{0}`")]
    UnknownSymbol(String),

    #[error("parse error at column {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("vertex {0} is not fixed by the element")]
    VertexNotStabilized(Vertex),

    #[error("vertex digit {digit} is out of range for a {arity}-ary tree")]
    BadVertex { digit: u32, arity: usize },

    #[error("level {level} needs {points} points, above the cap of {cap}")]
    DepthLimit { level: usize, points: usize, cap: usize },

    #[error("element order exceeds the cap of {cap}")]
    ExceedsCap { cap: u64 },

    #[error("recursion depth limit of {0} reached")]
    RecursionLimit(usize),

    #[error("{0} is not an odd prime")]
    NotOddPrime(usize),

    #[error("quotients live at different levels ({0} and {1})")]
    LevelMismatch(usize, usize),

    #[error("subgroup is contained in the first level stabilizer")]
    RequiresRootAction,

    #[error("element is not in the first level stabilizer")]
    NotInStab1,

    #[error("operation requires the {expected} preset, got `{found}`")]
    WrongPreset { expected: &'static str, found: String },

    #[error("length measure did not decrease: {0}")]
    InternalLengthAssertionFailure(String),

    #[error("invalid preset: {0}")]
    InvalidPreset(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
}
