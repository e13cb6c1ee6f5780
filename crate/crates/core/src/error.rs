use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("composition must be non-empty")]
    EmptyComposition,
    #[error("composition {0:?} is not admissible: first entry must be at least 2 and all entries positive")]
    InadmissibleComposition(Vec<u32>),
    #[error("word `{0}` is not admissible (must start with x and end with y)")]
    InadmissibleWord(String),
    #[error("word length {0} exceeds the supported maximum of {max}", max = crate::word::MAX_LEN)]
    WordTooLong(usize),
    #[error("weight {0} is below the minimum {1}")]
    WeightTooSmall(u32, u32),
    #[error("operator index must be positive")]
    NonPositiveIndex,
    #[error("weight mismatch: expected {expected}, found {found}")]
    WeightMismatch { expected: u32, found: u32 },
    #[error("series cutoff mismatch: {0} vs {1}")]
    CutoffMismatch(u32, u32),
    #[error("geometric series of an element with a constant term does not converge")]
    ConstantTerm,
    #[error("cutoff {cutoff} too small, need at least {needed}")]
    CutoffTooSmall { cutoff: u32, needed: u32 },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
