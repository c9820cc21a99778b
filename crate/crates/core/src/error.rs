use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error: {0}")]
    Syntax(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("cell (column {col}, row {row}) is not kept but carries weight {weight}")]
    WeightOnEmptyCell { col: usize, row: usize, weight: String },

    #[error("cell (column {col}, row {row}) is kept but has zero weight")]
    ZeroWeightOnCell { col: usize, row: usize },

    #[error("negative weight {weight} at column {col}, row {row}")]
    NegativeWeight { col: usize, row: usize, weight: String },

    #[error("weights must sum to 1 (sum is {0})")]
    WeightSum(String),

    #[error("grid keeps no cell")]
    EmptyGrid,

    #[error("digit {digit} out of range for base {base}")]
    DigitOutOfRange { digit: usize, base: usize },

    #[error("unsupported by formula: {0}")]
    Unsupported(String),

    #[error("y-digit {digit} at position {position} selects a row of zero weight (outside the support)")]
    OutsideSupport { digit: usize, position: usize },

    #[error("support violation: {0}")]
    Support(String),

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("gram diagonal entry {index} is {value}, expected 1 (measure not normalized)")]
    NonUnitDiagonal { index: usize, value: String },

    #[error("sampling grid mismatch: {0}")]
    SampleMismatch(String),

    #[error("no admissible expansion: {0}")]
    NotAdmissible(String),

    #[error("invalid argument: {0}")]
    Invalid(String),
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
