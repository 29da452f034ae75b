use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },

    #[error("invalid tableau: {0}")]
    InvalidTableau(String),

    #[error("letter {letter} out of range 0..={kappa}")]
    LetterOutOfRange { letter: usize, kappa: usize },

    #[error("color {color} out of range 1..={kappa}")]
    ColorOutOfRange { color: usize, kappa: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid density vector: {0}")]
    InvalidDensity(String),

    #[error("state space too large: {states} states exceeds cap {cap}")]
    CapExceeded { states: u128, cap: u128 },

    #[error("energy matrix is not concave in column {color} at row {row}")]
    NotConcave { color: usize, row: usize },

    #[error("negative vacancy v[{row}][{color}] = {value}")]
    NegativeVacancy { row: usize, color: usize, value: i64 },

    #[error("repeated variables: bialternant denominator vanishes")]
    RepeatedVariables,

    #[error("power iteration did not converge after {iterations} iterations (bounds {lower}..{upper})")]
    NoConvergence { iterations: usize, lower: f64, upper: f64 },

    #[error("rejection budget of {budget} draws exhausted ({accepted} accepted)")]
    BudgetExhausted { budget: u64, accepted: u64 },

    #[error("too few regeneration blocks: {blocks} (need {needed})")]
    TooFewBlocks { blocks: usize, needed: usize },
}
