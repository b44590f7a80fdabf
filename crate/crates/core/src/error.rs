use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("battery field B must be positive, got {value}")]
    NonPositiveB { value: f64 },

    #[error("{field} must be finite")]
    NonFinite { field: &'static str },

    #[error("{field} must be at least 1")]
    NonPositiveCount { field: &'static str },

    #[error("charger excitation m={m} is out of range 0..={n_charger}")]
    OutOfRangeM { m: usize, n_charger: usize },

    #[error("tridiagonal eigensolver did not converge within {iterations} iterations")]
    ConvergenceFailure { iterations: usize },

    #[error("closed form requires N_b={expected}, got N_b={found}")]
    WrongCellCount { expected: usize, found: usize },

    #[error("closed form does not apply: {0}")]
    UnsupportedRegime(String),

    #[error("time grid is empty")]
    EmptyGrid,

    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    #[error("no charging possible: {0}")]
    NoChargingPossible(String),

    #[error("filling m={m} of N_c={n_charger} gives k(1-k)=0")]
    DegenerateFilling { m: usize, n_charger: usize },

    #[error("property violated: {0}")]
    PropertyViolation(String),

    #[error("{what} size {size} exceeds the limit {limit}")]
    TooLarge { what: &'static str, size: usize, limit: usize },
}
