use thiserror::Error;

/// Errors raised by the game solvers and validators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LottoError {
    #[error("`{name}` must be positive, got {value}")]
    NonPositiveValue { name: &'static str, value: f64 },

    #[error("`{name}` must be non-negative, got {value}")]
    NegativeBudget { name: &'static str, value: f64 },

    #[error("`{name}` = {value} is outside the admissible range {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("pre-allocation has {got} entries but the game has {expected} battlefields")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("pre-allocation sums to {sum}, expected {total}")]
    PreAllocationTotal { sum: f64, total: f64 },

    #[error("no battlefield partition yields a consistent solution")]
    NoConsistentPartition,

    #[error("player A has no real-time budget; use the zero-real-time payoff")]
    ZeroRealTimeA,

    #[error("numeric solver did not converge (best scaled residual {best_residual:e})")]
    ConvergenceFailure { best_residual: f64 },

    #[error("zero real-time budget with a non-proportional pre-allocation is not supported")]
    NumericUnsupported,

    #[error("investment `{name}` = {value} exceeds the affordable maximum {max}")]
    OutOfBudget {
        name: &'static str,
        value: f64,
        max: f64,
    },

    #[error("no root in the interval [{lo}, {hi}]")]
    NoRootInInterval { lo: f64, hi: f64 },

    #[error("no sign change on [{lo}, {hi}]")]
    BracketFailure { lo: f64, hi: f64 },

    #[error("grid search supports at most {max} battlefields, got {got}")]
    TooManyBattlefields { max: usize, got: usize },

    #[error("unknown check `{0}`")]
    UnknownCheck(String),
}

impl LottoError {
    /// True for errors caused by invalid input rather than a solver breakdown.
    pub fn is_validation(&self) -> bool {
        !matches!(
            self,
            LottoError::NoConsistentPartition
                | LottoError::ConvergenceFailure { .. }
                | LottoError::NoRootInInterval { .. }
                | LottoError::BracketFailure { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, LottoError>;
