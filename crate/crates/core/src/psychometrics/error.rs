use serde::Serialize;
use thiserror::Error;

/// Why a statistic is undefined for its input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StatError {
    #[error("series have different lengths")]
    LengthMismatch,
    #[error("not enough observations")]
    TooFewObservations,
    #[error("a series has zero variance")]
    ZeroVariance,
    #[error("only one class is present")]
    SingleClass,
    #[error("value outside its allowed range")]
    OutOfRange,
    #[error("groups are degenerate")]
    DegenerateGroups,
    #[error("denominator is zero")]
    ZeroDenominator,
}

impl StatError {
    /// Stable machine-readable code.
    pub fn code(self) -> &'static str {
        match self {
            StatError::LengthMismatch => "length_mismatch",
            StatError::TooFewObservations => "too_few_observations",
            StatError::ZeroVariance => "zero_variance",
            StatError::SingleClass => "single_class",
            StatError::OutOfRange => "out_of_range",
            StatError::DegenerateGroups => "degenerate_groups",
            StatError::ZeroDenominator => "zero_denominator",
        }
    }
}
