//! Fractional counting, world baselines, normalized shares and the NOAI.

mod aggregate;
mod fractions;
mod indicators;
mod series;
mod sum;

use serde::{Deserialize, Serialize};

pub use aggregate::{aggregate, ActorProfile, Aggregates, WORLD_ACTOR};
pub use fractions::{field_fractions, FractionVector};
pub use indicators::{
    build_indicator_table, noai, normalized_share, oa_share, type_breakdown, ExcludedField,
    IndicatorReport, NoaiResult, NormalizedShare, TypeShares,
};
pub use series::{yearly_series, Series, SeriesRow};
pub use sum::CompensatedSum;

use crate::model::StatusPriority;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AggregateOptions {
    pub priority: StatusPriority,
    /// Fail with [`EngineError::EmptyWindow`] instead of returning empty
    /// aggregates.
    pub strict: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error, Serialize, Deserialize)]
pub enum EngineError {
    #[error("record {record}: unknown subject category \"{category}\"")]
    UnknownCategory { record: String, category: String },
    #[error("record {0} has no subject categories")]
    NoCategories(String),
    #[error("no records in window")]
    EmptyWindow,
    #[error("share is undefined for an empty population")]
    UndefinedShare,
    #[error("indicator is undefined: no field has a usable world share")]
    UndefinedIndicator,
}
