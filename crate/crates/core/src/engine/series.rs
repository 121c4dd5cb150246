//! Yearly world OA shares, total, by type and by field.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::aggregate::world_cells;
use super::indicators::oa_share;
use super::sum::CompensatedSum;
use super::{AggregateOptions, EngineError};
use crate::model::{ClassificationRegistry, FieldId, Level, PublicationRecord, YearWindow};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesRow {
    pub year: i32,
    pub n_records: u64,
    /// Percent of the year's records that are OA.
    pub total_share: f64,
    pub gold: f64,
    pub bronze: f64,
    pub green: f64,
    /// World OA share per field, indexed like [`Series::fields`]; `None`
    /// when the field has no output that year.
    pub by_field: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub level: Level,
    pub fields: Vec<String>,
    pub rows: Vec<SeriesRow>,
}

/// One row per year with at least one record; empty years are omitted.
pub fn yearly_series(
    records: &[PublicationRecord],
    registry: &ClassificationRegistry,
    level: Level,
    window: Option<YearWindow>,
    options: &AggregateOptions,
) -> Result<Series, EngineError> {
    let mut by_year: BTreeMap<i32, Vec<&PublicationRecord>> = BTreeMap::new();
    for r in records {
        if window.is_none_or(|w| w.contains(r.year)) {
            by_year.entry(r.year).or_default().push(r);
        }
    }
    let mut rows = Vec::with_capacity(by_year.len());
    for (year, recs) in by_year {
        let cells = world_cells(&recs, registry, level, options)?;
        let baselines: Vec<_> = cells
            .iter()
            .enumerate()
            .map(|(i, c)| c.baseline(FieldId(i as u32), level))
            .collect();
        let x: f64 = baselines
            .iter()
            .map(|b| b.x)
            .collect::<CompensatedSum>()
            .value();
        let sum_of = |f: &dyn Fn(&crate::model::WorldBaseline) -> f64| {
            baselines.iter().map(f).collect::<CompensatedSum>().value()
        };
        rows.push(SeriesRow {
            year,
            n_records: recs.len() as u64,
            total_share: oa_share(sum_of(&|b| b.oa), x)?,
            gold: oa_share(sum_of(&|b| b.oa_by_type.gold), x)?,
            bronze: oa_share(sum_of(&|b| b.oa_by_type.bronze), x)?,
            green: oa_share(sum_of(&|b| b.oa_by_type.green), x)?,
            by_field: baselines
                .iter()
                .map(|b| b.world_share().map(|s| 100.0 * s))
                .collect(),
        });
    }
    Ok(Series {
        level,
        fields: registry.field_names(level).map(str::to_string).collect(),
        rows,
    })
}
