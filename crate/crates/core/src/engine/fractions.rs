//! Disciplinary fractional counting.

use serde::{Deserialize, Serialize};

use super::EngineError;
use crate::model::{ClassificationRegistry, FieldId, Level, PublicationRecord};

/// Share of one publication credited to each field at one level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FractionVector {
    pub record_id: String,
    pub level: Level,
    /// Sorted by field id, each field at most once.
    pub entries: Vec<(FieldId, f64)>,
}

impl FractionVector {
    pub fn weight(&self, field: FieldId) -> Option<f64> {
        self.entries
            .iter()
            .find(|(f, _)| *f == field)
            .map(|(_, w)| *w)
    }

    pub fn total(&self) -> f64 {
        self.entries.iter().map(|(_, w)| w).sum()
    }
}

/// Each of the record's `k` distinct categories carries `1/k`; at coarser
/// levels the category shares are summed per mapped field, so a field
/// holding `m` of the categories gets `m/k`.
pub fn field_fractions(
    record: &PublicationRecord,
    registry: &ClassificationRegistry,
    level: Level,
) -> Result<FractionVector, EngineError> {
    let mut entries = Vec::with_capacity(record.subject_categories.len());
    fractions_into(record, registry, level, &mut entries)?;
    Ok(FractionVector {
        record_id: record.id.clone(),
        level,
        entries,
    })
}

/// Allocation-free core of [`field_fractions`]: clears and fills `out`.
pub(crate) fn fractions_into(
    record: &PublicationRecord,
    registry: &ClassificationRegistry,
    level: Level,
    out: &mut Vec<(FieldId, f64)>,
) -> Result<(), EngineError> {
    out.clear();
    let mut counts: Vec<(FieldId, u32)> = Vec::with_capacity(record.subject_categories.len());
    let mut seen: Vec<FieldId> = Vec::with_capacity(record.subject_categories.len());
    for cat in &record.subject_categories {
        let cat_id = registry
            .category_id(cat)
            .ok_or_else(|| EngineError::UnknownCategory {
                record: record.id.clone(),
                category: cat.clone(),
            })?;
        if seen.contains(&cat_id) {
            continue;
        }
        seen.push(cat_id);
        let field = registry.field_of_id(cat_id, level);
        match counts.iter_mut().find(|(f, _)| *f == field) {
            Some((_, n)) => *n += 1,
            None => counts.push((field, 1)),
        }
    }
    let k = seen.len();
    if k == 0 {
        return Err(EngineError::NoCategories(record.id.clone()));
    }
    counts.sort_unstable_by_key(|(f, _)| *f);
    out.extend(counts.into_iter().map(|(f, m)| (f, m as f64 / k as f64)));
    Ok(())
}
