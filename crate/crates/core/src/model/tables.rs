//! Aggregate cells, world baselines and the per-actor indicator table.

use serde::{Deserialize, Serialize};

use super::{ActorKind, FieldId, Group, Level, OaType, YearWindow};

/// Fractional counts split by resolved OA type.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct TypeCounts {
    pub gold: f64,
    pub bronze: f64,
    pub green: f64,
}

impl TypeCounts {
    pub fn get(&self, t: OaType) -> f64 {
        match t {
            OaType::Gold => self.gold,
            OaType::Bronze => self.bronze,
            OaType::Green => self.green,
        }
    }

    pub fn total(&self) -> f64 {
        self.gold + self.bronze + self.green
    }
}

/// Fractional publication and OA counts of one actor in one field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActorFieldAggregate {
    pub actor: String,
    pub field: FieldId,
    pub level: Level,
    pub x: f64,
    pub oa: f64,
    pub oa_by_type: TypeCounts,
}

/// World totals for one field: the normalization denominator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorldBaseline {
    pub field: FieldId,
    pub level: Level,
    pub x: f64,
    pub oa: f64,
    pub oa_by_type: TypeCounts,
}

impl WorldBaseline {
    /// `oa / x`, or `None` when the field has no publications.
    pub fn world_share(&self) -> Option<f64> {
        (self.x > 0.0).then(|| self.oa / self.x)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndicatorRow {
    pub actor: String,
    pub display_name: String,
    pub kind: ActorKind,
    pub group: Option<Group>,
    /// Fractional publication count summed over all fields.
    pub x_total: f64,
    /// Percent of `x_total` that is open access.
    pub oa_share: f64,
    pub noai_subject_category: Option<f64>,
    pub noai_ost_discipline: Option<f64>,
    pub noai_erc_subfield: Option<f64>,
    pub oa_gold_share: f64,
    pub oa_bronze_share: f64,
    pub oa_green_share: f64,
    /// Distinct OA publications the actor appears on.
    pub n_oa_whole: u64,
}

impl IndicatorRow {
    pub fn noai(&self, level: Level) -> Option<f64> {
        match level {
            Level::SubjectCategory => self.noai_subject_category,
            Level::OstDiscipline => self.noai_ost_discipline,
            Level::ErcSubfield => self.noai_erc_subfield,
        }
    }

    pub fn set_noai(&mut self, level: Level, value: Option<f64>) {
        match level {
            Level::SubjectCategory => self.noai_subject_category = value,
            Level::OstDiscipline => self.noai_ost_discipline = value,
            Level::ErcSubfield => self.noai_erc_subfield = value,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndicatorTable {
    pub actor_kind: ActorKind,
    pub window: Option<YearWindow>,
    pub rows: Vec<IndicatorRow>,
}

impl IndicatorTable {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn row(&self, actor: &str) -> Option<&IndicatorRow> {
        self.rows.iter().find(|r| r.actor == actor)
    }
}
