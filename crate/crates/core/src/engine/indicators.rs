//! OA shares, field-normalized shares and the NOAI.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::aggregate::{aggregate, ActorProfile, Aggregates};
use super::sum::CompensatedSum;
use super::{AggregateOptions, EngineError};
use crate::model::{
    ActorFieldAggregate, ActorKind, ActorRegistry, ClassificationRegistry, FieldId, IndicatorRow,
    IndicatorTable, Level, PublicationRecord, WorldBaseline, YearWindow,
};

/// Percentage of `x` that is open access.
pub fn oa_share(oa: f64, x: f64) -> Result<f64, EngineError> {
    if x > 0.0 {
        Ok(100.0 * oa / x)
    } else {
        Err(EngineError::UndefinedShare)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizedShare {
    pub actor: String,
    pub field: FieldId,
    pub level: Level,
    /// `None` when the actor has no output in the field or the world share
    /// is zero or undefined.
    pub value: Option<f64>,
}

/// The actor's OA share in a field divided by the world OA share in it.
pub fn normalized_share(agg: &ActorFieldAggregate, baseline: &WorldBaseline) -> NormalizedShare {
    debug_assert_eq!(agg.field, baseline.field);
    debug_assert_eq!(agg.level, baseline.level);
    let value = match baseline.world_share() {
        Some(world) if world > 0.0 && agg.x > 0.0 => Some((agg.oa / agg.x) / world),
        _ => None,
    };
    NormalizedShare {
        actor: agg.actor.clone(),
        field: agg.field,
        level: agg.level,
        value,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoaiResult {
    pub value: f64,
    /// Sum of `x_ij` over the fields that entered the average.
    pub x_defined: f64,
    /// Fields with output but no usable world share; left out of both the
    /// numerator and the denominator.
    pub excluded_fields: Vec<FieldId>,
}

/// Weighted mean of the normalized shares, weighted by the actor's
/// fractional output in each field.
///
/// `baselines` must be indexable by field id, as returned by
/// [`Aggregates::world`].
pub fn noai(
    fields: &[ActorFieldAggregate],
    baselines: &[WorldBaseline],
) -> Result<NoaiResult, EngineError> {
    let mut numerator = CompensatedSum::default();
    let mut denominator = CompensatedSum::default();
    let mut excluded_fields = Vec::new();
    for agg in fields {
        let baseline = baselines
            .get(agg.field.index())
            .filter(|b| b.field == agg.field)
            .or_else(|| baselines.iter().find(|b| b.field == agg.field));
        let share = baseline.and_then(|b| normalized_share(agg, b).value);
        match share {
            Some(s) => {
                numerator.add(s * agg.x);
                denominator.add(agg.x);
            }
            None if agg.x > 0.0 => excluded_fields.push(agg.field),
            None => {}
        }
    }
    let x_defined = denominator.value();
    if x_defined > 0.0 {
        Ok(NoaiResult {
            value: numerator.value() / x_defined,
            x_defined,
            excluded_fields,
        })
    } else {
        Err(EngineError::UndefinedIndicator)
    }
}

/// Share of an actor's output by resolved OA type, in percent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TypeShares {
    pub total: f64,
    pub gold: f64,
    pub bronze: f64,
    pub green: f64,
}

impl TypeShares {
    pub fn of(profile: &ActorProfile) -> Result<Self, EngineError> {
        let x = profile.x_total();
        let types = profile.oa_by_type_total();
        Ok(TypeShares {
            total: oa_share(profile.oa_total(), x)?,
            gold: oa_share(types.gold, x)?,
            bronze: oa_share(types.bronze, x)?,
            green: oa_share(types.green, x)?,
        })
    }
}

impl Aggregates {
    pub fn type_breakdown(&self) -> Result<BTreeMap<String, TypeShares>, EngineError> {
        self.actors()
            .map(|p| Ok((p.actor.clone(), TypeShares::of(p)?)))
            .collect()
    }

    pub fn noai_of(&self, actor: &str) -> Result<NoaiResult, EngineError> {
        let profile = self.actor(actor).ok_or(EngineError::UndefinedIndicator)?;
        noai(&profile.fields, self.world())
    }
}

/// Per-actor OA shares by type for the actors of `actor_kind` in `window`.
pub fn type_breakdown(
    records: &[PublicationRecord],
    registry: &ClassificationRegistry,
    level: Level,
    actor_kind: ActorKind,
    window: Option<YearWindow>,
    options: &AggregateOptions,
) -> Result<BTreeMap<String, TypeShares>, EngineError> {
    aggregate(records, registry, level, actor_kind, window, options)?.type_breakdown()
}

/// A field skipped in an actor's NOAI because its world share is not usable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExcludedField {
    pub actor: String,
    pub level: Level,
    pub field: String,
    pub x: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorReport {
    pub table: IndicatorTable,
    /// Aggregates per requested level, in request order.
    pub aggregates: Vec<Aggregates>,
    pub excluded_fields: Vec<ExcludedField>,
}

/// Builds the per-actor indicator table with a NOAI column for every level
/// in `levels`. Shares are level independent; they are taken from the first
/// level.
pub fn build_indicator_table(
    records: &[PublicationRecord],
    registry: &ClassificationRegistry,
    actor_kind: ActorKind,
    window: Option<YearWindow>,
    actors: Option<&ActorRegistry>,
    levels: &[Level],
    options: &AggregateOptions,
) -> Result<IndicatorReport, EngineError> {
    assert!(
        !levels.is_empty(),
        "at least one normalization level is required"
    );
    let aggregates: Vec<Aggregates> = levels
        .iter()
        .map(|&level| aggregate(records, registry, level, actor_kind, window, options))
        .collect::<Result<_, _>>()?;
    if aggregates[0].is_empty() {
        return Err(EngineError::EmptyWindow);
    }

    let mut excluded_fields = Vec::new();
    let mut rows = Vec::with_capacity(aggregates[0].actor_count());
    for profile in aggregates[0].actors() {
        let shares = TypeShares::of(profile)?;
        let known = actors.and_then(|a| a.get(&profile.actor));
        let mut row = IndicatorRow {
            actor: profile.actor.clone(),
            display_name: known.map_or_else(|| profile.actor.clone(), |a| a.display_name.clone()),
            kind: actor_kind,
            group: known.and_then(|a| a.group),
            x_total: profile.x_total(),
            oa_share: shares.total,
            noai_subject_category: None,
            noai_ost_discipline: None,
            noai_erc_subfield: None,
            oa_gold_share: shares.gold,
            oa_bronze_share: shares.bronze,
            oa_green_share: shares.green,
            n_oa_whole: profile.n_oa,
        };
        for agg in &aggregates {
            let value = match agg.noai_of(&profile.actor) {
                Ok(result) => {
                    for field in &result.excluded_fields {
                        let x = agg
                            .actor(&profile.actor)
                            .and_then(|p| p.fields.iter().find(|f| f.field == *field))
                            .map_or(0.0, |f| f.x);
                        excluded_fields.push(ExcludedField {
                            actor: profile.actor.clone(),
                            level: agg.level,
                            field: registry.field_name(agg.level, *field).to_string(),
                            x,
                        });
                    }
                    Some(result.value)
                }
                Err(EngineError::UndefinedIndicator) => None,
                Err(e) => return Err(e),
            };
            row.set_noai(agg.level, value);
        }
        rows.push(row);
    }

    Ok(IndicatorReport {
        table: IndicatorTable {
            actor_kind,
            window,
            rows,
        },
        aggregates,
        excluded_fields,
    })
}
