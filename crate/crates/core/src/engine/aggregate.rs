//! Per-(actor, field) and per-field world accumulation.
//!
//! Records are split into fixed-size chunks that are accumulated in parallel
//! and merged in chunk order. Chunk boundaries depend only on the record
//! count, so results are bitwise identical for any thread count.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use super::fractions::fractions_into;
use super::sum::CompensatedSum;
use super::{AggregateOptions, EngineError};
use crate::model::{
    ActorFieldAggregate, ActorKind, ClassificationRegistry, FieldId, Level, OaType,
    PublicationRecord, TypeCounts, WorldBaseline, YearWindow,
};

const CHUNK: usize = 1 << 14;

#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Cell {
    x: CompensatedSum,
    oa: CompensatedSum,
    by_type: [CompensatedSum; 3],
}

impl Cell {
    fn add(&mut self, weight: f64, oa: Option<OaType>) {
        self.x.add(weight);
        if let Some(t) = oa {
            self.oa.add(weight);
            self.by_type[t.index()].add(weight);
        }
    }

    fn merge(&mut self, other: &Cell) {
        self.x.merge(&other.x);
        self.oa.merge(&other.oa);
        for (a, b) in self.by_type.iter_mut().zip(&other.by_type) {
            a.merge(b);
        }
    }

    fn type_counts(&self) -> TypeCounts {
        TypeCounts {
            gold: self.by_type[0].value(),
            bronze: self.by_type[1].value(),
            green: self.by_type[2].value(),
        }
    }

    pub(crate) fn baseline(&self, field: FieldId, level: Level) -> WorldBaseline {
        WorldBaseline {
            field,
            level,
            x: self.x.value(),
            oa: self.oa.value(),
            oa_by_type: self.type_counts(),
        }
    }
}

/// Everything known about one actor at one level.
#[derive(Debug, Clone, PartialEq)]
pub struct ActorProfile {
    pub actor: String,
    /// Sorted by field id; only fields the actor published in.
    pub fields: Vec<ActorFieldAggregate>,
    /// Distinct publications the actor appears on (whole count).
    pub n_pubs: u64,
    /// Distinct OA publications the actor appears on (whole count).
    pub n_oa: u64,
}

impl ActorProfile {
    pub fn x_total(&self) -> f64 {
        self.fields
            .iter()
            .map(|f| f.x)
            .collect::<CompensatedSum>()
            .value()
    }

    pub fn oa_total(&self) -> f64 {
        self.fields
            .iter()
            .map(|f| f.oa)
            .collect::<CompensatedSum>()
            .value()
    }

    pub fn oa_by_type_total(&self) -> TypeCounts {
        let sum = |t: OaType| {
            self.fields
                .iter()
                .map(|f| f.oa_by_type.get(t))
                .collect::<CompensatedSum>()
                .value()
        };
        TypeCounts {
            gold: sum(OaType::Gold),
            bronze: sum(OaType::Bronze),
            green: sum(OaType::Green),
        }
    }
}

/// Result of one aggregation pass at one level for one actor kind.
#[derive(Debug, Clone, PartialEq)]
pub struct Aggregates {
    pub level: Level,
    pub actor_kind: ActorKind,
    pub window: Option<YearWindow>,
    /// Records inside the window (the world population).
    pub n_records: u64,
    pub n_oa_records: u64,
    actors: BTreeMap<String, ActorProfile>,
    /// Indexed by field id; covers every field of the registry at `level`.
    world: Vec<WorldBaseline>,
}

impl Aggregates {
    pub fn actors(&self) -> impl Iterator<Item = &ActorProfile> {
        self.actors.values()
    }

    pub fn actor(&self, id: &str) -> Option<&ActorProfile> {
        self.actors.get(id)
    }

    pub fn actor_count(&self) -> usize {
        self.actors.len()
    }

    pub fn world(&self) -> &[WorldBaseline] {
        &self.world
    }

    pub fn baseline(&self, field: FieldId) -> &WorldBaseline {
        &self.world[field.index()]
    }

    pub fn is_empty(&self) -> bool {
        self.n_records == 0
    }

    /// The whole corpus treated as one actor, field by field.
    pub fn world_actor(&self) -> ActorProfile {
        ActorProfile {
            actor: WORLD_ACTOR.to_string(),
            fields: self
                .world
                .iter()
                .filter(|b| b.x > 0.0)
                .map(|b| ActorFieldAggregate {
                    actor: WORLD_ACTOR.to_string(),
                    field: b.field,
                    level: b.level,
                    x: b.x,
                    oa: b.oa,
                    oa_by_type: b.oa_by_type,
                })
                .collect(),
            n_pubs: self.n_records,
            n_oa: self.n_oa_records,
        }
    }
}

pub const WORLD_ACTOR: &str = "WORLD";

struct Partial<'a> {
    actors: HashMap<(&'a str, FieldId), Cell>,
    counts: HashMap<&'a str, (u64, u64)>,
    world: Vec<Cell>,
    n_records: u64,
    n_oa: u64,
}

impl<'a> Partial<'a> {
    fn new(n_fields: usize) -> Self {
        Partial {
            actors: HashMap::new(),
            counts: HashMap::new(),
            world: vec![Cell::default(); n_fields],
            n_records: 0,
            n_oa: 0,
        }
    }

    fn merge(&mut self, other: Partial<'a>) {
        for (key, cell) in other.actors {
            self.actors.entry(key).or_default().merge(&cell);
        }
        for (key, (n, o)) in other.counts {
            let e = self.counts.entry(key).or_default();
            e.0 += n;
            e.1 += o;
        }
        for (a, b) in self.world.iter_mut().zip(&other.world) {
            a.merge(b);
        }
        self.n_records += other.n_records;
        self.n_oa += other.n_oa;
    }
}

/// Accumulates fractional counts for every actor of `actor_kind` and the
/// world baseline for every field at `level`.
///
/// Geographic counting is whole: every distinct actor on a record receives
/// the record's full field fractions. The world baseline counts each record
/// once, whether or not it lists an actor of the requested kind.
pub fn aggregate(
    records: &[PublicationRecord],
    registry: &ClassificationRegistry,
    level: Level,
    actor_kind: ActorKind,
    window: Option<YearWindow>,
    options: &AggregateOptions,
) -> Result<Aggregates, EngineError> {
    let n_fields = registry.field_count(level);
    let partials: Vec<Partial<'_>> = records
        .par_chunks(CHUNK)
        .map(|chunk| {
            accumulate(
                chunk, registry, level, actor_kind, window, options, n_fields,
            )
        })
        .collect::<Result<_, _>>()?;
    let mut total = Partial::new(n_fields);
    for p in partials {
        total.merge(p);
    }

    if total.n_records == 0 {
        if options.strict {
            return Err(EngineError::EmptyWindow);
        }
        log::warn!("no records in window");
    }

    let mut actors: BTreeMap<String, ActorProfile> = BTreeMap::new();
    let mut cells: Vec<((&str, FieldId), Cell)> = total.actors.into_iter().collect();
    cells.sort_unstable_by(|a, b| a.0.cmp(&b.0));
    for ((actor, field), cell) in cells {
        let profile = actors.entry(actor.to_string()).or_insert_with(|| {
            let (n_pubs, n_oa) = total.counts[actor];
            ActorProfile {
                actor: actor.to_string(),
                fields: Vec::new(),
                n_pubs,
                n_oa,
            }
        });
        profile.fields.push(ActorFieldAggregate {
            actor: actor.to_string(),
            field,
            level,
            x: cell.x.value(),
            oa: cell.oa.value(),
            oa_by_type: cell.type_counts(),
        });
    }

    let world = total
        .world
        .iter()
        .enumerate()
        .map(|(i, cell)| cell.baseline(FieldId(i as u32), level))
        .collect();

    Ok(Aggregates {
        level,
        actor_kind,
        window,
        n_records: total.n_records,
        n_oa_records: total.n_oa,
        actors,
        world,
    })
}

fn accumulate<'a>(
    chunk: &'a [PublicationRecord],
    registry: &ClassificationRegistry,
    level: Level,
    actor_kind: ActorKind,
    window: Option<YearWindow>,
    options: &AggregateOptions,
    n_fields: usize,
) -> Result<Partial<'a>, EngineError> {
    let mut partial = Partial::new(n_fields);
    let mut fractions = Vec::new();
    for record in chunk {
        if window.is_some_and(|w| !w.contains(record.year)) {
            continue;
        }
        fractions_into(record, registry, level, &mut fractions)?;
        // One status per record, applied to every field it is credited to.
        let oa = options.priority.resolve(record.raw_statuses).oa_type();
        partial.n_records += 1;
        partial.n_oa += oa.is_some() as u64;
        for &(field, w) in &fractions {
            partial.world[field.index()].add(w, oa);
        }
        for actor in record.actors(actor_kind) {
            let c = partial.counts.entry(actor.as_str()).or_default();
            c.0 += 1;
            c.1 += oa.is_some() as u64;
            for &(field, w) in &fractions {
                partial
                    .actors
                    .entry((actor.as_str(), field))
                    .or_default()
                    .add(w, oa);
            }
        }
    }
    Ok(partial)
}

/// World-only accumulation, used by the yearly series.
pub(crate) fn world_cells(
    records: &[&PublicationRecord],
    registry: &ClassificationRegistry,
    level: Level,
    options: &AggregateOptions,
) -> Result<Vec<Cell>, EngineError> {
    let mut world = vec![Cell::default(); registry.field_count(level)];
    let mut fractions = Vec::new();
    for record in records {
        fractions_into(record, registry, level, &mut fractions)?;
        let oa = options.priority.resolve(record.raw_statuses).oa_type();
        for &(field, w) in &fractions {
            world[field.index()].add(w, oa);
        }
    }
    Ok(world)
}
