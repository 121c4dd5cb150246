//! Brute-force reference implementations used as test oracles. Nothing here
//! calls into the engine: categories are mapped through a plain map, OA
//! statuses are resolved by scanning a priority list, and every actor's
//! counts are rebuilt by a full pass over all records.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};

use noai::model::{DocType, Level, PublicationRecord, StatusSet};

/// subject category -> (subject category, discipline, sub-field)
pub type Mapping = HashMap<String, [String; 3]>;

pub fn mapping<'a>(rows: impl IntoIterator<Item = (&'a str, &'a str, &'a str)>) -> Mapping {
    rows.into_iter()
        .map(|(sc, ost, erc)| {
            (
                sc.to_string(),
                [sc.to_string(), ost.to_string(), erc.to_string()],
            )
        })
        .collect()
}

pub fn level_index(level: Level) -> usize {
    match level {
        Level::SubjectCategory => 0,
        Level::OstDiscipline => 1,
        Level::ErcSubfield => 2,
    }
}

/// Status names as stored on a record.
pub fn status_names(set: StatusSet) -> Vec<String> {
    serde_json::from_value(serde_json::to_value(set).unwrap()).unwrap()
}

/// First entry of `priority` present in the record, if any.
pub fn resolve(statuses: &[String], priority: &[&str; 3]) -> Option<&'static str> {
    for p in priority {
        if statuses.iter().any(|s| s == p) {
            return Some(match *p {
                "gold" => "gold",
                "bronze" => "bronze",
                "green" => "green",
                other => panic!("bad priority entry {other}"),
            });
        }
    }
    None
}

pub const DEFAULT_PRIORITY: [&str; 3] = ["gold", "bronze", "green"];

/// Field weights of one record: each distinct category counts 1/k and is
/// credited to its field at `level`.
pub fn record_fields(r: &PublicationRecord, map: &Mapping, level: Level) -> BTreeMap<String, f64> {
    let mut distinct: Vec<&String> = Vec::new();
    for c in &r.subject_categories {
        if !distinct.contains(&c) {
            distinct.push(c);
        }
    }
    let k = distinct.len() as f64;
    let mut out = BTreeMap::new();
    for c in distinct {
        let field = map[c.as_str()][level_index(level)].clone();
        *out.entry(field).or_insert(0.0) += 1.0;
    }
    for v in out.values_mut() {
        *v /= k;
    }
    out
}

#[derive(Debug, Clone, Default)]
pub struct FieldCounts {
    pub x: f64,
    pub oa: f64,
    pub gold: f64,
    pub bronze: f64,
    pub green: f64,
}

#[derive(Debug, Clone, Default)]
pub struct OracleActor {
    pub fields: BTreeMap<String, FieldCounts>,
    pub n_oa_whole: u64,
}

impl OracleActor {
    pub fn x_total(&self) -> f64 {
        self.fields.values().map(|f| f.x).sum()
    }

    fn pct(&self, pick: impl Fn(&FieldCounts) -> f64) -> f64 {
        100.0 * self.fields.values().map(&pick).sum::<f64>() / self.x_total()
    }

    pub fn oa_share(&self) -> f64 {
        self.pct(|f| f.oa)
    }
    pub fn gold_share(&self) -> f64 {
        self.pct(|f| f.gold)
    }
    pub fn bronze_share(&self) -> f64 {
        self.pct(|f| f.bronze)
    }
    pub fn green_share(&self) -> f64 {
        self.pct(|f| f.green)
    }
}

#[derive(Debug, Clone)]
pub struct Oracle {
    pub level: Level,
    pub world: OracleActor,
    pub actors: BTreeMap<String, OracleActor>,
    pub n_records: usize,
}

impl Oracle {
    /// `(oa_ij/x_ij) / (OA_wj/X_wj)`, undefined without output or with a
    /// zero world share.
    pub fn normalized_share(&self, actor: &OracleActor, field: &str) -> Option<f64> {
        let a = actor.fields.get(field)?;
        let w = &self.world.fields[field];
        if a.x <= 0.0 || w.x <= 0.0 || w.oa <= 0.0 {
            return None;
        }
        Some((a.oa / a.x) / (w.oa / w.x))
    }

    /// Output-weighted mean of the defined normalized shares.
    pub fn noai(&self, actor: &OracleActor) -> Option<f64> {
        let mut num = 0.0;
        let mut den = 0.0;
        for (field, counts) in &actor.fields {
            if let Some(s) = self.normalized_share(actor, field) {
                num += s * counts.x;
                den += counts.x;
            }
        }
        (den > 0.0).then(|| num / den)
    }
}

/// Rebuilds every count from scratch, one actor at a time.
pub fn oracle(
    records: &[PublicationRecord],
    map: &Mapping,
    level: Level,
    countries: bool,
    years: Option<(i32, i32)>,
    priority: &[&str; 3],
) -> Oracle {
    let in_window: Vec<&PublicationRecord> = records
        .iter()
        .filter(|r| years.is_none_or(|(a, b)| a <= r.year && r.year <= b))
        .collect();
    let actors_of = |r: &PublicationRecord| -> BTreeSet<String> {
        let list = if countries {
            &r.countries
        } else {
            &r.institutions
        };
        list.iter().cloned().collect()
    };
    let all_actors: BTreeSet<String> = in_window.iter().flat_map(|r| actors_of(r)).collect();

    let tally = |keep: &dyn Fn(&PublicationRecord) -> bool| -> OracleActor {
        let mut acc = OracleActor::default();
        for r in &in_window {
            if !keep(r) {
                continue;
            }
            let status = resolve(&status_names(r.raw_statuses), priority);
            if status.is_some() {
                acc.n_oa_whole += 1;
            }
            for (field, w) in record_fields(r, map, level) {
                let c = acc.fields.entry(field).or_default();
                c.x += w;
                match status {
                    Some("gold") => c.gold += w,
                    Some("bronze") => c.bronze += w,
                    Some("green") => c.green += w,
                    _ => {}
                }
                if status.is_some() {
                    c.oa += w;
                }
            }
        }
        acc
    };

    let world = tally(&|_| true);
    let actors = all_actors
        .into_iter()
        .map(|a| {
            let profile = tally(&|r| actors_of(r).contains(&a));
            (a, profile)
        })
        .collect();
    Oracle {
        level,
        world,
        actors,
        n_records: in_window.len(),
    }
}

/// Average ranks (ascending), computed by counting.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    values
        .iter()
        .map(|v| {
            let less = values.iter().filter(|w| *w < v).count() as f64;
            let equal = values.iter().filter(|w| *w == v).count() as f64;
            less + (equal + 1.0) / 2.0
        })
        .collect()
}

/// Classic `1 - 6 sum d^2 / (n (n^2 - 1))`; valid without ties.
pub fn spearman_no_ties(a: &[f64], b: &[f64]) -> f64 {
    let ra = average_ranks(a);
    let rb = average_ranks(b);
    let n = a.len() as f64;
    let d2: f64 = ra.iter().zip(&rb).map(|(x, y)| (x - y) * (x - y)).sum();
    1.0 - 6.0 * d2 / (n * (n * n - 1.0))
}

/// Pearson correlation of average ranks, from the textbook sums formula.
pub fn spearman_with_ties(a: &[f64], b: &[f64]) -> f64 {
    let ra = average_ranks(a);
    let rb = average_ranks(b);
    let n = ra.len() as f64;
    let sx: f64 = ra.iter().sum();
    let sy: f64 = rb.iter().sum();
    let sxx: f64 = ra.iter().map(|x| x * x).sum();
    let syy: f64 = rb.iter().map(|y| y * y).sum();
    let sxy: f64 = ra.iter().zip(&rb).map(|(x, y)| x * y).sum();
    (n * sxy - sx * sy) / ((n * sxx - sx * sx).sqrt() * (n * syy - sy * sy).sqrt())
}

pub fn record(
    id: &str,
    year: i32,
    oa: &[&str],
    categories: &[&str],
    countries: &[&str],
) -> PublicationRecord {
    PublicationRecord {
        id: id.into(),
        year,
        doc_type: DocType::Article,
        raw_statuses: oa
            .iter()
            .map(|s| s.parse::<noai::model::OaType>().unwrap())
            .collect(),
        subject_categories: categories.iter().map(|s| s.to_string()).collect(),
        has_doi: true,
        countries: countries.iter().map(|s| s.to_string()).collect(),
        institutions: Vec::new(),
    }
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}
