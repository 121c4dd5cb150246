//! Rankings, rank shifts between OA share and NOAI, Spearman correlation and
//! actor filtering.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::engine::CompensatedSum;
use crate::model::{ActorKind, Group, IndicatorRow, IndicatorTable, Level};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AnalysisError {
    #[error("nothing to rank: the table is empty")]
    EmptyTable,
    #[error("rank tables cover different actors")]
    MismatchedActorSets,
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
}

/// Ascending gives rank 1 to the lowest value.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RankOrder {
    #[default]
    Ascending,
    Descending,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Metric {
    OaShare,
    Noai(Level),
    XTotal,
}

impl Metric {
    pub fn of(self, row: &IndicatorRow) -> Option<f64> {
        match self {
            Metric::OaShare => Some(row.oa_share),
            Metric::Noai(level) => row.noai(level),
            Metric::XTotal => Some(row.x_total),
        }
        .filter(|v| v.is_finite())
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Metric::OaShare => f.write_str("oa_share"),
            Metric::Noai(level) => write!(f, "noai_{}", level.snake()),
            Metric::XTotal => f.write_str("x_total"),
        }
    }
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "oa_share" => Ok(Metric::OaShare),
            "x_total" => Ok(Metric::XTotal),
            other => other
                .strip_prefix("noai_")
                .and_then(|l| l.parse().ok())
                .map(Metric::Noai)
                .ok_or_else(|| format!("unknown metric \"{s}\"")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankRow {
    pub actor: String,
    pub value: f64,
    /// Competition rank for display: ties share the smallest rank (1, 1, 3).
    pub rank: usize,
    /// Fractional rank for correlation: ties share the mean rank (1.5, 1.5, 3).
    pub avg_rank: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankTable {
    pub metric: String,
    pub order: RankOrder,
    /// In input order.
    pub rows: Vec<RankRow>,
    /// Actors left out because the metric is undefined for them.
    pub excluded: Vec<String>,
}

impl RankTable {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn get(&self, actor: &str) -> Option<&RankRow> {
        self.rows.iter().find(|r| r.actor == actor)
    }
}

/// Ranks `(actor, value)` pairs; pairs with no value are excluded.
pub fn rank_values<I, S>(
    entries: I,
    metric: &str,
    order: RankOrder,
) -> Result<RankTable, AnalysisError>
where
    I: IntoIterator<Item = (S, Option<f64>)>,
    S: Into<String>,
{
    let mut rows = Vec::new();
    let mut excluded = Vec::new();
    for (actor, value) in entries {
        match value {
            Some(v) if v.is_finite() => rows.push(RankRow {
                actor: actor.into(),
                value: v,
                rank: 0,
                avg_rank: 0.0,
            }),
            _ => excluded.push(actor.into()),
        }
    }
    if rows.is_empty() {
        return Err(AnalysisError::EmptyTable);
    }

    let mut order_idx: Vec<usize> = (0..rows.len()).collect();
    let cmp = |a: &usize, b: &usize| -> Ordering {
        let o = rows[*a].value.total_cmp(&rows[*b].value);
        match order {
            RankOrder::Ascending => o,
            RankOrder::Descending => o.reverse(),
        }
    };
    order_idx.sort_by(cmp);

    let mut i = 0;
    while i < order_idx.len() {
        let mut j = i + 1;
        while j < order_idx.len() && rows[order_idx[j]].value == rows[order_idx[i]].value {
            j += 1;
        }
        // Positions i..j (0-based) share the tie.
        let avg = (i + 1 + j) as f64 / 2.0;
        for &k in &order_idx[i..j] {
            rows[k].rank = i + 1;
            rows[k].avg_rank = avg;
        }
        i = j;
    }

    Ok(RankTable {
        metric: metric.to_string(),
        order,
        rows,
        excluded,
    })
}

pub fn rank(
    table: &IndicatorTable,
    metric: Metric,
    order: RankOrder,
) -> Result<RankTable, AnalysisError> {
    rank_values(
        table.rows.iter().map(|r| (r.actor.as_str(), metric.of(r))),
        &metric.to_string(),
        order,
    )
}

fn aligned<'a>(
    a: &'a RankTable,
    b: &'a RankTable,
) -> Result<Vec<(&'a RankRow, &'a RankRow)>, AnalysisError> {
    if a.len() != b.len() {
        return Err(AnalysisError::MismatchedActorSets);
    }
    let index: HashMap<&str, &RankRow> = b.rows.iter().map(|r| (r.actor.as_str(), r)).collect();
    a.rows
        .iter()
        .map(|r| {
            index
                .get(r.actor.as_str())
                .map(|other| (r, *other))
                .ok_or(AnalysisError::MismatchedActorSets)
        })
        .collect()
}

/// Tie-aware Spearman rho: the Pearson correlation of the fractional ranks.
pub fn spearman(a: &RankTable, b: &RankTable) -> Result<f64, AnalysisError> {
    let pairs = aligned(a, b)?;
    let n = pairs.len();
    if n < 2 {
        return Err(AnalysisError::DegenerateInput(format!(
            "{n} actor(s); need at least 2"
        )));
    }
    let mean = |f: &dyn Fn(&(&RankRow, &RankRow)) -> f64| {
        pairs.iter().map(f).collect::<CompensatedSum>().value() / n as f64
    };
    let ma = mean(&|p| p.0.avg_rank);
    let mb = mean(&|p| p.1.avg_rank);
    let mut sab = CompensatedSum::default();
    let mut saa = CompensatedSum::default();
    let mut sbb = CompensatedSum::default();
    for (ra, rb) in &pairs {
        let da = ra.avg_rank - ma;
        let db = rb.avg_rank - mb;
        sab.add(da * db);
        saa.add(da * da);
        sbb.add(db * db);
    }
    let (saa, sbb) = (saa.value(), sbb.value());
    if saa == 0.0 || sbb == 0.0 {
        return Err(AnalysisError::DegenerateInput("zero rank variance".into()));
    }
    Ok((sab.value() / (saa * sbb).sqrt()).clamp(-1.0, 1.0))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankShift {
    pub actor: String,
    pub share_rank: usize,
    pub noai_rank: usize,
    /// `noai_rank - share_rank`. Under ascending ranks (1 = least open) a
    /// positive delta means the actor climbs toward the open end once the
    /// share is normalized.
    pub delta: i64,
}

pub fn rank_shift(
    share_ranks: &RankTable,
    noai_ranks: &RankTable,
) -> Result<Vec<RankShift>, AnalysisError> {
    Ok(aligned(share_ranks, noai_ranks)?
        .into_iter()
        .map(|(s, n)| RankShift {
            actor: s.actor.clone(),
            share_rank: s.rank,
            noai_rank: n.rank,
            delta: n.rank as i64 - s.rank as i64,
        })
        .collect())
}

/// Default publication threshold; actors must exceed it strictly.
pub const DEFAULT_MIN_PUBS: f64 = 30.0;

/// Keeps rows with `x_total > min_pubs` that match the optional kind and
/// group filters.
pub fn filter_actors(
    table: &IndicatorTable,
    min_pubs: f64,
    kind: Option<ActorKind>,
    group: Option<Group>,
) -> IndicatorTable {
    IndicatorTable {
        actor_kind: table.actor_kind,
        window: table.window,
        rows: table
            .rows
            .iter()
            .filter(|r| r.x_total > min_pubs)
            .filter(|r| kind.is_none_or(|k| r.kind == k))
            .filter(|r| group.is_none_or(|g| r.group == Some(g)))
            .cloned()
            .collect(),
    }
}

/// The `n` largest producers by `x_total`, ties broken by actor id.
pub fn top_n(table: &IndicatorTable, n: usize) -> IndicatorTable {
    let mut rows = table.rows.clone();
    rows.sort_by(|a, b| {
        b.x_total
            .total_cmp(&a.x_total)
            .then_with(|| a.actor.cmp(&b.actor))
    });
    rows.truncate(n);
    IndicatorTable {
        actor_kind: table.actor_kind,
        window: table.window,
        rows,
    }
}
