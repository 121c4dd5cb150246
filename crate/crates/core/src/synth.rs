//! Deterministic synthetic corpora with per-field OA rates and actor
//! specialization profiles.
//!
//! Record `i` draws from its own ChaCha8 stream (`seed`, stream `i`), so a
//! record's content depends only on the seed, the generator spec and its
//! index. Output is identical whether records are generated sequentially
//! or in parallel.
//!
//! Per record the draws are, in order: year, document type, affiliation
//! (unaffiliated or primary actor by volume, then an optional collaborator),
//! primary category (from the primary actor's specialization, or uniform),
//! extra categories, OA route from the primary category's profile, an
//! optional lower-priority second status, and the DOI flag.

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::path::Path;

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::model::{
    Actor, ActorKind, ActorRegistry, ClassificationRegistry, DocType, Group, OaType,
    PublicationRecord, StatusSet,
};

#[derive(Debug, thiserror::Error)]
pub enum SynthError {
    #[error("invalid synthetic spec: {0}")]
    InvalidSpec(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: String,
        #[source]
        source: serde_json::Error,
    },
}

fn invalid(msg: impl Into<String>) -> SynthError {
    SynthError::InvalidSpec(msg.into())
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct OaProfile {
    #[serde(default)]
    pub gold: f64,
    #[serde(default)]
    pub bronze: f64,
    #[serde(default)]
    pub green: f64,
}

impl OaProfile {
    fn shifted(&self, trend: &OaProfile, years_since_start: f64) -> OaProfile {
        OaProfile {
            gold: self.gold + trend.gold * years_since_start,
            bronze: self.bronze + trend.bronze * years_since_start,
            green: self.green + trend.green * years_since_start,
        }
    }

    fn check(&self, what: &str) -> Result<(), SynthError> {
        let probs = [self.gold, self.bronze, self.green];
        const EPS: f64 = 1e-12;
        if probs.iter().any(|p| !(-EPS..=1.0 + EPS).contains(p))
            || probs.iter().sum::<f64>() > 1.0 + EPS
        {
            return Err(invalid(format!(
                "{what}: probabilities must lie in [0,1] and sum to at most 1, got {self:?}"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthField {
    pub subject_category: String,
    pub ost_discipline: String,
    pub erc_subfield: String,
    pub oa: OaProfile,
    /// Per-year change added to `oa`, relative to the first year.
    #[serde(default)]
    pub trend: OaProfile,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthActor {
    pub id: String,
    pub kind: ActorKind,
    #[serde(default)]
    pub group: Option<Group>,
    #[serde(default)]
    pub display_name: Option<String>,
    /// Weight of each subject category among the actor's publications;
    /// sums to 1.
    pub specialization: BTreeMap<String, f64>,
    /// Relative output volume; the primary actor of a record is drawn in
    /// proportion to it.
    #[serde(default = "one")]
    pub volume: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct YearRange {
    pub start: i32,
    pub end: i32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub seed: u64,
    pub years: YearRange,
    pub n_records: u64,
    pub fields: Vec<SynthField>,
    #[serde(default)]
    pub actors: Vec<SynthActor>,
    /// Probability that a record carries 2-3 categories.
    #[serde(default)]
    pub multi_category_rate: f64,
    /// Probability that an OA record carries a second, lower-priority status.
    #[serde(default)]
    pub multi_status_rate: f64,
    /// Probability that a record lists a second actor.
    #[serde(default)]
    pub collaboration_rate: f64,
    /// Probability that a record lists no actor at all.
    #[serde(default)]
    pub unaffiliated_rate: f64,
    #[serde(default = "one")]
    pub doi_rate: f64,
    /// Relative weights of document types; articles only when empty.
    #[serde(default)]
    pub doc_types: BTreeMap<DocType, f64>,
}

impl SynthSpec {
    pub fn load(path: &Path) -> Result<Self, SynthError> {
        let text = fs::read_to_string(path).map_err(|source| SynthError::Io {
            path: path.display().to_string(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| SynthError::Parse {
            path: path.display().to_string(),
            source,
        })
    }

    pub fn validate(&self) -> Result<(), SynthError> {
        if self.years.start > self.years.end {
            return Err(invalid("years.start must not exceed years.end"));
        }
        if self.fields.is_empty() && self.n_records > 0 {
            return Err(invalid("at least one field is required"));
        }
        let mut cats = HashSet::new();
        let span = (self.years.end - self.years.start) as f64;
        for f in &self.fields {
            if f.subject_category.is_empty()
                || f.ost_discipline.is_empty()
                || f.erc_subfield.is_empty()
            {
                return Err(invalid("field names must be non-empty"));
            }
            if !cats.insert(f.subject_category.as_str()) {
                return Err(invalid(format!("duplicate field {}", f.subject_category)));
            }
            f.oa.check(&f.subject_category)?;
            f.oa.shifted(&f.trend, span)
                .check(&format!("{} in {}", f.subject_category, self.years.end))?;
        }
        for (name, rate) in [
            ("multi_category_rate", self.multi_category_rate),
            ("multi_status_rate", self.multi_status_rate),
            ("collaboration_rate", self.collaboration_rate),
            ("unaffiliated_rate", self.unaffiliated_rate),
            ("doi_rate", self.doi_rate),
        ] {
            if !(0.0..=1.0).contains(&rate) {
                return Err(invalid(format!("{name} must lie in [0,1]")));
            }
        }
        let mut ids = HashSet::new();
        for a in &self.actors {
            if a.id.is_empty() || !ids.insert(a.id.as_str()) {
                return Err(invalid(format!(
                    "actor ids must be unique and non-empty ({:?})",
                    a.id
                )));
            }
            if a.group.is_some() && a.kind != ActorKind::Institution {
                return Err(invalid(format!(
                    "actor {}: group only allowed on institutions",
                    a.id
                )));
            }
            if !(a.volume > 0.0 && a.volume.is_finite()) {
                return Err(invalid(format!("actor {}: volume must be positive", a.id)));
            }
            if a.specialization.is_empty() {
                return Err(invalid(format!("actor {}: empty specialization", a.id)));
            }
            for (cat, w) in &a.specialization {
                if !cats.contains(cat.as_str()) {
                    return Err(invalid(format!("actor {}: unknown field {cat}", a.id)));
                }
                if !(*w >= 0.0 && w.is_finite()) {
                    return Err(invalid(format!(
                        "actor {}: negative weight for {cat}",
                        a.id
                    )));
                }
            }
            let total: f64 = a.specialization.values().sum();
            if (total - 1.0).abs() > 1e-9 {
                return Err(invalid(format!(
                    "actor {}: specialization sums to {total}, not 1",
                    a.id
                )));
            }
        }
        if self
            .doc_types
            .values()
            .any(|w| !(*w >= 0.0 && w.is_finite()))
            || (!self.doc_types.is_empty() && self.doc_types.values().sum::<f64>() <= 0.0)
        {
            return Err(invalid(
                "doc_types weights must be non-negative with a positive sum",
            ));
        }
        Ok(())
    }

    pub fn registry(&self) -> ClassificationRegistry {
        let mut r = ClassificationRegistry::new();
        for f in &self.fields {
            r.insert(&f.subject_category, &f.ost_discipline, &f.erc_subfield)
                .expect("validated spec has unique fields");
        }
        r
    }

    pub fn actor_registry(&self) -> ActorRegistry {
        let mut r = ActorRegistry::new();
        for a in &self.actors {
            let name = a.display_name.clone().unwrap_or_else(|| a.id.clone());
            r.insert(Actor::new(a.id.clone(), a.kind, a.group, name).expect("validated actor"))
                .expect("validated spec has unique actors");
        }
        r
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthCorpus {
    pub records: Vec<PublicationRecord>,
    pub registry: ClassificationRegistry,
    pub actors: ActorRegistry,
}

struct Sampler<'a> {
    spec: &'a SynthSpec,
    volumes: Option<WeightedIndex<f64>>,
    specializations: Vec<(Vec<usize>, WeightedIndex<f64>)>,
    doc_types: Option<(Vec<DocType>, WeightedIndex<f64>)>,
}

impl<'a> Sampler<'a> {
    fn new(spec: &'a SynthSpec) -> Result<Self, SynthError> {
        let field_index: BTreeMap<&str, usize> = spec
            .fields
            .iter()
            .enumerate()
            .map(|(i, f)| (f.subject_category.as_str(), i))
            .collect();
        let volumes = if spec.actors.is_empty() {
            None
        } else {
            Some(
                WeightedIndex::new(spec.actors.iter().map(|a| a.volume))
                    .map_err(|e| invalid(e.to_string()))?,
            )
        };
        let specializations = spec
            .actors
            .iter()
            .map(|a| {
                let fields: Vec<usize> = a
                    .specialization
                    .keys()
                    .map(|c| field_index[c.as_str()])
                    .collect();
                let dist = WeightedIndex::new(a.specialization.values().copied())
                    .map_err(|e| invalid(format!("actor {}: {e}", a.id)))?;
                Ok((fields, dist))
            })
            .collect::<Result<_, SynthError>>()?;
        let doc_types = if spec.doc_types.is_empty() {
            None
        } else {
            let types: Vec<DocType> = spec.doc_types.keys().copied().collect();
            let dist = WeightedIndex::new(spec.doc_types.values().copied())
                .map_err(|e| invalid(e.to_string()))?;
            Some((types, dist))
        };
        Ok(Sampler {
            spec,
            volumes,
            specializations,
            doc_types,
        })
    }

    fn record(&self, index: u64) -> PublicationRecord {
        let spec = self.spec;
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        rng.set_stream(index);

        let year = rng.gen_range(spec.years.start..=spec.years.end);
        let doc_type = match &self.doc_types {
            Some((types, dist)) => types[dist.sample(&mut rng)],
            None => DocType::Article,
        };

        let mut actors: Vec<usize> = Vec::with_capacity(2);
        if let Some(volumes) = &self.volumes {
            if rng.gen::<f64>() >= spec.unaffiliated_rate {
                actors.push(volumes.sample(&mut rng));
                if spec.actors.len() > 1 && rng.gen::<f64>() < spec.collaboration_rate {
                    // Rejection sampling; bounded so a dominant actor cannot stall us.
                    for _ in 0..16 {
                        let other = volumes.sample(&mut rng);
                        if other != actors[0] {
                            actors.push(other);
                            break;
                        }
                    }
                }
            }
        }

        let n_fields = spec.fields.len();
        let primary = match actors.first() {
            Some(&a) => {
                let (fields, dist) = &self.specializations[a];
                fields[dist.sample(&mut rng)]
            }
            None => rng.gen_range(0..n_fields),
        };
        let mut categories = vec![primary];
        if n_fields > 1 && rng.gen::<f64>() < spec.multi_category_rate {
            let extra = rng.gen_range(1..=2usize).min(n_fields - 1);
            for i in sample(&mut rng, n_fields - 1, extra).into_iter() {
                // Skip over the primary index.
                categories.push(if i >= primary { i + 1 } else { i });
            }
        }

        let field = &spec.fields[primary];
        let profile = field
            .oa
            .shifted(&field.trend, (year - spec.years.start) as f64);
        let u: f64 = rng.gen();
        let route = if u < profile.gold {
            Some(OaType::Gold)
        } else if u < profile.gold + profile.bronze {
            Some(OaType::Bronze)
        } else if u < profile.gold + profile.bronze + profile.green {
            Some(OaType::Green)
        } else {
            None
        };
        let mut statuses = StatusSet::empty();
        if let Some(t) = route {
            statuses.insert(t);
            if rng.gen::<f64>() < spec.multi_status_rate {
                // Only add statuses that lose under gold > bronze > green.
                match t {
                    OaType::Gold => statuses.insert(if rng.gen() {
                        OaType::Bronze
                    } else {
                        OaType::Green
                    }),
                    OaType::Bronze => statuses.insert(OaType::Green),
                    OaType::Green => {}
                }
            }
        }
        let has_doi = rng.gen::<f64>() < spec.doi_rate;

        let mut countries = Vec::new();
        let mut institutions = Vec::new();
        for a in actors {
            let actor = &spec.actors[a];
            match actor.kind {
                ActorKind::Country => countries.push(actor.id.clone()),
                ActorKind::Institution => institutions.push(actor.id.clone()),
            }
        }

        PublicationRecord {
            id: format!("syn-{index:09}"),
            year,
            doc_type,
            raw_statuses: statuses,
            subject_categories: categories
                .into_iter()
                .map(|i| spec.fields[i].subject_category.clone())
                .collect(),
            has_doi,
            countries,
            institutions,
        }
    }
}

/// Generates the corpus described by `spec`, together with the matching
/// classification and actor registries.
pub fn generate(spec: &SynthSpec) -> Result<SynthCorpus, SynthError> {
    spec.validate()?;
    let sampler = Sampler::new(spec)?;
    let records = (0..spec.n_records)
        .into_par_iter()
        .map(|i| sampler.record(i))
        .collect();
    Ok(SynthCorpus {
        records,
        registry: spec.registry(),
        actors: spec.actor_registry(),
    })
}

/// Illustrative field set: two subject categories per discipline, with OA
/// rates ordered roughly like observed practice (biology and medicine most
/// open, engineering and computer science least).
const DEMO_FIELDS: [(&str, &str, &str, [f64; 3]); 22] = [
    (
        "Ecology",
        "Applied biology - Ecology",
        "LS8",
        [0.20, 0.08, 0.07],
    ),
    (
        "Agronomy",
        "Applied biology - Ecology",
        "LS9",
        [0.18, 0.07, 0.05],
    ),
    (
        "Cell Biology",
        "Fundamental biology",
        "LS3",
        [0.32, 0.14, 0.12],
    ),
    (
        "Biochemistry & Molecular Biology",
        "Fundamental biology",
        "LS1",
        [0.28, 0.12, 0.10],
    ),
    (
        "Chemistry, Physical",
        "Chemistry",
        "PE4",
        [0.10, 0.06, 0.05],
    ),
    ("Chemistry, Organic", "Chemistry", "PE5", [0.09, 0.06, 0.03]),
    (
        "Computer Science, Information Systems",
        "Computer science",
        "PE6",
        [0.05, 0.03, 0.03],
    ),
    (
        "Medical Informatics",
        "Computer science",
        "PE6",
        [0.08, 0.03, 0.03],
    ),
    ("Mathematics", "Mathematics", "PE1", [0.08, 0.05, 0.09]),
    (
        "Statistics & Probability",
        "Mathematics",
        "PE1",
        [0.08, 0.05, 0.08],
    ),
    (
        "Physics, Condensed Matter",
        "Physics",
        "PE3",
        [0.12, 0.06, 0.10],
    ),
    (
        "Physics, Particles & Fields",
        "Physics",
        "PE2",
        [0.18, 0.06, 0.12],
    ),
    (
        "Health Care Sciences & Services",
        "Medical research",
        "LS7",
        [0.22, 0.10, 0.08],
    ),
    ("Immunology", "Medical research", "LS6", [0.26, 0.10, 0.08]),
    (
        "Engineering, Electrical & Electronic",
        "Engineering",
        "PE7",
        [0.08, 0.04, 0.04],
    ),
    (
        "Engineering, Chemical",
        "Engineering",
        "PE8",
        [0.07, 0.05, 0.03],
    ),
    (
        "Astronomy & Astrophysics",
        "Earth sciences - Astronomy - Astrophysics",
        "PE9",
        [0.22, 0.10, 0.14],
    ),
    (
        "Geosciences, Multidisciplinary",
        "Earth sciences - Astronomy - Astrophysics",
        "PE10",
        [0.18, 0.08, 0.08],
    ),
    ("History", "Humanities", "SH6", [0.08, 0.06, 0.04]),
    ("Literature", "Humanities", "SH5", [0.07, 0.06, 0.04]),
    ("Economics", "Social sciences", "SH1", [0.09, 0.06, 0.07]),
    ("Psychology", "Social sciences", "SH4", [0.12, 0.06, 0.06]),
];

/// (id, name, relative volume, emphasized categories)
const DEMO_COUNTRIES: [(&str, &str, f64, &[usize]); 20] = [
    ("USA", "United States", 18.0, &[2, 3, 12, 13]),
    ("CHN", "China", 16.0, &[4, 5, 14, 15]),
    ("GBR", "United Kingdom", 6.0, &[12, 13, 20, 21]),
    ("DEU", "Germany", 6.0, &[10, 11, 4]),
    ("JPN", "Japan", 5.0, &[10, 14, 2]),
    ("FRA", "France", 4.5, &[8, 9, 11]),
    ("ITA", "Italy", 4.0, &[12, 16]),
    ("CAN", "Canada", 4.0, &[0, 12]),
    ("ESP", "Spain", 3.5, &[0, 1]),
    ("AUS", "Australia", 3.5, &[0, 17]),
    ("NLD", "Netherlands", 2.5, &[12, 20]),
    ("BRA", "Brazil", 2.5, &[1, 0]),
    ("KOR", "South Korea", 3.0, &[14, 6]),
    ("IND", "India", 3.5, &[5, 6, 14]),
    ("CHE", "Switzerland", 2.0, &[3, 11]),
    ("POL", "Poland", 2.0, &[10, 8]),
    ("RUS", "Russia", 2.5, &[10, 15, 8]),
    ("TUR", "Turkey", 2.0, &[14, 12]),
    ("ROU", "Romania", 1.0, &[14, 15, 6]),
    ("UKR", "Ukraine", 0.8, &[10, 14]),
];

impl SynthSpec {
    /// A ready-made world of 22 categories, 20 countries and six
    /// institutions, for demos and benchmarks.
    pub fn demo(seed: u64, n_records: u64) -> SynthSpec {
        let fields = DEMO_FIELDS
            .iter()
            .map(|(sc, ost, erc, [g, b, gr])| SynthField {
                subject_category: sc.to_string(),
                ost_discipline: ost.to_string(),
                erc_subfield: erc.to_string(),
                oa: OaProfile {
                    gold: *g,
                    bronze: *b,
                    green: *gr,
                },
                trend: OaProfile {
                    gold: 0.01,
                    bronze: -0.002,
                    green: 0.002,
                },
            })
            .collect();
        let profile = |emphasis: &[usize]| -> BTreeMap<String, f64> {
            // Half spread evenly, half on the emphasized categories.
            let base = 0.5 / DEMO_FIELDS.len() as f64;
            let boost = 0.5 / emphasis.len() as f64;
            DEMO_FIELDS
                .iter()
                .enumerate()
                .map(|(i, f)| {
                    let w = base + if emphasis.contains(&i) { boost } else { 0.0 };
                    (f.0.to_string(), w)
                })
                .collect()
        };
        let mut actors: Vec<SynthActor> = DEMO_COUNTRIES
            .iter()
            .map(|(id, name, volume, emphasis)| SynthActor {
                id: id.to_string(),
                kind: ActorKind::Country,
                group: None,
                display_name: Some(name.to_string()),
                specialization: profile(emphasis),
                volume: *volume,
            })
            .collect();
        let institutions: [(&str, Group, f64, &[usize]); 6] = [
            ("UNIV-MED", Group::G1, 1.5, &[12, 13, 2]),
            ("UNIV-SCI", Group::G1, 1.5, &[10, 4, 8]),
            ("UNIV-SSH", Group::G2, 0.6, &[18, 19, 20, 21]),
            ("ENG-SCHOOL-A", Group::G2, 0.5, &[14, 15, 6]),
            ("ENG-SCHOOL-B", Group::G3, 0.2, &[14, 6, 7]),
            ("UNIV-SMALL", Group::G3, 0.2, &[0, 20]),
        ];
        actors.extend(
            institutions
                .iter()
                .map(|(id, group, volume, emphasis)| SynthActor {
                    id: id.to_string(),
                    kind: ActorKind::Institution,
                    group: Some(*group),
                    display_name: None,
                    specialization: profile(emphasis),
                    volume: *volume,
                }),
        );
        SynthSpec {
            seed,
            years: YearRange {
                start: 2015,
                end: 2017,
            },
            n_records,
            fields,
            actors,
            multi_category_rate: 0.3,
            multi_status_rate: 0.25,
            collaboration_rate: 0.25,
            unaffiliated_rate: 0.05,
            doi_rate: 0.9,
            doc_types: [
                (DocType::Article, 0.8),
                (DocType::Review, 0.08),
                (DocType::Letter, 0.04),
                (DocType::Proceeding, 0.08),
            ]
            .into_iter()
            .collect(),
        }
    }

    /// Random world with `n_fields` categories over up to 11 disciplines and
    /// `n_actors` countries, all parameters drawn from `seed`.
    pub fn randomized(seed: u64, n_records: u64, n_actors: usize, n_fields: usize) -> SynthSpec {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x005e_ed0f_5eed);
        let fields: Vec<SynthField> = (0..n_fields)
            .map(|i| {
                let total: f64 = rng.gen_range(0.0..0.9);
                let g = rng.gen_range(0.0..=1.0) * total;
                let b = rng.gen_range(0.0..=1.0) * (total - g);
                SynthField {
                    subject_category: format!("SC{i:03}"),
                    ost_discipline: format!("D{:02}", rng.gen_range(0..11)),
                    erc_subfield: format!("E{:02}", rng.gen_range(0..25)),
                    oa: OaProfile {
                        gold: g,
                        bronze: b,
                        green: total - g - b,
                    },
                    trend: OaProfile::default(),
                }
            })
            .collect();
        let actors = (0..n_actors)
            .map(|i| {
                let raw: Vec<f64> = (0..n_fields)
                    .map(|_| rng.gen_range(0.0..1.0f64).powi(3))
                    .collect();
                let sum: f64 = raw.iter().sum::<f64>().max(f64::MIN_POSITIVE);
                let mut specialization: BTreeMap<String, f64> = fields
                    .iter()
                    .zip(&raw)
                    .map(|(f, w)| (f.subject_category.clone(), w / sum))
                    .collect();
                // Absorb rounding so the weights sum to 1 within tolerance.
                let drift = 1.0 - specialization.values().sum::<f64>();
                *specialization.values_mut().next().unwrap() += drift;
                SynthActor {
                    id: format!("A{i:02}"),
                    kind: ActorKind::Country,
                    group: None,
                    display_name: None,
                    specialization,
                    volume: rng.gen_range(0.2..5.0),
                }
            })
            .collect();
        SynthSpec {
            seed,
            years: YearRange {
                start: 2015,
                end: 2017,
            },
            n_records,
            fields,
            actors,
            multi_category_rate: rng.gen_range(0.0..0.6),
            multi_status_rate: rng.gen_range(0.0..0.5),
            collaboration_rate: rng.gen_range(0.0..0.6),
            unaffiliated_rate: rng.gen_range(0.0..0.2),
            doi_rate: 1.0,
            doc_types: BTreeMap::new(),
        }
    }
}
