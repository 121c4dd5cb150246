//! Loading and validating corpus files and registries.
//!
//! The corpus is line-delimited JSON, one publication per line. Lines are
//! parsed in parallel batches and then accepted or rejected sequentially in
//! file order, so the outcome never depends on the thread count.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::model::{
    canonical_erc_subfield, canonical_ost_discipline, Actor, ActorKind, ActorRegistry,
    ClassificationRegistry, DocType, Group, ModelError, PublicationRecord, YearWindow,
};

/// Rejection reason keys reported in [`CorpusStats::rejection_reasons`].
pub mod reason {
    pub const MALFORMED: &str = "malformed";
    pub const EMPTY_ID: &str = "empty_id";
    pub const DUPLICATE_ID: &str = "duplicate_id";
    pub const EMPTY_CATEGORIES: &str = "empty_categories";
    pub const DOC_TYPE: &str = "doc_type_filtered";
    pub const OUT_OF_WINDOW: &str = "year_out_of_window";
    pub const NO_DOI: &str = "no_doi";
    pub const UNKNOWN_CATEGORY: &str = "unknown_category";
}

const BATCH_LINES: usize = 1 << 16;

#[derive(Debug, thiserror::Error)]
pub enum IngestError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("line {line}: malformed record: {reason}")]
    MalformedRecord { line: usize, reason: String },
    #[error("line {line}: record {record}: unknown subject category \"{category}\"")]
    UnknownCategory {
        line: usize,
        record: String,
        category: String,
    },
    #[error("line {line}: malformed row: {reason}")]
    MalformedRow { line: usize, reason: String },
    #[error("line {line}: duplicate subject category \"{category}\"")]
    DuplicateCategory { line: usize, category: String },
    #[error("line {line}: \"{name}\" is not an OST discipline")]
    UnknownDiscipline { line: usize, name: String },
    #[error("line {line}: \"{name}\" is not an ERC sub-field")]
    UnknownSubfield { line: usize, name: String },
    #[error("line {line}: {source}")]
    InvalidActor {
        line: usize,
        #[source]
        source: ModelError,
    },
}

/// What to do with records whose categories are missing from the registry.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnknownCategoryPolicy {
    /// Reject the record (fatal under `strict`).
    #[default]
    Exclude,
    /// Accept it; use [`validate_corpus`] to report the gaps.
    Keep,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoadOptions {
    /// Accepted document types; `None` accepts all four.
    pub doc_types: Option<BTreeSet<DocType>>,
    pub window: Option<YearWindow>,
    pub require_doi: bool,
    pub unknown_categories: UnknownCategoryPolicy,
    /// Malformed lines and unknown categories abort the load.
    pub strict: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub records_read: u64,
    pub records_accepted: u64,
    pub records_rejected: u64,
    pub rejection_reasons: BTreeMap<String, u64>,
    /// Smallest and largest year among accepted records.
    pub year_range: Option<(i32, i32)>,
}

impl CorpusStats {
    fn reject(&mut self, reason: &str) {
        self.records_rejected += 1;
        *self
            .rejection_reasons
            .entry(reason.to_string())
            .or_default() += 1;
    }

    fn accept(&mut self, year: i32) {
        self.records_accepted += 1;
        self.year_range = Some(match self.year_range {
            None => (year, year),
            Some((lo, hi)) => (lo.min(year), hi.max(year)),
        });
    }
}

pub fn load_corpus(
    path: &Path,
    registry: &ClassificationRegistry,
    options: &LoadOptions,
) -> Result<(Vec<PublicationRecord>, CorpusStats), IngestError> {
    let file = File::open(path).map_err(|source| IngestError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    read_corpus(BufReader::with_capacity(1 << 20, file), registry, options).map_err(|e| match e {
        IngestError::Io { source, .. } => IngestError::Io {
            path: path.to_path_buf(),
            source,
        },
        other => other,
    })
}

pub fn read_corpus<R: BufRead>(
    reader: R,
    registry: &ClassificationRegistry,
    options: &LoadOptions,
) -> Result<(Vec<PublicationRecord>, CorpusStats), IngestError> {
    let mut loader = Loader {
        registry,
        options,
        stats: CorpusStats::default(),
        seen_ids: HashSet::new(),
        accepted: Vec::new(),
    };
    let mut batch: Vec<(usize, String)> = Vec::with_capacity(BATCH_LINES);
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|source| IngestError::Io {
            path: PathBuf::from("<input>"),
            source,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        batch.push((idx + 1, line));
        if batch.len() == BATCH_LINES {
            loader.process(&batch)?;
            batch.clear();
        }
    }
    loader.process(&batch)?;
    Ok((loader.accepted, loader.stats))
}

struct Loader<'a> {
    registry: &'a ClassificationRegistry,
    options: &'a LoadOptions,
    stats: CorpusStats,
    seen_ids: HashSet<String>,
    accepted: Vec<PublicationRecord>,
}

impl Loader<'_> {
    fn process(&mut self, batch: &[(usize, String)]) -> Result<(), IngestError> {
        let parsed: Vec<Result<PublicationRecord, String>> = batch
            .par_iter()
            .map(|(_, line)| {
                serde_json::from_str::<PublicationRecord>(line).map_err(|e| e.to_string())
            })
            .collect();
        for ((line_no, _), result) in batch.iter().zip(parsed) {
            self.stats.records_read += 1;
            let mut record = match result {
                Ok(r) => r,
                Err(reason) => {
                    if self.options.strict {
                        return Err(IngestError::MalformedRecord {
                            line: *line_no,
                            reason,
                        });
                    }
                    log::debug!("line {line_no}: {reason}");
                    self.stats.reject(reason::MALFORMED);
                    continue;
                }
            };
            if let Some(why) = self.check(&mut record, *line_no)? {
                self.stats.reject(why);
            } else {
                self.stats.accept(record.year);
                self.accepted.push(record);
            }
        }
        Ok(())
    }

    /// Returns the rejection reason, or `None` when the record is accepted.
    fn check(
        &mut self,
        record: &mut PublicationRecord,
        line: usize,
    ) -> Result<Option<&'static str>, IngestError> {
        if record.id.is_empty() {
            return Ok(Some(reason::EMPTY_ID));
        }
        if !self.seen_ids.insert(record.id.clone()) {
            return Ok(Some(reason::DUPLICATE_ID));
        }
        record.dedup();
        if record.subject_categories.is_empty() {
            return Ok(Some(reason::EMPTY_CATEGORIES));
        }
        if let Some(types) = &self.options.doc_types {
            if !types.contains(&record.doc_type) {
                return Ok(Some(reason::DOC_TYPE));
            }
        }
        if let Some(window) = &self.options.window {
            if !window.contains(record.year) {
                return Ok(Some(reason::OUT_OF_WINDOW));
            }
        }
        if self.options.require_doi && !record.has_doi {
            return Ok(Some(reason::NO_DOI));
        }
        if self.options.unknown_categories == UnknownCategoryPolicy::Exclude {
            if let Some(cat) = record
                .subject_categories
                .iter()
                .find(|c| !self.registry.contains(c))
            {
                if self.options.strict {
                    return Err(IngestError::UnknownCategory {
                        line,
                        record: record.id.clone(),
                        category: cat.clone(),
                    });
                }
                return Ok(Some(reason::UNKNOWN_CATEGORY));
            }
        }
        Ok(None)
    }
}

/// Writes records in the corpus wire format, one JSON object per line.
pub fn write_corpus<W: Write>(writer: W, records: &[PublicationRecord]) -> io::Result<()> {
    let mut w = BufWriter::new(writer);
    for record in records {
        serde_json::to_writer(&mut w, record)?;
        w.write_all(b"\n")?;
    }
    w.flush()
}

/// A record that cannot be classified with the registry at hand.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub record_id: String,
    pub unknown_categories: Vec<String>,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "record {}: unknown subject categor", self.record_id)?;
        if self.unknown_categories.len() == 1 {
            write!(f, "y \"{}\"", self.unknown_categories[0])
        } else {
            let quoted: Vec<String> = self
                .unknown_categories
                .iter()
                .map(|c| format!("\"{c}\""))
                .collect();
            write!(f, "ies {}", quoted.join(", "))
        }
    }
}

/// One diagnostic per record that references a category missing from
/// `registry`.
pub fn validate_corpus(
    records: &[PublicationRecord],
    registry: &ClassificationRegistry,
) -> Vec<Diagnostic> {
    records
        .iter()
        .filter_map(|r| {
            let unknown: Vec<String> = r
                .subject_categories
                .iter()
                .filter(|c| !registry.contains(c))
                .cloned()
                .collect();
            (!unknown.is_empty()).then(|| Diagnostic {
                record_id: r.id.clone(),
                unknown_categories: unknown,
            })
        })
        .collect()
}

pub const REGISTRY_HEADER: [&str; 3] = ["subject_category", "ost_discipline", "erc_subfield"];
pub const ACTORS_HEADER: [&str; 4] = ["actor_id", "kind", "group", "display_name"];

/// Loads a classification registry. With `strict`, discipline and sub-field
/// names must belong to the reference nomenclatures and are stored in their
/// canonical form (`Comp. Sc.` becomes `Computer science`).
pub fn load_registry(path: &Path, strict: bool) -> Result<ClassificationRegistry, IngestError> {
    let file = File::open(path).map_err(|source| IngestError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    read_registry(file, strict)
}

pub fn read_registry<R: Read>(
    reader: R,
    strict: bool,
) -> Result<ClassificationRegistry, IngestError> {
    let mut csv = csv_reader(reader);
    check_header(&mut csv, &REGISTRY_HEADER)?;
    let mut registry = ClassificationRegistry::new();
    for row in csv.records() {
        let (line, row) = csv_row(row, REGISTRY_HEADER.len())?;
        let category = &row[0];
        let mut ost = row[1].clone();
        let mut erc = row[2].clone();
        if strict {
            ost = canonical_ost_discipline(&ost)
                .ok_or_else(|| IngestError::UnknownDiscipline {
                    line,
                    name: ost.clone(),
                })?
                .to_string();
            erc = canonical_erc_subfield(&erc)
                .ok_or_else(|| IngestError::UnknownSubfield {
                    line,
                    name: erc.clone(),
                })?
                .to_string();
        }
        registry
            .insert(category, &ost, &erc)
            .map_err(|_| IngestError::DuplicateCategory {
                line,
                category: category.clone(),
            })?;
    }
    Ok(registry)
}

pub fn write_registry<W: Write>(
    writer: W,
    registry: &ClassificationRegistry,
) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(REGISTRY_HEADER)?;
    for (cat, ost, erc) in registry.categories() {
        w.write_record([cat, ost, erc])?;
    }
    w.flush()?;
    Ok(())
}

pub fn load_actors(path: &Path) -> Result<ActorRegistry, IngestError> {
    let file = File::open(path).map_err(|source| IngestError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    read_actors(file)
}

pub fn read_actors<R: Read>(reader: R) -> Result<ActorRegistry, IngestError> {
    let mut csv = csv_reader(reader);
    check_header(&mut csv, &ACTORS_HEADER)?;
    let mut registry = ActorRegistry::new();
    for row in csv.records() {
        let (line, row) = csv_row(row, ACTORS_HEADER.len())?;
        let invalid = |source| IngestError::InvalidActor { line, source };
        let kind: ActorKind = row[1].parse().map_err(invalid)?;
        let group: Option<Group> = match row[2].as_str() {
            "" => None,
            g => Some(g.parse().map_err(invalid)?),
        };
        let display = if row[3].is_empty() {
            row[0].clone()
        } else {
            row[3].clone()
        };
        let actor = Actor::new(row[0].clone(), kind, group, display).map_err(invalid)?;
        registry.insert(actor).map_err(invalid)?;
    }
    Ok(registry)
}

pub fn write_actors<W: Write>(writer: W, actors: &ActorRegistry) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(ACTORS_HEADER)?;
    for a in actors.iter() {
        let group = a.group.map(|g| g.as_str()).unwrap_or("");
        w.write_record([
            a.id.as_str(),
            a.kind.as_str(),
            group,
            a.display_name.as_str(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn csv_reader<R: Read>(reader: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(reader)
}

fn check_header<R: Read>(csv: &mut csv::Reader<R>, expected: &[&str]) -> Result<(), IngestError> {
    let header = csv.headers().map_err(|e| IngestError::MalformedRow {
        line: 1,
        reason: e.to_string(),
    })?;
    // An empty input has no header at all; treat it like a header-only file.
    if header.is_empty() {
        return Ok(());
    }
    let got: Vec<&str> = header
        .iter()
        .map(|h| h.trim_start_matches('\u{feff}'))
        .collect();
    if got != expected {
        return Err(IngestError::MalformedRow {
            line: 1,
            reason: format!(
                "expected header `{}`, found `{}`",
                expected.join(","),
                got.join(",")
            ),
        });
    }
    Ok(())
}

fn csv_row(
    row: Result<csv::StringRecord, csv::Error>,
    width: usize,
) -> Result<(usize, Vec<String>), IngestError> {
    let row = row.map_err(|e| IngestError::MalformedRow {
        line: e.position().map(|p| p.line() as usize).unwrap_or(0),
        reason: e.to_string(),
    })?;
    let line = row.position().map(|p| p.line() as usize).unwrap_or(0);
    if row.len() != width {
        return Err(IngestError::MalformedRow {
            line,
            reason: format!("expected {width} fields, found {}", row.len()),
        });
    }
    let fields: Vec<String> = row.iter().map(str::to_string).collect();
    // The group column of the actor file is the only one allowed to be empty.
    let optional = if width == ACTORS_HEADER.len() {
        [2, 3].as_slice()
    } else {
        &[]
    };
    if let Some(i) = (0..width).find(|i| fields[*i].is_empty() && !optional.contains(i)) {
        return Err(IngestError::MalformedRow {
            line,
            reason: format!("empty field {i}"),
        });
    }
    Ok((line, fields))
}
