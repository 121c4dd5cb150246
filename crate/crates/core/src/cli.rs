//! Command-line surface: `validate`, `indicators`, `rank`, `compare`,
//! `series` and `synth`.
//!
//! Exit codes: 0 success, 2 usage or configuration error, 3 data error.
//! Every run that writes to `--out` also writes `<out>.manifest.json` with
//! the configuration, corpus statistics and tool version. Nothing in the
//! manifest depends on wall-clock time, so identical inputs give identical
//! bytes.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use serde_json::json;

use crate::analysis::{
    self, filter_actors, rank, rank_shift, spearman, top_n, AnalysisError, Metric, RankOrder,
};
use crate::engine::{
    build_indicator_table, yearly_series, AggregateOptions, EngineError, IndicatorReport,
};
use crate::ingest::{self, CorpusStats, IngestError, LoadOptions, UnknownCategoryPolicy};
use crate::model::{
    ActorKind, ActorRegistry, ClassificationRegistry, DocType, Group, IndicatorTable, Level,
    PublicationRecord, StatusPriority, YearWindow,
};
use crate::synth::{self, SynthError, SynthSpec};

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_USAGE,
            CliError::Data(_) => EXIT_DATA,
        }
    }
}

impl From<IngestError> for CliError {
    fn from(e: IngestError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<EngineError> for CliError {
    fn from(e: EngineError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<SynthError> for CliError {
    fn from(e: SynthError) -> Self {
        match e {
            SynthError::Io { .. } => CliError::Data(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

fn write_err(path: &Path) -> impl Fn(io::Error) -> CliError + '_ {
    move |e| CliError::Data(format!("{}: {e}", path.display()))
}

#[derive(Debug, Parser)]
#[command(
    name = "noai",
    version,
    about = "Field-normalized open-access indicators"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a corpus against a registry and report unclassifiable records.
    Validate(ValidateArgs),
    /// OA share, NOAI and OA counts per actor.
    Indicators(IndicatorArgs),
    /// Ranks by OA share and NOAI at one level, with rank shifts and Spearman rho.
    Rank(IndicatorArgs),
    /// Like `rank`, for several normalization levels side by side.
    Compare(IndicatorArgs),
    /// Yearly world OA shares, total, by type and optionally by field.
    Series(SeriesArgs),
    /// Generate a synthetic corpus with matching registries.
    Synth(SynthArgs),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct InputArgs {
    /// Line-delimited JSON corpus.
    #[arg(long)]
    pub corpus: PathBuf,
    /// Classification registry CSV (subject_category,ost_discipline,erc_subfield).
    #[arg(long)]
    pub registry: PathBuf,
    /// Inclusive year window, `Y1:Y2`.
    #[arg(long)]
    pub window: Option<YearWindow>,
    /// Accepted document types (article, letter, review, proceeding).
    #[arg(long, value_delimiter = ',')]
    pub doc_types: Vec<DocType>,
    /// Drop records without a DOI.
    #[arg(long)]
    pub require_doi: bool,
    /// Abort on malformed lines, unknown categories and empty windows.
    #[arg(long)]
    pub strict: bool,
    /// Registry disciplines and sub-fields must use the reference nomenclatures.
    #[arg(long)]
    pub strict_nomenclature: bool,
    /// Status precedence for records with several OA statuses.
    #[arg(long, default_value = "gold,bronze,green")]
    #[serde(serialize_with = "display")]
    pub priority: StatusPriority,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct IndicatorArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Actor registry CSV (actor_id,kind,group,display_name).
    #[arg(long)]
    pub actors: Option<PathBuf>,
    #[arg(long, default_value = "country")]
    #[serde(serialize_with = "display")]
    pub actor_kind: ActorKind,
    /// Normalization level(s) for `rank` (one, default ost-discipline) and
    /// `compare` (default subject-category,ost-discipline). `indicators`
    /// always reports the subject-category and ost-discipline columns.
    #[arg(long, value_delimiter = ',')]
    pub level: Vec<Level>,
    /// Keep actors whose fractional output strictly exceeds this.
    #[arg(long, default_value_t = analysis::DEFAULT_MIN_PUBS)]
    pub min_pubs: f64,
    /// Keep only the N largest producers.
    #[arg(long)]
    pub top_n: Option<usize>,
    /// Institution group filter.
    #[arg(long)]
    #[serde(serialize_with = "display_opt")]
    pub group: Option<Group>,
    /// Rank 1 goes to the highest value instead of the lowest.
    #[arg(long)]
    pub descending: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SeriesArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value = "ost-discipline")]
    #[serde(serialize_with = "display")]
    pub level: Level,
    /// Add one column per field at `--level`.
    #[arg(long)]
    pub by_field: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SynthArgs {
    /// Generator spec (JSON).
    #[arg(long, conflicts_with = "demo")]
    pub spec: Option<PathBuf>,
    /// Use the built-in demo world with this many records.
    #[arg(long)]
    pub demo: Option<u64>,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Corpus output path.
    #[arg(long)]
    pub out: PathBuf,
    /// Registry output path; defaults to `<out>.registry.csv`.
    #[arg(long)]
    pub registry: Option<PathBuf>,
    /// Actor registry output path; defaults to `<out>.actors.csv`.
    #[arg(long)]
    pub actors: Option<PathBuf>,
}

fn display<T: std::fmt::Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn display_opt<T: std::fmt::Display, S: Serializer>(
    v: &Option<T>,
    s: S,
) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.collect_str(v),
        None => s.serialize_none(),
    }
}

/// Tabular output: CSV is canonical, JSON mirrors it row for row.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Int(i64),
    /// Fixed-point number with the given number of decimals.
    Num(f64, usize),
    Missing,
}

impl Cell {
    fn fixed(v: f64, decimals: usize) -> Cell {
        Cell::Num(v, decimals)
    }

    fn opt(v: Option<f64>, decimals: usize) -> Cell {
        v.map_or(Cell::Missing, |v| Cell::Num(v, decimals))
    }

    fn render(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Int(i) => i.to_string(),
            Cell::Num(v, d) => format_fixed(*v, *d),
            Cell::Missing => String::new(),
        }
    }
}

/// `{:.d}` with negative zero printed as zero.
pub fn format_fixed(v: f64, decimals: usize) -> String {
    let s = format!("{v:.decimals$}");
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_string()
    } else {
        s
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Cell::Text(t) => s.serialize_str(t),
            Cell::Int(i) => s.serialize_i64(*i),
            // The JSON number is the CSV text read back, so both carry the
            // same value.
            Cell::Num(..) => {
                s.serialize_f64(self.render().parse().expect("formatted float parses"))
            }
            Cell::Missing => s.serialize_none(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

struct JsonRow<'a>(&'a [String], &'a [Cell]);

impl Serialize for JsonRow<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0.iter().zip(self.1) {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

impl Table {
    fn new<I: IntoIterator<Item = S>, S: Into<String>>(columns: I) -> Self {
        Table {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn write_csv<W: Write>(&self, w: W) -> csv::Result<()> {
        let mut csv = csv::Writer::from_writer(w);
        csv.write_record(&self.columns)?;
        for row in &self.rows {
            csv.write_record(row.iter().map(Cell::render))?;
        }
        csv.flush()?;
        Ok(())
    }

    pub fn to_json_rows(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|r| serde_json::to_value(JsonRow(&self.columns, r)).expect("serializable row"))
            .collect();
        serde_json::Value::Array(rows)
    }
}

/// Writes `table` (plus an optional JSON-only summary) to `--out` or stdout.
fn emit(
    output: &OutputArgs,
    table: &Table,
    summary: Option<&Table>,
) -> Result<Vec<String>, CliError> {
    let mut written = Vec::new();
    let mut sink: Box<dyn Write> = match &output.out {
        Some(path) => {
            written.push(path.display().to_string());
            Box::new(BufWriter::new(File::create(path).map_err(write_err(path))?))
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let io_err = |e: io::Error| CliError::Data(format!("writing output: {e}"));
    match output.format {
        Format::Csv => {
            table
                .write_csv(&mut sink)
                .map_err(|e| CliError::Data(format!("writing output: {e}")))?;
            if let Some(summary) = summary {
                match &output.out {
                    Some(path) => {
                        let side = sidecar(path, "summary.csv");
                        let f = File::create(&side).map_err(write_err(&side))?;
                        summary
                            .write_csv(f)
                            .map_err(|e| CliError::Data(format!("{}: {e}", side.display())))?;
                        written.push(side.display().to_string());
                    }
                    None => {
                        for row in &summary.rows {
                            let cells: Vec<String> = summary
                                .columns
                                .iter()
                                .zip(row)
                                .map(|(c, v)| format!("{c}={}", v.render()))
                                .collect();
                            eprintln!("# {}", cells.join(" "));
                        }
                    }
                }
            }
        }
        Format::Json => {
            let value = match summary {
                Some(summary) => {
                    json!({ "rows": table.to_json_rows(), "summary": summary.to_json_rows() })
                }
                None => table.to_json_rows(),
            };
            serde_json::to_writer_pretty(&mut sink, &value)
                .map_err(|e| CliError::Data(e.to_string()))?;
            sink.write_all(b"\n").map_err(io_err)?;
        }
    }
    sink.flush().map_err(io_err)?;
    Ok(written)
}

/// `path` with `.suffix` appended to the full file name.
pub fn sidecar(path: &Path, suffix: &str) -> PathBuf {
    let mut name = path
        .file_name()
        .map(|n| n.to_os_string())
        .unwrap_or_default();
    name.push(".");
    name.push(suffix);
    path.with_file_name(name)
}

fn write_manifest(
    out: Option<&Path>,
    command: &str,
    body: serde_json::Value,
) -> Result<(), CliError> {
    let Some(out) = out else { return Ok(()) };
    let manifest = json!({
        "tool": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "run": body,
    });
    let path = sidecar(out, "manifest.json");
    let mut f = BufWriter::new(File::create(&path).map_err(write_err(&path))?);
    serde_json::to_writer_pretty(&mut f, &manifest).map_err(|e| CliError::Data(e.to_string()))?;
    f.write_all(b"\n").map_err(write_err(&path))?;
    f.flush().map_err(write_err(&path))
}

struct Loaded {
    registry: ClassificationRegistry,
    records: Vec<PublicationRecord>,
    stats: CorpusStats,
}

fn load(input: &InputArgs, policy: UnknownCategoryPolicy) -> Result<Loaded, CliError> {
    let registry = ingest::load_registry(&input.registry, input.strict_nomenclature)?;
    let options = LoadOptions {
        doc_types: (!input.doc_types.is_empty())
            .then(|| input.doc_types.iter().copied().collect::<BTreeSet<_>>()),
        window: input.window,
        require_doi: input.require_doi,
        unknown_categories: policy,
        strict: input.strict,
    };
    let (records, stats) = ingest::load_corpus(&input.corpus, &registry, &options)?;
    log::info!(
        "read {} records, accepted {}, rejected {}",
        stats.records_read,
        stats.records_accepted,
        stats.records_rejected
    );
    Ok(Loaded {
        registry,
        records,
        stats,
    })
}

fn engine_options(input: &InputArgs) -> AggregateOptions {
    AggregateOptions {
        priority: input.priority,
        strict: input.strict,
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Validate(args) => cmd_validate(&args),
        Command::Indicators(args) => cmd_indicators(&args),
        Command::Rank(args) => cmd_compare(&args, "rank"),
        Command::Compare(args) => cmd_compare(&args, "compare"),
        Command::Series(args) => cmd_series(&args),
        Command::Synth(args) => cmd_synth(&args),
    }
}

pub fn cmd_validate(args: &ValidateArgs) -> Result<(), CliError> {
    let loaded = load(&args.input, UnknownCategoryPolicy::Keep)?;
    let diagnostics = ingest::validate_corpus(&loaded.records, &loaded.registry);
    let mut table = Table::new(["record_id", "unknown_categories"]);
    for d in &diagnostics {
        table.rows.push(vec![
            Cell::Text(d.record_id.clone()),
            Cell::Text(d.unknown_categories.join(";")),
        ]);
    }
    let written = emit(&args.output, &table, None)?;
    write_manifest(
        args.output.out.as_deref(),
        "validate",
        json!({
            "config": args,
            "corpus_stats": loaded.stats,
            "registry": registry_summary(&loaded.registry),
            "diagnostics": diagnostics.len(),
            "outputs": written,
        }),
    )?;
    if diagnostics.is_empty() {
        Ok(())
    } else {
        Err(CliError::Data(format!(
            "{} record(s) reference subject categories missing from the registry",
            diagnostics.len()
        )))
    }
}

fn registry_summary(registry: &ClassificationRegistry) -> serde_json::Value {
    json!({
        "subject_categories": registry.len(),
        "ost_disciplines": registry.field_count(Level::OstDiscipline),
        "erc_subfields": registry.field_count(Level::ErcSubfield),
    })
}

struct Computed {
    loaded: Loaded,
    report: IndicatorReport,
    /// After actor filters and top-N.
    table: IndicatorTable,
}

fn compute(args: &IndicatorArgs, levels: &[Level]) -> Result<Computed, CliError> {
    let loaded = load(&args.input, UnknownCategoryPolicy::Exclude)?;
    let in_window = loaded
        .records
        .iter()
        .filter(|r| args.input.window.is_none_or(|w| w.contains(r.year)))
        .count();
    if in_window == 0 {
        return Err(CliError::Data("no records in window".into()));
    }
    let actors: Option<ActorRegistry> = args
        .actors
        .as_deref()
        .map(ingest::load_actors)
        .transpose()?;
    let report = build_indicator_table(
        &loaded.records,
        &loaded.registry,
        args.actor_kind,
        args.input.window,
        actors.as_ref(),
        levels,
        &engine_options(&args.input),
    )?;
    for ex in &report.excluded_fields {
        log::warn!(
            "{}: field \"{}\" ({}) has no usable world share; left out of the NOAI",
            ex.actor,
            ex.field,
            ex.level
        );
    }
    let mut table = filter_actors(
        &report.table,
        args.min_pubs,
        Some(args.actor_kind),
        args.group,
    );
    table = match args.top_n {
        Some(n) => top_n(&table, n),
        None => top_n(&table, table.len()),
    };
    Ok(Computed {
        loaded,
        report,
        table,
    })
}

pub const INDICATOR_COLUMNS: [&str; 10] = [
    "actor",
    "display_name",
    "x_total",
    "oa_share",
    "noai_subject_category",
    "noai_ost_discipline",
    "oa_gold_share",
    "oa_bronze_share",
    "oa_green_share",
    "n_oa_whole",
];

/// The canonical indicator table: 2-decimal shares and NOAI.
pub fn indicator_table(table: &IndicatorTable) -> Table {
    let mut out = Table::new(INDICATOR_COLUMNS);
    for r in &table.rows {
        out.rows.push(vec![
            Cell::Text(r.actor.clone()),
            Cell::Text(r.display_name.clone()),
            Cell::fixed(r.x_total, 2),
            Cell::fixed(r.oa_share, 2),
            Cell::opt(r.noai_subject_category, 2),
            Cell::opt(r.noai_ost_discipline, 2),
            Cell::fixed(r.oa_gold_share, 2),
            Cell::fixed(r.oa_bronze_share, 2),
            Cell::fixed(r.oa_green_share, 2),
            Cell::Int(r.n_oa_whole as i64),
        ]);
    }
    out
}

pub fn cmd_indicators(args: &IndicatorArgs) -> Result<(), CliError> {
    let c = compute(args, &[Level::SubjectCategory, Level::OstDiscipline])?;
    let table = indicator_table(&c.table);
    let written = emit(&args.output, &table, None)?;
    write_manifest(
        args.output.out.as_deref(),
        "indicators",
        json!({
            "config": args,
            "corpus_stats": c.loaded.stats,
            "registry": registry_summary(&c.loaded.registry),
            "records_in_window": c.report.aggregates[0].n_records,
            "actors_computed": c.report.table.len(),
            "rows": c.table.len(),
            "excluded_fields": c.report.excluded_fields,
            "outputs": written,
        }),
    )
}

/// `rank` (one level) and `compare` (several levels).
pub fn cmd_compare(args: &IndicatorArgs, command: &str) -> Result<(), CliError> {
    let levels: Vec<Level> = match (command, args.level.as_slice()) {
        ("rank", []) => vec![Level::OstDiscipline],
        ("rank", [one]) => vec![*one],
        ("rank", _) => {
            return Err(CliError::Config(
                "rank takes a single --level; use compare".into(),
            ))
        }
        (_, []) => vec![Level::SubjectCategory, Level::OstDiscipline],
        (_, many) => {
            let mut seen = BTreeSet::new();
            many.iter().copied().filter(|l| seen.insert(*l)).collect()
        }
    };
    let c = compute(args, &levels)?;

    // Rank the actors whose NOAI is defined at every requested level, so all
    // rankings cover the same set.
    let (kept, dropped): (Vec<_>, Vec<_>) = c
        .table
        .rows
        .iter()
        .cloned()
        .partition(|r| levels.iter().all(|l| r.noai(*l).is_some()));
    for r in &dropped {
        log::warn!("{}: NOAI undefined at some level; not ranked", r.actor);
    }
    let ranked = IndicatorTable {
        rows: kept,
        ..c.table.clone()
    };
    if ranked.is_empty() {
        return Err(AnalysisError::EmptyTable.into());
    }
    let order = if args.descending {
        RankOrder::Descending
    } else {
        RankOrder::Ascending
    };
    let share_ranks = rank(&ranked, Metric::OaShare, order)?;

    let mut columns: Vec<String> = [
        "actor",
        "display_name",
        "x_total",
        "n_oa_whole",
        "oa_share",
        "share_rank",
    ]
    .into_iter()
    .map(String::from)
    .collect();
    let single = levels.len() == 1;
    for l in &levels {
        let suffix = if single {
            String::new()
        } else {
            format!("_{}", l.snake())
        };
        columns.push(if single {
            "noai".into()
        } else {
            format!("noai_{}", l.snake())
        });
        columns.push(format!("noai_rank{suffix}"));
        columns.push(format!("delta{suffix}"));
    }
    let mut table = Table::new(columns);
    let mut summary = Table::new(["level", "n", "spearman_rho", "rank_order", "delta"]);

    let mut per_level = Vec::new();
    for &l in &levels {
        let noai_ranks = rank(&ranked, Metric::Noai(l), order)?;
        let shifts = rank_shift(&share_ranks, &noai_ranks)?;
        let rho = spearman(&share_ranks, &noai_ranks)?;
        summary.rows.push(vec![
            Cell::Text(l.as_str().into()),
            Cell::Int(ranked.len() as i64),
            Cell::fixed(rho, 4),
            Cell::Text(
                match order {
                    RankOrder::Ascending => "ascending",
                    RankOrder::Descending => "descending",
                }
                .into(),
            ),
            Cell::Text("noai_rank - share_rank".into()),
        ]);
        per_level.push((l, noai_ranks, shifts));
    }
    for (i, r) in ranked.rows.iter().enumerate() {
        let mut row = vec![
            Cell::Text(r.actor.clone()),
            Cell::Text(r.display_name.clone()),
            Cell::fixed(r.x_total, 2),
            Cell::Int(r.n_oa_whole as i64),
            Cell::fixed(r.oa_share, 2),
            Cell::Int(share_ranks.rows[i].rank as i64),
        ];
        for (l, noai_ranks, shifts) in &per_level {
            row.push(Cell::opt(r.noai(*l), 2));
            row.push(Cell::Int(noai_ranks.rows[i].rank as i64));
            row.push(Cell::Int(shifts[i].delta));
        }
        table.rows.push(row);
    }

    let written = emit(&args.output, &table, Some(&summary))?;
    let summary_json = summary.to_json_rows();
    write_manifest(
        args.output.out.as_deref(),
        command,
        json!({
            "config": args,
            "levels": levels.iter().map(|l| l.as_str()).collect::<Vec<_>>(),
            "corpus_stats": c.loaded.stats,
            "registry": registry_summary(&c.loaded.registry),
            "records_in_window": c.report.aggregates[0].n_records,
            "rows": ranked.len(),
            "not_ranked": dropped.iter().map(|r| r.actor.as_str()).collect::<Vec<_>>(),
            "summary": summary_json,
            "excluded_fields": c.report.excluded_fields,
            "outputs": written,
        }),
    )
}

pub fn cmd_series(args: &SeriesArgs) -> Result<(), CliError> {
    let loaded = load(&args.input, UnknownCategoryPolicy::Exclude)?;
    let series = yearly_series(
        &loaded.records,
        &loaded.registry,
        args.level,
        args.input.window,
        &engine_options(&args.input),
    )?;
    if series.rows.is_empty() {
        return Err(CliError::Data("no records in window".into()));
    }
    let mut columns: Vec<String> = ["year", "total_share", "gold", "bronze", "green"]
        .into_iter()
        .map(String::from)
        .collect();
    if args.by_field {
        columns.extend(series.fields.iter().cloned());
    }
    let mut table = Table::new(columns);
    for r in &series.rows {
        let mut row = vec![
            Cell::Int(r.year as i64),
            Cell::fixed(r.total_share, 2),
            Cell::fixed(r.gold, 2),
            Cell::fixed(r.bronze, 2),
            Cell::fixed(r.green, 2),
        ];
        if args.by_field {
            row.extend(r.by_field.iter().map(|v| Cell::opt(*v, 2)));
        }
        table.rows.push(row);
    }
    let written = emit(&args.output, &table, None)?;
    write_manifest(
        args.output.out.as_deref(),
        "series",
        json!({
            "config": args,
            "corpus_stats": loaded.stats,
            "registry": registry_summary(&loaded.registry),
            "years": series.rows.iter().map(|r| json!({"year": r.year, "records": r.n_records})).collect::<Vec<_>>(),
            "outputs": written,
        }),
    )
}

pub fn cmd_synth(args: &SynthArgs) -> Result<(), CliError> {
    let spec = match (&args.spec, args.demo) {
        (Some(path), _) => SynthSpec::load(path)?,
        (None, Some(n)) => SynthSpec::demo(args.seed, n),
        (None, None) => return Err(CliError::Config("synth needs --spec or --demo".into())),
    };
    let corpus = synth::generate(&spec)?;
    let registry_path = args
        .registry
        .clone()
        .unwrap_or_else(|| sidecar(&args.out, "registry.csv"));
    let actors_path = args
        .actors
        .clone()
        .unwrap_or_else(|| sidecar(&args.out, "actors.csv"));

    let f = File::create(&args.out).map_err(write_err(&args.out))?;
    ingest::write_corpus(f, &corpus.records).map_err(write_err(&args.out))?;
    let f = File::create(&registry_path).map_err(write_err(&registry_path))?;
    ingest::write_registry(f, &corpus.registry).map_err(|e| CliError::Data(e.to_string()))?;
    let f = File::create(&actors_path).map_err(write_err(&actors_path))?;
    ingest::write_actors(f, &corpus.actors).map_err(|e| CliError::Data(e.to_string()))?;

    write_manifest(
        Some(&args.out),
        "synth",
        json!({
            "config": args,
            "spec": spec,
            "generator": "ChaCha8 stream per record (seed, stream = record index)",
            "records": corpus.records.len(),
            "outputs": [
                args.out.display().to_string(),
                registry_path.display().to_string(),
                actors_path.display().to_string(),
            ],
        }),
    )
}
