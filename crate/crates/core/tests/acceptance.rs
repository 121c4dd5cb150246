//! Acceptance criteria 1-10. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

// Checks are written as `!(x <= tol)` so that NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod common;

use std::fs::{self, File};
use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use common::*;
use noai::analysis::{
    filter_actors, rank, rank_shift, rank_values, spearman, top_n, RankOrder, DEFAULT_MIN_PUBS,
};
use noai::cli::{format_fixed, INDICATOR_COLUMNS};
use noai::engine::{
    aggregate, build_indicator_table, field_fractions, normalized_share, AggregateOptions,
    Aggregates,
};
use noai::ingest::{self, LoadOptions};
use noai::model::{
    resolve_status, ActorKind, ClassificationRegistry, IndicatorRow, IndicatorTable, Level,
    OaStatus, OaType, PublicationRecord, StatusSet,
};
use noai::synth::{generate, SynthCorpus, SynthSpec};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("worked counting example", c1_counting_example),
        ("status priority over all subsets", c2_status_priority),
        ("world NOAI equals 1", c3_world_unit),
        ("oracle equivalence", c4_oracle_equivalence),
        ("conservation", c5_conservation),
        ("Spearman reference", c6_spearman),
        ("normalization direction", c7_direction),
        ("publication threshold", c8_threshold),
        ("format round-trip and manifest", c9_round_trip),
        ("throughput at 10^6 records", c10_throughput),
    ];
    let default_hook = panic::take_hook();
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({detail}; {secs:.2}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail} ({secs:.2}s)", i + 1);
            }
        }
    }
    panic::set_hook(default_hook);
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}

fn opts() -> AggregateOptions {
    AggregateOptions::default()
}

fn spec_mapping(spec: &SynthSpec) -> Mapping {
    mapping(spec.fields.iter().map(|f| {
        (
            f.subject_category.as_str(),
            f.ost_discipline.as_str(),
            f.erc_subfield.as_str(),
        )
    }))
}

fn c1_counting_example() -> Outcome {
    let start = Instant::now();
    let rows = [
        ("Medical Informatics", "Computer science", "LS7"),
        (
            "Computer Science, Information Systems",
            "Computer science",
            "PE6",
        ),
        ("Health Care Sciences & Services", "Medical research", "LS7"),
    ];
    let mut reg = ClassificationRegistry::new();
    for (a, b, c) in rows {
        reg.insert(a, b, c).map_err(|e| e.to_string())?;
    }
    let rec = record(
        "multi-field",
        2017,
        &[],
        &rows.iter().map(|r| r.0).collect::<Vec<_>>(),
        &["FRA", "NLD"],
    );
    let expect = |level: Level, want: &[(&str, f64)]| -> Result<(), String> {
        let fv = field_fractions(&rec, &reg, level).map_err(|e| e.to_string())?;
        ensure!(
            fv.entries.len() == want.len(),
            "{level}: {} fields",
            fv.entries.len()
        );
        let agg = aggregate(
            std::slice::from_ref(&rec),
            &reg,
            level,
            ActorKind::Country,
            None,
            &opts(),
        )
        .map_err(|e| e.to_string())?;
        for (name, w) in want {
            let id = reg
                .field_id(level, name)
                .ok_or(format!("no field {name}"))?;
            let got = fv.weight(id).unwrap_or(f64::NAN);
            ensure!((got - w).abs() <= 1e-12, "{level} {name}: {got} != {w}");
            for country in ["FRA", "NLD"] {
                let p = agg.actor(country).ok_or(format!("{country} missing"))?;
                let x = p.fields.iter().find(|f| f.field == id).map_or(0.0, |f| f.x);
                ensure!(
                    (x - w).abs() <= 1e-12,
                    "{country} {name}: credit {x} != {w}"
                );
            }
        }
        Ok(())
    };
    let third = 1.0 / 3.0;
    expect(
        Level::SubjectCategory,
        &[
            ("Medical Informatics", third),
            ("Computer Science, Information Systems", third),
            ("Health Care Sciences & Services", third),
        ],
    )?;
    expect(
        Level::OstDiscipline,
        &[("Computer science", 2.0 / 3.0), ("Medical research", third)],
    )?;
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    Ok(format!(
        "fractions and country credits exact to 1e-12 in {elapsed:?}"
    ))
}

fn c2_status_priority() -> Outcome {
    let subsets: Vec<StatusSet> = StatusSet::all_subsets().collect();
    ensure!(subsets.len() == 8, "{} subsets", subsets.len());
    let mut reg = ClassificationRegistry::new();
    reg.insert("c", "Physics", "PE2").unwrap();
    for set in subsets {
        let names = status_names(set);
        let want = resolve(&names, &DEFAULT_PRIORITY);
        let got = resolve_status(set);
        let got_name = got.oa_type().map(|t| t.as_str());
        ensure!(got_name == want, "{names:?}: {got:?} vs {want:?}");
        ensure!(
            want.is_some() || got == OaStatus::Closed,
            "{names:?} should be closed"
        );

        // The engine files the record under the same type.
        let mut rec = record("r", 2018, &[], &["c"], &["X"]);
        rec.raw_statuses = set;
        let agg = aggregate(
            &[rec],
            &reg,
            Level::SubjectCategory,
            ActorKind::Country,
            None,
            &opts(),
        )
        .unwrap();
        let counts = agg.actor("X").unwrap().oa_by_type_total();
        for t in OaType::ALL {
            let expected = if Some(t.as_str()) == want { 1.0 } else { 0.0 };
            ensure!(
                counts.get(t) == expected,
                "{names:?}: {} counted {}",
                t.as_str(),
                counts.get(t)
            );
        }
    }
    Ok("8/8 subsets".into())
}

fn trial_spec(seed: u64, n: u64, actors: usize, fields: usize) -> SynthSpec {
    SynthSpec::randomized(seed, n, actors, fields)
}

fn world_noai(agg: &Aggregates) -> Result<f64, String> {
    let world = agg.world_actor();
    noai::engine::noai(&world.fields, agg.world())
        .map(|r| r.value)
        .map_err(|e| e.to_string())
}

fn c3_world_unit() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for seed in 0..100u64 {
        let spec = trial_spec(1000 + seed, 1000, 15, 12);
        let corpus = generate(&spec).map_err(|e| e.to_string())?;
        for level in Level::ALL {
            let agg = aggregate(
                &corpus.records,
                &corpus.registry,
                level,
                ActorKind::Country,
                None,
                &opts(),
            )
            .map_err(|e| e.to_string())?;
            let v = world_noai(&agg)?;
            worst = worst.max((v - 1.0).abs());
            ensure!(
                (v - 1.0).abs() <= 1e-9,
                "seed {seed} {level}: world NOAI {v}"
            );
        }
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
    Ok(format!(
        "100 corpora x 3 levels, max |NOAI-1| = {worst:.1e}"
    ))
}

fn compare_with_oracle(corpus: &SynthCorpus, map: &Mapping) -> Result<f64, String> {
    let report = build_indicator_table(
        &corpus.records,
        &corpus.registry,
        ActorKind::Country,
        None,
        None,
        &Level::ALL,
        &opts(),
    )
    .map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    let mut check = |what: &str, a: f64, b: f64| -> Result<(), String> {
        worst = worst.max((a - b).abs());
        ensure!((a - b).abs() <= 1e-9, "{what}: {a} vs {b}");
        Ok(())
    };
    for (li, level) in Level::ALL.into_iter().enumerate() {
        let o = oracle(&corpus.records, map, level, true, None, &DEFAULT_PRIORITY);
        ensure!(report.table.len() == o.actors.len(), "actor count differs");
        let agg = &report.aggregates[li];
        for row in &report.table.rows {
            let oa = &o.actors[&row.actor];
            let tag = |m: &str| format!("{} {level} {m}", row.actor);
            check(&tag("x_total"), row.x_total, oa.x_total())?;
            check(&tag("oa_share"), row.oa_share, oa.oa_share())?;
            check(&tag("gold"), row.oa_gold_share, oa.gold_share())?;
            check(&tag("bronze"), row.oa_bronze_share, oa.bronze_share())?;
            check(&tag("green"), row.oa_green_share, oa.green_share())?;
            ensure!(row.n_oa_whole == oa.n_oa_whole, "{} n_oa", row.actor);
            let profile = agg.actor(&row.actor).ok_or("missing profile")?;
            for f in &profile.fields {
                let name = corpus.registry.field_name(level, f.field);
                let got = normalized_share(f, agg.baseline(f.field)).value;
                match (got, o.normalized_share(oa, name)) {
                    (Some(a), Some(b)) => check(&tag(name), a, b)?,
                    (a, b) => ensure!(a.is_none() && b.is_none(), "{}: {a:?} vs {b:?}", tag(name)),
                }
            }
            match (row.noai(level), o.noai(oa)) {
                (Some(a), Some(b)) => check(&tag("noai"), a, b)?,
                (a, b) => ensure!(
                    a.is_none() && b.is_none(),
                    "{}: {a:?} vs {b:?}",
                    tag("noai")
                ),
            }
        }
    }
    Ok(worst)
}

fn c4_oracle_equivalence() -> Outcome {
    let mut worst: f64 = 0.0;
    for seed in 0..50u64 {
        let spec = trial_spec(seed, 1000, 20, 10);
        let corpus = generate(&spec).map_err(|e| e.to_string())?;
        worst = worst.max(
            compare_with_oracle(&corpus, &spec_mapping(&spec))
                .map_err(|e| format!("seed {seed}: {e}"))?,
        );
    }
    Ok(format!("50 trials, max deviation {worst:.1e}"))
}

/// `Σ_j X_wj` against the record count, and type shares against the total,
/// for the world and every actor.
fn conservation(corpus: &SynthCorpus) -> Result<(f64, f64), String> {
    let n = corpus.records.len() as f64;
    let tol = 1e-9 * (n / 1e6);
    let mut worst = (0.0f64, 0.0f64);
    for level in Level::ALL {
        let agg = aggregate(
            &corpus.records,
            &corpus.registry,
            level,
            ActorKind::Country,
            None,
            &opts(),
        )
        .map_err(|e| e.to_string())?;
        let mass: f64 = agg
            .world()
            .iter()
            .map(|w| w.x)
            .collect::<noai::engine::CompensatedSum>()
            .value();
        worst.0 = worst.0.max((mass - n).abs());
        ensure!(
            (mass - n).abs() <= tol,
            "{level}: world mass {mass} for {n} records"
        );
        let mut profiles: Vec<_> = agg.actors().cloned().collect();
        profiles.push(agg.world_actor());
        for p in &profiles {
            let s = noai::engine::TypeShares::of(p).map_err(|e| e.to_string())?;
            let gap = (s.gold + s.bronze + s.green - s.total).abs();
            worst.1 = worst.1.max(gap);
            ensure!(gap <= 1e-9, "{} {level}: type shares off by {gap}", p.actor);
        }
    }
    Ok(worst)
}

fn c5_conservation() -> Outcome {
    let mut worst = (0.0f64, 0.0f64);
    let trials = (0..100u64)
        .map(|s| trial_spec(1000 + s, 1000, 15, 12))
        .chain((0..50u64).map(|s| trial_spec(s, 1000, 20, 10)));
    let mut count = 0;
    for spec in trials {
        let corpus = generate(&spec).map_err(|e| e.to_string())?;
        let w = conservation(&corpus).map_err(|e| format!("seed {}: {e}", spec.seed))?;
        worst = (worst.0.max(w.0), worst.1.max(w.1));
        count += 1;
    }
    Ok(format!(
        "{count} trials, max mass error {:.1e}, max type-share gap {:.1e}",
        worst.0, worst.1
    ))
}

fn ranks_of(values: &[f64]) -> noai::analysis::RankTable {
    rank_values(
        values
            .iter()
            .enumerate()
            .map(|(i, v)| (format!("a{i:03}"), Some(*v))),
        "v",
        RankOrder::Ascending,
    )
    .unwrap()
}

fn c6_spearman() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for n in 2..=200usize {
        // Tie-free: two random permutations of distinct values.
        let mut a: Vec<f64> = (0..n).map(|i| i as f64 * 1.5 + 0.25).collect();
        let mut b = a.clone();
        a.shuffle(&mut rng);
        b.shuffle(&mut rng);
        let got = spearman(&ranks_of(&a), &ranks_of(&b)).map_err(|e| e.to_string())?;
        for want in [spearman_no_ties(&a, &b), spearman_with_ties(&a, &b)] {
            worst = worst.max((got - want).abs());
            ensure!(
                (got - want).abs() <= 1e-12,
                "n={n} tie-free: {got} vs {want}"
            );
        }
        cases += 1;

        // Tied: few distinct values; skip draws with a constant vector.
        let levels = rng.gen_range(2..=(n / 3).max(2));
        let a: Vec<f64> = (0..n).map(|_| rng.gen_range(0..levels) as f64).collect();
        let b: Vec<f64> = (0..n).map(|_| rng.gen_range(0..levels) as f64).collect();
        let constant = |v: &[f64]| v.iter().all(|x| *x == v[0]);
        if !constant(&a) && !constant(&b) {
            let got = spearman(&ranks_of(&a), &ranks_of(&b)).map_err(|e| e.to_string())?;
            let want = spearman_with_ties(&a, &b);
            worst = worst.max((got - want).abs());
            ensure!((got - want).abs() <= 1e-12, "n={n} tied: {got} vs {want}");
            cases += 1;
        }

        let same: Vec<f64> = (0..n).map(|i| (i * i) as f64).collect();
        let reversed: Vec<f64> = same.iter().map(|v| -v).collect();
        let r = spearman(&ranks_of(&same), &ranks_of(&same)).unwrap();
        ensure!((r - 1.0).abs() <= 1e-12, "n={n} identical order: {r}");
        let r = spearman(&ranks_of(&same), &ranks_of(&reversed)).unwrap();
        ensure!((r + 1.0).abs() <= 1e-12, "n={n} reversed order: {r}");
    }
    Ok(format!("{cases} comparisons, max deviation {worst:.1e}"))
}

fn c7_direction() -> Outcome {
    let mut reg = ClassificationRegistry::new();
    reg.insert("Mechanical Engineering", "Engineering", "PE8")
        .unwrap();
    reg.insert("Oncology", "Medical research", "LS4").unwrap();
    let mut records = Vec::new();
    let mut push = |who: &str, cat: &str, n: usize, n_oa: usize| {
        for i in 0..n {
            let oa: &[&str] = if i < n_oa { &["gold"] } else { &[] };
            records.push(record(
                &format!("{who}-{cat}-{i}"),
                2018,
                oa,
                &[cat],
                &[who],
            ));
        }
    };
    // Engineering: 10% open worldwide. Medicine: 60%.
    push("E", "Mechanical Engineering", 100, 15);
    push("B", "Oncology", 100, 50);
    push("F", "Mechanical Engineering", 900, 85);
    push("F", "Oncology", 900, 550);
    push("M", "Mechanical Engineering", 200, 20);
    push("M", "Oncology", 200, 120);

    let report = build_indicator_table(
        &records,
        &reg,
        ActorKind::Country,
        None,
        None,
        &[Level::SubjectCategory, Level::OstDiscipline],
        &opts(),
    )
    .map_err(|e| e.to_string())?;
    let table = filter_actors(&report.table, DEFAULT_MIN_PUBS, None, None);
    let e = table.row("E").ok_or("E missing")?;
    ensure!(
        (e.noai_ost_discipline.unwrap() - 1.5).abs() < 1e-12,
        "E NOAI {:?}",
        e.noai_ost_discipline
    );

    let mut detail = String::new();
    for order in [RankOrder::Descending, RankOrder::Ascending] {
        let share =
            rank(&table, noai::analysis::Metric::OaShare, order).map_err(|e| e.to_string())?;
        let noai = rank(
            &table,
            noai::analysis::Metric::Noai(Level::OstDiscipline),
            order,
        )
        .map_err(|e| e.to_string())?;
        let shifts = rank_shift(&share, &noai).map_err(|e| e.to_string())?;
        let delta = |id: &str| shifts.iter().find(|s| s.actor == id).unwrap().delta;
        // Improvement means moving toward the most-open end of the ranking.
        let (e_ok, b_ok) = match order {
            RankOrder::Descending => (delta("E") < 0, delta("B") > 0),
            RankOrder::Ascending => (delta("E") > 0, delta("B") < 0),
        };
        ensure!(
            e_ok && b_ok,
            "{order:?}: E delta {}, B delta {}",
            delta("E"),
            delta("B")
        );
        if order == RankOrder::Descending {
            let s = share.get("E").unwrap().rank;
            let n = noai.get("E").unwrap().rank;
            detail = format!("E moves from share rank {s} to NOAI rank {n} (1 = most open)");
        }
    }
    Ok(detail)
}

fn c8_threshold() -> Outcome {
    let row = |id: &str, x: f64| IndicatorRow {
        actor: id.into(),
        display_name: id.into(),
        kind: ActorKind::Country,
        group: None,
        x_total: x,
        oa_share: 0.0,
        noai_subject_category: None,
        noai_ost_discipline: None,
        noai_erc_subfield: None,
        oa_gold_share: 0.0,
        oa_bronze_share: 0.0,
        oa_green_share: 0.0,
        n_oa_whole: 0,
    };
    let table = IndicatorTable {
        actor_kind: ActorKind::Country,
        window: None,
        rows: vec![
            row("AT30", 30.0),
            row("AT30_5", 30.5),
            row("AT29_9", 29.9),
            row("AT31", 31.0),
        ],
    };
    let kept: Vec<String> = filter_actors(&table, DEFAULT_MIN_PUBS, None, None)
        .rows
        .into_iter()
        .map(|r| r.actor)
        .collect();
    ensure!(kept == ["AT30_5", "AT31"], "kept {kept:?}");

    // The same boundary on counts produced by the engine.
    let mut reg = ClassificationRegistry::new();
    reg.insert("a", "Physics", "PE2").unwrap();
    reg.insert("b", "Chemistry", "PE4").unwrap();
    let mut records: Vec<PublicationRecord> = (0..30)
        .map(|i| record(&format!("p{i}"), 2018, &[], &["a", "b"], &["P"]))
        .collect();
    records.extend((0..31).map(|i| record(&format!("q{i}"), 2018, &["green"], &["a"], &["Q"])));
    let report = build_indicator_table(
        &records,
        &reg,
        ActorKind::Country,
        None,
        None,
        &[Level::OstDiscipline],
        &opts(),
    )
    .map_err(|e| e.to_string())?;
    let kept: Vec<String> = filter_actors(&report.table, DEFAULT_MIN_PUBS, None, None)
        .rows
        .into_iter()
        .map(|r| r.actor)
        .collect();
    ensure!(kept == ["Q"], "engine table kept {kept:?}");
    Ok("30.0 excluded, 30.5 included".into())
}

fn run_cli(args: &[&str]) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_noai"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    ensure!(
        out.status.success(),
        "noai {}: {}",
        args.first().unwrap_or(&""),
        String::from_utf8_lossy(&out.stderr)
    );
    Ok(())
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn c9_round_trip() -> Outcome {
    let dir = tempfile::TempDir::new().map_err(|e| e.to_string())?;
    let corpus = dir.path().join("corpus.jsonl");
    let registry = dir.path().join("registry.csv");
    let actors = dir.path().join("actors.csv");
    let out = dir.path().join("indicators.csv");
    run_cli(&[
        "synth",
        "--demo",
        "40000",
        "--seed",
        "9",
        "--out",
        p(&corpus),
        "--registry",
        p(&registry),
        "--actors",
        p(&actors),
    ])?;
    let args = [
        "indicators",
        "--corpus",
        p(&corpus),
        "--registry",
        p(&registry),
        "--actors",
        p(&actors),
        "--out",
        p(&out),
    ];
    run_cli(&args)?;
    let manifest_path = dir.path().join("indicators.csv.manifest.json");
    let first_manifest = fs::read(&manifest_path).map_err(|e| e.to_string())?;
    let first_csv = fs::read(&out).map_err(|e| e.to_string())?;
    run_cli(&args)?;
    ensure!(
        fs::read(&manifest_path).unwrap() == first_manifest,
        "manifest bytes differ between runs"
    );
    ensure!(
        fs::read(&out).unwrap() == first_csv,
        "output bytes differ between runs"
    );

    // The in-memory table for the same inputs.
    let reg = ingest::load_registry(&registry, false).map_err(|e| e.to_string())?;
    let actor_reg = ingest::load_actors(&actors).map_err(|e| e.to_string())?;
    let (records, _) =
        ingest::load_corpus(&corpus, &reg, &LoadOptions::default()).map_err(|e| e.to_string())?;
    let report = build_indicator_table(
        &records,
        &reg,
        ActorKind::Country,
        None,
        Some(&actor_reg),
        &[Level::SubjectCategory, Level::OstDiscipline],
        &opts(),
    )
    .map_err(|e| e.to_string())?;
    let filtered = filter_actors(
        &report.table,
        DEFAULT_MIN_PUBS,
        Some(ActorKind::Country),
        None,
    );
    let table = top_n(&filtered, filtered.len());

    let mut reader = csv::Reader::from_reader(File::open(&out).map_err(|e| e.to_string())?);
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| e.to_string())?
        .iter()
        .map(String::from)
        .collect();
    ensure!(header == INDICATOR_COLUMNS, "header {header:?}");
    let parsed: Vec<csv::StringRecord> = reader
        .records()
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    ensure!(
        parsed.len() == table.len(),
        "{} rows parsed, {} in memory",
        parsed.len(),
        table.len()
    );
    let rounded = |v: f64| format_fixed(v, 2).parse::<f64>().unwrap();
    let num = |s: &str| -> Result<Option<f64>, String> {
        if s.is_empty() {
            Ok(None)
        } else {
            s.parse().map(Some).map_err(|e| format!("{s}: {e}"))
        }
    };
    for (cells, row) in parsed.iter().zip(&table.rows) {
        ensure!(
            cells[0] == row.actor && cells[1] == row.display_name,
            "row {} vs {}",
            &cells[0],
            row.actor
        );
        let expected = [
            Some(row.x_total),
            Some(row.oa_share),
            row.noai_subject_category,
            row.noai_ost_discipline,
            Some(row.oa_gold_share),
            Some(row.oa_bronze_share),
            Some(row.oa_green_share),
        ];
        for (i, want) in expected.iter().enumerate() {
            let got = num(&cells[i + 2])?;
            ensure!(
                got == want.map(rounded),
                "{} {}: {got:?} vs {want:?}",
                row.actor,
                header[i + 2]
            );
        }
        ensure!(
            cells[9].parse::<u64>().ok() == Some(row.n_oa_whole),
            "{} n_oa_whole",
            row.actor
        );
    }
    Ok(format!(
        "{} rows match; manifest identical across runs",
        parsed.len()
    ))
}

fn children_max_rss_kib() -> i64 {
    let mut usage: libc::rusage = unsafe { std::mem::zeroed() };
    // SAFETY: getrusage writes into the struct we own.
    let rc = unsafe { libc::getrusage(libc::RUSAGE_CHILDREN, &mut usage) };
    assert_eq!(rc, 0, "getrusage failed");
    usage.ru_maxrss
}

fn c10_throughput() -> Outcome {
    let dir = tempfile::TempDir::new().map_err(|e| e.to_string())?;
    let corpus_path = dir.path().join("corpus.jsonl");
    let registry_path = dir.path().join("registry.csv");
    let out = dir.path().join("indicators.csv");

    let spec = SynthSpec::demo(10, 1_000_000);
    let corpus = generate(&spec).map_err(|e| e.to_string())?;
    ingest::write_corpus(File::create(&corpus_path).unwrap(), &corpus.records)
        .map_err(|e| e.to_string())?;
    ingest::write_registry(File::create(&registry_path).unwrap(), &corpus.registry)
        .map_err(|e| e.to_string())?;
    let n = corpus.records.len();
    drop(corpus);

    let start = Instant::now();
    let status = Command::new(env!("CARGO_BIN_EXE_noai"))
        .args([
            "indicators",
            "--corpus",
            p(&corpus_path),
            "--registry",
            p(&registry_path),
            "--out",
            p(&out),
        ])
        .status()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure!(status.success(), "indicators exited with {status}");
    let rss_mib = children_max_rss_kib() as f64 / 1024.0;
    let rows = fs::read_to_string(&out).unwrap().lines().count() - 1;
    ensure!(rows > 0, "empty output");
    ensure!(
        elapsed < Duration::from_secs(60),
        "{n} records took {elapsed:?}"
    );
    ensure!(rss_mib < 2048.0, "peak memory {rss_mib:.0} MiB");
    Ok(format!(
        "{n} records in {:.1}s on {} thread(s), peak RSS {rss_mib:.0} MiB",
        elapsed.as_secs_f64(),
        rayon::current_num_threads()
    ))
}
