//! Command-line front end: generate benchmarks, solve instance files,
//! verify candidate batches, query a model endpoint and score predictions.

mod http;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use tcplan::client::{run_model, PromptTemplate, RunMode, RunOptions};
use tcplan::eval::{render_report_markdown, score_runs, Prediction};
use tcplan::generate::{generate_prototype, random_baseline, record_for, GenerationConfig};
use tcplan::metadata::instance_of;
use tcplan::model::DependencyType;
use tcplan::record::{read_records, write_records, InstanceRecord};
use tcplan::schedule::TaskSlots;
use tcplan::solver::solve_optimal;
use tcplan::time::Category;
use tcplan::verify::{hard_check, recheck_answer, RecheckOutcome};
use tcplan::zones::ZoneTable;

#[derive(Parser)]
#[command(name = "tcplan", version, about = "Temporal-constraint scheduling benchmark factory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate verified benchmark records as JSONL.
    Generate {
        #[arg(long)]
        category: Category,
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Restrict every record to one dependency type instead of even thirds.
        #[arg(long)]
        dependency_type: Option<DependencyType>,
        /// Optional scenario name woven into the dialogue opener.
        #[arg(long)]
        scenario: Option<String>,
        /// Extend the zone table from a JSON file of {"LABEL": offset_hours}.
        #[arg(long)]
        zones: Option<PathBuf>,
    },
    /// Solve every instance in a JSONL file and emit answers.
    Solve {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Include the witness schedule in each output row.
        #[arg(long)]
        witness: bool,
    },
    /// Hard-check candidate records against their prototypes and recheck
    /// stored answers.
    Validate {
        #[arg(long)]
        prototypes: PathBuf,
        #[arg(long)]
        candidates: PathBuf,
        #[arg(long)]
        report: PathBuf,
    },
    /// Score prediction files against gold records.
    Evaluate {
        #[arg(long)]
        gold: PathBuf,
        /// One file per run; several files average their accuracies.
        #[arg(long = "pred", required = true)]
        predictions: Vec<PathBuf>,
        /// Report path; `.md` renders the table, anything else JSON.
        #[arg(long)]
        report: PathBuf,
        #[arg(long, default_value = "predictions")]
        mode: String,
    },
    /// Query a text-generation endpoint for every gold instance.
    Run {
        #[arg(long)]
        gold: PathBuf,
        /// Chat-completions URL; falls back to $TCPLAN_ENDPOINT.
        #[arg(long)]
        endpoint: Option<String>,
        #[arg(long, default_value = "cot")]
        template: PromptTemplate,
        #[arg(long)]
        model: Option<String>,
        /// greedy (one pass, temperature 0) or sample-avg (provider defaults).
        #[arg(long, default_value = "greedy")]
        mode: String,
        #[arg(long, default_value_t = 3)]
        samples: u32,
        #[arg(long, default_value_t = 4)]
        concurrency: usize,
        #[arg(long, default_value_t = 120)]
        timeout_secs: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        transcripts: Option<PathBuf>,
    },
    /// Monte-Carlo accuracy of uniform random guessing on a gold file.
    Baseline {
        #[arg(long)]
        gold: PathBuf,
        #[arg(long)]
        category: Option<Category>,
        #[arg(long, default_value_t = 10_000)]
        trials: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Generate {
            category,
            count,
            seed,
            out,
            dependency_type,
            scenario,
            zones,
        } => generate(category, count, seed, &out, dependency_type, scenario, zones),
        Command::Solve { input, out, witness } => solve(&input, &out, witness),
        Command::Validate {
            prototypes,
            candidates,
            report,
        } => validate(&prototypes, &candidates, &report),
        Command::Evaluate {
            gold,
            predictions,
            report,
            mode,
        } => evaluate(&gold, &predictions, &report, &mode),
        Command::Run {
            gold,
            endpoint,
            template,
            model,
            mode,
            samples,
            concurrency,
            timeout_secs,
            out,
            transcripts,
        } => run(
            &gold,
            endpoint,
            template,
            model,
            &mode,
            samples,
            concurrency,
            timeout_secs,
            &out,
            transcripts.as_deref(),
        ),
        Command::Baseline {
            gold,
            category,
            trials,
            seed,
        } => baseline(&gold, category, trials, seed),
    }
}

#[allow(clippy::too_many_arguments)]
fn generate(
    category: Category,
    count: usize,
    seed: u64,
    out: &Path,
    dependency_type: Option<DependencyType>,
    scenario: Option<String>,
    zones: Option<PathBuf>,
) -> Result<()> {
    if let Some(path) = zones {
        // Surface config errors early; generation itself uses the built-in
        // labels it was asked for.
        ZoneTable::from_path(&path).context("loading zone table")?;
    }
    let mut cfg = GenerationConfig::for_category(category, count, seed);
    if let Some(ty) = dependency_type {
        cfg.mix = tcplan::generate::DependencyMix::Only(ty);
    }
    cfg.scenario = scenario;

    let records = (0..count)
        .into_par_iter()
        .map(|index| generate_prototype(&cfg, index).map(|p| record_for(&cfg, index, &p)))
        .collect::<Result<Vec<_>, _>>()?;
    write_records(out, &records)?;
    eprintln!("wrote {} {category} records to {}", records.len(), out.display());
    Ok(())
}

#[derive(Serialize)]
struct WitnessEntry {
    task: String,
    participant: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    start: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    end: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    days: Option<Vec<String>>,
}

fn solve(input: &Path, out: &Path, witness: bool) -> Result<()> {
    let records = read_records(input)?;
    let mut outfile = std::io::BufWriter::new(
        std::fs::File::create(out).with_context(|| format!("creating {}", out.display()))?,
    );
    let mut infeasible = Vec::new();

    for record in &records {
        let instance = instance_of(&record.metadata)
            .with_context(|| format!("rebuilding instance {}", record.id))?;
        match solve_optimal(&instance) {
            Ok(outcome) => {
                let mut row = json!({ "id": record.id, "answer": outcome.answer.to_string() });
                if witness {
                    let entries: Vec<WitnessEntry> = outcome
                        .witness
                        .entries
                        .iter()
                        .map(|e| {
                            let task = instance.tasks[e.task].name.clone();
                            let participant = instance.participants[e.participant].name.clone();
                            match &e.slots {
                                TaskSlots::Hours { start } => WitnessEntry {
                                    task,
                                    participant,
                                    start: Some(start.to_string()),
                                    end: Some(
                                        start
                                            .add_hours(instance.tasks[e.task].duration as i64)
                                            .to_string(),
                                    ),
                                    days: None,
                                },
                                TaskSlots::Days { days } => WitnessEntry {
                                    task,
                                    participant,
                                    start: None,
                                    end: None,
                                    days: Some(days.iter().map(|d| d.to_string()).collect()),
                                },
                            }
                        })
                        .collect();
                    row["witness"] = serde_json::to_value(entries)?;
                }
                writeln!(outfile, "{row}")?;
            }
            Err(e) => {
                writeln!(outfile, "{}", json!({ "id": record.id, "error": e.to_string() }))?;
                infeasible.push(record.id.clone());
            }
        }
    }
    outfile.flush()?;
    if !infeasible.is_empty() {
        bail!(
            "{} of {} instances are infeasible: {}",
            infeasible.len(),
            records.len(),
            infeasible.join(", ")
        );
    }
    eprintln!("solved {} instances into {}", records.len(), out.display());
    Ok(())
}

/// Parse records one line at a time so schema errors are reported per row
/// rather than aborting the whole check.
fn read_records_lenient(path: &Path) -> Result<(Vec<InstanceRecord>, Vec<(usize, String)>)> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut records = Vec::new();
    let mut errors = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<InstanceRecord>(line) {
            Ok(r) => records.push(r),
            Err(e) => errors.push((i + 1, e.to_string())),
        }
    }
    Ok((records, errors))
}

fn validate(prototypes: &Path, candidates: &Path, report_path: &Path) -> Result<()> {
    let (protos, proto_errors) = read_records_lenient(prototypes)?;
    let (cands, cand_errors) = read_records_lenient(candidates)?;

    let mut entries = Vec::new();
    let mut passed = 0usize;
    let mut failed = 0usize;

    for cand in &cands {
        let Some(proto) = protos.iter().find(|p| p.id == cand.id) else {
            failed += 1;
            entries.push(json!({
                "id": cand.id,
                "verdict": "fail",
                "error": "no prototype with this id",
            }));
            continue;
        };
        let check = hard_check(&proto.metadata, &cand.metadata);
        let recheck = match recheck_answer(cand) {
            Ok(RecheckOutcome::Pass) => json!("pass"),
            Ok(RecheckOutcome::Mismatch {
                expected,
                stored,
                reason,
            }) => json!({ "mismatch": { "expected": expected, "stored": stored, "reason": reason } }),
            Err(e) => json!({ "error": e.to_string() }),
        };
        let ok = check.passed() && recheck == json!("pass");
        if ok {
            passed += 1;
        } else {
            failed += 1;
        }
        entries.push(json!({
            "id": cand.id,
            "verdict": if ok { "pass" } else { "fail" },
            "hard_check": check,
            "answer_recheck": recheck,
        }));
    }

    let report = json!({
        "prototypes": protos.len(),
        "candidates": cands.len(),
        "passed": passed,
        "failed": failed,
        "parse_errors": {
            "prototypes": proto_errors.iter().map(|(l, e)| json!({"line": l, "error": e})).collect::<Vec<_>>(),
            "candidates": cand_errors.iter().map(|(l, e)| json!({"line": l, "error": e})).collect::<Vec<_>>(),
        },
        "entries": entries,
    });
    std::fs::write(report_path, serde_json::to_string_pretty(&report)?)
        .with_context(|| format!("writing {}", report_path.display()))?;

    let parse_errors = proto_errors.len() + cand_errors.len();
    eprintln!(
        "validated {} candidates: {passed} passed, {failed} failed, {parse_errors} parse errors",
        cands.len()
    );
    if failed > 0 || parse_errors > 0 {
        bail!("validation found failures; see {}", report_path.display());
    }
    Ok(())
}

fn read_predictions(path: &Path) -> Result<Vec<Prediction>> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut predictions = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let p: Prediction = serde_json::from_str(line)
            .with_context(|| format!("{}:{}: invalid prediction", path.display(), i + 1))?;
        predictions.push(p);
    }
    Ok(predictions)
}

fn evaluate(gold: &Path, prediction_paths: &[PathBuf], report_path: &Path, mode: &str) -> Result<()> {
    let golds = read_records(gold)?;
    let runs = prediction_paths
        .iter()
        .map(|p| read_predictions(p))
        .collect::<Result<Vec<_>>>()?;
    let report = score_runs(&golds, &runs, mode)?;

    let rendered = render_report_markdown(&report);
    if report_path.extension().is_some_and(|e| e == "md") {
        std::fs::write(report_path, &rendered)?;
    } else {
        std::fs::write(report_path, serde_json::to_string_pretty(&report)?)?;
    }
    print!("{rendered}");
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn run(
    gold: &Path,
    endpoint: Option<String>,
    template: PromptTemplate,
    model: Option<String>,
    mode: &str,
    samples: u32,
    concurrency: usize,
    timeout_secs: u64,
    out: &Path,
    transcripts: Option<&Path>,
) -> Result<()> {
    let endpoint = endpoint
        .or_else(|| std::env::var(http::ENDPOINT_ENV).ok())
        .with_context(|| format!("no endpoint given and ${} unset", http::ENDPOINT_ENV))?;
    let mode = match mode {
        "greedy" => RunMode::Greedy,
        "sample-avg" => RunMode::SampleAverage { samples },
        other => bail!("unknown mode `{other}` (expected greedy|sample-avg)"),
    };
    let records = read_records(gold)?;
    let client = http::HttpTextGenClient::new(endpoint, model, Duration::from_secs(timeout_secs))?;
    let options = RunOptions {
        template,
        mode,
        concurrency,
        ..RunOptions::default()
    };
    let output = run_model(&records, &client, &options);

    for (i, run_predictions) in output.runs.iter().enumerate() {
        let path = if output.runs.len() == 1 {
            out.to_path_buf()
        } else {
            out.with_extension(format!("run{i}.jsonl"))
        };
        let mut file = std::io::BufWriter::new(std::fs::File::create(&path)?);
        for p in run_predictions {
            writeln!(file, "{}", serde_json::to_string(p)?)?;
        }
        file.flush()?;
        eprintln!("wrote {} predictions to {}", run_predictions.len(), path.display());
    }
    if let Some(path) = transcripts {
        let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
        for t in &output.transcripts {
            writeln!(file, "{}", serde_json::to_string(t)?)?;
        }
        file.flush()?;
        eprintln!("wrote {} transcript entries to {}", output.transcripts.len(), path.display());
    }
    eprintln!("mode: {}", options.mode.label());
    Ok(())
}

fn baseline(gold: &Path, category: Option<Category>, trials: u32, seed: u64) -> Result<()> {
    let records = read_records(gold)?;
    let filtered: Vec<InstanceRecord> = match category {
        Some(c) => records.into_iter().filter(|r| r.category == c).collect(),
        None => records,
    };
    if filtered.is_empty() {
        bail!("no records match the requested category");
    }
    let accuracy = random_baseline(&filtered, trials, seed)?;
    let label = category.map_or("all".to_string(), |c| c.to_string());
    println!("random baseline ({label}): {accuracy:.2}% over {trials} trials");
    Ok(())
}
