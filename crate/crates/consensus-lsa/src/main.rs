//! Command-line front end: `run` executes a manifest end to end, `inspect`
//! prints one meeting's fitted model, `report` re-aggregates a previously
//! emitted score table.
//!
//! Exit codes: 0 on success (including `--help`/`--version`), 1 for usage
//! and input-description problems (bad flags, bad manifest, bad score
//! table), 2 for processing failures (a meeting that cannot be modeled,
//! unwritable outputs, …).

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use consensus_lsa::corpus::{load_stopwords, CleaningConfig};
use consensus_lsa::lsa::TruncationPolicy;
use consensus_lsa::manifest::load_manifest;
use consensus_lsa::pipeline::{fit_meeting, run_pipeline, PipelineError, RunConfig};
use consensus_lsa::report::{emit_consensus_tables, emit_reports, parse_scores_csv};
use consensus_lsa::similarity::{aggregate, ConsensusReport};

#[derive(Parser)]
#[command(
    name = "consensus-lsa",
    version,
    about = "Score committee members' meeting remarks against the published \
             consensus record in a latent semantic space"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Process every meeting in a manifest and write all report artifacts
    Run(RunArgs),
    /// Print one meeting's vocabulary, term weights, and singular values
    Inspect(InspectArgs),
    /// Recompute means and ranks from an existing score table
    Report(ReportArgs),
}

#[derive(Args)]
struct ModelArgs {
    /// Manifest describing the roster, meetings, and document paths
    #[arg(long)]
    manifest: PathBuf,
    /// Keep exactly K semantic dimensions
    #[arg(long, value_name = "K", conflicts_with = "energy")]
    rank: Option<usize>,
    /// Keep the smallest leading set of dimensions holding at least this
    /// fraction of squared spectral energy (0 < E <= 1)
    #[arg(long, value_name = "E")]
    energy: Option<f64>,
    /// Term weighting scheme: <raw|log>-<none|plain|smooth>
    #[arg(long, default_value = "raw-smooth")]
    weighting: String,
    /// Stopword file (one word per line; # starts a comment)
    #[arg(long)]
    stopwords: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Directory for the emitted artifacts (created if absent)
    #[arg(long)]
    out_dir: PathBuf,
    /// Space to score in: "term" (projected vocabulary vectors) or
    /// "concept" (latent coordinates)
    #[arg(long, default_value = "term")]
    space: String,
    /// Report this speaker's mean but give them no rank (repeatable)
    #[arg(long, value_name = "NAME")]
    exclude: Vec<String>,
    /// Keep going when a meeting fails; aggregate over the survivors
    #[arg(long)]
    allow_partial: bool,
}

#[derive(Args)]
struct InspectArgs {
    /// Meeting id to inspect
    meeting_id: String,
    #[command(flatten)]
    model: ModelArgs,
}

#[derive(Args)]
struct ReportArgs {
    /// A consensus_report.csv produced by an earlier run
    scores: PathBuf,
    /// Directory for the recomputed tables
    #[arg(long)]
    out_dir: PathBuf,
    /// Report this speaker's mean but give them no rank (repeatable)
    #[arg(long, value_name = "NAME")]
    exclude: Vec<String>,
}

enum CliError {
    /// Bad invocation or bad input description; exit code 1.
    Usage(String),
    /// Processing failure; exit code depends on the variant.
    Pipeline(PipelineError),
}

impl From<PipelineError> for CliError {
    fn from(err: PipelineError) -> Self {
        CliError::Pipeline(err)
    }
}

fn exit_code(err: &CliError) -> u8 {
    match err {
        CliError::Usage(_) => 1,
        CliError::Pipeline(PipelineError::Manifest(_))
        | CliError::Pipeline(PipelineError::BadScoresTable(_)) => 1,
        CliError::Pipeline(_) => 2,
    }
}

fn build_config(model: &ModelArgs) -> Result<RunConfig, CliError> {
    let weighting = model
        .weighting
        .parse()
        .map_err(|e| CliError::Usage(format!("{e}")))?;
    let truncation = match (model.rank, model.energy) {
        (Some(0), _) => {
            return Err(CliError::Usage("--rank must be at least 1".into()));
        }
        (Some(k), None) => TruncationPolicy::Rank(k),
        (None, Some(e)) if e > 0.0 && e <= 1.0 => TruncationPolicy::Energy(e),
        (None, Some(e)) => {
            return Err(CliError::Usage(format!(
                "--energy must be in (0, 1], got {e}"
            )));
        }
        (None, None) => TruncationPolicy::Tolerance,
        (Some(_), Some(_)) => unreachable!("clap rejects --rank with --energy"),
    };
    let mut cleaning = CleaningConfig::default();
    if let Some(path) = &model.stopwords {
        cleaning.stopwords = load_stopwords(path).map_err(|e| {
            CliError::Usage(format!("cannot read stopword file {}: {e}", path.display()))
        })?;
    }
    Ok(RunConfig { weighting, truncation, cleaning, ..RunConfig::default() })
}

fn format_ranking(out: &mut String, report: &ConsensusReport) {
    let mut ranked: Vec<(&String, usize)> =
        report.rank.iter().map(|(name, r)| (name, *r)).collect();
    ranked.sort_by_key(|&(_, r)| r);
    out.push_str("ranking (mean score against the consensus record):\n");
    for (name, r) in ranked {
        let mean = report.mean[name].expect("ranked speakers have a mean");
        let _ = writeln!(out, "  {r:>2}. {name:<12} {mean}");
    }
    for name in &report.roster {
        if report.rank.contains_key(name) {
            continue;
        }
        let mean = match report.mean.get(name) {
            Some(Some(v)) => v.to_string(),
            _ => "NA".to_string(),
        };
        let why = if report.excluded.contains(name) { "excluded" } else { "unranked" };
        let _ = writeln!(out, "   -. {name:<12} {mean} ({why})");
    }
}

fn cmd_run(args: &RunArgs) -> Result<String, CliError> {
    let manifest = load_manifest(&args.model.manifest).map_err(PipelineError::from)?;
    let mut config = build_config(&args.model)?;
    config.space = args.space.parse().map_err(|e| CliError::Usage(format!("{e}")))?;
    for name in &args.exclude {
        if !manifest.roster.contains(name) {
            return Err(CliError::Usage(format!(
                "--exclude names unknown speaker {name:?}; the roster is: {}",
                manifest.roster.join(", ")
            )));
        }
    }
    config.exclude_from_rank = args.exclude.iter().cloned().collect();
    config.allow_partial = args.allow_partial;

    let output = run_pipeline(&manifest, &config)?;
    let written = emit_reports(&output, &config, &args.out_dir)?;

    let failed: Vec<&str> = output
        .artifacts
        .iter()
        .filter(|a| !a.succeeded())
        .map(|a| a.meeting_id.as_str())
        .collect();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "processed {} meetings ({} ok, {} failed)",
        output.artifacts.len(),
        output.artifacts.len() - failed.len(),
        failed.len()
    );
    if !failed.is_empty() {
        let _ = writeln!(out, "failed meetings: {}", failed.join(", "));
    }
    format_ranking(&mut out, &output.report);
    let _ = writeln!(out, "wrote {} files to {}", written.len(), args.out_dir.display());
    Ok(out)
}

fn cmd_inspect(args: &InspectArgs) -> Result<String, CliError> {
    let manifest = load_manifest(&args.model.manifest).map_err(PipelineError::from)?;
    let config = build_config(&args.model)?;
    let meeting = manifest
        .meetings
        .iter()
        .find(|m| m.meeting_id == args.meeting_id)
        .ok_or_else(|| {
            let known: Vec<&str> =
                manifest.meetings.iter().map(|m| m.meeting_id.as_str()).collect();
            CliError::Usage(format!(
                "meeting {:?} is not in the manifest (known: {})",
                args.meeting_id,
                known.join(", ")
            ))
        })?;

    let fit = fit_meeting(meeting, &manifest.roster, &config)?;
    let model = &fit.model;
    let mut out = String::new();
    let _ = writeln!(out, "meeting {} ({})", meeting.meeting_id, meeting.date_label);
    let _ = writeln!(out, "speakers ({}): {}", model.doc_ids.len(), model.doc_ids.join(", "));
    let _ = writeln!(out, "weighting: {}", model.weights.scheme());
    let _ = writeln!(out, "truncation: {} -> rank {}", config.truncation, model.rank());
    let sigma: Vec<String> =
        model.factors.sigma.iter().map(|s| s.to_string()).collect();
    let _ = writeln!(out, "singular values: {}", sigma.join(", "));
    let _ = writeln!(out, "vocabulary ({} terms):", model.vocab.len());
    let _ = writeln!(out, "{:<24} {:>4} {:>20}", "term", "df", "idf");
    for (i, term) in model.vocab.terms().iter().enumerate() {
        let _ = writeln!(out, "{:<24} {:>4} {:>20}", term, model.vocab.df(i), model.weights.idf()[i]);
    }
    Ok(out)
}

fn cmd_report(args: &ReportArgs) -> Result<String, CliError> {
    let text = std::fs::read_to_string(&args.scores).map_err(|e| {
        PipelineError::BadScoresTable(format!("cannot read {}: {e}", args.scores.display()))
    })?;
    let (roster, meetings) = parse_scores_csv(&text)?;
    let exclude: BTreeSet<String> = args.exclude.iter().cloned().collect();
    for name in &exclude {
        if !roster.contains(name) {
            return Err(CliError::Usage(format!(
                "--exclude {name:?} does not match any column of the table"
            )));
        }
    }
    let report = aggregate(&meetings, &roster, &exclude).map_err(PipelineError::from)?;
    let written = emit_consensus_tables(&report, &args.out_dir)?;
    let mut out = String::new();
    format_ranking(&mut out, &report);
    let _ = writeln!(out, "wrote {} files to {}", written.len(), args.out_dir.display());
    Ok(out)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Inspect(args) => cmd_inspect(args),
        Command::Report(args) => cmd_report(args),
    };
    match result {
        Ok(text) => {
            // A closed pipe (e.g. `| head`) is not a failure of ours.
            let _ = std::io::stdout().write_all(text.as_bytes());
            ExitCode::SUCCESS
        }
        Err(err) => {
            match &err {
                CliError::Usage(msg) => eprintln!("error: {msg}"),
                CliError::Pipeline(e) => eprintln!("error: {e}"),
            }
            ExitCode::from(exit_code(&err))
        }
    }
}
