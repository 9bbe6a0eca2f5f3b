//! Artifact serialization: the cross-meeting score tables, per-meeting
//! correlation matrices (CSV and SVG heatmap), fold-in diagnostics, and the
//! machine-readable run metadata.
//!
//! Every file is written atomically (to a sibling temp file, then renamed)
//! and deterministically: LF endings, UTF-8, shortest-roundtrip number
//! formatting, no timestamps. Two runs over the same inputs produce
//! byte-identical artifacts.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::pipeline::{FoldinTable, PipelineError, PipelineOutput, RunConfig};
use crate::similarity::{ConsensusReport, CorrelationMatrix, MeetingSimilarity};

/// Shortest decimal string that round-trips to the same f64; negative zero
/// collapses to `0`.
fn fmt_full(v: f64) -> String {
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v}")
}

/// Two-decimal presentation form; negative zero collapses to `0.00`.
fn fmt_display(v: f64) -> String {
    let s = format!("{v:.2}");
    if s == "-0.00" {
        "0.00".to_string()
    } else {
        s
    }
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), PipelineError> {
    let mut tmp_name = path.as_os_str().to_owned();
    tmp_name.push(".tmp");
    let tmp = PathBuf::from(tmp_name);
    fs::write(&tmp, bytes)
        .map_err(|source| PipelineError::Io { action: "write", path: tmp.clone(), source })?;
    fs::rename(&tmp, path)
        .map_err(|source| PipelineError::Io { action: "rename into", path: path.to_owned(), source })
}

/// One cell of a score table: `x` marks an inactive participant, `NA` an
/// active one whose score is undefined.
fn score_cell(meeting: &MeetingSimilarity, name: &str, fmt: fn(f64) -> String) -> String {
    match meeting.scores.get(name) {
        Some(Some(v)) => fmt(*v),
        Some(None) => "NA".to_string(),
        None => "x".to_string(),
    }
}

fn consensus_csv(report: &ConsensusReport, fmt: fn(f64) -> String) -> String {
    let mut out = String::from("meeting");
    for name in &report.roster {
        out.push(',');
        out.push_str(name);
    }
    out.push('\n');
    for meeting in &report.meetings {
        out.push_str(&meeting.meeting_id);
        for name in &report.roster {
            out.push(',');
            out.push_str(&score_cell(meeting, name, fmt));
        }
        out.push('\n');
    }
    out.push_str("mean");
    for name in &report.roster {
        out.push(',');
        match report.mean.get(name) {
            Some(Some(v)) => out.push_str(&fmt(*v)),
            _ => out.push_str("NA"),
        }
    }
    out.push('\n');
    out.push_str("rank");
    for name in &report.roster {
        out.push(',');
        if let Some(r) = report.rank.get(name) {
            out.push_str(&r.to_string());
        }
    }
    out.push('\n');
    out
}

fn matrix_csv(matrix: &CorrelationMatrix) -> String {
    let mut out = String::new();
    for label in &matrix.labels {
        out.push(',');
        out.push_str(label);
    }
    out.push('\n');
    for (i, label) in matrix.labels.iter().enumerate() {
        out.push_str(label);
        for j in 0..matrix.len() {
            out.push(',');
            match matrix.get(i, j) {
                Some(v) => out.push_str(&fmt_full(v)),
                None => out.push_str("NA"),
            }
        }
        out.push('\n');
    }
    out
}

fn foldin_csv(table: &FoldinTable) -> String {
    let mut out = String::from("term,raw_count,weighted_count,m_hat\n");
    for (i, term) in table.terms.iter().enumerate() {
        out.push_str(term);
        out.push(',');
        out.push_str(&table.raw_counts[i].to_string());
        out.push(',');
        out.push_str(&fmt_full(table.weighted[i]));
        out.push(',');
        out.push_str(&fmt_full(table.m_hat[i]));
        out.push('\n');
    }
    out
}

fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

/// Linear light→dark ramp over [0, 1]: white to a deep blue.
fn heat_color(t: f64) -> (u8, u8, u8) {
    let lerp = |a: f64, b: f64| (a + (b - a) * t).round() as u8;
    (lerp(255.0, 8.0), lerp(255.0, 48.0), lerp(255.0, 107.0))
}

/// Renders a correlation matrix as a self-contained SVG 1.1 heatmap: one
/// rectangle per cell, colored on a linear 0→1 light→dark scale (values are
/// clamped for coloring only), with the two-decimal value printed in the
/// cell and `NA` cells in gray.
pub fn render_heatmap(matrix: &CorrelationMatrix) -> String {
    const CELL_W: usize = 56;
    const CELL_H: usize = 26;
    const LEFT: usize = 110;
    const TOP: usize = 96;
    const FONT: &str = "font-family=\"monospace\" font-size=\"11\"";
    let n = matrix.len();
    let width = LEFT + n * CELL_W + 16;
    let height = TOP + n * CELL_H + 16;
    let mut svg = String::new();
    svg.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" \
         width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">\n"
    ));
    svg.push_str(&format!(
        "<rect x=\"0\" y=\"0\" width=\"{width}\" height=\"{height}\" fill=\"white\"/>\n"
    ));
    for (j, label) in matrix.labels.iter().enumerate() {
        let x = LEFT + j * CELL_W + CELL_W / 2;
        let y = TOP - 8;
        svg.push_str(&format!(
            "<text x=\"{x}\" y=\"{y}\" {FONT} text-anchor=\"start\" \
             transform=\"rotate(-55 {x} {y})\">{}</text>\n",
            xml_escape(label)
        ));
    }
    for (i, label) in matrix.labels.iter().enumerate() {
        let x = LEFT - 8;
        let y = TOP + i * CELL_H + CELL_H / 2 + 4;
        svg.push_str(&format!(
            "<text x=\"{x}\" y=\"{y}\" {FONT} text-anchor=\"end\">{}</text>\n",
            xml_escape(label)
        ));
    }
    for i in 0..n {
        for j in 0..n {
            let x = LEFT + j * CELL_W;
            let y = TOP + i * CELL_H;
            let (fill, text, text_fill) = match matrix.get(i, j) {
                Some(v) => {
                    let t = v.clamp(0.0, 1.0);
                    let (r, g, b) = heat_color(t);
                    let text_fill = if t > 0.6 { "white" } else { "#111111" };
                    (format!("rgb({r},{g},{b})"), fmt_display(v), text_fill)
                }
                None => ("rgb(217,217,217)".to_string(), "NA".to_string(), "#555555"),
            };
            svg.push_str(&format!(
                "<rect x=\"{x}\" y=\"{y}\" width=\"{CELL_W}\" height=\"{CELL_H}\" \
                 fill=\"{fill}\" stroke=\"white\" stroke-width=\"1\"/>\n"
            ));
            svg.push_str(&format!(
                "<text x=\"{tx}\" y=\"{ty}\" {FONT} text-anchor=\"middle\" \
                 fill=\"{text_fill}\">{text}</text>\n",
                tx = x + CELL_W / 2,
                ty = y + CELL_H / 2 + 4,
            ));
        }
    }
    svg.push_str("</svg>\n");
    svg
}

/// Machine-readable description of a completed run.
#[derive(Debug, Clone, Serialize)]
pub struct RunMetadata {
    pub weighting: String,
    pub truncation: String,
    pub space: String,
    pub allow_partial: bool,
    pub exclude_from_rank: Vec<String>,
    pub meetings: Vec<MeetingMeta>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MeetingMeta {
    pub meeting_id: String,
    pub date_label: String,
    pub status: String,
    pub n_speakers: usize,
    pub vocab_size: Option<usize>,
    pub rank: Option<usize>,
    pub oov_dropped_mass: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl RunMetadata {
    pub fn from_run(output: &PipelineOutput, config: &RunConfig) -> RunMetadata {
        RunMetadata {
            weighting: config.weighting.to_string(),
            truncation: config.truncation.to_string(),
            space: config.space.to_string(),
            allow_partial: config.allow_partial,
            exclude_from_rank: output.report.excluded.iter().cloned().collect(),
            meetings: output
                .artifacts
                .iter()
                .map(|a| MeetingMeta {
                    meeting_id: a.meeting_id.clone(),
                    date_label: a.date_label.clone(),
                    status: if a.succeeded() { "ok" } else { "failed" }.to_string(),
                    n_speakers: a.n_speakers,
                    vocab_size: a.vocab_size,
                    rank: a.rank,
                    oov_dropped_mass: a.oov.map(|o| o.dropped_mass()),
                    error: a.error.clone(),
                })
                .collect(),
        }
    }
}

/// Writes the two cross-meeting score tables (full precision and two-decimal
/// presentation). Shared by the full run and by score re-aggregation.
pub fn emit_consensus_tables(
    report: &ConsensusReport,
    out_dir: &Path,
) -> Result<Vec<PathBuf>, PipelineError> {
    if report.meetings.is_empty() {
        return Err(PipelineError::NonEmptyRequired);
    }
    fs::create_dir_all(out_dir)
        .map_err(|source| PipelineError::Io { action: "create", path: out_dir.to_owned(), source })?;
    let full = out_dir.join("consensus_report.csv");
    write_atomic(&full, consensus_csv(report, fmt_full).as_bytes())?;
    let display = out_dir.join("consensus_report_display.csv");
    write_atomic(&display, consensus_csv(report, fmt_display).as_bytes())?;
    Ok(vec![full, display])
}

/// Writes every artifact of a run into `out_dir` and returns the paths, in
/// the order written.
pub fn emit_reports(
    output: &PipelineOutput,
    config: &RunConfig,
    out_dir: &Path,
) -> Result<Vec<PathBuf>, PipelineError> {
    if output.report.meetings.is_empty() {
        return Err(PipelineError::NonEmptyRequired);
    }
    let mut written = emit_consensus_tables(&output.report, out_dir)?;
    for art in &output.artifacts {
        if let Some(matrix) = &art.matrix {
            let path = out_dir.join(format!("meeting_{}_matrix.csv", art.meeting_id));
            write_atomic(&path, matrix_csv(matrix).as_bytes())?;
            written.push(path);
            let path = out_dir.join(format!("meeting_{}_matrix.svg", art.meeting_id));
            write_atomic(&path, render_heatmap(matrix).as_bytes())?;
            written.push(path);
        }
        if let Some(foldin) = &art.foldin {
            let path = out_dir.join(format!("meeting_{}_foldin.csv", art.meeting_id));
            write_atomic(&path, foldin_csv(foldin).as_bytes())?;
            written.push(path);
        }
    }
    let meta = RunMetadata::from_run(output, config);
    let mut json = serde_json::to_string_pretty(&meta).expect("run metadata serializes");
    json.push('\n');
    let path = out_dir.join("run_meta.json");
    write_atomic(&path, json.as_bytes())?;
    written.push(path);
    Ok(written)
}

/// Parses a previously emitted score table back into per-meeting scores,
/// so means and ranks can be recomputed without the source documents.
///
/// The `mean` and `rank` rows, if present, are ignored (they are derived).
/// Returns the roster in column order and one entry per meeting row.
pub fn parse_scores_csv(
    text: &str,
) -> Result<(Vec<String>, Vec<MeetingSimilarity>), PipelineError> {
    let bad = |msg: String| PipelineError::BadScoresTable(msg);
    let mut lines = text.lines().map(|l| l.trim_end_matches('\r'));
    let header = lines.next().ok_or_else(|| bad("the table is empty".into()))?;
    let mut cols = header.split(',');
    cols.next(); // row-label column; its header text is irrelevant
    let roster: Vec<String> = cols.map(str::to_owned).collect();
    if roster.is_empty() {
        return Err(bad("the header names no speaker columns".into()));
    }
    let mut seen = BTreeSet::new();
    for name in &roster {
        if name.is_empty() {
            return Err(bad("the header contains an empty speaker name".into()));
        }
        if !seen.insert(name.as_str()) {
            return Err(bad(format!("duplicate speaker column {name:?}")));
        }
    }
    let mut meetings = Vec::new();
    let mut ids = BTreeSet::new();
    for (idx, line) in lines.enumerate() {
        let lineno = idx + 2;
        if line.is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != roster.len() + 1 {
            return Err(bad(format!(
                "line {lineno}: expected {} cells, found {}",
                roster.len() + 1,
                cells.len()
            )));
        }
        let label = cells[0];
        if label == "mean" || label == "rank" {
            continue;
        }
        if label.is_empty() {
            return Err(bad(format!("line {lineno}: empty meeting id")));
        }
        if !ids.insert(label.to_string()) {
            return Err(bad(format!("duplicate meeting id {label:?}")));
        }
        let mut scores: BTreeMap<String, Option<f64>> = BTreeMap::new();
        let mut inactive = BTreeSet::new();
        for (name, cell) in roster.iter().zip(&cells[1..]) {
            match *cell {
                "x" => {
                    inactive.insert(name.clone());
                }
                "NA" => {
                    scores.insert(name.clone(), None);
                }
                num => {
                    let v: f64 = num.parse().map_err(|_| {
                        bad(format!("line {lineno}: cannot parse {num:?} as a score"))
                    })?;
                    if !v.is_finite() || !(-1.0 - 1e-9..=1.0 + 1e-9).contains(&v) {
                        return Err(bad(format!(
                            "line {lineno}: score {v} is outside [-1, 1]"
                        )));
                    }
                    scores.insert(name.clone(), Some(v));
                }
            }
        }
        meetings.push(MeetingSimilarity { meeting_id: label.to_string(), scores, inactive });
    }
    if meetings.is_empty() {
        return Err(bad("the table contains no meeting rows".into()));
    }
    Ok((roster, meetings))
}
