//! The end-to-end run: fit one semantic model per meeting, fold the consensus
//! record into each, score every active speaker, and aggregate across
//! meetings.
//!
//! Failures are isolated per meeting. A meeting that cannot be processed
//! (unreadable file, empty corpus, consensus sharing no vocabulary, …) is
//! recorded with its reason; the run as a whole either aborts on the first
//! such failure or, with [`RunConfig::allow_partial`], carries on and
//! aggregates over the meetings that succeeded.

use std::collections::BTreeSet;
use std::fs;
use std::path::PathBuf;
use std::sync::Arc;

use thiserror::Error;

use crate::corpus::{clean_and_tokenize, count_terms, CleaningConfig, TermCounts};
use crate::dtm::{
    apply_weights, build_dtm, build_vocabulary, fit_weights, weight_external, OovStats,
    WeightedVector, WeightingScheme,
};
use crate::lsa::{fold_in, svd, truncate, LsaError, LsaModel, TruncationPolicy};
use crate::manifest::{Manifest, ManifestError, MeetingSpec};
use crate::matrix::Mat;
use crate::similarity::{
    aggregate, meeting_similarities, pairwise_matrix, ComparisonSpace, ConsensusReport,
    CorrelationMatrix, MeetingSimilarity, SimilarityError,
};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Manifest(#[from] ManifestError),
    #[error("invalid scores table: {0}")]
    BadScoresTable(String),
    #[error("cannot {action} {path}: {source}", path = .path.display())]
    Io { action: &'static str, path: PathBuf, source: std::io::Error },
    #[error("meeting {meeting_id} failed: {reason}")]
    MeetingFailed { meeting_id: String, reason: String },
    #[error("nothing to report: the meeting list is empty")]
    NonEmptyRequired,
    #[error(transparent)]
    Aggregation(#[from] SimilarityError),
}

/// Everything about a run that is not in the manifest.
#[derive(Debug, Clone, Default)]
pub struct RunConfig {
    pub weighting: WeightingScheme,
    pub truncation: TruncationPolicy,
    pub space: ComparisonSpace,
    pub cleaning: CleaningConfig,
    /// Merged with the manifest's own `exclude_from_rank`.
    pub exclude_from_rank: BTreeSet<String>,
    /// Keep going when a meeting fails and aggregate over the survivors.
    pub allow_partial: bool,
}

/// A fitted per-meeting semantic model plus the weighted speaker vectors it
/// was built from (rows align with `model.doc_ids`).
pub struct MeetingFit {
    pub model: LsaModel,
    pub rows: Vec<WeightedVector>,
}

/// The fold-in diagnostic table for one meeting: per vocabulary term, the
/// consensus document's raw count, its weighted value, and the projected
/// (smoothed) value.
#[derive(Debug, Clone)]
pub struct FoldinTable {
    pub terms: Vec<String>,
    pub raw_counts: Vec<u64>,
    pub weighted: Vec<f64>,
    pub m_hat: Vec<f64>,
}

/// Everything computed (or attempted) for one meeting.
#[derive(Debug, Clone)]
pub struct MeetingArtifacts {
    pub meeting_id: String,
    pub date_label: String,
    /// Number of active speakers at the meeting.
    pub n_speakers: usize,
    pub vocab_size: Option<usize>,
    /// Retained semantic dimensions after truncation.
    pub rank: Option<usize>,
    /// Out-of-vocabulary mass of the consensus document.
    pub oov: Option<OovStats>,
    /// Why the meeting failed, if it did.
    pub error: Option<String>,
    /// Per-speaker scores; all-undefined when the meeting failed.
    pub similarity: MeetingSimilarity,
    pub matrix: Option<CorrelationMatrix>,
    pub foldin: Option<FoldinTable>,
}

impl MeetingArtifacts {
    pub fn succeeded(&self) -> bool {
        self.error.is_none()
    }
}

/// The result of a full run.
pub struct PipelineOutput {
    pub report: ConsensusReport,
    pub artifacts: Vec<MeetingArtifacts>,
}

/// Reads and fits one meeting: tokenize the active speakers, build the
/// weighted document-term matrix, factor it, truncate the spectrum.
pub fn fit_meeting(
    meeting: &MeetingSpec,
    roster: &[String],
    config: &RunConfig,
) -> Result<MeetingFit, PipelineError> {
    let fail = |reason: String| PipelineError::MeetingFailed {
        meeting_id: meeting.meeting_id.clone(),
        reason,
    };
    let mut docs = Vec::new();
    for (name, path) in meeting.active_speakers(roster) {
        let text = fs::read_to_string(path)
            .map_err(|e| fail(format!("cannot read {}: {e}", path.display())))?;
        let tokens = clean_and_tokenize(&text, &config.cleaning);
        docs.push((name.to_string(), count_terms(&tokens)));
    }
    let counts: Vec<TermCounts> = docs.iter().map(|(_, c)| c.clone()).collect();
    let vocab = Arc::new(build_vocabulary(&counts).map_err(|e| fail(e.to_string()))?);
    if vocab.is_empty() {
        return Err(fail("every speaker document is empty after cleaning".into()));
    }
    let dtm = build_dtm(&docs, Arc::clone(&vocab)).map_err(|e| fail(e.to_string()))?;
    let weights = Arc::new(fit_weights(&dtm, config.weighting).map_err(|e| fail(e.to_string()))?);
    let rows = apply_weights(&dtm, &weights).map_err(|e| fail(e.to_string()))?;
    let dense: Vec<Vec<f64>> = rows.iter().map(|r| r.values.clone()).collect();
    let factors = svd(&Mat::from_rows(&dense)).map_err(|e| fail(e.to_string()))?;
    let factors = truncate(&factors, config.truncation).map_err(|e| fail(e.to_string()))?;
    let model = LsaModel::new(factors, dtm.doc_ids().to_vec(), vocab, weights)
        .map_err(|e| fail(e.to_string()))?;
    Ok(MeetingFit { model, rows })
}

fn empty_similarity(meeting: &MeetingSpec, roster: &[String]) -> MeetingSimilarity {
    MeetingSimilarity {
        meeting_id: meeting.meeting_id.clone(),
        scores: meeting
            .active_speakers(roster)
            .iter()
            .map(|(name, _)| (name.to_string(), None))
            .collect(),
        inactive: meeting.inactive_speakers(roster),
    }
}

fn compute_meeting(
    meeting: &MeetingSpec,
    roster: &[String],
    config: &RunConfig,
    art: &mut MeetingArtifacts,
) -> Result<(), String> {
    let fit = fit_meeting(meeting, roster, config).map_err(|e| match e {
        PipelineError::MeetingFailed { reason, .. } => reason,
        other => other.to_string(),
    })?;
    art.vocab_size = Some(fit.model.vocab.len());
    art.rank = Some(fit.model.rank());

    let text = fs::read_to_string(&meeting.consensus_path)
        .map_err(|e| format!("cannot read {}: {e}", meeting.consensus_path.display()))?;
    let consensus_counts = count_terms(&clean_and_tokenize(&text, &config.cleaning));
    let (consensus, oov) = weight_external(&consensus_counts, &fit.model.weights, &fit.model.vocab)
        .map_err(|e| e.to_string())?;
    art.oov = Some(oov);

    let folded = fold_in(&fit.model, &consensus).map_err(|e| match e {
        LsaError::ZeroVector => format!(
            "consensus document shares no vocabulary with the speaker corpus \
             (dropped mass {})",
            oov.dropped_mass()
        ),
        other => other.to_string(),
    })?;

    let sim = meeting_similarities(
        &meeting.meeting_id,
        &fit.model,
        &folded,
        &fit.rows,
        &art.similarity.inactive,
        config.space,
    )
    .map_err(|e| e.to_string())?;

    // The pairwise matrix compares everyone present, consensus included,
    // in whichever space the run scores in.
    let mut labeled: Vec<(String, Vec<f64>)> = match config.space {
        ComparisonSpace::Term => fit
            .model
            .doc_ids
            .iter()
            .zip(&fit.rows)
            .map(|(name, row)| (name.clone(), row.values.clone()))
            .collect(),
        ComparisonSpace::Concept => fit
            .model
            .doc_ids
            .iter()
            .enumerate()
            .map(|(i, name)| (name.clone(), fit.model.doc_concept_row(i)))
            .collect(),
    };
    labeled.push((
        "minutes".to_string(),
        match config.space {
            ComparisonSpace::Term => folded.m_hat.clone(),
            ComparisonSpace::Concept => folded.d_hat.clone(),
        },
    ));
    let matrix = pairwise_matrix(&labeled).map_err(|e| e.to_string())?;

    art.foldin = Some(FoldinTable {
        terms: fit.model.vocab.terms().to_vec(),
        raw_counts: fit.model.vocab.terms().iter().map(|t| consensus_counts.get(t)).collect(),
        weighted: consensus.values.clone(),
        m_hat: folded.m_hat.clone(),
    });
    art.similarity = sim;
    art.matrix = Some(matrix);
    Ok(())
}

fn run_meeting(meeting: &MeetingSpec, roster: &[String], config: &RunConfig) -> MeetingArtifacts {
    let mut art = MeetingArtifacts {
        meeting_id: meeting.meeting_id.clone(),
        date_label: meeting.date_label.clone(),
        n_speakers: meeting.active_speakers(roster).len(),
        vocab_size: None,
        rank: None,
        oov: None,
        error: None,
        similarity: empty_similarity(meeting, roster),
        matrix: None,
        foldin: None,
    };
    if let Err(reason) = compute_meeting(meeting, roster, config, &mut art) {
        art.error = Some(reason);
    }
    art
}

/// Runs every meeting in the manifest and aggregates the survivors.
///
/// Without [`RunConfig::allow_partial`] the first failed meeting aborts the
/// run. With it, failed meetings still appear in the report (as all-undefined
/// rows) and in the artifact list (with their reason), and the aggregation is
/// computed from the meetings that succeeded.
pub fn run_pipeline(manifest: &Manifest, config: &RunConfig) -> Result<PipelineOutput, PipelineError> {
    manifest.validate()?;
    let artifacts: Vec<MeetingArtifacts> = manifest
        .meetings
        .iter()
        .map(|meeting| run_meeting(meeting, &manifest.roster, config))
        .collect();
    if !config.allow_partial {
        if let Some(failed) = artifacts.iter().find(|a| !a.succeeded()) {
            return Err(PipelineError::MeetingFailed {
                meeting_id: failed.meeting_id.clone(),
                reason: failed.error.clone().unwrap_or_default(),
            });
        }
    }
    let exclude: BTreeSet<String> = manifest
        .exclude_from_rank
        .union(&config.exclude_from_rank)
        .cloned()
        .collect();
    let similarities: Vec<MeetingSimilarity> =
        artifacts.iter().map(|a| a.similarity.clone()).collect();
    let report = aggregate(&similarities, &manifest.roster, &exclude)?;
    Ok(PipelineOutput { report, artifacts })
}
