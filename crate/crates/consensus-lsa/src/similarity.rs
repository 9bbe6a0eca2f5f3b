//! Cosine similarity scoring, per-meeting pairwise matrices, and
//! cross-meeting aggregation into means and ranks.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::lsa::{FoldedDocument, LsaModel};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SimilarityError {
    #[error("cosine similarity is undefined for a zero vector")]
    ZeroVector,
    #[error("vector lengths differ: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("a pairwise matrix needs at least two labeled vectors, got {0}")]
    TooFewVectors(usize),
    #[error("aggregation requires at least one meeting")]
    NoMeetings,
    #[error("speaker {0:?} is active in no meeting and is not excluded from ranking")]
    NoActiveMeetings(String),
}

/// Cosine of the angle between two vectors, clamped to [-1, 1] against
/// rounding. A zero vector has no direction, so the result would be
/// undefined — that is reported as an error, never as a silent 0.
pub fn cosine(x: &[f64], y: &[f64]) -> Result<f64, SimilarityError> {
    if x.len() != y.len() {
        return Err(SimilarityError::DimensionMismatch { left: x.len(), right: y.len() });
    }
    let mut dot = 0.0;
    let mut nx = 0.0;
    let mut ny = 0.0;
    for (a, b) in x.iter().zip(y) {
        dot += a * b;
        nx += a * a;
        ny += b * b;
    }
    if nx == 0.0 || ny == 0.0 {
        return Err(SimilarityError::ZeroVector);
    }
    Ok((dot / (nx.sqrt() * ny.sqrt())).clamp(-1.0, 1.0))
}

/// Which representation speaker documents are compared in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ComparisonSpace {
    /// Compare m̂ against the TF-IDF rows (the default; the folded document
    /// is treated as one more row of the weighted matrix).
    #[default]
    Term,
    /// Compare d̂ against the document rows of U·Σ. Experimental.
    Concept,
}

impl fmt::Display for ComparisonSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ComparisonSpace::Term => "term",
            ComparisonSpace::Concept => "concept",
        })
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unknown comparison space {0:?} (expected \"term\" or \"concept\")")]
pub struct ParseSpaceError(String);

impl FromStr for ComparisonSpace {
    type Err = ParseSpaceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "term" => Ok(ComparisonSpace::Term),
            "concept" => Ok(ComparisonSpace::Concept),
            other => Err(ParseSpaceError(other.to_owned())),
        }
    }
}

/// One meeting's similarity scores. `scores` holds every active speaker;
/// a `None` score means the comparison was undefined (a zero vector was
/// involved). `inactive` holds the roster members who did not take part.
#[derive(Debug, Clone, PartialEq)]
pub struct MeetingSimilarity {
    pub meeting_id: String,
    pub scores: BTreeMap<String, Option<f64>>,
    pub inactive: BTreeSet<String>,
}

/// Scores every document of the model against the folded-in consensus
/// document. `weighted_rows` must align with `model.doc_ids`.
pub fn meeting_similarities(
    meeting_id: &str,
    model: &LsaModel,
    folded: &FoldedDocument,
    weighted_rows: &[crate::dtm::WeightedVector],
    inactive: &BTreeSet<String>,
    space: ComparisonSpace,
) -> Result<MeetingSimilarity, SimilarityError> {
    if weighted_rows.len() != model.doc_ids.len() {
        return Err(SimilarityError::DimensionMismatch {
            left: weighted_rows.len(),
            right: model.doc_ids.len(),
        });
    }
    debug_assert!(model.doc_ids.iter().all(|id| !inactive.contains(id)));
    let mut scores = BTreeMap::new();
    for (i, name) in model.doc_ids.iter().enumerate() {
        let result = match space {
            ComparisonSpace::Term => cosine(&folded.m_hat, &weighted_rows[i].values),
            ComparisonSpace::Concept => cosine(&folded.d_hat, &model.doc_concept_row(i)),
        };
        let value = match result {
            Ok(c) => Some(c),
            Err(SimilarityError::ZeroVector) => None,
            Err(other) => return Err(other),
        };
        scores.insert(name.clone(), value);
    }
    Ok(MeetingSimilarity {
        meeting_id: meeting_id.to_owned(),
        scores,
        inactive: inactive.clone(),
    })
}

/// Symmetric matrix of pairwise cosines between labeled vectors. `None`
/// marks comparisons involving a zero vector.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    pub labels: Vec<String>,
    pub values: Vec<Vec<Option<f64>>>,
}

impl CorrelationMatrix {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        self.values[i][j]
    }
}

pub fn pairwise_matrix(
    vectors: &[(String, Vec<f64>)],
) -> Result<CorrelationMatrix, SimilarityError> {
    if vectors.len() < 2 {
        return Err(SimilarityError::TooFewVectors(vectors.len()));
    }
    let dim = vectors[0].1.len();
    for (_, v) in vectors {
        if v.len() != dim {
            return Err(SimilarityError::DimensionMismatch { left: dim, right: v.len() });
        }
    }
    let n = vectors.len();
    let labels = vectors.iter().map(|(l, _)| l.clone()).collect();
    let mut values = vec![vec![None; n]; n];
    for i in 0..n {
        let nonzero = vectors[i].1.iter().any(|&x| x != 0.0);
        values[i][i] = nonzero.then_some(1.0);
        for j in i + 1..n {
            let cell = match cosine(&vectors[i].1, &vectors[j].1) {
                Ok(c) => Some(c),
                Err(SimilarityError::ZeroVector) => None,
                Err(other) => return Err(other),
            };
            // mirror the same f64 so the matrix is symmetric byte for byte
            values[i][j] = cell;
            values[j][i] = cell;
        }
    }
    Ok(CorrelationMatrix { labels, values })
}

/// Scores aggregated across meetings: per-speaker means over the meetings
/// where the speaker was active and had a defined score, and a dense rank
/// (1 = highest mean) over the non-excluded speakers with a defined mean.
#[derive(Debug, Clone, PartialEq)]
pub struct ConsensusReport {
    /// Column order for rendering; the configured roster.
    pub roster: Vec<String>,
    pub meetings: Vec<MeetingSimilarity>,
    pub mean: BTreeMap<String, Option<f64>>,
    pub rank: BTreeMap<String, usize>,
    pub excluded: BTreeSet<String>,
}

/// Folds per-meeting scores into means and ranks.
///
/// A speaker absent from a meeting's score map counts as inactive there.
/// Undefined scores contribute nothing: the mean is taken over defined
/// scores only, and a speaker with no defined score anywhere gets no mean
/// and no rank. Ranking uses the full-precision means, descending, with
/// exact ties broken lexicographically by speaker name; ranks of the ranked
/// speakers are always the gapless set 1..=n.
pub fn aggregate(
    meetings: &[MeetingSimilarity],
    roster: &[String],
    exclude: &BTreeSet<String>,
) -> Result<ConsensusReport, SimilarityError> {
    if meetings.is_empty() {
        return Err(SimilarityError::NoMeetings);
    }
    let mut mean: BTreeMap<String, Option<f64>> = BTreeMap::new();
    for speaker in roster {
        let mut active = 0usize;
        let mut defined: Vec<f64> = Vec::new();
        for meeting in meetings {
            if let Some(entry) = meeting.scores.get(speaker) {
                active += 1;
                if let Some(score) = entry {
                    defined.push(*score);
                }
            }
        }
        if active == 0 && !exclude.contains(speaker) {
            return Err(SimilarityError::NoActiveMeetings(speaker.clone()));
        }
        let m = if defined.is_empty() {
            None
        } else {
            Some(defined.iter().sum::<f64>() / defined.len() as f64)
        };
        mean.insert(speaker.clone(), m);
    }

    let mut ranked: Vec<(&String, f64)> = roster
        .iter()
        .filter(|s| !exclude.contains(*s))
        .filter_map(|s| mean.get(s).copied().flatten().map(|m| (s, m)))
        .collect();
    ranked.sort_by(|(na, ma), (nb, mb)| {
        mb.partial_cmp(ma).expect("means are finite").then_with(|| na.cmp(nb))
    });
    let rank: BTreeMap<String, usize> =
        ranked.iter().enumerate().map(|(i, (name, _))| ((*name).clone(), i + 1)).collect();

    Ok(ConsensusReport {
        roster: roster.to_vec(),
        meetings: meetings.to_vec(),
        mean,
        rank,
        excluded: exclude.iter().filter(|s| roster.contains(s)).cloned().collect(),
    })
}
