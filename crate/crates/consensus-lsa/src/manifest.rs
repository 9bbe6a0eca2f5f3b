//! Run manifests: which meetings to process, who spoke, where the documents
//! live.
//!
//! A manifest is a JSON file. Relative document paths are resolved against
//! the directory containing the manifest, so a corpus directory can be moved
//! or checked in wholesale. Inactive participants are encoded as an explicit
//! `null` next to their name.
//!
//! ```json
//! {
//!   "roster": ["Alder", "Brook"],
//!   "exclude_from_rank": [],
//!   "meetings": [
//!     {
//!       "meeting_id": "2020-03",
//!       "date_label": "March 2020",
//!       "consensus_path": "2020-03/minutes.txt",
//!       "speakers": { "Alder": "2020-03/alder.txt", "Brook": null }
//!     }
//!   ]
//! }
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

/// Words that appear as fixed row/column labels in the emitted CSV tables;
/// letting a speaker or meeting use one of them would make those tables
/// ambiguous.
const RESERVED_LABELS: [&str; 6] = ["meeting", "mean", "rank", "minutes", "x", "NA"];

#[derive(Debug, Error)]
pub enum ManifestError {
    #[error("cannot read manifest {path}: {source}", path = .path.display())]
    Unreadable { path: PathBuf, source: std::io::Error },
    #[error("manifest {path} is not valid JSON: {source}", path = .path.display())]
    BadSyntax { path: PathBuf, source: serde_json::Error },
    #[error("invalid manifest: {0}")]
    Invalid(String),
    #[error("referenced file does not exist: {}", .0.display())]
    MissingFile(PathBuf),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    /// Ordered speaker roster; fixes the column order of every report.
    pub roster: Vec<String>,
    /// Speakers whose mean is reported but who receive no rank.
    #[serde(default)]
    pub exclude_from_rank: BTreeSet<String>,
    pub meetings: Vec<MeetingSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeetingSpec {
    pub meeting_id: String,
    pub date_label: String,
    /// The consensus record the speakers are compared against.
    pub consensus_path: PathBuf,
    /// speaker name → document path, or `null` for an inactive participant.
    pub speakers: BTreeMap<String, Option<PathBuf>>,
}

impl MeetingSpec {
    /// Active speakers and their documents, in roster order.
    pub fn active_speakers<'a>(&'a self, roster: &'a [String]) -> Vec<(&'a str, &'a Path)> {
        roster
            .iter()
            .filter_map(|name| {
                self.speakers
                    .get(name)
                    .and_then(|p| p.as_deref())
                    .map(|p| (name.as_str(), p))
            })
            .collect()
    }

    /// Roster members not speaking at this meeting (explicit `null` or simply
    /// absent from the speakers map).
    pub fn inactive_speakers(&self, roster: &[String]) -> BTreeSet<String> {
        roster
            .iter()
            .filter(|name| self.speakers.get(*name).is_none_or(|p| p.is_none()))
            .cloned()
            .collect()
    }
}

fn check_label(kind: &str, label: &str) -> Result<(), ManifestError> {
    if label.is_empty() {
        return Err(ManifestError::Invalid(format!("{kind} must not be empty")));
    }
    if label.chars().any(|c| c == ',' || c == '"' || c.is_control()) {
        return Err(ManifestError::Invalid(format!(
            "{kind} {label:?} contains characters unsafe for CSV output"
        )));
    }
    if RESERVED_LABELS.contains(&label) {
        return Err(ManifestError::Invalid(format!("{kind} {label:?} is a reserved output label")));
    }
    Ok(())
}

impl Manifest {
    /// Joins every relative document path onto `base`.
    pub fn resolve_paths(&mut self, base: &Path) {
        let resolve = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        for meeting in &mut self.meetings {
            resolve(&mut meeting.consensus_path);
            for path in meeting.speakers.values_mut().flatten() {
                resolve(path);
            }
        }
    }

    /// Checks structural rules and that every referenced file exists.
    pub fn validate(&self) -> Result<(), ManifestError> {
        if self.roster.is_empty() {
            return Err(ManifestError::Invalid("roster must not be empty".into()));
        }
        let mut names = BTreeSet::new();
        for name in &self.roster {
            check_label("speaker name", name)?;
            if !names.insert(name.as_str()) {
                return Err(ManifestError::Invalid(format!("duplicate roster entry {name:?}")));
            }
        }
        for excluded in &self.exclude_from_rank {
            if !names.contains(excluded.as_str()) {
                return Err(ManifestError::Invalid(format!(
                    "exclude_from_rank entry {excluded:?} is not in the roster"
                )));
            }
        }
        if self.meetings.is_empty() {
            return Err(ManifestError::Invalid("manifest must list at least one meeting".into()));
        }
        let mut ids = BTreeSet::new();
        for meeting in &self.meetings {
            let id = &meeting.meeting_id;
            check_label("meeting id", id)?;
            if !id.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '.' | '_' | '-')) {
                return Err(ManifestError::Invalid(format!(
                    "meeting id {id:?} must use only ASCII letters, digits, '.', '_' or '-' \
                     (it becomes part of output file names)"
                )));
            }
            if !ids.insert(id.as_str()) {
                return Err(ManifestError::Invalid(format!("duplicate meeting id {id:?}")));
            }
            for speaker in meeting.speakers.keys() {
                if !names.contains(speaker.as_str()) {
                    return Err(ManifestError::Invalid(format!(
                        "speaker {speaker:?} in meeting {id:?} is not in the roster"
                    )));
                }
            }
            if !meeting.consensus_path.is_file() {
                return Err(ManifestError::MissingFile(meeting.consensus_path.clone()));
            }
            for path in meeting.speakers.values().flatten() {
                if !path.is_file() {
                    return Err(ManifestError::MissingFile(path.clone()));
                }
            }
        }
        Ok(())
    }
}

/// Reads, resolves, and validates a manifest file.
pub fn load_manifest(path: &Path) -> Result<Manifest, ManifestError> {
    let text = fs::read_to_string(path)
        .map_err(|source| ManifestError::Unreadable { path: path.to_owned(), source })?;
    let mut manifest: Manifest = serde_json::from_str(&text)
        .map_err(|source| ManifestError::BadSyntax { path: path.to_owned(), source })?;
    if let Some(base) = path.parent() {
        manifest.resolve_paths(base);
    }
    manifest.validate()?;
    Ok(manifest)
}
