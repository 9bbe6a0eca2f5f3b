//! Whole-pipeline behaviour on the bundled corpus: structural invariants,
//! round-trips between the emitted tables and the aggregator, and the
//! errors shared across module boundaries.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use consensus_lsa::{
    aggregate, emit_consensus_tables, emit_reports, load_manifest, parse_scores_csv,
    run_pipeline, ComparisonSpace, ConsensusReport, ManifestError, PipelineError, RunConfig,
};

fn corpus_manifest() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data/corpus/manifest.json")
}

fn run_bundled(config: &RunConfig) -> consensus_lsa::PipelineOutput {
    let manifest = load_manifest(&corpus_manifest()).unwrap();
    run_pipeline(&manifest, config).unwrap()
}

#[test]
fn every_meeting_partitions_the_roster_into_scored_and_inactive() {
    let manifest = load_manifest(&corpus_manifest()).unwrap();
    let output = run_pipeline(&manifest, &RunConfig::default()).unwrap();
    let roster: BTreeSet<&str> = manifest.roster.iter().map(String::as_str).collect();
    for meeting in &output.report.meetings {
        let scored: BTreeSet<&str> = meeting.scores.keys().map(String::as_str).collect();
        let inactive: BTreeSet<&str> = meeting.inactive.iter().map(String::as_str).collect();
        assert!(
            scored.is_disjoint(&inactive),
            "{}: a speaker cannot be both scored and inactive",
            meeting.meeting_id
        );
        let union: BTreeSet<&str> = scored.union(&inactive).copied().collect();
        assert_eq!(union, roster, "{}: roster not covered", meeting.meeting_id);
    }
    // The bundled corpus has one speaker sitting out the second meeting.
    assert_eq!(
        output.report.meetings[1].inactive,
        BTreeSet::from(["Dune".to_string()])
    );
}

#[test]
fn emitted_tables_reaggregate_to_identical_bytes() {
    let output = run_bundled(&RunConfig::default());

    let first = tempfile::tempdir().unwrap();
    emit_consensus_tables(&output.report, first.path()).unwrap();
    let first_csv = fs::read_to_string(first.path().join("consensus_report.csv")).unwrap();

    let (roster, meetings) = parse_scores_csv(&first_csv).unwrap();
    assert_eq!(roster, output.report.roster);
    let reaggregated = aggregate(&meetings, &roster, &output.report.excluded).unwrap();

    let second = tempfile::tempdir().unwrap();
    emit_consensus_tables(&reaggregated, second.path()).unwrap();
    let second_csv = fs::read_to_string(second.path().join("consensus_report.csv")).unwrap();
    assert_eq!(first_csv, second_csv, "re-aggregation must be lossless");
}

#[test]
fn concept_space_runs_end_to_end_with_full_artifacts() {
    let config = RunConfig { space: ComparisonSpace::Concept, ..RunConfig::default() };
    let output = run_bundled(&config);
    for meeting in &output.report.meetings {
        for (name, score) in &meeting.scores {
            let value = score.unwrap_or_else(|| panic!("{name} has no score"));
            assert!((-1.0..=1.0).contains(&value), "{name}: {value}");
        }
    }
    for artifact in &output.artifacts {
        assert!(artifact.succeeded());
        let matrix = artifact.matrix.as_ref().unwrap();
        assert_eq!(matrix.labels.last().map(String::as_str), Some("minutes"));
    }
}

#[test]
fn emitting_an_empty_report_is_rejected() {
    let empty = ConsensusReport {
        roster: vec!["Ana".into()],
        meetings: Vec::new(),
        mean: Default::default(),
        rank: Default::default(),
        excluded: Default::default(),
    };
    let dir = tempfile::tempdir().unwrap();
    let err = emit_consensus_tables(&empty, dir.path()).unwrap_err();
    assert!(matches!(err, PipelineError::NonEmptyRequired));
}

#[test]
fn run_metadata_is_valid_json_describing_each_meeting() {
    let config = RunConfig::default();
    let output = run_bundled(&config);
    let dir = tempfile::tempdir().unwrap();
    emit_reports(&output, &config, dir.path()).unwrap();

    let meta: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("run_meta.json")).unwrap())
            .unwrap();
    assert_eq!(meta["weighting"], "raw-smooth");
    assert_eq!(meta["space"], "term");
    let meetings = meta["meetings"].as_array().unwrap();
    assert_eq!(meetings.len(), 2);
    for meeting in meetings {
        assert_eq!(meeting["status"], "ok");
        assert!(meeting["vocab_size"].as_u64().unwrap() > 0);
        assert!(meeting["rank"].as_u64().unwrap() > 0);
        assert!(meeting["oov_dropped_mass"].as_f64().unwrap() < 1.0);
        assert!(meeting.get("error").is_none());
    }
}

#[test]
fn malformed_manifests_are_rejected_as_syntax_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad_json = dir.path().join("bad.json");
    fs::write(&bad_json, "{ not json").unwrap();
    assert!(matches!(
        load_manifest(&bad_json).unwrap_err(),
        ManifestError::BadSyntax { .. }
    ));

    let unknown_field = dir.path().join("unknown.json");
    fs::write(
        &unknown_field,
        r#"{ "roster": ["A"], "meetings": [], "surprise": true }"#,
    )
    .unwrap();
    assert!(matches!(
        load_manifest(&unknown_field).unwrap_err(),
        ManifestError::BadSyntax { .. }
    ));
}
