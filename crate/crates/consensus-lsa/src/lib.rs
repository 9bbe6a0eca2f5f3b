//! Measures how closely each committee member's meeting remarks track the
//! meeting's published consensus record, using latent semantic analysis.
//!
//! The pipeline, per meeting: clean and tokenize every active speaker's
//! remarks ([`corpus`]), build a TF-IDF-weighted document-term matrix
//! ([`dtm`]), factor it with a singular value decomposition and truncate the
//! spectrum ([`lsa`]), fold the consensus record into the resulting semantic
//! space ([`lsa::fold_in`]), and score each speaker by cosine similarity
//! against the folded-in record ([`similarity`]). Across meetings, scores
//! aggregate into per-speaker means and ranks ([`similarity::aggregate`]).
//! [`pipeline`] wires those stages together from a JSON [`manifest`], and
//! [`report`] serializes the results (CSV tables, SVG heatmaps, run
//! metadata) deterministically.
//!
//! Each major capability has a runnable example:
//!
//! ```text
//! cargo run -p consensus-lsa --example tokenize_counts    # cleaning & counting
//! cargo run -p consensus-lsa --example weighting_schemes  # TF-IDF variants
//! cargo run -p consensus-lsa --example semantic_space     # SVD & truncation
//! cargo run -p consensus-lsa --example fold_in_projection # folding a new document in
//! cargo run -p consensus-lsa --example meeting_ranking    # scoring one meeting
//! cargo run -p consensus-lsa --example full_pipeline      # manifest -> artifacts
//! cargo run -p consensus-lsa --example reaggregate_scores # means & ranks from a table
//! cargo run -p consensus-lsa --example heatmap_svg        # rendering a correlation matrix
//! ```
//!
//! The same functionality is reachable through the thin `consensus-lsa`
//! binary (`run`, `inspect`, and `report` subcommands).

pub mod corpus;
pub mod dtm;
pub mod lsa;
pub mod manifest;
pub mod matrix;
pub mod pipeline;
pub mod report;
pub mod similarity;

pub use corpus::{clean_and_tokenize, count_terms, CleaningConfig, TermCounts};
pub use dtm::{
    apply_weights, build_dtm, build_vocabulary, fit_weights, weight_external, DocTermMatrix,
    OovStats, Vocabulary, WeightModel, WeightedVector, WeightingScheme,
};
pub use lsa::{
    fold_in, svd, truncate, FoldedDocument, LsaModel, SvdFactors, TruncationPolicy,
};
pub use manifest::{load_manifest, Manifest, ManifestError, MeetingSpec};
pub use matrix::Mat;
pub use pipeline::{
    fit_meeting, run_pipeline, MeetingArtifacts, PipelineError, PipelineOutput, RunConfig,
};
pub use report::{emit_consensus_tables, emit_reports, parse_scores_csv, render_heatmap};
pub use similarity::{
    aggregate, cosine, meeting_similarities, pairwise_matrix, ComparisonSpace, ConsensusReport,
    CorrelationMatrix, MeetingSimilarity,
};
