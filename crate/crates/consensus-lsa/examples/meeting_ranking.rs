//! Scoring one meeting: every speaker against the consensus record, plus
//! the full pairwise correlation matrix.
//!
//! ```text
//! cargo run -p consensus-lsa --example meeting_ranking
//! ```

use std::collections::BTreeSet;
use std::sync::Arc;

use consensus_lsa::corpus::{clean_and_tokenize, count_terms, CleaningConfig};
use consensus_lsa::dtm::{
    apply_weights, build_dtm, build_vocabulary, fit_weights, weight_external,
};
use consensus_lsa::lsa::{fold_in, svd, LsaModel};
use consensus_lsa::matrix::Mat;
use consensus_lsa::similarity::{meeting_similarities, pairwise_matrix, ComparisonSpace};

fn main() {
    let cfg = CleaningConfig::default();
    let speakers = [
        ("Alder", "inflation is firming and further gradual rate increases remain appropriate"),
        ("Brook", "the labor market is strong and gradual increases in rates are appropriate"),
        ("Cedar", "inflation is soft and patience is warranted before further rate moves"),
    ];
    let minutes = "participants agreed that gradual increases in rates would be appropriate \
                   as inflation firms and the labor market remains strong";

    // Fit the meeting model.
    let docs: Vec<(String, _)> = speakers
        .iter()
        .map(|(id, text)| (id.to_string(), count_terms(&clean_and_tokenize(text, &cfg))))
        .collect();
    let vocab = Arc::new(
        build_vocabulary(&docs.iter().map(|(_, c)| c.clone()).collect::<Vec<_>>()).unwrap(),
    );
    let dtm = build_dtm(&docs, Arc::clone(&vocab)).unwrap();
    let weights = Arc::new(fit_weights(&dtm, Default::default()).unwrap());
    let rows = apply_weights(&dtm, &weights).unwrap();
    let dense: Vec<Vec<f64>> = rows.iter().map(|r| r.values.clone()).collect();
    let factors = svd(&Mat::from_rows(&dense)).unwrap();
    let model =
        LsaModel::new(factors, dtm.doc_ids().to_vec(), Arc::clone(&vocab), weights).unwrap();

    // Fold the consensus record in and score everyone.
    let counts = count_terms(&clean_and_tokenize(minutes, &cfg));
    let (weighted, _oov) = weight_external(&counts, &model.weights, &vocab).unwrap();
    let folded = fold_in(&model, &weighted).unwrap();
    let scores = meeting_similarities(
        "demo-meeting",
        &model,
        &folded,
        &rows,
        &BTreeSet::new(),
        ComparisonSpace::Term,
    )
    .unwrap();

    println!("scores against the consensus record:");
    let mut ordered: Vec<(&String, f64)> =
        scores.scores.iter().filter_map(|(n, s)| s.map(|v| (n, v))).collect();
    ordered.sort_by(|a, b| b.1.total_cmp(&a.1));
    for (name, score) in ordered {
        println!("  {name:<8} {score:.4}");
    }

    // The pairwise view adds speaker-vs-speaker structure: Alder and Brook
    // (both close to the consensus) also resemble each other.
    let mut labeled: Vec<(String, Vec<f64>)> = model
        .doc_ids
        .iter()
        .zip(&rows)
        .map(|(n, r)| (n.clone(), r.values.clone()))
        .collect();
    labeled.push(("minutes".to_string(), folded.m_hat.clone()));
    let matrix = pairwise_matrix(&labeled).unwrap();

    println!("\npairwise correlation matrix:");
    print!("{:<10}", "");
    for label in &matrix.labels {
        print!("{label:>9}");
    }
    println!();
    for (i, label) in matrix.labels.iter().enumerate() {
        print!("{label:<10}");
        for j in 0..matrix.len() {
            match matrix.get(i, j) {
                Some(v) => print!("{v:>9.4}"),
                None => print!("{:>9}", "NA"),
            }
        }
        println!();
    }
}
