//! Folding a new document into a fitted semantic space, and why the result
//! is exactly an orthogonal projection.
//!
//! ```text
//! cargo run -p consensus-lsa --example fold_in_projection
//! ```

use std::sync::Arc;

use consensus_lsa::corpus::{clean_and_tokenize, count_terms, CleaningConfig};
use consensus_lsa::dtm::{
    apply_weights, build_dtm, build_vocabulary, fit_weights, weight_external,
};
use consensus_lsa::lsa::{fold_in, svd, LsaModel};
use consensus_lsa::matrix::Mat;

fn main() {
    let cfg = CleaningConfig::default();
    let speakers = [
        ("hawk", "inflation pressures warrant higher policy rates soon"),
        ("dove", "weak inflation and soft growth warrant patience on rates"),
        ("chair", "policy should respond gradually to inflation and growth"),
    ];
    let docs: Vec<(String, _)> = speakers
        .iter()
        .map(|(id, text)| (id.to_string(), count_terms(&clean_and_tokenize(text, &cfg))))
        .collect();
    let vocab = Arc::new(
        build_vocabulary(&docs.iter().map(|(_, c)| c.clone()).collect::<Vec<_>>()).unwrap(),
    );
    let dtm = build_dtm(&docs, Arc::clone(&vocab)).unwrap();
    let weights = Arc::new(fit_weights(&dtm, "raw-smooth".parse().unwrap()).unwrap());
    let rows = apply_weights(&dtm, &weights).unwrap();
    let dense: Vec<Vec<f64>> = rows.iter().map(|r| r.values.clone()).collect();
    let factors = svd(&Mat::from_rows(&dense)).unwrap();
    let model =
        LsaModel::new(factors, dtm.doc_ids().to_vec(), Arc::clone(&vocab), weights).unwrap();

    println!("model: {} documents, {} terms, rank {}\n", model.doc_ids.len(), vocab.len(), model.rank());

    // An external document: weighted with the *corpus* model, so shared
    // terms get exactly the weights a corpus row would.
    let minutes = "participants agreed inflation and growth warrant gradual policy moves";
    let counts = count_terms(&clean_and_tokenize(minutes, &cfg));
    let (weighted, oov) = weight_external(&counts, &model.weights, &vocab).unwrap();
    println!(
        "external document: {} of {} occurrences outside the vocabulary (dropped mass {:.3})",
        oov.dropped_count, oov.total_count, oov.dropped_mass()
    );

    let folded = fold_in(&model, &weighted).unwrap();
    println!("\nconcept coordinates d_hat: {:?}", folded.d_hat);
    println!("\n{:<14} {:>9} {:>9}", "term", "weighted", "projected");
    for (i, term) in vocab.terms().iter().enumerate() {
        println!("{:<14} {:>9.4} {:>9.4}", term, weighted.values[i], folded.m_hat[i]);
    }

    // m_hat is the orthogonal projection of the weighted vector onto the
    // span of the model's term directions: projecting a second time changes
    // nothing, and the residual is orthogonal to the projection.
    let twice = fold_in(
        &model,
        &consensus_lsa::dtm::WeightedVector { values: folded.m_hat.clone() },
    )
    .unwrap();
    let idempotence: f64 = folded
        .m_hat
        .iter()
        .zip(&twice.m_hat)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let residual_dot: f64 = weighted
        .values
        .iter()
        .zip(&folded.m_hat)
        .map(|(v, m)| (v - m) * m)
        .sum();
    println!("\nprojecting twice moves nothing: max |diff| = {idempotence:.3e}");
    println!("residual is orthogonal to the projection: <v - m, m> = {residual_dot:.3e}");
}
