//! Term weighting: the six tf-idf scheme combinations side by side.
//!
//! ```text
//! cargo run -p consensus-lsa --example weighting_schemes
//! ```

use std::sync::Arc;

use consensus_lsa::corpus::{clean_and_tokenize, count_terms, CleaningConfig};
use consensus_lsa::dtm::{
    apply_weights, build_dtm, build_vocabulary, fit_weights, WeightingScheme,
};

fn main() {
    let cfg = CleaningConfig::default();
    let docs: Vec<(String, _)> = [
        ("hawk", "raise rates raise rates inflation"),
        ("dove", "patience patience inflation outlook"),
        ("chair", "inflation outlook rates balance"),
    ]
    .into_iter()
    .map(|(id, text)| (id.to_string(), count_terms(&clean_and_tokenize(text, &cfg))))
    .collect();

    let vocab = Arc::new(build_vocabulary(&docs.iter().map(|(_, c)| c.clone()).collect::<Vec<_>>()).unwrap());
    let dtm = build_dtm(&docs, Arc::clone(&vocab)).unwrap();

    println!("corpus: 3 documents, {} terms: {}\n", vocab.len(), vocab.terms().join(" "));

    for scheme in ["raw-none", "raw-plain", "raw-smooth", "log-none", "log-plain", "log-smooth"] {
        let scheme: WeightingScheme = scheme.parse().unwrap();
        let model = fit_weights(&dtm, scheme).unwrap();
        let rows = apply_weights(&dtm, &model).unwrap();
        println!("scheme {scheme}:");
        print!("{:<8}", "");
        for term in vocab.terms() {
            print!("{term:>10}");
        }
        println!();
        for (id, row) in dtm.doc_ids().iter().zip(&rows) {
            print!("{id:<8}");
            for v in &row.values {
                print!("{v:>10.4}");
            }
            println!();
        }
        println!();
    }

    // "inflation" appears in every document: plain idf zeroes it out
    // entirely, smooth idf keeps it at a reduced weight. That difference is
    // why smooth is the default — ubiquitous-but-meaningful terms survive.
    let ti = vocab.index_of("inflation").unwrap();
    for scheme in ["raw-plain", "raw-smooth"] {
        let model = fit_weights(&dtm, scheme.parse().unwrap()).unwrap();
        println!("idf(\"inflation\") under {scheme}: {}", model.idf()[ti]);
    }
}
