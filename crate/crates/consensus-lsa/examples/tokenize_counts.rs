//! Cleaning and counting: how raw remarks become term counts.
//!
//! ```text
//! cargo run -p consensus-lsa --example tokenize_counts
//! ```

use consensus_lsa::corpus::{clean_and_tokenize, count_terms, parse_stopwords, CleaningConfig};

fn main() {
    let remarks = "The Committee judges that LABOR-market conditions have \
                   strengthened; inflation is projected to reach 2% by 2026. \
                   The committee's outlook for inflation has not changed.";

    // Default cleaning: case-fold, split on non-alphabetic characters,
    // drop numerals and one-character fragments.
    let default_cfg = CleaningConfig::default();
    let tokens = clean_and_tokenize(remarks, &default_cfg);
    println!("tokens ({}): {}\n", tokens.len(), tokens.join(" "));

    // The same text with a stopword list and a drop pattern. Patterns are
    // removed case-insensitively before splitting, so "labor-market" and
    // "LABOR-market" are treated alike.
    let cfg = CleaningConfig {
        stopwords: parse_stopwords("the\nthat\nis\nto\nby\nfor\nhas\nnot\nhave"),
        extra_drop_patterns: vec!["labor-market".to_string()],
        ..CleaningConfig::default()
    };
    let tokens = clean_and_tokenize(remarks, &cfg);
    println!("filtered tokens ({}): {}\n", tokens.len(), tokens.join(" "));

    // Counting folds repeated terms together; iteration order is always
    // lexicographic, which keeps every later stage deterministic.
    let counts = count_terms(&tokens);
    println!("{:<14} count", "term");
    for (term, count) in counts.iter() {
        println!("{term:<14} {count}");
    }
    println!("\ntotal occurrences: {}", counts.total());
}
