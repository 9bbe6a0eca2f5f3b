//! The semantic space: factoring a weighted document-term matrix and
//! choosing how many dimensions to keep.
//!
//! ```text
//! cargo run -p consensus-lsa --example semantic_space
//! ```

use consensus_lsa::lsa::{svd, truncate, TruncationPolicy};
use consensus_lsa::matrix::Mat;

fn main() {
    // A small weighted document-term matrix: 4 documents over 6 terms.
    // Documents 1 and 2 share a "tightening" theme, 3 and 4 a "patience"
    // theme, with one bridging term.
    let a = Mat::from_rows(&[
        vec![2.0, 1.0, 0.0, 0.0, 0.0, 1.0],
        vec![1.0, 2.0, 1.0, 0.0, 0.0, 0.0],
        vec![0.0, 0.0, 1.0, 2.0, 1.0, 0.0],
        vec![0.0, 0.0, 0.0, 1.0, 2.0, 1.0],
    ]);

    let factors = svd(&a).unwrap();
    println!("singular values:");
    let total: f64 = factors.sigma.iter().map(|s| s * s).sum();
    let mut cumulative = 0.0;
    for (i, s) in factors.sigma.iter().enumerate() {
        cumulative += s * s;
        println!("  sigma[{i}] = {s:.6}   cumulative energy {:.4}", cumulative / total);
    }

    // The factorization reconstructs the input.
    let residual = factors.reconstruct().max_abs_diff(&a);
    println!("\nreconstruction max |error|: {residual:.3e}");

    // Three ways to truncate the same spectrum.
    for policy in [
        TruncationPolicy::Rank(2),
        TruncationPolicy::Energy(0.9),
        TruncationPolicy::Tolerance,
    ] {
        let kept = truncate(&factors, policy).unwrap();
        let approx_err = kept.reconstruct().max_abs_diff(&a);
        println!(
            "policy {policy:<12} keeps {} of {} dimensions, max |error| {approx_err:.3}",
            kept.k(),
            factors.k()
        );
    }

    // Requesting more dimensions than exist is an error, not a clamp.
    let err = truncate(&factors, TruncationPolicy::Rank(99)).unwrap_err();
    println!("\nrank(99) -> {err}");
}
