//! Recomputing means and ranks from an existing score table, without the
//! source documents.
//!
//! The bundled table holds one row per 2017 policy meeting and one column
//! per speaker; `x` marks meetings where a speaker was not active. Ranking
//! uses the full-precision means — two speakers can round to the same two
//! decimals yet still be strictly ordered.
//!
//! ```text
//! cargo run -p consensus-lsa --example reaggregate_scores
//! ```

use std::collections::BTreeSet;
use std::path::Path;

use consensus_lsa::report::parse_scores_csv;
use consensus_lsa::similarity::aggregate;

fn main() {
    let table = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/scores_2017.csv");
    let text = std::fs::read_to_string(&table).unwrap();
    let (roster, meetings) = parse_scores_csv(&text).unwrap();
    println!("{} meetings, {} speakers\n", meetings.len(), roster.len());

    // Tarullo left the committee mid-year; report his mean but rank only
    // the speakers who served the full sample.
    let exclude: BTreeSet<String> = ["Tarullo".to_string()].into();
    let report = aggregate(&meetings, &roster, &exclude).unwrap();

    let mut ranked: Vec<(&String, usize)> =
        report.rank.iter().map(|(n, r)| (n, *r)).collect();
    ranked.sort_by_key(|&(_, r)| r);
    println!("{:<6} {:<10} {:>10} {:>8}", "rank", "speaker", "mean", "(2 dp)");
    for (name, rank) in ranked {
        let mean = report.mean[name].unwrap();
        println!("{rank:<6} {name:<10} {mean:>10.6} {mean:>8.2}");
    }
    for name in &report.excluded {
        if let Some(Some(mean)) = report.mean.get(name) {
            println!("{:<6} {name:<10} {mean:>10.6} {mean:>8.2}", "-");
        }
    }

    // The interesting pair: identical at two decimals, distinct in full
    // precision, so the ranks are unambiguous.
    let quarles = report.mean["Quarles"].unwrap();
    let harker = report.mean["Harker"].unwrap();
    println!(
        "\nQuarles {quarles} vs Harker {harker}: both display as {:.2}, \
         but rank {} vs {}",
        quarles, report.rank["Quarles"], report.rank["Harker"]
    );
}
