//! The whole pipeline from a manifest: per-meeting models, fold-in, scores,
//! aggregation, and every report artifact on disk.
//!
//! ```text
//! cargo run -p consensus-lsa --example full_pipeline
//! ```

use std::path::Path;

use consensus_lsa::corpus::load_stopwords;
use consensus_lsa::manifest::load_manifest;
use consensus_lsa::pipeline::{run_pipeline, RunConfig};
use consensus_lsa::report::emit_reports;

fn main() {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let manifest = load_manifest(&data.join("corpus/manifest.json")).unwrap();

    let config = RunConfig {
        cleaning: consensus_lsa::corpus::CleaningConfig {
            stopwords: load_stopwords(&data.join("stopwords_en.txt")).unwrap(),
            ..Default::default()
        },
        ..RunConfig::default()
    };

    let output = run_pipeline(&manifest, &config).unwrap();

    println!("per-meeting scores:");
    for art in &output.artifacts {
        println!(
            "  {} ({}): {} speakers, {} terms, rank {}, consensus dropped mass {:.3}",
            art.meeting_id,
            art.date_label,
            art.n_speakers,
            art.vocab_size.unwrap(),
            art.rank.unwrap(),
            art.oov.unwrap().dropped_mass(),
        );
        for (name, score) in &art.similarity.scores {
            match score {
                Some(v) => println!("    {name:<8} {v:.4}"),
                None => println!("    {name:<8} NA"),
            }
        }
    }

    println!("\naggregated across meetings:");
    for name in &output.report.roster {
        let mean = match output.report.mean[name] {
            Some(v) => format!("{v:.4}"),
            None => "NA".to_string(),
        };
        match output.report.rank.get(name) {
            Some(r) => println!("  rank {r}: {name:<8} mean {mean}"),
            None => println!("  unranked: {name:<8} mean {mean}"),
        }
    }

    let out_dir = std::env::temp_dir().join("consensus-lsa-example");
    let written = emit_reports(&output, &config, &out_dir).unwrap();
    println!("\nwrote {} artifacts:", written.len());
    for path in &written {
        println!("  {}", path.display());
    }
}
