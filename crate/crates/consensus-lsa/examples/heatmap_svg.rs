//! Rendering a correlation matrix as a self-contained SVG heatmap.
//!
//! Cells are colored on a linear 0→1 light→dark scale with the value
//! printed inside; undefined cells (a zero vector somewhere) come out gray
//! with `NA`. The output embeds no fonts or scripts and no timestamps, so
//! the same matrix always produces byte-identical SVG.
//!
//! ```text
//! cargo run -p consensus-lsa --example heatmap_svg
//! ```

use consensus_lsa::report::render_heatmap;
use consensus_lsa::similarity::pairwise_matrix;

fn main() {
    // Four labeled vectors; the "silent" speaker said nothing usable, so
    // every correlation involving them is undefined.
    let vectors = vec![
        ("Alder".to_string(), vec![2.0, 1.0, 0.0, 0.5]),
        ("Brook".to_string(), vec![1.5, 1.2, 0.3, 0.4]),
        ("silent".to_string(), vec![0.0, 0.0, 0.0, 0.0]),
        ("minutes".to_string(), vec![1.8, 1.0, 0.2, 0.6]),
    ];
    let matrix = pairwise_matrix(&vectors).unwrap();

    let svg = render_heatmap(&matrix);
    let path = std::env::temp_dir().join("consensus-lsa-heatmap.svg");
    std::fs::write(&path, &svg).unwrap();

    println!("{} labels: {}", matrix.len(), matrix.labels.join(", "));
    println!("wrote {} bytes to {}", svg.len(), path.display());
    println!("\nfirst lines of the document:");
    for line in svg.lines().take(6) {
        println!("  {line}");
    }
}
