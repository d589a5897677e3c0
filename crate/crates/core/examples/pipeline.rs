//! The full run on the bundled numbers fixture, written to a temporary
//! directory.
//!
//! Run with `cargo run --example pipeline`.

use std::path::Path;

use dikspace::pipeline::{run, PipelineConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let out = std::env::temp_dir().join("dikspace-example");
    for name in ["numbers", "admin"] {
        let dir = fixtures.join(name);
        let mut config = PipelineConfig::new(dir.join("dataset.json"), dir.join("domain.json"), dir.join("interpretation.json"), out.join(name));
        let rules = dir.join("rules.txt");
        config.rules = rules.exists().then_some(rules);
        let summary = run(&config)?;
        println!("{name}: {} files in {}", summary.written.len(), out.join(name).display());
        for line in summary.report.lines().filter(|l| l.contains("is equal to") || l.contains("HasCapital(China)") || l.starts_with("  ∀")) {
            println!("  {}", line.trim());
        }
    }
    Ok(())
}
