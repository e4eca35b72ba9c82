//! Writes the nine synchronized artifacts, then reloads the state from disk
//! and re-renders it byte for byte.

use litscout::exports::{load_state, render_all, write_all};
use litscout::pipeline::{run_pipeline, PipelineConfig};
use litscout::synth::synthetic_corpus;

fn main() -> litscout::Result<()> {
    let corpus = synthetic_corpus(60, 2);
    let config = PipelineConfig {
        target: Some(corpus[0].title.clone()),
        ..Default::default()
    };
    let dir = std::env::temp_dir().join("litscout-export-demo");
    let state = run_pipeline(&corpus, &corpus[0].title, config, Some(&dir))?;

    let set = write_all(&state, &dir)?;
    for a in &set.artifacts {
        println!("{:<24} {:>7} bytes", a.file_name, a.bytes.len());
    }
    let reloaded = load_state(&dir)?;
    assert_eq!(render_all(&reloaded)?, set);
    println!(
        "reloaded state re-renders identically ({} papers)",
        reloaded.papers.len()
    );
    println!("open {}", dir.join("dashboard.html").display());
    Ok(())
}
