//! Full pipeline over the bundled sample corpus.
//!
//! cargo run --example offline_search -- "graph neural networks for molecules since 2020"

use litscout::corpus::load_corpus;
use litscout::{CorpusFilter, Engine, PipelineConfig};

fn main() -> litscout::Result<()> {
    let query = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "recent NeurIPS papers on diffusion models".to_string());
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/sample_corpus.json");
    let (corpus, report) = load_corpus(path.as_ref(), &CorpusFilter::default())?;
    println!("corpus: {} papers ({} skipped)", report.loaded, report.skipped);

    let out = std::env::temp_dir().join("litscout-offline-search");
    let state = Engine::new(corpus).run(&query, PipelineConfig::default(), Some(&out))?;

    if let Some(intent) = &state.intent {
        println!(
            "intent: text={:?} conferences={:?} years={:?}..{:?} sort={:?}",
            intent.search_text, intent.conferences, intent.year_min, intent.year_max, intent.sort_preference
        );
    }
    for step in &state.step_log {
        println!(
            "step {:<10} {:>3} papers  {}",
            step.stage_name, step.paper_count, step.action
        );
    }
    for p in state.papers.iter().take(10) {
        let s = p.scores.unwrap_or_default();
        println!(
            "{:>2}. {:.3}  {} ({} {})",
            p.rank.unwrap_or(0),
            s.combined,
            p.title,
            p.venue,
            p.year.unwrap_or(0)
        );
    }
    for insight in &state.insights {
        println!("* {insight}");
    }
    println!("artifacts in {}", out.display());
    Ok(())
}
