//! Generated queries plus exact-title queries, scored for every retrieval
//! method on a thread pool.
//!
//! cargo run --release --example benchmark -- [parallelism]

use litscout::eval::{generate_semanticbench, run_benchmark, GroundTruth};
use litscout::retrieval::RetrievalMethod;
use litscout::synth::synthetic_corpus;
use litscout::{Engine, PipelineConfig, PipelineStructure};

fn main() -> litscout::Result<()> {
    let parallelism = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(4);
    let corpus = synthetic_corpus(300, 1);
    let engine = Engine::new(corpus.clone());
    let generated = generate_semanticbench(&corpus, 50, 1)?;
    let exact: Vec<GroundTruth> = corpus
        .iter()
        .map(|p| GroundTruth {
            query: p.title.clone(),
            target: p.title.clone(),
            filters: None,
        })
        .collect();
    println!("sample query: {:?} -> {:?}", generated[0].query, generated[0].target);

    println!(
        "{:<12} {:<9} {:>6} {:>6} {:>6} {:>6} {:>9}",
        "method", "set", "hit", "mrr", "r@1", "r@10", "wall ms"
    );
    for method in [
        RetrievalMethod::Bm25,
        RetrievalMethod::Simple,
        RetrievalMethod::Hybrid,
        RetrievalMethod::Bm25Rerank,
    ] {
        let config = PipelineConfig {
            structure: PipelineStructure::Minimal,
            retrieval: method,
            ..Default::default()
        };
        for (name, truths) in [("generated", &generated), ("titles", &exact)] {
            let a = run_benchmark(&engine, truths, &config, parallelism, None)?.aggregate;
            println!(
                "{:<12} {:<9} {:>6.3} {:>6.3} {:>6.3} {:>6.3} {:>9.1}",
                method.to_string(),
                name,
                a.hit_rate,
                a.mrr,
                a.recall[&1],
                a.recall[&10],
                a.total_wall_ms
            );
        }
    }
    Ok(())
}
