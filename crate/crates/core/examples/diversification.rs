//! MMR reranking at each mode's lambda, plus hidden gems and canonical
//! papers.

use litscout::diversity::{canonical_papers, hidden_gems, mmr_rerank, DiversityConfig};
use litscout::pipeline::{run_pipeline, PipelineConfig, PipelineStructure};
use litscout::scoring::assign_ranks;
use litscout::synth::synthetic_corpus;
use litscout::text::TfIdfModel;
use litscout::SearchMode;

fn main() -> litscout::Result<()> {
    let corpus = synthetic_corpus(300, 5);
    let query = "graph message passing";
    let config = PipelineConfig {
        structure: PipelineStructure::SearchSort,
        ..Default::default()
    };
    let sorted = run_pipeline(&corpus, query, config, None)?.papers;
    let texts: Vec<String> = sorted.iter().map(|p| p.title_abstract()).collect();
    let model = TfIdfModel::fit(&texts)?;

    for mode in SearchMode::ALL {
        let cfg = DiversityConfig::for_mode(mode);
        let mut papers = mmr_rerank(sorted.clone(), query, cfg.lambda, cfg.window, &model);
        assign_ranks(&mut papers);
        println!("\n{mode} (lambda {}):", cfg.lambda);
        for p in papers.iter().take(5) {
            println!("  {:>2}. {}", p.rank.unwrap_or(0), p.title);
        }
        let gems = hidden_gems(&papers, cfg.gems_rank_floor, cfg.gems_take);
        let canon = canonical_papers(&papers, cfg.canonical_percentile, &cfg.top_venues);
        println!("  hidden gems: {}  canonical: {}", gems.len(), canon.len());
        if let Some(g) = gems.first() {
            println!("  top gem: #{} {}", g.rank.unwrap_or(0), g.title);
        }
    }
    Ok(())
}
