//! How stable, discovery and balanced weights (and a custom set) reorder
//! the same candidates.

use litscout::retrieval::Bm25Index;
use litscout::scoring::{score_candidates, sort_papers, SortCriterion};
use litscout::synth::synthetic_corpus;
use litscout::{ModeWeights, SearchMode};

fn main() -> litscout::Result<()> {
    let corpus = synthetic_corpus(300, 3);
    let query = "efficient model compression";
    let docs: Vec<(String, String)> = corpus
        .iter()
        .map(|p| (p.id.clone(), litscout::corpus::searchable_text(p)))
        .collect();
    let index = Bm25Index::build(&docs, Default::default())?;
    let hits: Vec<String> = index.search(query, 30).into_iter().map(|(id, _)| id).collect();
    let candidates: Vec<_> = hits
        .iter()
        .filter_map(|id| corpus.iter().find(|p| &p.id == id).cloned())
        .collect();

    let custom: ModeWeights = "0.4,0.1,0.1,0.2,0.2".parse()?;
    let runs = SearchMode::ALL
        .iter()
        .map(|m| (m.to_string(), m.weights()))
        .chain([("custom (with citations)".to_string(), custom)]);
    for (name, weights) in runs {
        let mut papers = candidates.clone();
        score_candidates(query, &mut papers, &weights)?;
        sort_papers(&mut papers, SortCriterion::Combined);
        println!("\n{name}: {weights:?}");
        for p in papers.iter().take(5) {
            let s = p.scores.unwrap_or_default();
            println!(
                "  {:.3} = sim {:.2} rec {:.2} nov {:.2} bm25 {:.2} cit {:.2}  {}",
                s.combined, s.similarity, s.recency, s.novelty, s.bm25_norm, s.citations_norm, p.title
            );
        }
    }

    match "0.5,0.2,0.1,0.3".parse::<ModeWeights>() {
        Ok(_) => unreachable!(),
        Err(e) => println!("\nrejected: {e}"),
    }
    Ok(())
}
