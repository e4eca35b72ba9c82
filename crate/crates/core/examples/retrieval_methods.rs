//! BM25, TF-IDF cosine, hybrid fusion and two-stage reranking side by side.
//!
//! cargo run --example retrieval_methods -- "sparse lexical retrieval"

use litscout::corpus::searchable_text;
use litscout::retrieval::{hybrid_search, multistage_search, simple_search, Bm25Index, Bm25Params, TokenOverlapScorer};
use litscout::synth::synthetic_corpus;

fn main() -> litscout::Result<()> {
    let query = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "robust policy exploration".into());
    let corpus = synthetic_corpus(300, 11);
    let docs: Vec<(String, String)> = corpus.iter().map(|p| (p.id.clone(), searchable_text(p))).collect();
    let index = Bm25Index::build(&docs, Bm25Params::default())?;
    println!(
        "{} docs, {} terms, avg length {:.1}",
        index.n_docs(),
        index.terms().count(),
        index.avg_doc_length()
    );

    let title = |id: &str| corpus.iter().find(|p| p.id == id).map_or("?", |p| p.title.as_str());
    let show = |name: &str, hits: &[(String, f64)]| {
        println!("\n{name}");
        for (id, score) in hits {
            println!("  {score:>8.4}  {}", title(id));
        }
    };
    show("bm25", &index.search(&query, 5));
    show("simple (tf-idf cosine)", &simple_search(&query, &docs, 5));
    show("hybrid (min-max fusion)", &hybrid_search(&index, &docs, &query, 5));
    show(
        "bm25 top-50 -> token overlap rerank",
        &multistage_search(&index, &docs, &TokenOverlapScorer, &query, 50, 5)?,
    );
    Ok(())
}
