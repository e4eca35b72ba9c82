//! Two-stage deduplication of records that overlap across sources.

use litscout::pipeline::{dedup, normalize_title, richness};
use litscout::{PaperRecord, Source};

fn record(id: &str, title: &str, source: Source) -> PaperRecord {
    let mut p = PaperRecord::new(id, title);
    p.source = source;
    p
}

fn main() {
    let mut a = record("arxiv:2104.08663", "Sparse Lexical Retrieval Revisited", Source::Arxiv);
    a.pdf_url = Some("http://arxiv.org/pdf/2104.08663".into());
    let mut b = record(
        "s2:649def",
        "Sparse lexical retrieval revisited.",
        Source::SemanticScholar,
    );
    b.doi = Some("10.1145/3404835.3463098".into());
    b.citations = Some(412);
    b.abstract_text = "We revisit sparse lexical retrieval.".into();
    let mut c = record("openalex:W316", "Sparse Lexical Retrieval: Revisited", Source::Openalex);
    c.doi = Some("10.1145/3404835.3463098".into());
    let d = record(
        "dblp:conf/icra/Novak23",
        "Learned Sparse Indexes for Robot Memory",
        Source::Dblp,
    );

    let input = vec![a, b, c, d];
    for p in &input {
        println!("{:<24} richness {}  {:?}", p.id, richness(p), normalize_title(&p.title));
    }
    let out = dedup(input);
    println!("\nsurvivors:");
    for p in &out {
        println!("  {} ({})", p.id, p.title);
    }
}
