//! Corpus statistics and templated insights.

use litscout::analytics::{compute_stats, generate_insights};
use litscout::synth::reference_corpus;

fn main() {
    let corpus = reference_corpus(7);
    let stats = compute_stats(&corpus);
    println!("papers: {}", stats.paper_count);
    println!("years: {:?}", stats.year_distribution);
    println!("venues:");
    for v in &stats.top_venues {
        println!("  {:<40} {}", v.name, v.count);
    }
    if let Some(c) = &stats.citation_stats {
        println!(
            "citations: total {} mean {:.1} median {} max {}",
            c.total, c.mean, c.median, c.max
        );
    }
    for line in generate_insights(&stats, &corpus) {
        println!("* {line}");
    }
}
