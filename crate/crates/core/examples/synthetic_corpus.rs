//! Writes a seeded synthetic corpus as corpus JSON.
//!
//! cargo run --example synthetic_corpus -- [out.json] [n] [seed]
//!
//! Without `n`, the fixed 292-paper reference mix of venues is produced;
//! `data/sample_corpus.json` was made this way with seed 7.

use litscout::exports::to_json_bytes;
use litscout::synth::{reference_corpus, synthetic_corpus};

fn main() -> litscout::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let out = args.first().map_or("sample_corpus.json", String::as_str);
    let seed = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(7);
    let corpus = match args.get(1).and_then(|s| s.parse().ok()) {
        Some(n) => synthetic_corpus(n, seed),
        None => reference_corpus(seed),
    };
    std::fs::write(out, to_json_bytes(&corpus)?)?;
    println!("wrote {} papers to {out}", corpus.len());
    Ok(())
}
