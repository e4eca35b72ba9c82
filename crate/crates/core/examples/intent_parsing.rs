//! Rule-based intent classification and query expansion.

use litscout::intent::{expand_query, IntentClassifier, RuleClassifier};

fn main() {
    let classifier = RuleClassifier { reference_year: 2025 };
    let queries = [
        "recent NeurIPS papers on distillation since 2022",
        "most cited ICLR 2019-2021 work on pruning",
        "novel \"graph neural\" ranking not survey",
        "top 5 llm papers from the last 3 years on arxiv",
        "the of and",
        "",
    ];
    for q in queries {
        let (intent, spec) = classifier.classify(q);
        println!("\n{q:?}");
        println!("  intent: {}", serde_json::to_string(&intent).unwrap_or_default());
        println!("  spec:   {}", serde_json::to_string(&spec).unwrap_or_default());
    }
    let spec = expand_query("retrieval augmented generation with llm");
    println!("\nrelated terms: {:?}", spec.related_terms);
}
