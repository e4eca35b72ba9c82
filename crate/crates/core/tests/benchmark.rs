//! Batch evaluation: scheduling invariance, isolation and aggregate maths.

mod common;

use litscout::eval::{generate_semanticbench, run_benchmark, GroundTruth};
use litscout::retrieval::RetrievalMethod;
use litscout::synth::synthetic_corpus;
use litscout::{Engine, PipelineConfig, PipelineStructure};

fn minimal(retrieval: RetrievalMethod) -> PipelineConfig {
    PipelineConfig {
        structure: PipelineStructure::Minimal,
        retrieval,
        ..Default::default()
    }
}

#[test]
fn parallelism_does_not_change_metrics() {
    let corpus = synthetic_corpus(150, 21);
    let engine = Engine::new(corpus.clone());
    let truths = generate_semanticbench(&corpus, 40, 3).unwrap();
    for method in [RetrievalMethod::Bm25, RetrievalMethod::Hybrid] {
        let one = run_benchmark(&engine, &truths, &minimal(method), 1, None).unwrap();
        let eight = run_benchmark(&engine, &truths, &minimal(method), 8, None).unwrap();
        assert_eq!(one.aggregate.metrics_only(), eight.aggregate.metrics_only());
        let ranks = |r: &litscout::eval::BenchmarkReport| r.per_query.iter().map(|q| q.rank).collect::<Vec<_>>();
        assert_eq!(ranks(&one), ranks(&eight));
    }
}

#[test]
fn per_query_dirs_are_isolated() {
    let corpus = synthetic_corpus(60, 2);
    let engine = Engine::new(corpus.clone());
    let truths: Vec<GroundTruth> = corpus[..6]
        .iter()
        .map(|p| GroundTruth {
            query: p.title.clone(),
            target: p.title.clone(),
            filters: None,
        })
        .collect();
    let dir = tempfile::tempdir().unwrap();
    let report = run_benchmark(&engine, &truths, &minimal(RetrievalMethod::Bm25), 4, Some(dir.path())).unwrap();
    for (i, t) in truths.iter().enumerate() {
        let qdir = dir.path().join("queries").join(format!("{i:04}"));
        let summary: serde_json::Value =
            serde_json::from_slice(&std::fs::read(qdir.join("summary.json")).unwrap()).unwrap();
        assert_eq!(summary["query"], t.query.as_str());
    }
    let on_disk: litscout::eval::BenchmarkReport =
        serde_json::from_slice(&std::fs::read(dir.path().join("retrieval_metrics.json")).unwrap()).unwrap();
    assert_eq!(on_disk, report);
    assert_eq!(report.aggregate.hit_rate, 1.0);
}

#[test]
fn aggregate_is_exact_mean_and_bounded() {
    let corpus = synthetic_corpus(100, 8);
    let engine = Engine::new(corpus.clone());
    let truths = generate_semanticbench(&corpus, 30, 8).unwrap();
    let r = run_benchmark(&engine, &truths, &minimal(RetrievalMethod::Simple), 2, None).unwrap();
    let n = r.per_query.len() as f64;
    let mrr: f64 = r.per_query.iter().map(|q| q.reciprocal_rank).sum::<f64>() / n;
    assert_eq!(r.aggregate.mrr, mrr);
    assert!(r.aggregate.mrr <= r.aggregate.hit_rate);
    assert_eq!(r.aggregate.success_rate, 1.0);
    let rec = &r.aggregate.recall;
    assert!(rec[&1] <= rec[&5] && rec[&5] <= rec[&10] && rec[&10] <= rec[&20] && rec[&20] <= rec[&50]);
}

#[test]
fn failing_queries_count_as_misses() {
    let engine = Engine::new(Vec::new());
    let truths = vec![GroundTruth {
        query: "anything".into(),
        target: "missing".into(),
        filters: None,
    }];
    let r = run_benchmark(&engine, &truths, &minimal(RetrievalMethod::Bm25), 1, None).unwrap();
    assert_eq!(r.aggregate.hit_rate, 0.0);
    assert_eq!(r.per_query[0].rank, None);
}

#[test]
fn zero_parallelism_is_rejected() {
    let engine = Engine::new(synthetic_corpus(5, 1));
    assert!(run_benchmark(&engine, &[], &minimal(RetrievalMethod::Bm25), 0, None).is_err());
}

#[test]
fn semanticbench_is_seeded() {
    let corpus = synthetic_corpus(300, 1);
    let a = generate_semanticbench(&corpus, 50, 42).unwrap();
    assert_eq!(a, generate_semanticbench(&corpus, 50, 42).unwrap());
    assert_ne!(a, generate_semanticbench(&corpus, 50, 43).unwrap());
    assert_eq!(a.len(), 50);
}
