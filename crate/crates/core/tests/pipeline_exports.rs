//! Pipeline stages and the synchronized artifacts they regenerate.

mod common;

use std::collections::BTreeSet;

use litscout::exports::{load_state, render_all, render_bibliography, write_all};
use litscout::pipeline::Stage;
use litscout::synth::synthetic_corpus;
use litscout::{CorpusFilter, Engine, PaperRecord, PipelineConfig, PipelineStructure};

const NINE: [&str; 9] = [
    "dashboard.html",
    "links.json",
    "papers.bib",
    "papers.csv",
    "papers.json",
    "papers.md",
    "retrieval_metrics.json",
    "stats.json",
    "summary.json",
];

fn fixture() -> Vec<PaperRecord> {
    synthetic_corpus(30, 4)
}

#[test]
fn artifacts_agree_after_every_step_for_every_structure() {
    let corpus = fixture();
    let engine = Engine::new(corpus.clone());
    let queries = [
        "graph neural networks",
        "recent ICRA robot papers since 2019",
        "zzzz no match",
    ];
    for structure in PipelineStructure::ALL {
        for query in queries {
            let dir = tempfile::tempdir().unwrap();
            let config = PipelineConfig {
                structure,
                target: Some(corpus[0].title.clone()),
                ..Default::default()
            };
            let mut seen = Vec::new();
            let state = engine
                .run_observed(query, config, Some(dir.path()), &mut |stage, state| {
                    let counts = common::artifact_counts(dir.path());
                    let n = state.papers.len();
                    let expect = common::ArtifactCounts {
                        json: n,
                        csv: n,
                        bib: n,
                        markdown: n,
                        html: n,
                    };
                    assert_eq!(counts, expect, "{structure} {query:?} after {stage:?}");
                    assert_eq!(state.step_log.last().unwrap().paper_count, n);
                    seen.push(stage);
                })
                .unwrap();
            assert_eq!(seen, structure.stages());
            assert_eq!(state.step_log.len(), structure.stages().len());
            let names: BTreeSet<String> = std::fs::read_dir(dir.path())
                .unwrap()
                .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
                .collect();
            assert_eq!(names, NINE.iter().map(|s| s.to_string()).collect());
        }
    }
}

#[test]
fn minimal_structure_logs_three_steps() {
    let config = PipelineConfig {
        structure: PipelineStructure::Minimal,
        ..Default::default()
    };
    let state = Engine::new(fixture()).run("graph", config, None).unwrap();
    let stages: Vec<&str> = state.step_log.iter().map(|s| s.stage_name.as_str()).collect();
    assert_eq!(stages, ["search", "dedup", "export"]);
}

#[test]
fn full_and_no_intent_agree_on_unconstrained_queries() {
    let engine = Engine::new(synthetic_corpus(120, 9));
    for query in [
        "graph message passing",
        "reward bandit exploration",
        "token decoder summarization",
    ] {
        let run = |structure| {
            let config = PipelineConfig {
                structure,
                ..Default::default()
            };
            engine.run(query, config, None).unwrap().papers
        };
        let full = run(PipelineStructure::Full);
        assert!(!full.is_empty());
        assert_eq!(full, run(PipelineStructure::NoIntent), "{query}");
    }
}

#[test]
fn reload_and_rerender_is_byte_identical() {
    let corpus = fixture();
    let dir = tempfile::tempdir().unwrap();
    let config = PipelineConfig {
        target: Some(corpus[3].title.clone()),
        ..Default::default()
    };
    let state = Engine::new(corpus.clone())
        .run(&corpus[3].title, config, Some(dir.path()))
        .unwrap();
    let written = render_all(&state).unwrap();
    let reloaded = load_state(dir.path()).unwrap();
    assert_eq!(render_all(&reloaded).unwrap(), written);

    let other = tempfile::tempdir().unwrap();
    write_all(&reloaded, other.path()).unwrap();
    assert_eq!(common::snapshot_dir(dir.path()), common::snapshot_dir(other.path()));
}

#[test]
fn bibtex_survives_special_characters() {
    let mut p = PaperRecord::new("x", "Costs of 100% recall & {braces} in C# with $5_000 ~ ^hats\\");
    p.authors = vec!["José Müller".into(), "Ana O'Neil".into()];
    p.year = Some(2020);
    p.venue = "R&D Workshop".into();
    let mut q = p.clone();
    q.id = "y".into();
    q.venue = String::new();
    let bib = render_bibliography(&[p, q]);
    let parsed = biblatex::Bibliography::parse(&bib).expect("parses");
    assert_eq!(parsed.len(), 2);
    let keys: Vec<&str> = parsed.iter().map(|e| e.key.as_str()).collect();
    assert_eq!(keys, ["muller2020costs", "muller2020costsa"]);
}

#[test]
fn filters_are_respected_end_to_end() {
    let corpus = synthetic_corpus(200, 3);
    let config = PipelineConfig {
        filter: CorpusFilter {
            year_min: Some(2020),
            year_max: Some(2022),
            ..Default::default()
        },
        ..Default::default()
    };
    let state = Engine::new(corpus).run("learning", config, None).unwrap();
    assert!(!state.papers.is_empty());
    assert!(state
        .papers
        .iter()
        .all(|p| p.year.is_some_and(|y| (2020..=2022).contains(&y))));
}

#[test]
fn ranks_and_scores_are_complete_after_full_run() {
    let state = Engine::new(fixture())
        .run("graph", PipelineConfig::default(), None)
        .unwrap();
    for (i, p) in state.papers.iter().enumerate() {
        assert_eq!(p.rank, Some(i as u32 + 1));
        let s = p.scores.expect("scored");
        for v in [s.similarity, s.recency, s.novelty, s.bm25_norm, s.combined] {
            assert!((0.0..=1.0).contains(&v));
        }
    }
    assert!(state.metrics_log.is_empty());
    assert!(state.step_log.iter().any(|s| s.stage_name == Stage::Diversify.as_str()));
}
