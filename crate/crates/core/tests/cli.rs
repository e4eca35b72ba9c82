//! The command-line interface, driven through the real binary.

mod common;

use std::path::Path;
use std::process::{Command, Output};

fn litscout(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_litscout"))
        .args(args)
        .current_dir(cwd)
        .env("SOURCE_DATE_EPOCH", "1700000000")
        .env_remove("CORPUS_PATH")
        .env_remove("OUTPUT_DIR")
        .output()
        .unwrap()
}

fn search(out: &Path, extra: &[&str]) -> Output {
    let corpus = common::sample_corpus_path();
    let mut args = vec![
        "search",
        "graph neural networks for molecules",
        "--offline",
        "--corpus",
        corpus.to_str().unwrap(),
        "--out-dir",
        out.to_str().unwrap(),
        "--seed",
        "7",
        "--target",
        "Hierarchical graph embedding for molecular passing",
    ];
    args.extend_from_slice(extra);
    litscout(&args, out.parent().unwrap())
}

#[test]
fn search_is_byte_identical_across_runs() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    assert!(search(&a, &[]).status.success());
    assert!(search(&b, &[]).status.success());
    let (sa, sb) = (common::snapshot_dir(&a), common::snapshot_dir(&b));
    assert_eq!(sa.len(), 9, "{:?}", sa.keys());
    assert_eq!(sa, sb);
}

#[test]
fn bad_weights_are_a_usage_error() {
    let tmp = tempfile::tempdir().unwrap();
    let out = search(&tmp.path().join("o"), &["--weights", "0.5,0.2,0.1,0.3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("weights"));
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(litscout(&["search", "q", "--bogus"], tmp.path()).status.code(), Some(1));
}

#[test]
fn missing_corpus_is_a_runtime_error() {
    let tmp = tempfile::tempdir().unwrap();
    let out = litscout(&["search", "q", "--offline", "--corpus", "nope.json"], tmp.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gen_bench_then_benchmark_then_export() {
    let tmp = tempfile::tempdir().unwrap();
    let corpus = common::sample_corpus_path();
    let corpus = corpus.to_str().unwrap();
    let gen = |name: &str| {
        let out = litscout(
            &[
                "gen-bench",
                "--n",
                "12",
                "--seed",
                "5",
                "--corpus",
                corpus,
                "--out",
                name,
            ],
            tmp.path(),
        );
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        std::fs::read(tmp.path().join(name)).unwrap()
    };
    assert_eq!(gen("t1.json"), gen("t2.json"));

    let out = litscout(
        &[
            "benchmark",
            "--truths",
            "t1.json",
            "--parallelism",
            "3",
            "--corpus",
            corpus,
            "--out-dir",
            "bench",
        ],
        tmp.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("queries 12"));
    assert!(tmp.path().join("bench/retrieval_metrics.json").is_file());

    let first = tmp.path().join("bench/queries/0000");
    let before = common::snapshot_dir(&first);
    let out = litscout(
        &["export", "--state", "bench/queries/0000", "--out-dir", "re"],
        tmp.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(common::snapshot_dir(&tmp.path().join("re")), before);
}
