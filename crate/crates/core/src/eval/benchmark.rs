//! Concurrent batch benchmark over ground-truth queries.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::metrics::{metrics_for_rank, rank_of_target, GroundTruth, PRECISION_KS, RECALL_KS};
use crate::error::{Error, Result};
use crate::exports::{to_json_bytes, write_atomic, RETRIEVAL_METRICS_JSON};
use crate::pipeline::{Engine, PipelineConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryResult {
    pub query: String,
    pub target: String,
    pub rank: Option<usize>,
    pub reciprocal_rank: f64,
    pub hit: bool,
    pub recall: BTreeMap<usize, f64>,
    pub precision: BTreeMap<usize, f64>,
    /// False when the pipeline errored; the query still counts as a miss.
    pub success: bool,
    pub error: Option<String>,
    pub latency_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub queries: usize,
    pub success_rate: f64,
    pub hit_rate: f64,
    pub mrr: f64,
    pub recall: BTreeMap<usize, f64>,
    pub precision: BTreeMap<usize, f64>,
    /// Mean over successful queries only.
    pub mean_latency_ms: f64,
    pub total_wall_ms: f64,
}

impl Aggregate {
    /// A copy with the timing fields zeroed, for scheduling-invariance checks.
    pub fn metrics_only(&self) -> Aggregate {
        Aggregate {
            mean_latency_ms: 0.0,
            total_wall_ms: 0.0,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkReport {
    pub retrieval: String,
    pub structure: String,
    pub parallelism: usize,
    pub per_query: Vec<QueryResult>,
    pub aggregate: Aggregate,
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

/// Exact means of the per-query rows.
pub fn aggregate(rows: &[QueryResult], total_wall_ms: f64) -> Aggregate {
    let per_k = |ks: &[usize], get: fn(&QueryResult) -> &BTreeMap<usize, f64>| -> BTreeMap<usize, f64> {
        ks.iter()
            .map(|&k| (k, mean(rows.iter().map(|r| get(r).get(&k).copied().unwrap_or(0.0)))))
            .collect()
    };
    Aggregate {
        queries: rows.len(),
        success_rate: mean(rows.iter().map(|r| f64::from(u8::from(r.success)))),
        hit_rate: mean(rows.iter().map(|r| f64::from(u8::from(r.hit)))),
        mrr: mean(rows.iter().map(|r| r.reciprocal_rank)),
        recall: per_k(&RECALL_KS, |r| &r.recall),
        precision: per_k(&PRECISION_KS, |r| &r.precision),
        mean_latency_ms: mean(rows.iter().filter(|r| r.success).map(|r| r.latency_ms)),
        total_wall_ms,
    }
}

fn all_ks() -> Vec<usize> {
    let mut ks: Vec<usize> = RECALL_KS.iter().chain(PRECISION_KS.iter()).copied().collect();
    ks.sort_unstable();
    ks.dedup();
    ks
}

fn run_one(engine: &Engine, truth: &GroundTruth, base: &PipelineConfig, query_dir: Option<&Path>) -> QueryResult {
    let mut config = base.clone();
    if let Some(f) = &truth.filters {
        config.filter = f.clone();
    }
    let started = Instant::now();
    let outcome = engine.run(&truth.query, config, query_dir);
    let latency_ms = started.elapsed().as_secs_f64() * 1e3;
    let (rank, success, error) = match outcome {
        Ok(state) => (rank_of_target(&state.papers, &truth.target), true, None),
        Err(e) => (None, false, Some(e.to_string())),
    };
    let m = metrics_for_rank(rank, &all_ks());
    QueryResult {
        query: truth.query.clone(),
        target: truth.target.clone(),
        rank,
        reciprocal_rank: m.reciprocal_rank,
        hit: m.hit,
        recall: RECALL_KS.iter().map(|k| (*k, m.recall[k])).collect(),
        precision: PRECISION_KS.iter().map(|k| (*k, m.precision[k])).collect(),
        success,
        error,
        latency_ms,
    }
}

/// Runs every truth through its own pipeline on a pool of `parallelism`
/// threads. Rows come back in input order. With `out_dir`, each query
/// writes artifacts to `out_dir/queries/NNNN` and the report goes to
/// `out_dir/retrieval_metrics.json`.
pub fn run_benchmark(
    engine: &Engine,
    truths: &[GroundTruth],
    config: &PipelineConfig,
    parallelism: usize,
    out_dir: Option<&Path>,
) -> Result<BenchmarkReport> {
    if parallelism == 0 {
        return Err(Error::Config("parallelism must be at least 1".into()));
    }
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism)
        .build()
        .map_err(|e| Error::Config(format!("cannot build thread pool: {e}")))?;
    let started = Instant::now();
    let rows: Vec<QueryResult> = pool.install(|| {
        truths
            .par_iter()
            .enumerate()
            .map(|(i, t)| {
                let dir = out_dir.map(|d| d.join("queries").join(format!("{i:04}")));
                run_one(engine, t, config, dir.as_deref())
            })
            .collect()
    });
    let total_wall_ms = started.elapsed().as_secs_f64() * 1e3;
    let report = BenchmarkReport {
        retrieval: config.retrieval.to_string(),
        structure: config.structure.to_string(),
        parallelism,
        aggregate: aggregate(&rows, total_wall_ms),
        per_query: rows,
    };
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir)?;
        write_atomic(dir, RETRIEVAL_METRICS_JSON, &to_json_bytes(&report)?)?;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(rank: Option<usize>, success: bool) -> QueryResult {
        let m = metrics_for_rank(rank, &all_ks());
        QueryResult {
            query: "q".into(),
            target: "t".into(),
            rank,
            reciprocal_rank: m.reciprocal_rank,
            hit: m.hit,
            recall: RECALL_KS.iter().map(|k| (*k, m.recall[k])).collect(),
            precision: PRECISION_KS.iter().map(|k| (*k, m.precision[k])).collect(),
            success,
            error: None,
            latency_ms: 2.0,
        }
    }

    #[test]
    fn aggregate_is_mean_of_rows() {
        let rows = vec![
            row(Some(1), true),
            row(Some(2), true),
            row(None, false),
            row(Some(10), true),
        ];
        let a = aggregate(&rows, 0.0);
        assert_eq!(a.mrr, (1.0 + 0.5 + 0.0 + 0.1) / 4.0);
        assert_eq!(a.hit_rate, 0.75);
        assert_eq!(a.success_rate, 0.75);
        assert_eq!(a.recall[&1], 0.25);
        assert_eq!(a.recall[&10], 0.75);
        assert_eq!(a.precision[&5], (0.2 + 0.2) / 4.0);
        assert!(a.mrr <= a.hit_rate);
    }

    #[test]
    fn empty_truths() {
        let a = aggregate(&[], 0.0);
        assert_eq!(a.queries, 0);
        assert_eq!(a.mrr, 0.0);
    }
}
