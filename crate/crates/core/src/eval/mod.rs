//! Retrieval evaluation: metrics, a parallel benchmark runner, and a seeded
//! synthetic query generator.

pub mod benchmark;
pub mod metrics;
pub mod semanticbench;

pub use benchmark::{run_benchmark, Aggregate, BenchmarkReport, QueryResult};
pub use metrics::{compute_metrics, metrics_for_rank, rank_of_target, GroundTruth, MetricRow};
pub use semanticbench::generate_semanticbench;

/// Reads a truths file: a JSON array of `{query, target, filters?}`.
pub fn load_truths(path: &std::path::Path) -> crate::Result<Vec<GroundTruth>> {
    let text = std::fs::read_to_string(path).map_err(|source| crate::Error::CorpusIo {
        path: path.to_path_buf(),
        source,
    })?;
    let truths: Vec<GroundTruth> = serde_json::from_str(&text).map_err(|e| crate::Error::CorpusFormat {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    if let Some(i) = truths.iter().position(|t| t.target.trim().is_empty()) {
        return Err(crate::Error::CorpusFormat {
            path: path.to_path_buf(),
            message: format!("truth {i} has an empty target"),
        });
    }
    Ok(truths)
}
