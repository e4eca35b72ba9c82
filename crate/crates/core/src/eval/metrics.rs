//! Single-target retrieval metrics.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::corpus::{CorpusFilter, PaperRecord};
use crate::pipeline::normalize_title;

pub const RECALL_KS: [usize; 5] = [1, 5, 10, 20, 50];
pub const PRECISION_KS: [usize; 3] = [1, 5, 10];
/// Union of the recall and precision cutoffs.
pub const DEFAULT_KS: [usize; 5] = RECALL_KS;

/// One benchmark query and its gold paper (title or identifier).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub query: String,
    pub target: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub filters: Option<CorpusFilter>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricRow {
    /// 1-based position of the target, absent when not retrieved.
    pub rank: Option<usize>,
    pub reciprocal_rank: f64,
    pub hit: bool,
    pub recall: BTreeMap<usize, f64>,
    pub precision: BTreeMap<usize, f64>,
}

/// First 1-based position whose normalized title equals the normalized
/// target, or whose id or DOI equals the target exactly.
pub fn rank_of_target(results: &[PaperRecord], target: &str) -> Option<usize> {
    let wanted = normalize_title(target);
    results
        .iter()
        .position(|p| {
            p.id == target
                || p.doi.as_deref() == Some(target)
                || (!wanted.is_empty() && normalize_title(&p.title) == wanted)
        })
        .map(|i| i + 1)
}

pub fn compute_metrics(results: &[PaperRecord], truth: &GroundTruth, ks: &[usize]) -> MetricRow {
    metrics_for_rank(rank_of_target(results, &truth.target), ks)
}

/// Metric row for a known rank; also used for failed queries (`None`).
pub fn metrics_for_rank(rank: Option<usize>, ks: &[usize]) -> MetricRow {
    let within = |k: usize| rank.is_some_and(|r| r <= k);
    MetricRow {
        rank,
        reciprocal_rank: rank.map_or(0.0, |r| 1.0 / r as f64),
        hit: rank.is_some(),
        recall: ks.iter().map(|&k| (k, if within(k) { 1.0 } else { 0.0 })).collect(),
        precision: ks
            .iter()
            .filter(|&&k| k > 0)
            .map(|&k| (k, if within(k) { 1.0 / k as f64 } else { 0.0 }))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn results() -> Vec<PaperRecord> {
        ["Alpha", "BM25: A Re-Visit!", "Gamma"]
            .iter()
            .enumerate()
            .map(|(i, t)| PaperRecord::new(format!("id{i}"), *t))
            .collect()
    }

    #[test]
    fn rank_matching_rules() {
        let r = results();
        assert_eq!(rank_of_target(&r, "alpha"), Some(1));
        assert_eq!(rank_of_target(&r, "bm25 a re visit"), Some(2));
        assert_eq!(rank_of_target(&r, "id2"), Some(3));
        assert_eq!(rank_of_target(&r, "Delta"), None);
        assert_eq!(rank_of_target(&r, ""), None);
    }

    #[test]
    fn rank_three() {
        let m = metrics_for_rank(Some(3), &[2, 5]);
        assert_eq!(m.reciprocal_rank, 1.0 / 3.0);
        assert_eq!(m.recall[&5], 1.0);
        assert_eq!(m.recall[&2], 0.0);
        assert_eq!(m.precision[&5], 0.2);
        assert!(m.hit);
    }

    #[test]
    fn absent_target() {
        let m = metrics_for_rank(None, &RECALL_KS);
        assert_eq!(m.reciprocal_rank, 0.0);
        assert!(!m.hit);
        assert!(m.recall.values().all(|&v| v == 0.0));
    }
}
