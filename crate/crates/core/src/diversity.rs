//! MMR diversification and the hidden-gems / canonical-papers views.
//!
//! ```text
//! next = argmax_{p ∈ R∖S} [ λ·sim(p, q) − (1 − λ)·max_{s ∈ S} sim(p, s) ]
//! ```
//!
//! `sim(p, q)` is the candidate's query similarity score; `sim(p, s)` is TF-IDF
//! cosine over title and abstract. R is the top `window` papers; the tail is
//! appended unchanged.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::corpus::PaperRecord;
use crate::scoring::SearchMode;
use crate::text::{cosine, TfIdfModel, TfIdfVector};

pub const DEFAULT_WINDOW: usize = 50;
pub const DEFAULT_GEMS_RANK_FLOOR: u32 = 20;
pub const DEFAULT_GEMS_TAKE: usize = 10;
pub const DEFAULT_CANONICAL_PERCENTILE: f64 = 90.0;

/// Venue names treated as top-tier by default.
pub const DEFAULT_TOP_VENUES: [&str; 10] = [
    "ICLR", "NeurIPS", "ICML", "CVPR", "IROS", "ICRA", "AAAI", "ACL", "ICCV", "EMNLP",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiversityConfig {
    pub lambda: f64,
    pub window: usize,
    pub gems_rank_floor: u32,
    pub gems_take: usize,
    pub canonical_percentile: f64,
    pub top_venues: BTreeSet<String>,
}

impl DiversityConfig {
    pub fn for_mode(mode: SearchMode) -> Self {
        Self {
            lambda: mode_lambda(mode),
            window: DEFAULT_WINDOW,
            gems_rank_floor: DEFAULT_GEMS_RANK_FLOOR,
            gems_take: DEFAULT_GEMS_TAKE,
            canonical_percentile: DEFAULT_CANONICAL_PERCENTILE,
            top_venues: DEFAULT_TOP_VENUES.iter().map(|s| s.to_string()).collect(),
        }
    }
}

pub fn mode_lambda(mode: SearchMode) -> f64 {
    mode.lambda()
}

/// Reorders the top `window` papers by greedy MMR. Ties go to the paper
/// that came first in the input.
pub fn mmr_rerank(
    papers: Vec<PaperRecord>,
    query: &str,
    lambda: f64,
    window: usize,
    model: &TfIdfModel,
) -> Vec<PaperRecord> {
    let window = window.min(papers.len());
    if window <= 1 {
        return papers;
    }
    let lambda = lambda.clamp(0.0, 1.0);
    let query_vec = model.vectorize(query);
    let vectors: Vec<TfIdfVector> = papers[..window]
        .iter()
        .map(|p| model.vectorize(&p.title_abstract()))
        .collect();
    let relevance: Vec<f64> = papers[..window]
        .iter()
        .zip(&vectors)
        .map(|(p, v)| p.scores.map_or_else(|| cosine(&query_vec, v), |s| s.similarity))
        .collect();

    let order = mmr_order(&relevance, lambda, |i, j| cosine(&vectors[i], &vectors[j]));

    let mut slots: Vec<Option<PaperRecord>> = papers.into_iter().map(Some).collect();
    let mut out = Vec::with_capacity(slots.len());
    for i in order {
        out.extend(slots[i].take());
    }
    out.extend(slots.into_iter().flatten());
    out
}

/// Greedy MMR selection order over indices `0..relevance.len()`.
pub fn mmr_order(relevance: &[f64], lambda: f64, sim: impl Fn(usize, usize) -> f64) -> Vec<usize> {
    let n = relevance.len();
    let mut selected = Vec::with_capacity(n);
    let mut remaining: Vec<usize> = (0..n).collect();
    // running max similarity to the selected set
    let mut max_sim = vec![0.0f64; n];
    while !remaining.is_empty() {
        let mut best_pos = 0;
        let mut best_val = f64::NEG_INFINITY;
        for (pos, &i) in remaining.iter().enumerate() {
            let redundancy = if selected.is_empty() { 0.0 } else { max_sim[i] };
            let val = lambda * relevance[i] - (1.0 - lambda) * redundancy;
            if val > best_val {
                best_val = val;
                best_pos = pos;
            }
        }
        let pick = remaining.remove(best_pos);
        for &i in &remaining {
            max_sim[i] = max_sim[i].max(sim(i, pick));
        }
        selected.push(pick);
    }
    selected
}

/// Papers ranked below `rank_floor`, by novelty descending, first `take`.
pub fn hidden_gems(papers: &[PaperRecord], rank_floor: u32, take: usize) -> Vec<PaperRecord> {
    let mut below: Vec<&PaperRecord> = papers
        .iter()
        .filter(|p| p.rank.is_some_and(|r| r > rank_floor))
        .collect();
    below.sort_by(|a, b| novelty(b).total_cmp(&novelty(a)));
    below.into_iter().take(take).cloned().collect()
}

fn novelty(p: &PaperRecord) -> f64 {
    p.scores.map_or(0.0, |s| s.novelty)
}

/// Nearest-rank percentile of a non-empty ascending slice.
pub fn nearest_rank_percentile(sorted: &[u64], percentile: f64) -> u64 {
    let n = sorted.len();
    let rank = ((percentile / 100.0) * n as f64).ceil() as usize;
    sorted[rank.clamp(1, n) - 1]
}

/// Highly cited (at or above the percentile of present citation counts) or
/// published at a listed venue. Input order is kept.
pub fn canonical_papers(papers: &[PaperRecord], percentile: f64, top_venues: &BTreeSet<String>) -> Vec<PaperRecord> {
    let mut counts: Vec<u64> = papers.iter().filter_map(|p| p.citations).collect();
    counts.sort_unstable();
    let threshold = (!counts.is_empty()).then(|| nearest_rank_percentile(&counts, percentile));
    let venues: Vec<String> = top_venues.iter().map(|v| v.to_lowercase()).collect();
    papers
        .iter()
        .filter(|p| {
            let cited = matches!((p.citations, threshold), (Some(c), Some(t)) if c >= t);
            let venue = p.venue.to_lowercase();
            let top = !venue.is_empty() && venues.iter().any(|v| venue.contains(v.as_str()));
            cited || top
        })
        .cloned()
        .collect()
}
