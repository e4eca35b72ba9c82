//! Offline search: BM25, a TF-IDF bag-of-words baseline, min-max hybrid
//! fusion, and two-stage retrieval with a pluggable reranker.
//!
//! Every ranked list is ordered by descending score with ties broken by
//! ascending doc-id, so equal inputs always produce equal outputs.

pub mod bm25;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::text::{cosine, tokenize, TfIdfModel};

use bm25::rank_scored;
pub use bm25::{bm25_search, build_index, Bm25Index, Bm25Params, Posting};

/// Stage-one candidate count for [`multistage_search`].
pub const DEFAULT_FIRST_K: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum RetrievalMethod {
    #[default]
    Bm25,
    Simple,
    Hybrid,
    Bm25Rerank,
}

impl RetrievalMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            RetrievalMethod::Bm25 => "bm25",
            RetrievalMethod::Simple => "simple",
            RetrievalMethod::Hybrid => "hybrid",
            RetrievalMethod::Bm25Rerank => "bm25_rerank",
        }
    }
}

impl fmt::Display for RetrievalMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RetrievalMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bm25" => Ok(Self::Bm25),
            "simple" => Ok(Self::Simple),
            "hybrid" => Ok(Self::Hybrid),
            "bm25_rerank" | "bm25+reranker" => Ok(Self::Bm25Rerank),
            other => Err(Error::Config(format!("unknown retrieval method `{other}`"))),
        }
    }
}

/// Second-stage relevance scorer. Implementations must be deterministic.
pub trait RerankScorer: Send + Sync {
    fn name(&self) -> &str;

    /// Higher is more relevant.
    fn score(&self, query: &str, doc: &str) -> std::result::Result<f64, String>;
}

/// `|query tokens ∩ doc tokens| / |query tokens|` over unique tokens.
#[derive(Debug, Clone, Copy, Default)]
pub struct TokenOverlapScorer;

impl RerankScorer for TokenOverlapScorer {
    fn name(&self) -> &str {
        "token_overlap"
    }

    fn score(&self, query: &str, doc: &str) -> std::result::Result<f64, String> {
        let q: BTreeSet<String> = tokenize(query).into_iter().collect();
        if q.is_empty() {
            return Ok(0.0);
        }
        let d: BTreeSet<String> = tokenize(doc).into_iter().collect();
        Ok(q.intersection(&d).count() as f64 / q.len() as f64)
    }
}

/// Scores documents by raw BM25 under a fixed index's statistics.
#[derive(Debug, Clone, Copy)]
pub struct Bm25TextScorer<'a> {
    pub index: &'a Bm25Index,
}

impl RerankScorer for Bm25TextScorer<'_> {
    fn name(&self) -> &str {
        "bm25"
    }

    fn score(&self, query: &str, doc: &str) -> std::result::Result<f64, String> {
        Ok(self.index.score_text(query, doc))
    }
}

/// Ranks documents by TF-IDF cosine against the query. The model is fit on
/// the documents being searched.
pub fn simple_search<I, S>(query: &str, docs: &[(I, S)], k: usize) -> Vec<(String, f64)>
where
    I: AsRef<str>,
    S: AsRef<str>,
{
    if docs.is_empty() {
        return Vec::new();
    }
    let texts: Vec<&str> = docs.iter().map(|(_, t)| t.as_ref()).collect();
    let Ok(model) = TfIdfModel::fit(&texts) else {
        return Vec::new();
    };
    let q = model.vectorize(query);
    if q.is_zero() {
        return Vec::new();
    }
    let scored = docs
        .iter()
        .map(|(id, text)| (id.as_ref().to_owned(), cosine(&q, &model.vectorize(text.as_ref()))))
        .filter(|(_, s)| *s > 0.0)
        .collect();
    rank_scored(scored, k)
}

/// Min-max normalizes over the union of candidates; absent scores count as 0.
/// A constant signal normalizes to 1 when positive and 0 otherwise.
fn min_max(scores: &BTreeMap<String, f64>, union: &BTreeSet<String>) -> BTreeMap<String, f64> {
    let values: Vec<f64> = union.iter().map(|id| scores.get(id).copied().unwrap_or(0.0)).collect();
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    union
        .iter()
        .zip(values)
        .map(|(id, v)| {
            let n = if hi > lo {
                (v - lo) / (hi - lo)
            } else if hi > 0.0 {
                1.0
            } else {
                0.0
            };
            (id.clone(), n)
        })
        .collect()
}

/// `0.5 · bm25_norm + 0.5 · simple_norm` over the union of both candidate sets.
pub fn hybrid_search<I, S>(index: &Bm25Index, docs: &[(I, S)], query: &str, k: usize) -> Vec<(String, f64)>
where
    I: AsRef<str>,
    S: AsRef<str>,
{
    let bm25: BTreeMap<String, f64> = index.search(query, usize::MAX).into_iter().collect();
    let simple: BTreeMap<String, f64> = simple_search(query, docs, usize::MAX).into_iter().collect();
    let union: BTreeSet<String> = bm25.keys().chain(simple.keys()).cloned().collect();
    if union.is_empty() {
        return Vec::new();
    }
    let bm25_norm = min_max(&bm25, &union);
    let simple_norm = min_max(&simple, &union);
    let fused = union
        .iter()
        .map(|id| (id.clone(), 0.5 * bm25_norm[id] + 0.5 * simple_norm[id]))
        .collect();
    rank_scored(fused, k)
}

/// BM25 top-`first_k`, then a stable reorder by `scorer`, truncated to `final_k`.
/// Scorer calls run in parallel; the result equals sequential evaluation.
pub fn multistage_search<I, S>(
    index: &Bm25Index,
    docs: &[(I, S)],
    scorer: &dyn RerankScorer,
    query: &str,
    first_k: usize,
    final_k: usize,
) -> Result<Vec<(String, f64)>>
where
    I: AsRef<str> + Sync,
    S: AsRef<str> + Sync,
{
    if final_k > first_k {
        return Err(Error::Config(format!(
            "final_k ({final_k}) must not exceed first_k ({first_k})"
        )));
    }
    let texts: HashMap<&str, &str> = docs.iter().map(|(id, t)| (id.as_ref(), t.as_ref())).collect();
    let candidates = index.search(query, first_k);
    let rescored: Vec<std::result::Result<f64, String>> = candidates
        .par_iter()
        .map(|(id, _)| {
            let text = texts.get(id.as_str()).copied().unwrap_or("");
            scorer.score(query, text)
        })
        .collect();
    let mut out = Vec::with_capacity(candidates.len());
    for ((id, _), res) in candidates.into_iter().zip(rescored) {
        match res {
            Ok(s) => out.push((id, s)),
            Err(message) => {
                return Err(Error::Rerank {
                    scorer: scorer.name().to_owned(),
                    query: query.to_owned(),
                    doc_id: id,
                    message,
                })
            }
        }
    }
    // stable: equal scores keep stage-one order
    out.sort_by(|a, b| b.1.total_cmp(&a.1));
    out.truncate(final_k);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn docs() -> Vec<(String, String)> {
        [
            ("d01", "sparse lexical retrieval with bm25"),
            ("d02", "dense neural retrieval for question answering"),
            ("d03", "graph neural networks for molecules"),
            ("d04", "lexical matching and term weighting"),
            ("d05", "bm25 saturation and length normalization in lexical retrieval"),
            ("d06", "contrastive pretraining of retrievers"),
            ("d07", "molecular property prediction"),
            ("d08", "retrieval augmented generation"),
            ("d09", "ranking metrics such as mrr and recall"),
            ("d10", "query expansion with pseudo relevance feedback"),
        ]
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect()
    }

    #[test]
    fn simple_search_identity_and_disjoint() {
        let d = docs();
        let hits = simple_search("graph neural networks for molecules", &d, 10);
        assert_eq!(hits[0].0, "d03");
        assert!((hits[0].1 - 1.0).abs() < 1e-9);
        assert!(simple_search("zzz qqq", &d, 10).is_empty());
    }

    #[test]
    fn simple_search_matches_brute_force_cosine() {
        let d = docs();
        let query = "lexical retrieval bm25";
        let texts: Vec<&str> = d.iter().map(|(_, t)| t.as_str()).collect();
        let model = TfIdfModel::fit(&texts).unwrap();
        let q = model.vectorize(query);
        let mut expected: Vec<(String, f64)> = d
            .iter()
            .map(|(id, t)| (id.clone(), cosine(&q, &model.vectorize(t))))
            .filter(|(_, s)| *s > 0.0)
            .collect();
        expected.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
        assert_eq!(simple_search(query, &d, 10), expected);
    }

    #[test]
    fn hybrid_matches_hand_mix() {
        let d = docs();
        let idx = Bm25Index::build(&d, Bm25Params::default()).unwrap();
        let query = "lexical retrieval";
        let bm: BTreeMap<_, _> = idx.search(query, 100).into_iter().collect();
        let si: BTreeMap<_, _> = simple_search(query, &d, 100).into_iter().collect();
        let union: BTreeSet<String> = bm.keys().chain(si.keys()).cloned().collect();
        let get = |m: &BTreeMap<String, f64>, id: &String| m.get(id).copied().unwrap_or(0.0);
        let (bmin, bmax) = union
            .iter()
            .map(|i| get(&bm, i))
            .fold((f64::MAX, f64::MIN), |(a, b), v| (a.min(v), b.max(v)));
        let (smin, smax) = union
            .iter()
            .map(|i| get(&si, i))
            .fold((f64::MAX, f64::MIN), |(a, b), v| (a.min(v), b.max(v)));
        let fused = hybrid_search(&idx, &d, query, 100);
        assert_eq!(fused.len(), union.len());
        for (id, score) in &fused {
            let want = 0.5 * (get(&bm, id) - bmin) / (bmax - bmin) + 0.5 * (get(&si, id) - smin) / (smax - smin);
            assert!((score - want).abs() < 1e-12, "{id}");
        }
        // top under both signals stays on top
        assert_eq!(
            fused[0].0,
            bm.iter().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0.clone()
        );
    }

    #[test]
    fn hybrid_with_one_dead_signal_follows_the_other() {
        let scores: BTreeMap<String, f64> = [("a".to_string(), 3.0), ("b".to_string(), 1.0)].into();
        let union: BTreeSet<String> = scores.keys().cloned().collect();
        let dead = min_max(&BTreeMap::new(), &union);
        assert!(dead.values().all(|v| *v == 0.0));
        let live = min_max(&scores, &union);
        assert_eq!(live["a"], 1.0);
        assert_eq!(live["b"], 0.0);
    }

    struct Constant;
    impl RerankScorer for Constant {
        fn name(&self) -> &str {
            "constant"
        }
        fn score(&self, _: &str, _: &str) -> std::result::Result<f64, String> {
            Ok(0.5)
        }
    }

    struct Failing;
    impl RerankScorer for Failing {
        fn name(&self) -> &str {
            "failing"
        }
        fn score(&self, _: &str, doc: &str) -> std::result::Result<f64, String> {
            if doc.contains("molecules") {
                Err("model crashed".into())
            } else {
                Ok(1.0)
            }
        }
    }

    #[test]
    fn multistage_constant_scorer_keeps_bm25_order() {
        let d = docs();
        let idx = Bm25Index::build(&d, Bm25Params::default()).unwrap();
        let bm: Vec<String> = idx.search("neural retrieval", 5).into_iter().map(|x| x.0).collect();
        let ms: Vec<String> = multistage_search(&idx, &d, &Constant, "neural retrieval", 5, 5)
            .unwrap()
            .into_iter()
            .map(|x| x.0)
            .collect();
        assert_eq!(bm, ms);
    }

    #[test]
    fn multistage_overlap_puts_exact_doc_first() {
        let d = docs();
        let idx = Bm25Index::build(&d, Bm25Params::default()).unwrap();
        let q = "retrieval augmented generation";
        let out = multistage_search(&idx, &d, &TokenOverlapScorer, q, 200, 3).unwrap();
        assert_eq!(out[0].0, "d08");
        assert_eq!(out[0].1, 1.0);
    }

    #[test]
    fn multistage_is_a_prefix_of_the_rescored_candidates() {
        let d = docs();
        let idx = Bm25Index::build(&d, Bm25Params::default()).unwrap();
        let q = "lexical retrieval bm25 neural";
        let stage1 = idx.search(q, 5);
        let texts: HashMap<_, _> = d.iter().cloned().collect();
        let mut rescored: Vec<(String, f64)> = stage1
            .iter()
            .map(|(id, _)| (id.clone(), TokenOverlapScorer.score(q, &texts[id]).unwrap()))
            .collect();
        rescored.sort_by(|a, b| b.1.total_cmp(&a.1));
        let out = multistage_search(&idx, &d, &TokenOverlapScorer, q, 5, 3).unwrap();
        assert_eq!(out, rescored[..3].to_vec());
    }

    #[test]
    fn multistage_with_bm25_scorer_reproduces_bm25() {
        let d = docs();
        let idx = Bm25Index::build(&d, Bm25Params::default()).unwrap();
        let q = "lexical retrieval with neural bm25";
        let out = multistage_search(&idx, &d, &Bm25TextScorer { index: &idx }, q, 200, 4).unwrap();
        assert_eq!(out, idx.search(q, 4));
    }

    #[test]
    fn multistage_errors_name_the_pair() {
        let d = docs();
        let idx = Bm25Index::build(&d, Bm25Params::default()).unwrap();
        let err = multistage_search(&idx, &d, &Failing, "graph neural", 10, 5).unwrap_err();
        match err {
            Error::Rerank { doc_id, query, .. } => {
                assert_eq!(doc_id, "d03");
                assert_eq!(query, "graph neural");
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(multistage_search(&idx, &d, &Constant, "x", 3, 5).is_err());
    }
}
