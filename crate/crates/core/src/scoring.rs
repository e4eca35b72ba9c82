//! Per-paper criterion scores, mode weights, and the combined score.
//!
//! ```text
//! combined = w_s·similarity + w_r·recency + w_n·novelty + w_b·bm25_norm + w_c·citations_norm
//! ```
//!
//! `w_c` defaults to 0 in every mode, so the built-in modes use only the
//! first four terms.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::PaperRecord;
use crate::error::{Error, Result};
use crate::retrieval::{Bm25Index, Bm25Params};
use crate::text::{centroid, cosine, TfIdfModel, TfIdfVector};

/// Allowed deviation of the weight sum from 1.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeWeights {
    pub w_s: f64,
    pub w_r: f64,
    pub w_n: f64,
    pub w_b: f64,
    #[serde(default)]
    pub w_c: f64,
}

impl ModeWeights {
    pub const fn new(w_s: f64, w_r: f64, w_n: f64, w_b: f64) -> Self {
        Self {
            w_s,
            w_r,
            w_n,
            w_b,
            w_c: 0.0,
        }
    }

    pub fn sum(&self) -> f64 {
        self.w_s + self.w_r + self.w_n + self.w_b + self.w_c
    }

    pub fn validate(&self) -> Result<()> {
        let named = [
            ("w_s", self.w_s),
            ("w_r", self.w_r),
            ("w_n", self.w_n),
            ("w_b", self.w_b),
            ("w_c", self.w_c),
        ];
        for (name, w) in named {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidWeights(format!(
                    "{name} = {w} must be a finite value >= 0"
                )));
            }
        }
        let sum = self.sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
            return Err(Error::InvalidWeights(format!(
                "weights sum to {}, expected 1",
                display_sum(sum)
            )));
        }
        Ok(())
    }
}

/// Nine decimals with trailing zeros dropped, so 1.0999999999999999 reads 1.1.
fn display_sum(sum: f64) -> String {
    let s = format!("{sum:.9}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

impl FromStr for ModeWeights {
    type Err = Error;

    /// Parses `w_s,w_r,w_n,w_b[,w_c]` and validates the result.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<f64> = s
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::InvalidWeights(format!("`{s}`: {e}")))?;
        let w = match parts.as_slice() {
            [s, r, n, b] => ModeWeights::new(*s, *r, *n, *b),
            [s, r, n, b, c] => ModeWeights {
                w_c: *c,
                ..ModeWeights::new(*s, *r, *n, *b)
            },
            _ => {
                return Err(Error::InvalidWeights(format!(
                    "expected 4 or 5 comma-separated weights, got {}",
                    parts.len()
                )))
            }
        };
        w.validate()?;
        Ok(w)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    /// Relevance and authority.
    Stable,
    /// Novelty first.
    Discovery,
    #[default]
    Balanced,
}

impl SearchMode {
    pub const ALL: [SearchMode; 3] = [SearchMode::Stable, SearchMode::Discovery, SearchMode::Balanced];

    pub const fn weights(self) -> ModeWeights {
        match self {
            SearchMode::Stable => ModeWeights::new(0.5, 0.2, 0.1, 0.2),
            SearchMode::Discovery => ModeWeights::new(0.3, 0.1, 0.4, 0.2),
            SearchMode::Balanced => ModeWeights::new(0.3, 0.2, 0.2, 0.3),
        }
    }

    /// MMR relevance/diversity trade-off for this mode.
    pub const fn lambda(self) -> f64 {
        match self {
            SearchMode::Stable => 0.8,
            SearchMode::Discovery => 0.5,
            SearchMode::Balanced => 0.65,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SearchMode::Stable => "stable",
            SearchMode::Discovery => "discovery",
            SearchMode::Balanced => "balanced",
        }
    }
}

impl fmt::Display for SearchMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SearchMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "stable" => Ok(Self::Stable),
            "discovery" => Ok(Self::Discovery),
            "balanced" => Ok(Self::Balanced),
            other => Err(Error::Config(format!("unknown mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ScoreVector {
    pub similarity: f64,
    pub recency: f64,
    pub novelty: f64,
    pub bm25_norm: f64,
    /// Min-max normalized citation count over the candidate set; only
    /// weighted when `w_c > 0`.
    #[serde(default)]
    pub citations_norm: f64,
    pub combined: f64,
}

pub fn score_similarity(query: &str, p: &PaperRecord, model: &TfIdfModel) -> f64 {
    cosine(&model.vectorize(query), &model.vectorize(&p.title_abstract())).clamp(0.0, 1.0)
}

/// `(year − year_min) / (year_max − year_min)`; 1 when the range is a single
/// year and 0 for an absent year.
pub fn score_recency(p: &PaperRecord, year_min: i32, year_max: i32) -> f64 {
    let Some(year) = p.year else {
        return 0.0;
    };
    if year_max == year_min {
        return 1.0;
    }
    ((year - year_min) as f64 / (year_max - year_min) as f64).clamp(0.0, 1.0)
}

/// `1 − cosine(paper, centroid)`, clamped to [0, 1].
pub fn score_novelty(p: &PaperRecord, centroid_vec: &TfIdfVector, model: &TfIdfModel) -> f64 {
    (1.0 - cosine(&model.vectorize(&p.title_abstract()), centroid_vec)).clamp(0.0, 1.0)
}

/// Divides by the maximum; all-zero or empty input maps to zeros.
pub fn normalize_bm25(raw: &[f64]) -> Vec<f64> {
    let max = raw.iter().copied().fold(0.0, f64::max);
    if max <= 0.0 {
        return vec![0.0; raw.len()];
    }
    raw.iter().map(|r| (r / max).max(0.0)).collect()
}

pub fn combined_score(sv: &ScoreVector, w: &ModeWeights, citations_norm: f64) -> f64 {
    (w.w_s * sv.similarity + w.w_r * sv.recency + w.w_n * sv.novelty + w.w_b * sv.bm25_norm + w.w_c * citations_norm)
        .clamp(0.0, 1.0)
}

/// Attaches a full [`ScoreVector`] to every paper. TF-IDF and BM25
/// statistics are fit on the candidate set itself.
pub fn score_candidates(query: &str, papers: &mut [PaperRecord], weights: &ModeWeights) -> Result<()> {
    if papers.is_empty() {
        return Ok(());
    }
    let texts: Vec<String> = papers.iter().map(PaperRecord::title_abstract).collect();
    let model = TfIdfModel::fit(&texts)?;
    let vectors: Vec<TfIdfVector> = texts.iter().map(|t| model.vectorize(t)).collect();
    let center = centroid(&vectors)?;
    let qv = model.vectorize(query);

    let years: Vec<i32> = papers.iter().filter_map(|p| p.year).collect();
    let (year_min, year_max) = (
        years.iter().copied().min().unwrap_or(0),
        years.iter().copied().max().unwrap_or(0),
    );

    let docs: Vec<(String, String)> = papers
        .iter()
        .enumerate()
        .map(|(i, p)| (i.to_string(), crate::corpus::searchable_text(p)))
        .collect();
    let index = Bm25Index::build(&docs, Bm25Params::default())?;
    let raw: Vec<f64> = docs.iter().map(|(_, t)| index.score_text(query, t)).collect();
    let bm25 = normalize_bm25(&raw);

    let cites: Vec<u64> = papers.iter().map(|p| p.citations.unwrap_or(0)).collect();
    let (cmin, cmax) = (
        cites.iter().copied().min().unwrap_or(0),
        cites.iter().copied().max().unwrap_or(0),
    );

    for (i, p) in papers.iter_mut().enumerate() {
        let citations_norm = if cmax > cmin {
            (cites[i] - cmin) as f64 / (cmax - cmin) as f64
        } else {
            0.0
        };
        let mut sv = ScoreVector {
            similarity: cosine(&qv, &vectors[i]).clamp(0.0, 1.0),
            recency: score_recency(p, year_min, year_max),
            novelty: (1.0 - cosine(&vectors[i], &center)).clamp(0.0, 1.0),
            bm25_norm: bm25[i],
            citations_norm,
            combined: 0.0,
        };
        sv.combined = combined_score(&sv, weights, citations_norm);
        p.scores = Some(sv);
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SortCriterion {
    Recency,
    Citations,
    Similarity,
    Novelty,
    Bm25,
    #[default]
    Combined,
}

impl SortCriterion {
    pub fn as_str(self) -> &'static str {
        match self {
            SortCriterion::Recency => "recency",
            SortCriterion::Citations => "citations",
            SortCriterion::Similarity => "similarity",
            SortCriterion::Novelty => "novelty",
            SortCriterion::Bm25 => "bm25",
            SortCriterion::Combined => "combined",
        }
    }

    fn key(self, p: &PaperRecord) -> f64 {
        let s = p.scores.unwrap_or_default();
        match self {
            SortCriterion::Recency => p.year.map_or(f64::NEG_INFINITY, f64::from),
            SortCriterion::Citations => p.citations.unwrap_or(0) as f64,
            SortCriterion::Similarity => s.similarity,
            SortCriterion::Novelty => s.novelty,
            SortCriterion::Bm25 => s.bm25_norm,
            SortCriterion::Combined => s.combined,
        }
    }
}

impl fmt::Display for SortCriterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SortCriterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "recency" => Ok(Self::Recency),
            "citations" => Ok(Self::Citations),
            "similarity" => Ok(Self::Similarity),
            "novelty" => Ok(Self::Novelty),
            "bm25" => Ok(Self::Bm25),
            "combined" => Ok(Self::Combined),
            other => Err(Error::UnknownCriterion(other.to_owned())),
        }
    }
}

/// Stable descending sort, then ranks 1..n.
pub fn sort_papers(papers: &mut [PaperRecord], criterion: SortCriterion) {
    papers.sort_by(|a, b| criterion.key(b).total_cmp(&criterion.key(a)));
    assign_ranks(papers);
}

pub fn assign_ranks(papers: &mut [PaperRecord]) {
    for (i, p) in papers.iter_mut().enumerate() {
        p.rank = Some(i as u32 + 1);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn mode_tables() {
        assert_eq!(SearchMode::Stable.weights(), ModeWeights::new(0.5, 0.2, 0.1, 0.2));
        assert_eq!(SearchMode::Discovery.weights(), ModeWeights::new(0.3, 0.1, 0.4, 0.2));
        assert_eq!(SearchMode::Balanced.weights(), ModeWeights::new(0.3, 0.2, 0.2, 0.3));
        for m in SearchMode::ALL {
            m.weights().validate().unwrap();
            assert_eq!(m.weights().w_c, 0.0);
        }
    }

    #[test]
    fn weight_parsing_and_validation() {
        let w: ModeWeights = "0.5,0.2,0.1,0.2".parse().unwrap();
        assert_eq!(w, SearchMode::Stable.weights());
        let w: ModeWeights = "0.4,0.2,0.1,0.2,0.1".parse().unwrap();
        assert_eq!(w.w_c, 0.1);
        let err = "0.5,0.2,0.1,0.3".parse::<ModeWeights>().unwrap_err().to_string();
        assert!(err.contains("1.1"), "{err}");
        assert!("0.5,0.5".parse::<ModeWeights>().is_err());
        assert!("1.2,-0.2,0,0".parse::<ModeWeights>().is_err());
        assert!("a,b,c,d".parse::<ModeWeights>().is_err());
    }

    #[test]
    fn recency_endpoints() {
        let mut p = PaperRecord::new("1", "t");
        p.year = Some(2025);
        assert_eq!(score_recency(&p, 2019, 2025), 1.0);
        p.year = Some(2019);
        assert_eq!(score_recency(&p, 2019, 2025), 0.0);
        p.year = Some(2021);
        assert!((score_recency(&p, 2019, 2025) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(score_recency(&p, 2021, 2021), 1.0);
        p.year = None;
        assert_eq!(score_recency(&p, 2019, 2025), 0.0);
    }

    #[test]
    fn bm25_normalization() {
        assert_eq!(normalize_bm25(&[2.0, 1.0, 0.0]), [1.0, 0.5, 0.0]);
        assert_eq!(normalize_bm25(&[0.0, 0.0]), [0.0, 0.0]);
        assert!(normalize_bm25(&[]).is_empty());
    }

    #[test]
    fn combined_examples() {
        let sv = ScoreVector {
            similarity: 1.0,
            ..Default::default()
        };
        assert_eq!(combined_score(&sv, &SearchMode::Stable.weights(), 0.0), 0.5);
        let sv = ScoreVector {
            similarity: 0.4,
            recency: 0.6,
            novelty: 0.2,
            bm25_norm: 0.8,
            ..Default::default()
        };
        let c = combined_score(&sv, &SearchMode::Balanced.weights(), 0.0);
        assert!((c - 0.52).abs() < 1e-12);
    }

    fn paper(id: &str, title: &str, abs: &str) -> PaperRecord {
        let mut p = PaperRecord::new(id, title);
        p.abstract_text = abs.into();
        p
    }

    #[test]
    fn similarity_and_novelty_edges() {
        let papers = [
            paper("a", "sparse retrieval", "bm25 term weighting"),
            paper("b", "molecule graphs", "chemistry with message passing"),
        ];
        let texts: Vec<String> = papers.iter().map(PaperRecord::title_abstract).collect();
        let model = TfIdfModel::fit(&texts).unwrap();
        assert!((score_similarity("sparse retrieval bm25 term weighting", &papers[0], &model) - 1.0).abs() < 1e-9);
        assert_eq!(score_similarity("astronomy telescopes", &papers[0], &model), 0.0);

        let solo = [paper("a", "sparse retrieval", "bm25")];
        let m1 = TfIdfModel::fit(&[solo[0].title_abstract()]).unwrap();
        let c1 = centroid(&[m1.vectorize(&solo[0].title_abstract())]).unwrap();
        assert!(score_novelty(&solo[0], &c1, &m1) < 1e-12);
    }

    #[test]
    fn novelty_of_an_outlier_is_near_one() {
        let mut papers: Vec<PaperRecord> = (0..19)
            .map(|i| {
                paper(
                    &format!("s{i}"),
                    "sparse retrieval",
                    &format!("bm25 lexical retrieval weighting v{}", i % 3),
                )
            })
            .collect();
        papers.push(paper("d", "volcanic basalt", "magma geology"));
        let texts: Vec<String> = papers.iter().map(PaperRecord::title_abstract).collect();
        let model = TfIdfModel::fit(&texts).unwrap();
        let c = centroid(&texts.iter().map(|t| model.vectorize(t)).collect::<Vec<_>>()).unwrap();
        let outlier = score_novelty(&papers[19], &c, &model);
        let typical = score_novelty(&papers[0], &c, &model);
        assert!(outlier > 0.9 && outlier > typical, "{outlier} {typical}");
    }

    #[test]
    fn score_candidates_matches_component_functions() {
        let mut papers = vec![
            paper("a", "sparse retrieval", "bm25 lexical retrieval"),
            paper("b", "neural ranking", "dense retrieval with transformers"),
            paper("c", "graph learning", "message passing networks"),
            paper("d", "query expansion", "pseudo relevance feedback for retrieval"),
            paper("e", "evaluation", "mrr and recall metrics"),
        ];
        for (i, p) in papers.iter_mut().enumerate() {
            p.year = Some(2019 + i as i32);
        }
        let query = "sparse retrieval feedback";
        let w = SearchMode::Balanced.weights();
        score_candidates(query, &mut papers, &w).unwrap();
        let texts: Vec<String> = papers.iter().map(PaperRecord::title_abstract).collect();
        let model = TfIdfModel::fit(&texts).unwrap();
        let c = centroid(&texts.iter().map(|t| model.vectorize(t)).collect::<Vec<_>>()).unwrap();
        for p in &papers {
            let s = p.scores.unwrap();
            assert!((s.similarity - score_similarity(query, p, &model)).abs() < 1e-12);
            assert!((s.novelty - score_novelty(p, &c, &model)).abs() < 1e-12);
            assert!((s.recency - score_recency(p, 2019, 2023)).abs() < 1e-12);
            assert!((s.combined - combined_score(&s, &w, s.citations_norm)).abs() < 1e-15);
        }
        let max_bm25 = papers.iter().map(|p| p.scores.unwrap().bm25_norm).fold(0.0, f64::max);
        assert_eq!(max_bm25, 1.0);
    }

    #[test]
    fn sort_by_citations_and_stability() {
        let mut ps = vec![
            PaperRecord::new("x", "x"),
            PaperRecord::new("y", "y"),
            PaperRecord::new("z", "z"),
        ];
        ps[0].citations = Some(5);
        ps[1].citations = Some(12);
        sort_papers(&mut ps, SortCriterion::Citations);
        let ids: Vec<_> = ps.iter().map(|p| p.id.as_str()).collect();
        assert_eq!(ids, ["y", "x", "z"]);
        assert_eq!(ps.iter().map(|p| p.rank.unwrap()).collect::<Vec<_>>(), [1, 2, 3]);
        sort_papers(&mut ps, SortCriterion::Citations);
        assert_eq!(ps.iter().map(|p| p.id.as_str()).collect::<Vec<_>>(), ["y", "x", "z"]);
        assert!(matches!(
            "impact".parse::<SortCriterion>(),
            Err(Error::UnknownCriterion(_))
        ));
    }

    fn sv() -> impl Strategy<Value = ScoreVector> {
        (0.0..=1.0f64, 0.0..=1.0f64, 0.0..=1.0f64, 0.0..=1.0f64).prop_map(|(a, b, c, d)| ScoreVector {
            similarity: a,
            recency: b,
            novelty: c,
            bm25_norm: d,
            ..Default::default()
        })
    }

    proptest! {
        #[test]
        fn bm25_normalization_is_scale_invariant(raw in proptest::collection::vec(0.0..50.0f64, 1..20), c in 0.01..100.0f64) {
            let a = normalize_bm25(&raw);
            let b = normalize_bm25(&raw.iter().map(|r| r * c).collect::<Vec<_>>());
            for (x, y) in a.iter().zip(&b) {
                prop_assert!((x - y).abs() < 1e-12);
            }
            if raw.iter().any(|r| *r > 0.0) {
                prop_assert_eq!(a.iter().copied().fold(0.0, f64::max), 1.0);
            }
        }

        #[test]
        fn combined_is_monotone(base in sv(), bump in 0.0..0.5f64, which in 0usize..4, mode in 0usize..3) {
            let w = SearchMode::ALL[mode].weights();
            let mut up = base;
            match which {
                0 => up.similarity = (up.similarity + bump).min(1.0),
                1 => up.recency = (up.recency + bump).min(1.0),
                2 => up.novelty = (up.novelty + bump).min(1.0),
                _ => up.bm25_norm = (up.bm25_norm + bump).min(1.0),
            }
            prop_assert!(combined_score(&up, &w, 0.0) >= combined_score(&base, &w, 0.0));
        }

        #[test]
        fn ranks_are_a_permutation(keys in proptest::collection::vec(0.0..1.0f64, 0..30)) {
            let mut ps: Vec<PaperRecord> = keys.iter().enumerate().map(|(i, k)| {
                let mut p = PaperRecord::new(i.to_string(), "t");
                p.scores = Some(ScoreVector { combined: *k, ..Default::default() });
                p
            }).collect();
            sort_papers(&mut ps, SortCriterion::Combined);
            let ranks: Vec<u32> = ps.iter().map(|p| p.rank.unwrap()).collect();
            prop_assert_eq!(ranks, (1..=keys.len() as u32).collect::<Vec<_>>());
            for w in ps.windows(2) {
                prop_assert!(w[0].scores.unwrap().combined >= w[1].scores.unwrap().combined);
            }
        }
    }
}
