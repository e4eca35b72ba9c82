//! Okapi BM25 over an in-memory inverted index.
//!
//! ```text
//! score(d) = Σ_{t ∈ q} idf(t) · tf(t,d)·(k1+1) / (tf(t,d) + k1·(1 − b + b·|d|/avgdl))
//! idf(t)   = ln(1 + (N − df + 0.5) / (df + 0.5))
//! ```
//!
//! Query tokens are summed as a multiset: a repeated query term contributes
//! once per occurrence.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::error::{Error, Result};
use crate::text::tokenize;

pub const DEFAULT_K1: f64 = 1.5;
pub const DEFAULT_B: f64 = 0.75;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bm25Params {
    pub k1: f64,
    pub b: f64,
}

impl Default for Bm25Params {
    fn default() -> Self {
        Self {
            k1: DEFAULT_K1,
            b: DEFAULT_B,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Posting {
    pub doc: usize,
    pub tf: u32,
}

#[derive(Debug, Clone)]
pub struct Bm25Index {
    doc_ids: Vec<String>,
    postings: BTreeMap<String, Vec<Posting>>,
    doc_lengths: Vec<usize>,
    avg_doc_length: f64,
    params: Bm25Params,
}

impl Bm25Index {
    /// Builds an index over `(doc-id, text)` pairs.
    pub fn build<I, S>(docs: &[(I, S)], params: Bm25Params) -> Result<Self>
    where
        I: AsRef<str>,
        S: AsRef<str>,
    {
        if docs.is_empty() {
            return Err(Error::EmptyDocuments);
        }
        if !(params.k1.is_finite() && params.k1 > 0.0) || !(0.0..=1.0).contains(&params.b) {
            return Err(Error::Config(format!(
                "BM25 needs k1 > 0 and 0 <= b <= 1, got k1={} b={}",
                params.k1, params.b
            )));
        }
        let mut seen = HashSet::with_capacity(docs.len());
        let mut doc_ids = Vec::with_capacity(docs.len());
        let mut doc_lengths = Vec::with_capacity(docs.len());
        let mut postings: BTreeMap<String, Vec<Posting>> = BTreeMap::new();
        for (doc, (id, text)) in docs.iter().enumerate() {
            let id = id.as_ref();
            if !seen.insert(id.to_owned()) {
                return Err(Error::DuplicateDocId(id.to_owned()));
            }
            let tokens = tokenize(text.as_ref());
            doc_lengths.push(tokens.len());
            let mut counts: BTreeMap<String, u32> = BTreeMap::new();
            for t in tokens {
                *counts.entry(t).or_insert(0) += 1;
            }
            for (term, tf) in counts {
                postings.entry(term).or_default().push(Posting { doc, tf });
            }
            doc_ids.push(id.to_owned());
        }
        let avg_doc_length = doc_lengths.iter().sum::<usize>() as f64 / doc_lengths.len() as f64;
        Ok(Self {
            doc_ids,
            postings,
            doc_lengths,
            avg_doc_length,
            params,
        })
    }

    pub fn n_docs(&self) -> usize {
        self.doc_ids.len()
    }

    pub fn avg_doc_length(&self) -> f64 {
        self.avg_doc_length
    }

    pub fn params(&self) -> Bm25Params {
        self.params
    }

    pub fn doc_id(&self, doc: usize) -> &str {
        &self.doc_ids[doc]
    }

    pub fn doc_length(&self, doc: usize) -> usize {
        self.doc_lengths[doc]
    }

    pub fn postings(&self, term: &str) -> &[Posting] {
        self.postings.get(term).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn terms(&self) -> impl Iterator<Item = &str> {
        self.postings.keys().map(String::as_str)
    }

    pub fn idf(&self, term: &str) -> f64 {
        let n = self.n_docs() as f64;
        let df = self.postings(term).len() as f64;
        (1.0 + (n - df + 0.5) / (df + 0.5)).ln()
    }

    fn term_score(&self, idf: f64, tf: f64, doc_len: f64) -> f64 {
        let Bm25Params { k1, b } = self.params;
        let norm = if self.avg_doc_length > 0.0 {
            doc_len / self.avg_doc_length
        } else {
            0.0
        };
        idf * tf * (k1 + 1.0) / (tf + k1 * (1.0 - b + b * norm))
    }

    /// Raw scores for every matching document, keyed by internal position.
    pub fn score_all(&self, query: &str) -> HashMap<usize, f64> {
        let mut acc: HashMap<usize, f64> = HashMap::new();
        for token in tokenize(query) {
            let postings = self.postings(&token);
            if postings.is_empty() {
                continue;
            }
            let idf = self.idf(&token);
            for p in postings {
                let s = self.term_score(idf, p.tf as f64, self.doc_lengths[p.doc] as f64);
                *acc.entry(p.doc).or_insert(0.0) += s;
            }
        }
        acc
    }

    /// Scores arbitrary text against this index's statistics. For an indexed
    /// document's own text this reproduces its posting-based score exactly.
    pub fn score_text(&self, query: &str, text: &str) -> f64 {
        let doc_tokens = tokenize(text);
        let doc_len = doc_tokens.len() as f64;
        let mut counts: HashMap<&str, u32> = HashMap::new();
        for t in &doc_tokens {
            *counts.entry(t.as_str()).or_insert(0) += 1;
        }
        let mut total = 0.0;
        for token in tokenize(query) {
            let Some(&tf) = counts.get(token.as_str()) else {
                continue;
            };
            if self.postings(&token).is_empty() {
                continue;
            }
            total += self.term_score(self.idf(&token), tf as f64, doc_len);
        }
        total
    }

    /// Top-`k` documents by descending score, ties by ascending doc-id.
    /// Zero-score documents never appear.
    pub fn search(&self, query: &str, k: usize) -> Vec<(String, f64)> {
        let scored = self
            .score_all(query)
            .into_iter()
            .filter(|&(_, s)| s > 0.0)
            .map(|(doc, s)| (self.doc_ids[doc].clone(), s))
            .collect();
        rank_scored(scored, k)
    }
}

/// Sorts by descending score then ascending id, and truncates to `k`.
pub(crate) fn rank_scored(mut scored: Vec<(String, f64)>, k: usize) -> Vec<(String, f64)> {
    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    scored.truncate(k);
    scored
}

/// Convenience wrapper over [`Bm25Index::build`].
pub fn build_index<I: AsRef<str>, S: AsRef<str>>(docs: &[(I, S)], k1: f64, b: f64) -> Result<Bm25Index> {
    Bm25Index::build(docs, Bm25Params { k1, b })
}

pub fn bm25_search(index: &Bm25Index, query: &str, k: usize) -> Vec<(String, f64)> {
    index.search(query, k)
}
