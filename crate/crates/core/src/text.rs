//! Tokenization, TF-IDF vectorization, and sparse cosine similarity.
//!
//! Weights are raw term frequency times the smoothed inverse document
//! frequency `ln((1 + N) / (1 + df)) + 1`, L2-normalized. No stemming and no
//! stopword removal happen here.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};

/// Lowercases, splits on every non-alphanumeric character, and drops tokens
/// shorter than two characters.
pub fn tokenize(text: &str) -> Vec<String> {
    text.to_lowercase()
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| t.chars().count() >= 2)
        .map(str::to_owned)
        .collect()
}

/// Sparse vector keyed by vocabulary index.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TfIdfVector {
    weights: BTreeMap<usize, f64>,
}

impl TfIdfVector {
    pub fn from_weights(weights: impl IntoIterator<Item = (usize, f64)>) -> Self {
        Self {
            weights: weights.into_iter().filter(|(_, w)| *w != 0.0).collect(),
        }
    }

    pub fn get(&self, index: usize) -> f64 {
        self.weights.get(&index).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.weights.iter().map(|(&i, &w)| (i, w))
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_zero(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn norm(&self) -> f64 {
        self.weights.values().map(|w| w * w).sum::<f64>().sqrt()
    }

    pub fn dot(&self, other: &TfIdfVector) -> f64 {
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        small
            .weights
            .iter()
            .filter_map(|(i, w)| large.weights.get(i).map(|v| w * v))
            .sum()
    }
}

#[derive(Debug, Clone)]
pub struct TfIdfModel {
    vocabulary: BTreeMap<String, usize>,
    document_frequency: Vec<usize>,
    n_docs: usize,
}

impl TfIdfModel {
    /// Fits vocabulary and document frequencies. Each document counts once per term.
    pub fn fit<S: AsRef<str>>(docs: &[S]) -> Result<Self> {
        if docs.is_empty() {
            return Err(Error::EmptyDocuments);
        }
        let mut df: BTreeMap<String, usize> = BTreeMap::new();
        for doc in docs {
            let unique: BTreeSet<String> = tokenize(doc.as_ref()).into_iter().collect();
            for term in unique {
                *df.entry(term).or_insert(0) += 1;
            }
        }
        let mut vocabulary = BTreeMap::new();
        let mut document_frequency = Vec::with_capacity(df.len());
        for (i, (term, count)) in df.into_iter().enumerate() {
            vocabulary.insert(term, i);
            document_frequency.push(count);
        }
        Ok(Self {
            vocabulary,
            document_frequency,
            n_docs: docs.len(),
        })
    }

    pub fn n_docs(&self) -> usize {
        self.n_docs
    }

    pub fn vocabulary_len(&self) -> usize {
        self.vocabulary.len()
    }

    pub fn index_of(&self, term: &str) -> Option<usize> {
        self.vocabulary.get(term).copied()
    }

    pub fn document_frequency(&self, term: &str) -> Option<usize> {
        self.index_of(term).map(|i| self.document_frequency[i])
    }

    pub fn idf(&self, term: &str) -> Option<f64> {
        self.document_frequency(term).map(|df| smoothed_idf(self.n_docs, df))
    }

    /// L2-normalized TF-IDF vector; out-of-vocabulary tokens are ignored.
    pub fn vectorize(&self, text: &str) -> TfIdfVector {
        let mut tf: BTreeMap<usize, f64> = BTreeMap::new();
        for token in tokenize(text) {
            if let Some(i) = self.index_of(&token) {
                *tf.entry(i).or_insert(0.0) += 1.0;
            }
        }
        let raw: Vec<(usize, f64)> = tf
            .into_iter()
            .map(|(i, count)| (i, count * smoothed_idf(self.n_docs, self.document_frequency[i])))
            .collect();
        let norm = raw.iter().map(|(_, w)| w * w).sum::<f64>().sqrt();
        if norm == 0.0 {
            return TfIdfVector::default();
        }
        TfIdfVector::from_weights(raw.into_iter().map(|(i, w)| (i, w / norm)))
    }
}

fn smoothed_idf(n_docs: usize, df: usize) -> f64 {
    ((1.0 + n_docs as f64) / (1.0 + df as f64)).ln() + 1.0
}

/// `a·b / (‖a‖‖b‖)`, or 0 when either vector is zero.
pub fn cosine(a: &TfIdfVector, b: &TfIdfVector) -> f64 {
    let denom = a.norm() * b.norm();
    if denom == 0.0 {
        return 0.0;
    }
    a.dot(b) / denom
}

/// Component-wise mean. Not re-normalized.
pub fn centroid(vectors: &[TfIdfVector]) -> Result<TfIdfVector> {
    if vectors.is_empty() {
        return Err(Error::EmptyCentroid);
    }
    let mut sum: BTreeMap<usize, f64> = BTreeMap::new();
    for v in vectors {
        for (i, w) in v.iter() {
            *sum.entry(i).or_insert(0.0) += w;
        }
    }
    let n = vectors.len() as f64;
    Ok(TfIdfVector::from_weights(sum.into_iter().map(|(i, w)| (i, w / n))))
}
