//! Template-generated natural-language queries with known gold papers.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::metrics::GroundTruth;
use crate::analytics::is_stopword;
use crate::corpus::{CorpusFilter, PaperRecord};
use crate::error::{Error, Result};
use crate::intent::canonical_conference;
use crate::text::{tokenize, TfIdfModel};

pub const TEMPLATES: [&str; 8] = [
    "find papers about {topic}",
    "recent work on {topic}",
    "what are the best papers on {topic}",
    "research on {topic}",
    "I need literature covering {topic}",
    "show me studies of {topic}",
    "which approaches address {topic}",
    "key publications on {topic}",
];

pub const PREFIXES: [&str; 4] = [
    "for my literature review,",
    "quick question:",
    "as background for a survey,",
    "please",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    Conference,
    Year,
    Range,
    None,
}

const SCOPES: [Scope; 4] = [Scope::Conference, Scope::Year, Scope::Range, Scope::None];

/// Longest keyword if any, else the three highest-idf non-stopword title
/// tokens in title order.
pub fn topic_phrase(p: &PaperRecord, model: &TfIdfModel) -> String {
    if let Some(kw) = p
        .keywords
        .iter()
        .filter(|k| !k.trim().is_empty())
        .max_by(|a, b| a.len().cmp(&b.len()).then_with(|| b.cmp(a)))
    {
        return kw.trim().to_string();
    }
    let mut tokens: Vec<String> = Vec::new();
    for t in tokenize(&p.title) {
        if !tokens.contains(&t) {
            tokens.push(t);
        }
    }
    let candidates: Vec<&String> = tokens.iter().filter(|t| !is_stopword(t)).collect();
    let pool = if candidates.is_empty() {
        tokens.iter().collect()
    } else {
        candidates
    };
    let mut ranked: Vec<(usize, &String)> = pool.into_iter().enumerate().collect();
    ranked.sort_by(|(ia, a), (ib, b)| {
        let (x, y) = (model.idf(a).unwrap_or(0.0), model.idf(b).unwrap_or(0.0));
        y.total_cmp(&x).then(ia.cmp(ib))
    });
    ranked.truncate(3);
    ranked.sort_by_key(|(i, _)| *i);
    ranked
        .into_iter()
        .map(|(_, t)| t.as_str())
        .collect::<Vec<_>>()
        .join(" ")
}

fn scope_clause<R: Rng>(rng: &mut R, p: &PaperRecord, scope: Scope) -> (String, Option<CorpusFilter>) {
    match (scope, p.year) {
        (Scope::Conference, _) if !p.venue.trim().is_empty() => {
            let venue = canonical_conference(&p.venue).map_or_else(|| p.venue.trim().to_string(), str::to_string);
            let filter = CorpusFilter {
                conferences: BTreeSet::from([venue.clone()]),
                ..Default::default()
            };
            (format!(" published at {venue}"), Some(filter))
        }
        (Scope::Year, Some(y)) => (
            format!(" in {y}"),
            Some(CorpusFilter {
                year_min: Some(y),
                year_max: Some(y),
                ..Default::default()
            }),
        ),
        (Scope::Range, Some(y)) => {
            let lo = y - rng.gen_range(0..=2);
            let hi = y + rng.gen_range(0..=2);
            (
                format!(" between {lo} and {hi}"),
                Some(CorpusFilter {
                    year_min: Some(lo),
                    year_max: Some(hi),
                    ..Default::default()
                }),
            )
        }
        _ => (String::new(), None),
    }
}

/// `n` seeded queries. Each samples a paper uniformly, builds a topic
/// phrase, wraps it in a template with an optional prefix, and adds a
/// scope clause whose structured filter admits the gold paper.
pub fn generate_semanticbench(corpus: &[PaperRecord], n: usize, seed: u64) -> Result<Vec<GroundTruth>> {
    if corpus.is_empty() {
        return Err(Error::EmptyDocuments);
    }
    if n == 0 {
        return Err(Error::Config("n must be at least 1".into()));
    }
    let titles: Vec<&str> = corpus.iter().map(|p| p.title.as_str()).collect();
    let model = TfIdfModel::fit(&titles)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let p = &corpus[rng.gen_range(0..corpus.len())];
        let topic = topic_phrase(p, &model);
        let template = TEMPLATES.choose(&mut rng).copied().unwrap_or(TEMPLATES[0]);
        let mut query = template.replace("{topic}", &topic);
        if rng.gen_bool(0.5) {
            let prefix = PREFIXES.choose(&mut rng).copied().unwrap_or(PREFIXES[0]);
            query = format!("{prefix} {query}");
        }
        let scope = *SCOPES.choose(&mut rng).unwrap_or(&Scope::None);
        let (clause, filters) = scope_clause(&mut rng, p, scope);
        query.push_str(&clause);
        out.push(GroundTruth {
            query,
            target: p.title.clone(),
            filters,
        });
    }
    Ok(out)
}
