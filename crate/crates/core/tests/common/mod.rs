//! Shared fixtures and independent reference implementations.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use litscout::connectors::{HttpResponse, SourceClient, SourceConfig, Transport, TransportError};
use litscout::Source;

pub const ARXIV_XML: &str = include_str!("../fixtures/arxiv.xml");
pub const S2_JSON: &str = include_str!("../fixtures/semantic_scholar.json");
pub const OPENALEX_JSON: &str = include_str!("../fixtures/openalex.json");
pub const DBLP_JSON: &str = include_str!("../fixtures/dblp.json");

pub fn sample_corpus_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data/sample_corpus.json")
}

pub fn fixture_body(source: Source) -> &'static str {
    match source {
        Source::Arxiv => ARXIV_XML,
        Source::SemanticScholar => S2_JSON,
        Source::Openalex => OPENALEX_JSON,
        Source::Dblp => DBLP_JSON,
        Source::Offline => "",
    }
}

pub fn source_of_url(url: &str) -> Source {
    if url.contains("arxiv") {
        Source::Arxiv
    } else if url.contains("semanticscholar") {
        Source::SemanticScholar
    } else if url.contains("openalex") {
        Source::Openalex
    } else {
        Source::Dblp
    }
}

/// One scripted reply.
#[derive(Debug, Clone)]
pub enum Reply {
    Body(u16, String),
    Timeout,
    Network,
}

/// Replays recorded responses with an optional per-source delay. Each
/// source may have a script of replies consumed in order; once exhausted
/// the fixture body is served.
#[derive(Default)]
pub struct Replay {
    pub delays: HashMap<Source, Duration>,
    scripts: Mutex<HashMap<Source, Vec<Reply>>>,
    pub calls: Mutex<Vec<(Source, Instant)>>,
    pub total: AtomicUsize,
}

impl Replay {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_delays(delays: impl IntoIterator<Item = (Source, Duration)>) -> Self {
        Self {
            delays: delays.into_iter().collect(),
            ..Self::default()
        }
    }

    pub fn script(self, source: Source, replies: Vec<Reply>) -> Self {
        self.scripts.lock().unwrap().insert(source, replies);
        self
    }

    pub fn call_times(&self, source: Source) -> Vec<Instant> {
        self.calls
            .lock()
            .unwrap()
            .iter()
            .filter(|(s, _)| *s == source)
            .map(|(_, t)| *t)
            .collect()
    }
}

impl Transport for Replay {
    fn get(&self, url: &str, _: &[(String, String)], _: Duration) -> Result<HttpResponse, TransportError> {
        let source = source_of_url(url);
        self.calls.lock().unwrap().push((source, Instant::now()));
        self.total.fetch_add(1, Ordering::SeqCst);
        if let Some(d) = self.delays.get(&source) {
            std::thread::sleep(*d);
        }
        let next = {
            let mut scripts = self.scripts.lock().unwrap();
            scripts.get_mut(&source).filter(|s| !s.is_empty()).map(|s| s.remove(0))
        };
        match next {
            Some(Reply::Body(status, body)) => Ok(HttpResponse { status, body }),
            Some(Reply::Timeout) => Err(TransportError::Timeout),
            Some(Reply::Network) => Err(TransportError::Network("connection refused".into())),
            None => Ok(HttpResponse::ok(fixture_body(source))),
        }
    }
}

/// Config with test-friendly pacing and backoff.
pub fn fast_config(source: Source) -> SourceConfig {
    let mut c = SourceConfig::new(source);
    c.min_request_interval = Duration::ZERO;
    c.backoff_base = Duration::from_millis(1);
    c
}

pub fn clients(transport: Arc<dyn Transport>) -> Vec<SourceClient> {
    Source::ONLINE
        .iter()
        .map(|&s| SourceClient::new(fast_config(s), transport.clone()))
        .collect()
}

/// Lowercase, split on anything non-alphanumeric, keep tokens of two or
/// more characters.
pub fn oracle_tokens(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for ch in text.chars().flat_map(char::to_lowercase) {
        if ch.is_alphanumeric() {
            cur.push(ch);
        } else if !cur.is_empty() {
            out.push(std::mem::take(&mut cur));
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out.retain(|t| t.chars().count() >= 2);
    out
}

/// Textbook Okapi BM25 by direct scan: every query token occurrence adds
/// `idf · tf·(k1+1) / (tf + k1·(1 − b + b·|d|/avgdl))`. Documents with no
/// matching term are omitted.
pub fn brute_bm25(docs: &[(String, String)], query: &str, k1: f64, b: f64) -> BTreeMap<String, f64> {
    let toks: Vec<Vec<String>> = docs.iter().map(|(_, t)| oracle_tokens(t)).collect();
    let n = docs.len() as f64;
    let avgdl = toks.iter().map(Vec::len).sum::<usize>() as f64 / n;
    let mut out = BTreeMap::new();
    for (i, (id, _)) in docs.iter().enumerate() {
        let mut score = 0.0;
        let mut matched = false;
        for q in oracle_tokens(query) {
            let tf = toks[i].iter().filter(|t| **t == q).count() as f64;
            if tf == 0.0 {
                continue;
            }
            matched = true;
            let df = toks.iter().filter(|d| d.contains(&q)).count() as f64;
            let idf = (1.0 + (n - df + 0.5) / (df + 0.5)).ln();
            let dl = toks[i].len() as f64;
            let norm = if avgdl > 0.0 { dl / avgdl } else { 0.0 };
            score += idf * tf * (k1 + 1.0) / (tf + k1 * (1.0 - b + b * norm));
        }
        if matched {
            out.insert(id.clone(), score);
        }
    }
    out
}

/// MMR selection recomputing the full objective over every remaining
/// candidate at every step. Ties go to the lowest index.
pub fn exhaustive_mmr(relevance: &[f64], lambda: f64, sim: &dyn Fn(usize, usize) -> f64) -> Vec<usize> {
    let n = relevance.len();
    let mut selected: Vec<usize> = Vec::new();
    while selected.len() < n {
        let mut best: Option<(usize, f64)> = None;
        for i in (0..n).filter(|i| !selected.contains(i)) {
            let redundancy = selected
                .iter()
                .map(|&j| sim(i, j))
                .fold(None, |m: Option<f64>, x| Some(m.map_or(x, |m| m.max(x))));
            let value = lambda * relevance[i] - (1.0 - lambda) * redundancy.unwrap_or(0.0);
            if best.is_none_or(|(_, v)| value > v) {
                best = Some((i, value));
            }
        }
        selected.push(best.expect("non-empty remainder").0);
    }
    selected
}

/// Every regular file under `dir` with its bytes, keyed by relative path.
pub fn snapshot_dir(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fn walk(root: &Path, dir: &Path, out: &mut BTreeMap<String, Vec<u8>>) {
        for entry in std::fs::read_dir(dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                walk(root, &path, out);
            } else {
                let rel = path.strip_prefix(root).unwrap().to_string_lossy().into_owned();
                out.insert(rel, std::fs::read(&path).unwrap());
            }
        }
    }
    let mut out = BTreeMap::new();
    walk(dir, dir, &mut out);
    out
}

/// Counts of papers in each artifact, read back from disk.
#[derive(Debug, PartialEq, Eq)]
pub struct ArtifactCounts {
    pub json: usize,
    pub csv: usize,
    pub bib: usize,
    pub markdown: usize,
    pub html: usize,
}

pub fn artifact_counts(dir: &Path) -> ArtifactCounts {
    let json: Vec<serde_json::Value> =
        serde_json::from_slice(&std::fs::read(dir.join("papers.json")).unwrap()).unwrap();
    let mut csv = csv::Reader::from_path(dir.join("papers.csv")).unwrap();
    let csv_rows = csv.records().collect::<Result<Vec<_>, _>>().unwrap().len();
    let bib_src = std::fs::read_to_string(dir.join("papers.bib")).unwrap();
    let bib = biblatex::Bibliography::parse(&bib_src).expect("bibtex parses").len();
    let md = std::fs::read_to_string(dir.join("papers.md")).unwrap();
    let markdown = md
        .lines()
        .filter(|l| {
            let digits = l.chars().take_while(char::is_ascii_digit).count();
            digits > 0 && l[digits..].starts_with(". ")
        })
        .count();
    let html = scraper::Html::parse_document(&std::fs::read_to_string(dir.join("dashboard.html")).unwrap());
    let sel = scraper::Selector::parse("table#papers tbody tr").unwrap();
    ArtifactCounts {
        json: json.len(),
        csv: csv_rows,
        bib,
        markdown,
        html: html.select(&sel).count(),
    }
}
