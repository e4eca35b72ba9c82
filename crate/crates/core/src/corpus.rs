//! Paper records, the local JSON corpus loader, and corpus filters.
//!
//! A corpus file is a UTF-8 JSON array of objects whose keys match the
//! [`PaperRecord`] field names. Unknown keys are ignored. Entries that
//! violate the record invariants are skipped and reported, never fatal.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::path::Path;

use chrono::Datelike;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::pipeline::dedup::normalize_title;
use crate::scoring::ScoreVector;

/// Earliest publication year accepted by the record invariants.
pub const MIN_YEAR: i32 = 1900;

/// Where a record was retrieved from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    #[default]
    Offline,
    Arxiv,
    SemanticScholar,
    Openalex,
    Dblp,
}

impl Source {
    pub const ONLINE: [Source; 4] = [Source::Arxiv, Source::SemanticScholar, Source::Openalex, Source::Dblp];

    pub fn as_str(self) -> &'static str {
        match self {
            Source::Offline => "offline",
            Source::Arxiv => "arxiv",
            Source::SemanticScholar => "semantic_scholar",
            Source::Openalex => "openalex",
            Source::Dblp => "dblp",
        }
    }

    /// Merge priority for online aggregation; lower merges first.
    pub fn priority(self) -> u8 {
        match self {
            Source::Offline => 0,
            Source::Arxiv => 1,
            Source::SemanticScholar => 2,
            Source::Openalex => 3,
            Source::Dblp => 4,
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One paper's metadata plus the scores and rank attached during a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PaperRecord {
    pub id: String,
    pub title: String,
    #[serde(default)]
    pub authors: Vec<String>,
    #[serde(default, rename = "abstract")]
    pub abstract_text: String,
    #[serde(default)]
    pub venue: String,
    #[serde(default)]
    pub year: Option<i32>,
    #[serde(default)]
    pub track: Option<String>,
    #[serde(default)]
    pub keywords: Vec<String>,
    #[serde(default)]
    pub doi: Option<String>,
    #[serde(default)]
    pub url: Option<String>,
    #[serde(default)]
    pub pdf_url: Option<String>,
    #[serde(default)]
    pub citations: Option<u64>,
    #[serde(default)]
    pub source: Source,
    #[serde(default)]
    pub scores: Option<ScoreVector>,
    #[serde(default)]
    pub rank: Option<u32>,
}

impl PaperRecord {
    /// A record with only the required fields set.
    pub fn new(id: impl Into<String>, title: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            title: title.into(),
            authors: Vec::new(),
            abstract_text: String::new(),
            venue: String::new(),
            year: None,
            track: None,
            keywords: Vec::new(),
            doi: None,
            url: None,
            pdf_url: None,
            citations: None,
            source: Source::Offline,
            scores: None,
            rank: None,
        }
    }

    /// Title and abstract joined, the text used for similarity and novelty.
    pub fn title_abstract(&self) -> String {
        join_nonempty([self.title.as_str(), self.abstract_text.as_str()])
    }
}

/// Title, abstract, and keywords joined by single spaces; empty parts are skipped.
pub fn searchable_text(p: &PaperRecord) -> String {
    let parts = [p.title.as_str(), p.abstract_text.as_str()]
        .into_iter()
        .chain(p.keywords.iter().map(String::as_str));
    join_nonempty(parts)
}

fn join_nonempty<'a>(parts: impl IntoIterator<Item = &'a str>) -> String {
    let mut out = String::new();
    for part in parts {
        if part.is_empty() {
            continue;
        }
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(part);
    }
    out
}

/// Stable identifier derived from the normalized title.
pub fn title_id(title: &str) -> String {
    let digest = Sha256::digest(normalize_title(title).as_bytes());
    format!("p-{}", &hex::encode(digest)[..16])
}

/// Lowercases a DOI and strips resolver prefixes; blank input yields `None`.
pub fn normalize_doi(doi: &str) -> Option<String> {
    let d = doi.trim().to_lowercase();
    let d = [
        "https://doi.org/",
        "http://doi.org/",
        "https://dx.doi.org/",
        "http://dx.doi.org/",
        "doi:",
    ]
    .iter()
    .find_map(|pre| d.strip_prefix(pre))
    .unwrap_or(&d)
    .trim()
    .to_string();
    (!d.is_empty()).then_some(d)
}

pub fn current_year() -> i32 {
    chrono::Utc::now().year()
}

/// Venue and year constraints applied at load time and to online results.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusFilter {
    #[serde(default)]
    pub conferences: BTreeSet<String>,
    #[serde(default)]
    pub year_min: Option<i32>,
    #[serde(default)]
    pub year_max: Option<i32>,
}

impl CorpusFilter {
    pub fn validate(&self) -> Result<()> {
        match (self.year_min, self.year_max) {
            (Some(lo), Some(hi)) if lo > hi => Err(Error::InvalidFilter(format!(
                "year_min {lo} is greater than year_max {hi}"
            ))),
            _ => Ok(()),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.conferences.is_empty() && self.year_min.is_none() && self.year_max.is_none()
    }

    /// Venue: case-insensitive substring match against any listed conference.
    /// A record without a year only passes when no year bound is set.
    pub fn matches(&self, p: &PaperRecord) -> bool {
        if !self.conferences.is_empty() {
            let venue = p.venue.to_lowercase();
            let hit = self.conferences.iter().any(|c| venue.contains(&c.to_lowercase()));
            if !hit {
                return false;
            }
        }
        if self.year_min.is_none() && self.year_max.is_none() {
            return true;
        }
        let Some(year) = p.year else {
            return false;
        };
        self.year_min.is_none_or(|lo| year >= lo) && self.year_max.is_none_or(|hi| year <= hi)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct LoadReport {
    /// Records that passed validation and the filter.
    pub loaded: usize,
    /// Entries rejected as malformed.
    pub skipped: usize,
    /// Valid records excluded by the filter.
    pub filtered_out: usize,
    pub reasons: Vec<SkipReason>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SkipReason {
    /// Position of the entry in the file's array.
    pub index: usize,
    pub reason: String,
}

#[derive(Deserialize)]
struct RawRecord {
    #[serde(default)]
    id: Option<String>,
    #[serde(default)]
    title: Option<String>,
    #[serde(default)]
    authors: Vec<String>,
    #[serde(default, rename = "abstract")]
    abstract_text: Option<String>,
    #[serde(default)]
    venue: Option<String>,
    #[serde(default)]
    year: Option<i64>,
    #[serde(default)]
    track: Option<String>,
    #[serde(default)]
    keywords: Vec<String>,
    #[serde(default)]
    doi: Option<String>,
    #[serde(default)]
    url: Option<String>,
    #[serde(default)]
    pdf_url: Option<String>,
    #[serde(default)]
    citations: Option<i64>,
    #[serde(default)]
    source: Option<Source>,
    #[serde(default)]
    scores: Option<ScoreVector>,
    #[serde(default)]
    rank: Option<u32>,
}

fn validate_raw(raw: RawRecord, max_year: i32) -> std::result::Result<PaperRecord, String> {
    let title = raw.title.unwrap_or_default().trim().to_string();
    if title.is_empty() {
        return Err("empty title".into());
    }
    let year = match raw.year {
        None => None,
        Some(y) if (MIN_YEAR as i64..=max_year as i64).contains(&y) => Some(y as i32),
        Some(y) => return Err(format!("year {y} outside [{MIN_YEAR}, {max_year}]")),
    };
    let citations = match raw.citations {
        None => None,
        Some(c) if c >= 0 => Some(c as u64),
        Some(c) => return Err(format!("negative citations {c}")),
    };
    if raw.rank == Some(0) {
        return Err("rank must be positive".into());
    }
    let id = match raw.id {
        Some(id) if !id.trim().is_empty() => id,
        _ => title_id(&title),
    };
    Ok(PaperRecord {
        id,
        title,
        authors: raw.authors,
        abstract_text: raw.abstract_text.unwrap_or_default(),
        venue: raw.venue.unwrap_or_default(),
        year,
        track: raw.track,
        keywords: raw.keywords,
        doi: raw.doi.as_deref().and_then(normalize_doi),
        url: raw.url,
        pdf_url: raw.pdf_url,
        citations,
        source: raw.source.unwrap_or_default(),
        scores: raw.scores,
        rank: raw.rank,
    })
}

/// Parses corpus JSON text. Split out of [`load_corpus`] so callers holding
/// bytes (tests, the HTTP service) share the exact same validation path.
pub fn parse_corpus(text: &str, filter: &CorpusFilter, origin: &Path) -> Result<(Vec<PaperRecord>, LoadReport)> {
    filter.validate()?;
    let entries: Vec<serde_json::Value> = serde_json::from_str(text).map_err(|e| Error::CorpusFormat {
        path: origin.to_path_buf(),
        message: e.to_string(),
    })?;

    let max_year = current_year() + 1;
    let mut report = LoadReport::default();
    let mut seen = HashSet::new();
    let mut records = Vec::new();
    for (index, value) in entries.into_iter().enumerate() {
        let outcome = serde_json::from_value::<RawRecord>(value)
            .map_err(|e| e.to_string())
            .and_then(|raw| validate_raw(raw, max_year))
            .and_then(|p| {
                if seen.insert(p.id.clone()) {
                    Ok(p)
                } else {
                    Err(format!("duplicate id `{}`", p.id))
                }
            });
        match outcome {
            Ok(p) if filter.matches(&p) => records.push(p),
            Ok(_) => report.filtered_out += 1,
            Err(reason) => {
                report.skipped += 1;
                report.reasons.push(SkipReason { index, reason });
            }
        }
    }
    report.loaded = records.len();
    Ok((records, report))
}

/// Loads the corpus at `path`, keeping the file's ordering.
pub fn load_corpus(path: &Path, filter: &CorpusFilter) -> Result<(Vec<PaperRecord>, LoadReport)> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::CorpusIo {
        path: path.to_path_buf(),
        source,
    })?;
    parse_corpus(&text, filter, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(title: &str, abs: &str, kw: &[&str]) -> PaperRecord {
        let mut p = PaperRecord::new("x", title);
        p.abstract_text = abs.into();
        p.keywords = kw.iter().map(|s| s.to_string()).collect();
        p
    }

    #[test]
    fn searchable_text_concatenates() {
        assert_eq!(searchable_text(&rec("A", "B", &["C", "D"])), "A B C D");
        assert_eq!(searchable_text(&rec("A", "", &[])), "A");
    }

    fn parse(text: &str, filter: &CorpusFilter) -> (Vec<PaperRecord>, LoadReport) {
        parse_corpus(text, filter, Path::new("mem.json")).unwrap()
    }

    #[test]
    fn malformed_entries_are_skipped_and_reported() {
        let text = r#"[
            {"id": "a", "title": "Good"},
            {"id": "b", "title": "   "},
            {"id": "c", "title": "Old", "year": 1850},
            {"id": "d", "title": "Neg", "citations": -3},
            {"id": "a", "title": "Dup"},
            {"id": "e", "title": "Typed", "year": "2020"},
            {"id": "f", "title": "Fine", "extra_field": {"nested": true}}
        ]"#;
        let (records, report) = parse(text, &CorpusFilter::default());
        let ids: Vec<_> = records.iter().map(|p| p.id.as_str()).collect();
        assert_eq!(ids, ["a", "f"]);
        assert_eq!(report.skipped, 5);
        assert_eq!(
            report.reasons.iter().map(|r| r.index).collect::<Vec<_>>(),
            [1, 2, 3, 4, 5]
        );
        assert!(report.reasons[3].reason.contains("duplicate"));
    }

    #[test]
    fn top_level_garbage_is_fatal() {
        let err = parse_corpus("{\"not\": \"array\"}", &CorpusFilter::default(), Path::new("x"));
        assert!(matches!(err, Err(Error::CorpusFormat { .. })));
        let missing = load_corpus(Path::new("/definitely/not/here.json"), &CorpusFilter::default());
        assert!(matches!(missing, Err(Error::CorpusIo { .. })));
    }

    #[test]
    fn missing_id_gets_a_stable_title_hash() {
        let (a, _) = parse(r#"[{"title": "BM25: A Re-Visit!"}]"#, &CorpusFilter::default());
        let (b, _) = parse(r#"[{"title": "bm25 a re visit"}]"#, &CorpusFilter::default());
        assert_eq!(a[0].id, b[0].id);
        assert!(a[0].id.starts_with("p-"));
    }

    #[test]
    fn filter_semantics() {
        let mut p = PaperRecord::new("1", "T");
        p.venue = "NeurIPS 2023".into();
        p.year = Some(2023);
        let f = CorpusFilter {
            conferences: ["neurips".to_string()].into(),
            ..Default::default()
        };
        assert!(f.matches(&p));
        let f = CorpusFilter {
            year_min: Some(2024),
            ..Default::default()
        };
        assert!(!f.matches(&p));
        p.year = None;
        assert!(!CorpusFilter {
            year_max: Some(2030),
            ..Default::default()
        }
        .matches(&p));
        assert!(CorpusFilter::default().matches(&p));
        let bad = CorpusFilter {
            year_min: Some(2022),
            year_max: Some(2020),
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }
}
