//! Aggregate statistics and templated insight lines over a paper list.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::corpus::PaperRecord;
use crate::text::tokenize;

pub const TOP_AUTHORS: usize = 10;
pub const TOP_VENUES: usize = 10;
pub const TOP_KEYWORDS: usize = 20;
pub const HOT_TOPICS: usize = 5;
pub const PROLIFIC_THRESHOLD: usize = 2;

static STOPWORDS_TXT: &str = include_str!("../data/stopwords.txt");

pub fn stopwords() -> &'static HashSet<&'static str> {
    static SET: OnceLock<HashSet<&'static str>> = OnceLock::new();
    SET.get_or_init(|| STOPWORDS_TXT.lines().map(str::trim).filter(|l| !l.is_empty()).collect())
}

pub fn is_stopword(token: &str) -> bool {
    stopwords().contains(token)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Count {
    pub name: String,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CitationStats {
    pub total: u64,
    pub mean: f64,
    /// Lower median for even counts.
    pub median: u64,
    pub min: u64,
    pub max: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreStats {
    pub mean_similarity: f64,
    pub mean_novelty: f64,
    pub mean_recency: f64,
    pub mean_bm25: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Stats {
    pub paper_count: usize,
    pub year_distribution: BTreeMap<i32, usize>,
    /// Papers without a year; kept out of `year_distribution`.
    pub unknown_year: usize,
    pub source_distribution: BTreeMap<String, usize>,
    pub top_authors: Vec<Count>,
    pub top_venues: Vec<Count>,
    pub keyword_frequency: Vec<Count>,
    pub citation_stats: Option<CitationStats>,
    pub score_stats: Option<ScoreStats>,
}

/// Count descending, then name ascending, truncated.
fn top_counts(counts: HashMap<String, usize>, limit: usize) -> Vec<Count> {
    let mut v: Vec<Count> = counts.into_iter().map(|(name, count)| Count { name, count }).collect();
    v.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.name.cmp(&b.name)));
    v.truncate(limit);
    v
}

pub fn compute_stats(papers: &[PaperRecord]) -> Stats {
    let mut stats = Stats {
        paper_count: papers.len(),
        ..Default::default()
    };
    let mut authors: HashMap<String, usize> = HashMap::new();
    let mut venues: HashMap<String, usize> = HashMap::new();
    let mut words: HashMap<String, usize> = HashMap::new();
    for p in papers {
        match p.year {
            Some(y) => *stats.year_distribution.entry(y).or_insert(0) += 1,
            None => stats.unknown_year += 1,
        }
        *stats
            .source_distribution
            .entry(p.source.as_str().to_owned())
            .or_insert(0) += 1;
        for a in &p.authors {
            let a = a.trim();
            if !a.is_empty() {
                *authors.entry(a.to_owned()).or_insert(0) += 1;
            }
        }
        let venue = p.venue.trim();
        if !venue.is_empty() {
            *venues.entry(venue.to_owned()).or_insert(0) += 1;
        }
        for t in tokenize(&p.title) {
            if !is_stopword(&t) {
                *words.entry(t).or_insert(0) += 1;
            }
        }
    }
    stats.top_authors = top_counts(authors, TOP_AUTHORS);
    stats.top_venues = top_counts(venues, TOP_VENUES);
    stats.keyword_frequency = top_counts(words, TOP_KEYWORDS);

    let mut cites: Vec<u64> = papers.iter().filter_map(|p| p.citations).collect();
    if !cites.is_empty() {
        cites.sort_unstable();
        let total: u64 = cites.iter().sum();
        stats.citation_stats = Some(CitationStats {
            total,
            mean: total as f64 / cites.len() as f64,
            median: cites[(cites.len() - 1) / 2],
            min: cites[0],
            max: cites[cites.len() - 1],
        });
    }

    let scored: Vec<_> = papers.iter().filter_map(|p| p.scores).collect();
    if !scored.is_empty() {
        let n = scored.len() as f64;
        let mean = |f: fn(&crate::scoring::ScoreVector) -> f64| scored.iter().map(f).sum::<f64>() / n;
        stats.score_stats = Some(ScoreStats {
            mean_similarity: mean(|s| s.similarity),
            mean_novelty: mean(|s| s.novelty),
            mean_recency: mean(|s| s.recency),
            mean_bm25: mean(|s| s.bm25_norm),
        });
    }
    stats
}

/// Percentage with at most one decimal and no trailing `.0`.
fn percent(num: usize, den: usize) -> String {
    let pct = (num as f64 * 1000.0 / den as f64).round() / 10.0;
    if pct.fract() == 0.0 {
        format!("{pct:.0}")
    } else {
        format!("{pct:.1}")
    }
}

/// One line per applicable insight, always in the same order: publication
/// trend, primary source, prolific authors, citation leader, hot topics,
/// open access.
pub fn generate_insights(stats: &Stats, papers: &[PaperRecord]) -> Vec<String> {
    let mut out = Vec::new();
    if stats.paper_count == 0 || papers.is_empty() {
        return out;
    }

    // most papers; the later year wins a tie
    if let Some((year, count)) = stats
        .year_distribution
        .iter()
        .max_by(|a, b| a.1.cmp(b.1).then(a.0.cmp(b.0)))
    {
        out.push(format!(
            "Publication trend: {year} has the most papers ({count} of {}).",
            stats.paper_count
        ));
    }

    if let Some((source, count)) = stats
        .source_distribution
        .iter()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
    {
        out.push(format!(
            "Primary source: {source} contributed {count} of {} papers.",
            stats.paper_count
        ));
    }

    let prolific: Vec<String> = stats
        .top_authors
        .iter()
        .filter(|a| a.count >= PROLIFIC_THRESHOLD)
        .take(5)
        .map(|a| format!("{} ({})", a.name, a.count))
        .collect();
    if !prolific.is_empty() {
        out.push(format!("Prolific authors: {}.", prolific.join(", ")));
    }

    let leader = papers
        .iter()
        .filter(|p| p.citations.is_some())
        .fold(None::<&PaperRecord>, |best, p| match best {
            Some(b) if b.citations >= p.citations => Some(b),
            _ => Some(p),
        });
    if let Some(p) = leader {
        out.push(format!(
            "Citation leader: \"{}\" with {} citations.",
            p.title,
            p.citations.unwrap_or(0)
        ));
    }

    if !stats.keyword_frequency.is_empty() {
        let topics: Vec<&str> = stats
            .keyword_frequency
            .iter()
            .take(HOT_TOPICS)
            .map(|c| c.name.as_str())
            .collect();
        out.push(format!("Hot topics: {}.", topics.join(", ")));
    }

    let with_pdf = papers
        .iter()
        .filter(|p| p.pdf_url.as_deref().is_some_and(|u| !u.is_empty()))
        .count();
    out.push(format!(
        "Open access: {}% of papers ({with_pdf}/{}) have direct PDF links.",
        percent(with_pdf, papers.len()),
        papers.len()
    ));
    out
}
