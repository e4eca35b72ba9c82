//! Rule-based query intent classification and structured query expansion.
//!
//! The classifier recognizes venue names, year expressions, sort and mode
//! cues, source cues, and result-count phrases. Recognized filter phrases are
//! removed from [`QueryIntent::search_text`], which is what the search stage
//! actually ranks against. Text with no recognized cue passes through
//! unchanged.

use std::collections::BTreeSet;
use std::ops::Range;
use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::analytics::is_stopword;
use crate::corpus::current_year;
use crate::pipeline::dedup::normalize_title;
use crate::pipeline::SourceMode;
use crate::scoring::{SearchMode, SortCriterion};
use crate::text::tokenize;

/// Canonical venue name and the lowercase tokens that refer to it.
pub const CONFERENCE_ALIASES: &[(&str, &[&str])] = &[
    ("ICLR", &["iclr"]),
    ("NeurIPS", &["neurips", "nips"]),
    ("ICML", &["icml"]),
    ("CVPR", &["cvpr"]),
    ("IROS", &["iros"]),
    ("ICRA", &["icra"]),
    ("AAAI", &["aaai"]),
    ("ACL", &["acl"]),
    ("ICCV", &["iccv"]),
    ("EMNLP", &["emnlp"]),
    ("AISTATS", &["aistats"]),
    ("RSS", &["rss"]),
    ("SIGGRAPH", &["siggraph"]),
    ("WACV", &["wacv"]),
];

/// Canonical conference for a venue string, if it names a known one.
pub fn canonical_conference(venue: &str) -> Option<&'static str> {
    let tokens = tokenize(venue);
    CONFERENCE_ALIASES
        .iter()
        .find(|(_, aliases)| tokens.iter().any(|t| aliases.contains(&t.as_str())))
        .map(|(name, _)| *name)
}

static SYNONYMS_TSV: &str = include_str!("../data/synonyms.tsv");

pub fn synonym_pairs() -> &'static [(String, String)] {
    static PAIRS: OnceLock<Vec<(String, String)>> = OnceLock::new();
    PAIRS.get_or_init(|| {
        SYNONYMS_TSV
            .lines()
            .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
            .filter_map(|l| l.split_once('\t'))
            .map(|(a, b)| (normalize_title(a), normalize_title(b)))
            .collect()
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct QueryIntent {
    /// `None` when the text carries no source cue (offline by default).
    pub search_mode: Option<SourceMode>,
    pub conferences: BTreeSet<String>,
    pub year_min: Option<i32>,
    pub year_max: Option<i32>,
    pub max_results: Option<usize>,
    pub sort_preference: Option<SortCriterion>,
    /// `None` when the text carries no mode cue (balanced by default).
    pub mode: Option<SearchMode>,
    /// The query with recognized filter phrases removed.
    pub search_text: String,
}

impl QueryIntent {
    pub fn resolved_search_mode(&self) -> SourceMode {
        self.search_mode.unwrap_or_default()
    }

    pub fn resolved_mode(&self) -> SearchMode {
        self.mode.unwrap_or_default()
    }

    pub fn has_filters(&self) -> bool {
        !self.conferences.is_empty() || self.year_min.is_some() || self.year_max.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SearchSpec {
    pub core_keywords: Vec<String>,
    pub required_constraints: Vec<String>,
    pub related_terms: Vec<String>,
    pub negative_keywords: Vec<String>,
    /// Always empty for the rule-based classifier.
    pub plausible_titles: Vec<String>,
}

impl SearchSpec {
    pub fn has_constraints(&self) -> bool {
        !self.required_constraints.is_empty() || !self.negative_keywords.is_empty()
    }
}

/// Plug-in point for intent classifiers. Must be total and deterministic.
pub trait IntentClassifier: Send + Sync {
    fn classify(&self, text: &str) -> (QueryIntent, SearchSpec);
}

#[derive(Debug, Clone)]
pub struct RuleClassifier {
    /// Anchor for relative phrases like "last 3 years".
    pub reference_year: i32,
}

impl Default for RuleClassifier {
    fn default() -> Self {
        Self {
            reference_year: current_year(),
        }
    }
}

impl IntentClassifier for RuleClassifier {
    fn classify(&self, text: &str) -> (QueryIntent, SearchSpec) {
        let intent = self.classify_intent(text);
        let spec = expand_query(text);
        (intent, spec)
    }
}

struct Patterns {
    range: Regex,
    bound: Regex,
    last_n: Regex,
    year: Regex,
    top_n: Regex,
    most_cited: Regex,
    recent: Regex,
    discovery: Regex,
    online: Regex,
    offline: Regex,
    negation: Regex,
    quoted: Regex,
    aliases: Vec<(&'static str, Regex)>,
}

fn patterns() -> &'static Patterns {
    static P: OnceLock<Patterns> = OnceLock::new();
    P.get_or_init(|| {
        let re = |s: &str| Regex::new(s).expect("static pattern");
        Patterns {
            range: re(r"\b(?:between\s+|from\s+)?((?:19|20)\d{2})\s*(?:-|–|to|and|until)\s*((?:19|20)\d{2})\b"),
            bound: re(r"\b(since|from|after|before|until|through)\s+((?:19|20)\d{2})\b"),
            last_n: re(r"\b(?:in\s+the\s+)?(?:last|past)\s+(\d{1,2})\s+years?\b"),
            year: re(r"\b((?:19|20)\d{2})\b"),
            top_n: re(r"\b(?:top|first)\s+(\d{1,3})\b"),
            most_cited: re(r"\b(?:most|highly|top|heavily)[\s-]+cited\b|\bmost\s+influential\b"),
            recent: re(r"\b(?:most\s+)?(?:recent|latest|newest)\b"),
            discovery: re(r"\b(?:novel|unusual|underexplored|unexplored|unconventional)\b"),
            online: re(r"\b(?:online|arxiv|preprints?|internet|web)\b"),
            offline: re(r"\b(?:offline|local)\b"),
            negation: re(r"\b(?:not|excluding|without|except)\s+([\p{L}\p{N}]+)"),
            quoted: re(r#""([^"]+)""#),
            aliases: CONFERENCE_ALIASES
                .iter()
                .flat_map(|(name, aliases)| aliases.iter().map(move |a| (*name, re(&format!(r"\b{a}\b")))))
                .collect(),
        }
    })
}

fn overlaps(spans: &[Range<usize>], r: &Range<usize>) -> bool {
    spans.iter().any(|s| s.start < r.end && r.start < s.end)
}

fn strip_spans(text: &str, spans: &[Range<usize>]) -> String {
    let mut out = String::with_capacity(text.len());
    for (i, c) in text.char_indices() {
        if overlaps(spans, &(i..i + c.len_utf8())) {
            out.push(' ');
        } else {
            out.push(c);
        }
    }
    out.split_whitespace().collect::<Vec<_>>().join(" ")
}

impl RuleClassifier {
    pub fn classify_intent(&self, text: &str) -> QueryIntent {
        let p = patterns();
        let lower = text.to_lowercase();
        let mut intent = QueryIntent::default();
        let mut spans: Vec<Range<usize>> = Vec::new();

        for c in p.range.captures_iter(&lower) {
            let m = c.get(0).unwrap();
            let (a, b): (i32, i32) = (c[1].parse().unwrap(), c[2].parse().unwrap());
            intent.year_min.get_or_insert(a.min(b));
            intent.year_max.get_or_insert(a.max(b));
            spans.push(m.range());
        }
        for c in p.bound.captures_iter(&lower) {
            let m = c.get(0).unwrap();
            if overlaps(&spans, &m.range()) {
                continue;
            }
            let y: i32 = c[2].parse().unwrap();
            match &c[1] {
                "since" | "from" => {
                    intent.year_min.get_or_insert(y);
                }
                "after" => {
                    intent.year_min.get_or_insert(y + 1);
                }
                "before" => {
                    intent.year_max.get_or_insert(y - 1);
                }
                _ => {
                    intent.year_max.get_or_insert(y);
                }
            }
            spans.push(m.range());
        }
        for c in p.last_n.captures_iter(&lower) {
            let n: i32 = c[1].parse().unwrap();
            intent.year_min.get_or_insert(self.reference_year - n);
            spans.push(c.get(0).unwrap().range());
        }
        for m in p.year.find_iter(&lower) {
            if overlaps(&spans, &m.range()) {
                continue;
            }
            let y: i32 = m.as_str().parse().unwrap();
            if intent.year_min.is_none() && intent.year_max.is_none() {
                intent.year_min = Some(y);
                intent.year_max = Some(y);
            }
            spans.push(m.range());
        }
        if let (Some(lo), Some(hi)) = (intent.year_min, intent.year_max) {
            if lo > hi {
                intent.year_min = Some(hi);
                intent.year_max = Some(lo);
            }
        }

        for (name, re) in &p.aliases {
            for m in re.find_iter(&lower) {
                intent.conferences.insert(name.to_string());
                spans.push(m.range());
            }
        }

        if let Some(c) = p.top_n.captures(&lower) {
            if let Ok(n) = c[1].parse::<usize>() {
                if n > 0 {
                    intent.max_results = Some(n);
                    spans.push(c.get(0).unwrap().range());
                }
            }
        }

        let cited: Vec<_> = p.most_cited.find_iter(&lower).map(|m| m.range()).collect();
        let recent: Vec<_> = p
            .recent
            .find_iter(&lower)
            .map(|m| m.range())
            .filter(|r| !overlaps(&cited, r))
            .collect();
        if !cited.is_empty() {
            intent.sort_preference = Some(SortCriterion::Citations);
        } else if !recent.is_empty() {
            intent.sort_preference = Some(SortCriterion::Recency);
        }
        spans.extend(cited);
        spans.extend(recent);

        if p.discovery.is_match(&lower) {
            intent.mode = Some(SearchMode::Discovery);
        }

        let online: Vec<_> = p.online.find_iter(&lower).map(|m| m.range()).collect();
        let offline: Vec<_> = p.offline.find_iter(&lower).map(|m| m.range()).collect();
        intent.search_mode = match (online.is_empty(), offline.is_empty()) {
            (false, false) => Some(SourceMode::Both),
            (false, true) => Some(SourceMode::Online),
            (true, false) => Some(SourceMode::Offline),
            (true, true) => None,
        };
        spans.extend(online);
        spans.extend(offline);

        for c in p.negation.captures_iter(&lower) {
            spans.push(c.get(0).unwrap().range());
        }

        intent.search_text = if spans.is_empty() {
            text.to_string()
        } else {
            strip_spans(&lower, &spans)
        };
        intent
    }
}

/// Convenience wrapper using the default [`RuleClassifier`].
pub fn classify_intent(text: &str) -> QueryIntent {
    RuleClassifier::default().classify_intent(text)
}

pub fn expand_query(text: &str) -> SearchSpec {
    let p = patterns();
    let lower = text.to_lowercase();
    let mut spec = SearchSpec::default();

    for c in p.quoted.captures_iter(&lower) {
        let phrase = normalize_title(&c[1]);
        if !phrase.is_empty() && !spec.required_constraints.contains(&phrase) {
            spec.required_constraints.push(phrase);
        }
    }
    let mut operators = BTreeSet::new();
    for c in p.negation.captures_iter(&lower) {
        let term = c[1].to_string();
        operators.insert(
            c.get(0)
                .unwrap()
                .as_str()
                .split_whitespace()
                .next()
                .unwrap_or("")
                .to_string(),
        );
        if !spec.negative_keywords.contains(&term) {
            spec.negative_keywords.push(term);
        }
    }

    let tokens = tokenize(&lower);
    let mut core: Vec<String> = Vec::new();
    for t in &tokens {
        if is_stopword(t) || operators.contains(t) || spec.negative_keywords.contains(t) || core.contains(t) {
            continue;
        }
        core.push(t.clone());
    }
    if core.is_empty() {
        for t in tokens {
            if !core.contains(&t) {
                core.push(t);
            }
        }
    }
    spec.core_keywords = core;

    let padded = format!(" {} ", normalize_title(&lower));
    for (a, b) in synonym_pairs() {
        for (have, other) in [(a, b), (b, a)] {
            if padded.contains(&format!(" {have} ")) && !spec.related_terms.contains(other) {
                spec.related_terms.push(other.clone());
            }
        }
    }
    spec
}
