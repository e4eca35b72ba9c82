//! DBLP publication search (JSON).
//!
//! DBLP collapses single-element lists into bare objects, so the body is
//! walked as a generic JSON value.

use serde_json::Value;
use url::Url;

use super::{clean_text, finalize, normalize_doi};
use crate::corpus::{PaperRecord, Source};

pub const DEFAULT_BASE_URL: &str = "https://dblp.org";

pub fn search_url(base: &str, query: &str, max_results: usize) -> Result<String, String> {
    let url = Url::parse_with_params(
        &format!("{}/search/publ/api", base.trim_end_matches('/')),
        &[
            ("q", query.to_string()),
            ("format", "json".to_string()),
            ("h", max_results.to_string()),
        ],
    )
    .map_err(|e| e.to_string())?;
    Ok(url.into())
}

fn one_or_many(v: &Value) -> Vec<&Value> {
    match v {
        Value::Array(items) => items.iter().collect(),
        Value::Null => Vec::new(),
        other => vec![other],
    }
}

fn text_of(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Object(m) => m.get("text").and_then(Value::as_str).map(str::to_owned),
        Value::Number(n) => Some(n.to_string()),
        _ => None,
    }
}

pub fn parse(body: &str) -> Result<Vec<PaperRecord>, String> {
    let root: Value = serde_json::from_str(body).map_err(|e| format!("invalid DBLP JSON: {e}"))?;
    let hits = root
        .get("result")
        .and_then(|r| r.get("hits"))
        .ok_or("DBLP body lacks result.hits")?;
    let mut out = Vec::new();
    for hit in one_or_many(hits.get("hit").unwrap_or(&Value::Null)) {
        let Some(info) = hit.get("info") else {
            continue;
        };
        let title = info
            .get("title")
            .and_then(text_of)
            .map(|t| clean_text(&t).trim_end_matches('.').to_string())
            .unwrap_or_default();
        let key = info
            .get("key")
            .and_then(Value::as_str)
            .map(str::to_owned)
            .or_else(|| hit.get("@id").and_then(text_of))
            .unwrap_or_default();
        let mut p = PaperRecord::new(format!("dblp:{key}"), title);
        p.source = Source::Dblp;
        p.authors = info
            .get("authors")
            .and_then(|a| a.get("author"))
            .map(one_or_many)
            .unwrap_or_default()
            .into_iter()
            .filter_map(text_of)
            .collect();
        p.venue = info
            .get("venue")
            .map(one_or_many)
            .unwrap_or_default()
            .into_iter()
            .filter_map(text_of)
            .collect::<Vec<_>>()
            .join(", ");
        p.year = info.get("year").and_then(text_of).and_then(|y| y.parse().ok());
        p.doi = info.get("doi").and_then(text_of).as_deref().and_then(normalize_doi);
        p.url = info
            .get("ee")
            .and_then(text_of)
            .or_else(|| info.get("url").and_then(text_of));
        p.track = info.get("type").and_then(text_of);
        if let Some(p) = finalize(p) {
            out.push(p);
        }
    }
    Ok(out)
}
