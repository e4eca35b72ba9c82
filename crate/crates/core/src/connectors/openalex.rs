//! OpenAlex works search (JSON).

use std::collections::BTreeMap;

use serde::Deserialize;
use url::Url;

use super::{clean_text, finalize, normalize_doi};
use crate::corpus::{PaperRecord, Source};

pub const DEFAULT_BASE_URL: &str = "https://api.openalex.org";

pub fn search_url(base: &str, query: &str, max_results: usize) -> Result<String, String> {
    let url = Url::parse_with_params(
        &format!("{}/works", base.trim_end_matches('/')),
        &[("search", query.to_string()), ("per-page", max_results.to_string())],
    )
    .map_err(|e| e.to_string())?;
    Ok(url.into())
}

#[derive(Deserialize)]
struct WorksResponse {
    results: Vec<Work>,
}

#[derive(Deserialize)]
struct Work {
    id: String,
    #[serde(default)]
    doi: Option<String>,
    #[serde(default)]
    title: Option<String>,
    #[serde(default)]
    display_name: Option<String>,
    #[serde(default)]
    publication_year: Option<i32>,
    #[serde(default)]
    cited_by_count: Option<i64>,
    #[serde(default)]
    authorships: Vec<Authorship>,
    #[serde(default)]
    primary_location: Option<Location>,
    #[serde(default)]
    open_access: Option<OpenAccess>,
    #[serde(default)]
    abstract_inverted_index: Option<BTreeMap<String, Vec<usize>>>,
    #[serde(default)]
    keywords: Vec<Named>,
    #[serde(default)]
    concepts: Vec<Named>,
}

#[derive(Deserialize)]
struct Authorship {
    author: Named,
}

#[derive(Deserialize)]
struct Named {
    #[serde(default)]
    display_name: Option<String>,
}

#[derive(Deserialize)]
struct Location {
    #[serde(default)]
    source: Option<Named>,
    #[serde(default)]
    pdf_url: Option<String>,
    #[serde(default)]
    landing_page_url: Option<String>,
}

#[derive(Deserialize)]
struct OpenAccess {
    #[serde(default)]
    oa_url: Option<String>,
}

/// Rebuilds plain text from OpenAlex's word -> positions index.
pub fn rebuild_abstract(index: &BTreeMap<String, Vec<usize>>) -> String {
    let mut slots: Vec<(usize, &str)> = index
        .iter()
        .flat_map(|(word, positions)| positions.iter().map(move |&p| (p, word.as_str())))
        .collect();
    slots.sort_by_key(|&(p, _)| p);
    slots.into_iter().map(|(_, w)| w).collect::<Vec<_>>().join(" ")
}

pub fn parse(body: &str) -> Result<Vec<PaperRecord>, String> {
    let resp: WorksResponse = serde_json::from_str(body).map_err(|e| format!("unexpected OpenAlex body: {e}"))?;
    Ok(resp
        .results
        .into_iter()
        .filter_map(|w| {
            let short_id = w.id.rsplit('/').next().unwrap_or(&w.id).to_string();
            let title = w
                .title
                .or(w.display_name)
                .as_deref()
                .map(clean_text)
                .unwrap_or_default();
            let mut p = PaperRecord::new(format!("openalex:{short_id}"), title);
            p.source = Source::Openalex;
            p.doi = w.doi.as_deref().and_then(normalize_doi);
            p.year = w.publication_year;
            p.citations = w.cited_by_count.and_then(|c| u64::try_from(c).ok());
            p.authors = w
                .authorships
                .into_iter()
                .filter_map(|a| a.author.display_name)
                .collect();
            if let Some(loc) = w.primary_location {
                p.venue = loc.source.and_then(|s| s.display_name).unwrap_or_default();
                p.pdf_url = loc.pdf_url;
                p.url = loc.landing_page_url;
            }
            if p.pdf_url.is_none() {
                p.pdf_url = w.open_access.and_then(|o| o.oa_url).filter(|u| u.ends_with(".pdf"));
            }
            if p.url.is_none() {
                p.url = Some(w.id);
            }
            p.abstract_text = w
                .abstract_inverted_index
                .as_ref()
                .map(rebuild_abstract)
                .unwrap_or_default();
            let terms = if w.keywords.is_empty() { w.concepts } else { w.keywords };
            p.keywords = terms.into_iter().filter_map(|k| k.display_name).collect();
            finalize(p)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverted_index_roundtrip() {
        let idx: BTreeMap<String, Vec<usize>> = [
            ("we".to_string(), vec![0]),
            ("rank".to_string(), vec![1, 3]),
            ("and".to_string(), vec![2]),
        ]
        .into();
        assert_eq!(rebuild_abstract(&idx), "we rank and rank");
    }
}
