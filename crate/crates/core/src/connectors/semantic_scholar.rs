//! Semantic Scholar Graph API paper search (JSON).

use serde::Deserialize;
use url::Url;

use super::{clean_text, finalize, normalize_doi};
use crate::corpus::{PaperRecord, Source};

pub const DEFAULT_BASE_URL: &str = "https://api.semanticscholar.org/graph/v1";
pub const FIELDS: &str = "title,authors,abstract,venue,year,citationCount,externalIds,url,openAccessPdf,fieldsOfStudy";

pub fn search_url(base: &str, query: &str, max_results: usize) -> Result<String, String> {
    let url = Url::parse_with_params(
        &format!("{}/paper/search", base.trim_end_matches('/')),
        &[
            ("query", query.to_string()),
            ("limit", max_results.to_string()),
            ("fields", FIELDS.to_string()),
        ],
    )
    .map_err(|e| e.to_string())?;
    Ok(url.into())
}

#[derive(Deserialize)]
struct SearchResponse {
    #[serde(default)]
    data: Vec<Paper>,
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct Paper {
    paper_id: String,
    #[serde(default)]
    title: Option<String>,
    #[serde(default, rename = "abstract")]
    abstract_text: Option<String>,
    #[serde(default)]
    venue: Option<String>,
    #[serde(default)]
    year: Option<i32>,
    #[serde(default)]
    citation_count: Option<i64>,
    #[serde(default)]
    authors: Vec<Author>,
    #[serde(default)]
    external_ids: Option<ExternalIds>,
    #[serde(default)]
    url: Option<String>,
    #[serde(default)]
    open_access_pdf: Option<OpenAccessPdf>,
    #[serde(default)]
    fields_of_study: Option<Vec<String>>,
}

#[derive(Deserialize)]
struct Author {
    #[serde(default)]
    name: Option<String>,
}

#[derive(Deserialize)]
struct ExternalIds {
    #[serde(default, rename = "DOI")]
    doi: Option<String>,
}

#[derive(Deserialize)]
struct OpenAccessPdf {
    #[serde(default)]
    url: Option<String>,
}

pub fn parse(body: &str) -> Result<Vec<PaperRecord>, String> {
    let resp: SearchResponse =
        serde_json::from_str(body).map_err(|e| format!("unexpected Semantic Scholar body: {e}"))?;
    Ok(resp
        .data
        .into_iter()
        .filter_map(|d| {
            let mut p = PaperRecord::new(
                format!("s2:{}", d.paper_id),
                d.title.as_deref().map(clean_text).unwrap_or_default(),
            );
            p.source = Source::SemanticScholar;
            p.abstract_text = d.abstract_text.as_deref().map(clean_text).unwrap_or_default();
            p.venue = d.venue.unwrap_or_default();
            p.year = d.year;
            p.citations = d.citation_count.and_then(|c| u64::try_from(c).ok());
            p.authors = d.authors.into_iter().filter_map(|a| a.name).collect();
            p.doi = d.external_ids.and_then(|e| e.doi).as_deref().and_then(normalize_doi);
            p.url = d.url;
            p.pdf_url = d.open_access_pdf.and_then(|o| o.url).filter(|u| !u.is_empty());
            p.keywords = d.fields_of_study.unwrap_or_default();
            finalize(p)
        })
        .collect())
}
