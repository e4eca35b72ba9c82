//! arXiv query API (Atom feed).

use url::Url;

use super::{clean_text, finalize, normalize_doi, year_prefix};
use crate::corpus::{PaperRecord, Source};

pub const DEFAULT_BASE_URL: &str = "http://export.arxiv.org/api";

pub fn search_url(base: &str, query: &str, max_results: usize) -> Result<String, String> {
    let url = Url::parse_with_params(
        &format!("{}/query", base.trim_end_matches('/')),
        &[
            ("search_query", format!("all:{query}")),
            ("start", "0".to_string()),
            ("max_results", max_results.to_string()),
        ],
    )
    .map_err(|e| e.to_string())?;
    Ok(url.into())
}

/// `http://arxiv.org/abs/2101.00001v2` -> `2101.00001`
fn arxiv_id(abs_url: &str) -> String {
    let tail = abs_url.rsplit("/abs/").next().unwrap_or(abs_url);
    match tail.rfind('v') {
        Some(i) if i > 0 && tail[i + 1..].chars().all(|c| c.is_ascii_digit()) && i + 1 < tail.len() => {
            tail[..i].to_string()
        }
        _ => tail.to_string(),
    }
}

pub fn parse(body: &str) -> Result<Vec<PaperRecord>, String> {
    let doc = roxmltree::Document::parse(body).map_err(|e| format!("invalid Atom XML: {e}"))?;
    let root = doc.root_element();
    if root.tag_name().name() != "feed" {
        return Err(format!("expected <feed>, found <{}>", root.tag_name().name()));
    }
    let child_text = |node: roxmltree::Node, name: &str| {
        node.children()
            .find(|c| c.is_element() && c.tag_name().name() == name)
            .and_then(|c| c.text())
            .map(clean_text)
    };

    let mut out = Vec::new();
    for entry in root
        .children()
        .filter(|n| n.is_element() && n.tag_name().name() == "entry")
    {
        let Some(abs_url) = child_text(entry, "id") else {
            continue;
        };
        let mut p = PaperRecord::new(
            format!("arxiv:{}", arxiv_id(&abs_url)),
            child_text(entry, "title").unwrap_or_default(),
        );
        p.source = Source::Arxiv;
        p.abstract_text = child_text(entry, "summary").unwrap_or_default();
        p.authors = entry
            .children()
            .filter(|c| c.is_element() && c.tag_name().name() == "author")
            .filter_map(|a| child_text(a, "name"))
            .collect();
        p.year = child_text(entry, "published").as_deref().and_then(year_prefix);
        p.keywords = entry
            .children()
            .filter(|c| c.is_element() && c.tag_name().name() == "category")
            .filter_map(|c| c.attribute("term").map(str::to_owned))
            .collect();
        for link in entry
            .children()
            .filter(|c| c.is_element() && c.tag_name().name() == "link")
        {
            let href = link.attribute("href").map(str::to_owned);
            if link.attribute("title") == Some("pdf") || link.attribute("type") == Some("application/pdf") {
                p.pdf_url = href;
            } else if link.attribute("rel") == Some("alternate") {
                p.url = href;
            }
        }
        if p.url.is_none() {
            p.url = Some(abs_url.clone());
        }
        p.doi = child_text(entry, "doi").as_deref().and_then(normalize_doi);
        p.venue = child_text(entry, "journal_ref").unwrap_or_default();
        if let Some(p) = finalize(p) {
            out.push(p);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_drop_versions() {
        assert_eq!(arxiv_id("http://arxiv.org/abs/2101.00001v2"), "2101.00001");
        assert_eq!(arxiv_id("http://arxiv.org/abs/hep-th/9901001v1"), "hep-th/9901001");
        assert_eq!(arxiv_id("http://arxiv.org/abs/2101.00001"), "2101.00001");
    }

    #[test]
    fn url_is_encoded() {
        let u = search_url("http://export.arxiv.org/api/", "graph nets & more", 5).unwrap();
        assert!(u.starts_with("http://export.arxiv.org/api/query?search_query=all%3Agraph+nets+%26+more"));
        assert!(u.ends_with("max_results=5"));
    }

    #[test]
    fn non_feed_is_a_parse_error() {
        assert!(parse("<html></html>").is_err());
        assert!(parse("not xml").is_err());
        assert!(parse(r#"<feed xmlns="http://www.w3.org/2005/Atom"></feed>"#)
            .unwrap()
            .is_empty());
    }
}
