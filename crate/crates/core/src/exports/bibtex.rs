//! BibTeX rendering with deterministic citation keys.

use std::collections::HashSet;

use crate::corpus::{PaperRecord, Source};

/// ASCII-folded, lowercase, alphanumerics only.
fn key_part(s: &str) -> String {
    deunicode::deunicode(s)
        .chars()
        .filter(char::is_ascii_alphanumeric)
        .map(|c| c.to_ascii_lowercase())
        .collect()
}

fn last_name(author: &str) -> &str {
    match author.split_once(',') {
        Some((last, _)) => last.trim(),
        None => author.split_whitespace().last().unwrap_or(""),
    }
}

/// `lastname + year + first title word`, without collision handling.
pub fn bibtex_key(p: &PaperRecord) -> String {
    let last = p.authors.first().map(|a| key_part(last_name(a))).unwrap_or_default();
    let last = if last.is_empty() { "anon".to_string() } else { last };
    let year = p.year.map(|y| y.to_string()).unwrap_or_default();
    let word = deunicode::deunicode(&p.title)
        .split(|c: char| !c.is_ascii_alphanumeric())
        .find(|w| !w.is_empty())
        .map(str::to_ascii_lowercase)
        .unwrap_or_default();
    format!("{last}{year}{word}")
}

/// Suffix sequence a, b, ..., z, aa, ab, ...
fn suffix(mut n: usize) -> String {
    let mut s = Vec::new();
    loop {
        s.push(b'a' + (n % 26) as u8);
        if n < 26 {
            break;
        }
        n = n / 26 - 1;
    }
    s.reverse();
    String::from_utf8(s).unwrap_or_default()
}

fn unique_key(base: String, used: &mut HashSet<String>) -> String {
    if used.insert(base.clone()) {
        return base;
    }
    let mut n = 0;
    loop {
        let candidate = format!("{base}{}", suffix(n));
        if used.insert(candidate.clone()) {
            return candidate;
        }
        n += 1;
    }
}

/// Escapes LaTeX specials so field values stay brace-balanced.
pub fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.split_whitespace().collect::<Vec<_>>().join(" ").chars() {
        match c {
            '&' | '%' | '$' | '#' | '_' | '{' | '}' => {
                out.push('\\');
                out.push(c);
            }
            '~' => out.push_str("\\textasciitilde{}"),
            '^' => out.push_str("\\textasciicircum{}"),
            '\\' => out.push_str("\\textbackslash{}"),
            _ => out.push(c),
        }
    }
    out
}

/// One entry. `used_keys` collects keys across a bibliography.
pub fn render_bibtex(p: &PaperRecord, used_keys: &mut HashSet<String>) -> String {
    let key = unique_key(bibtex_key(p), used_keys);
    let is_article = p.source == Source::Arxiv || p.venue.trim().is_empty();
    let kind = if is_article { "article" } else { "inproceedings" };
    let mut fields: Vec<(&str, String)> = vec![("title", escape(&p.title))];
    if !p.authors.is_empty() {
        fields.push((
            "author",
            p.authors.iter().map(|a| escape(a)).collect::<Vec<_>>().join(" and "),
        ));
    }
    if let Some(y) = p.year {
        fields.push(("year", y.to_string()));
    }
    match (is_article, p.venue.trim().is_empty()) {
        (false, _) => fields.push(("booktitle", escape(&p.venue))),
        (true, false) => fields.push(("journal", escape(&p.venue))),
        (true, true) if p.source == Source::Arxiv => fields.push(("journal", "arXiv preprint".into())),
        (true, true) => {}
    }
    if let Some(doi) = &p.doi {
        fields.push(("doi", escape(doi)));
    }
    if let Some(url) = p.pdf_url.as_ref().or(p.url.as_ref()) {
        fields.push(("url", escape(url)));
    }
    let body = fields
        .iter()
        .map(|(k, v)| format!("  {k} = {{{v}}}"))
        .collect::<Vec<_>>()
        .join(",\n");
    format!("@{kind}{{{key},\n{body}\n}}\n")
}

pub fn render_bibliography(papers: &[PaperRecord]) -> String {
    let mut used = HashSet::new();
    papers
        .iter()
        .map(|p| render_bibtex(p, &mut used))
        .collect::<Vec<_>>()
        .join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn smith() -> PaperRecord {
        let mut p = PaperRecord::new("x", "Quantum Ranking of Things");
        p.authors = vec!["Jane Smith".into(), "Bo Li".into()];
        p.year = Some(2024);
        p
    }

    #[test]
    fn key_rule_and_collisions() {
        let mut used = HashSet::new();
        let a = render_bibtex(&smith(), &mut used);
        let b = render_bibtex(&smith(), &mut used);
        assert!(a.starts_with("@article{smith2024quantum,"));
        assert!(b.starts_with("@article{smith2024quantuma,"));
    }

    #[test]
    fn comma_names_and_unicode() {
        let mut p = smith();
        p.authors = vec!["Müller, Jürgen".into()];
        p.title = "Über alles".into();
        assert_eq!(bibtex_key(&p), "muller2024uber");
    }

    #[test]
    fn suffixes_continue_past_z() {
        assert_eq!(suffix(0), "a");
        assert_eq!(suffix(25), "z");
        assert_eq!(suffix(26), "aa");
        assert_eq!(suffix(27), "ab");
    }

    #[test]
    fn venue_selects_inproceedings() {
        let mut p = smith();
        p.venue = "ICML".into();
        assert!(render_bibtex(&p, &mut HashSet::new()).starts_with("@inproceedings{"));
        p.source = Source::Arxiv;
        assert!(render_bibtex(&p, &mut HashSet::new()).starts_with("@article{"));
    }

    #[test]
    fn specials_escaped() {
        assert_eq!(escape("A & {B} 50% #1 a_b"), r"A \& \{B\} 50\% \#1 a\_b");
    }
}
