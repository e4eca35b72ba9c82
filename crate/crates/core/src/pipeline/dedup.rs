//! Two-stage deduplication: exact DOI, then normalized title.
//!
//! Within a group the richest record survives; ties keep the earlier one.
//! Survivors take the position of their group's first occurrence.

use std::collections::HashMap;

use crate::corpus::PaperRecord;

/// Lowercase, non-alphanumerics to spaces, whitespace collapsed, trimmed.
pub fn normalize_title(title: &str) -> String {
    let lowered: String = title
        .to_lowercase()
        .chars()
        .map(|c| if c.is_alphanumeric() { c } else { ' ' })
        .collect();
    lowered.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Count of present, non-empty fields among abstract, pdf_url, doi,
/// citations, and venue.
pub fn richness(p: &PaperRecord) -> usize {
    let present = |s: Option<&str>| s.is_some_and(|v| !v.trim().is_empty());
    [
        present(Some(&p.abstract_text)),
        present(p.pdf_url.as_deref()),
        present(p.doi.as_deref()),
        p.citations.is_some(),
        present(Some(&p.venue)),
    ]
    .into_iter()
    .filter(|&b| b)
    .count()
}

fn dedup_by<K>(papers: Vec<PaperRecord>, key: impl Fn(&PaperRecord) -> Option<K>) -> Vec<PaperRecord>
where
    K: std::hash::Hash + Eq,
{
    // slot per group, in first-occurrence order
    let mut slots: Vec<PaperRecord> = Vec::with_capacity(papers.len());
    let mut group_slot: HashMap<K, usize> = HashMap::new();
    for p in papers {
        match key(&p) {
            None => slots.push(p),
            Some(k) => match group_slot.get(&k) {
                Some(&slot) => {
                    if richness(&p) > richness(&slots[slot]) {
                        slots[slot] = p;
                    }
                }
                None => {
                    group_slot.insert(k, slots.len());
                    slots.push(p);
                }
            },
        }
    }
    slots
}

pub fn dedup(papers: Vec<PaperRecord>) -> Vec<PaperRecord> {
    let by_doi = dedup_by(papers, |p| {
        p.doi.as_deref().filter(|d| !d.trim().is_empty()).map(str::to_owned)
    });
    dedup_by(by_doi, |p| Some(normalize_title(&p.title)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize_title("BM25: A Re-Visit!"), "bm25 a re visit");
        assert_eq!(normalize_title("bm25 a re visit"), "bm25 a re visit");
        assert_eq!(
            normalize_title("  Multiple   Spaces\tand\nlines "),
            "multiple spaces and lines"
        );
    }

    #[test]
    fn richness_counts() {
        let mut p = PaperRecord::new("a", "t");
        assert_eq!(richness(&p), 0);
        p.abstract_text = "abs".into();
        p.doi = Some("10.1/x".into());
        assert_eq!(richness(&p), 2);
        p.pdf_url = Some("u".into());
        p.citations = Some(0);
        p.venue = "ICLR".into();
        assert_eq!(richness(&p), 5);
        p.venue = "   ".into();
        assert_eq!(richness(&p), 4);
    }

    #[test]
    fn doi_group_keeps_richer_record() {
        let mut a = PaperRecord::new("a", "One title");
        a.doi = Some("10.1/x".into());
        let mut b = PaperRecord::new("b", "Another title");
        b.doi = Some("10.1/x".into());
        b.abstract_text = "has abstract".into();
        let out = dedup(vec![a, b]);
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].id, "b");
    }

    #[test]
    fn title_stage_and_ordering() {
        let a = PaperRecord::new("a", "Graph Nets!");
        let b = PaperRecord::new("b", "Unique");
        let mut c = PaperRecord::new("c", "graph nets");
        c.venue = "ICML".into();
        let out = dedup(vec![a, b, c]);
        let ids: Vec<_> = out.iter().map(|p| p.id.as_str()).collect();
        assert_eq!(ids, ["c", "b"]);
    }

    #[test]
    fn ties_keep_the_earlier_record() {
        let a = PaperRecord::new("a", "Same");
        let b = PaperRecord::new("b", "same");
        assert_eq!(dedup(vec![a, b])[0].id, "a");
    }

    #[test]
    fn distinct_records_unchanged() {
        let ps: Vec<_> = (0..5)
            .map(|i| PaperRecord::new(i.to_string(), format!("title {i}")))
            .collect();
        assert_eq!(dedup(ps.clone()), ps);
    }

    proptest! {
        #[test]
        fn normalize_is_idempotent(s in "\\PC{0,80}") {
            let once = normalize_title(&s);
            prop_assert_eq!(normalize_title(&once), once);
        }
    }
}
