//! Self-contained HTML dashboard that reloads itself every 10 seconds.

use crate::analytics::compute_stats;
use crate::pipeline::PipelineState;

pub const REFRESH_SECONDS: u32 = 10;

const STYLE: &str = "body{font-family:sans-serif;margin:2em;color:#222}\
table{border-collapse:collapse;width:100%}\
th,td{border:1px solid #ccc;padding:4px 8px;text-align:left;vertical-align:top}\
th{background:#f0f0f0}td.num{text-align:right;font-family:monospace}\
.empty{color:#888;font-style:italic}";

pub fn escape_html(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&#39;"),
            _ => out.push(c),
        }
    }
    out
}

fn num(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.6}")).unwrap_or_default()
}

pub fn render_dashboard(state: &PipelineState) -> String {
    let mut h = String::new();
    h.push_str("<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n");
    h.push_str(&format!(
        "<meta http-equiv=\"refresh\" content=\"{REFRESH_SECONDS}\">\n"
    ));
    h.push_str(&format!(
        "<title>Discovery: {}</title>\n<style>{STYLE}</style>\n</head>\n<body>\n",
        escape_html(&state.query)
    ));
    h.push_str(&format!("<h1>{}</h1>\n", escape_html(&state.query)));
    h.push_str(&format!(
        "<p>Step {} &middot; {} papers &middot; mode {}</p>\n",
        state.step,
        state.papers.len(),
        state.resolved_mode
    ));

    h.push_str("<h2>Ranked papers</h2>\n");
    if state.papers.is_empty() {
        h.push_str("<p class=\"empty\">No papers found for this query.</p>\n");
    } else {
        h.push_str(
            "<table id=\"papers\">\n<thead><tr><th>Rank</th><th>Title</th><th>Venue</th><th>Year</th>\
             <th>Citations</th><th>Similarity</th><th>Recency</th><th>Novelty</th><th>BM25</th>\
             <th>Combined</th></tr></thead>\n<tbody>\n",
        );
        for p in &state.papers {
            let s = p.scores;
            let title = match p.pdf_url.as_ref().or(p.url.as_ref()) {
                Some(u) => format!("<a href=\"{}\">{}</a>", escape_html(u), escape_html(&p.title)),
                None => escape_html(&p.title),
            };
            h.push_str(&format!(
                "<tr><td class=\"num\">{}</td><td>{}</td><td>{}</td><td class=\"num\">{}</td>\
                 <td class=\"num\">{}</td><td class=\"num\">{}</td><td class=\"num\">{}</td>\
                 <td class=\"num\">{}</td><td class=\"num\">{}</td><td class=\"num\">{}</td></tr>\n",
                p.rank.map(|r| r.to_string()).unwrap_or_default(),
                title,
                escape_html(&p.venue),
                p.year.map(|y| y.to_string()).unwrap_or_default(),
                p.citations.map(|c| c.to_string()).unwrap_or_default(),
                num(s.map(|s| s.similarity)),
                num(s.map(|s| s.recency)),
                num(s.map(|s| s.novelty)),
                num(s.map(|s| s.bm25_norm)),
                num(s.map(|s| s.combined)),
            ));
        }
        h.push_str("</tbody>\n</table>\n");
    }

    let stats = compute_stats(&state.papers);
    h.push_str("<h2>Statistics</h2>\n<ul>\n");
    h.push_str(&format!("<li>Papers: {}</li>\n", stats.paper_count));
    if !stats.year_distribution.is_empty() {
        let years: Vec<String> = stats
            .year_distribution
            .iter()
            .map(|(y, c)| format!("{y}: {c}"))
            .collect();
        h.push_str(&format!("<li>Years: {}</li>\n", years.join(", ")));
    }
    if !stats.top_venues.is_empty() {
        let venues: Vec<String> = stats
            .top_venues
            .iter()
            .map(|c| format!("{} ({})", escape_html(&c.name), c.count))
            .collect();
        h.push_str(&format!("<li>Top venues: {}</li>\n", venues.join(", ")));
    }
    if let Some(c) = &stats.citation_stats {
        h.push_str(&format!(
            "<li>Citations: total {}, median {}, max {}</li>\n",
            c.total, c.median, c.max
        ));
    }
    h.push_str("</ul>\n");

    if !state.insights.is_empty() {
        h.push_str("<h2>Insights</h2>\n<ul>\n");
        for i in &state.insights {
            h.push_str(&format!("<li>{}</li>\n", escape_html(i)));
        }
        h.push_str("</ul>\n");
    }

    h.push_str("<h2>Step log</h2>\n<ol id=\"steps\">\n");
    for e in &state.step_log {
        h.push_str(&format!(
            "<li><code>{}</code> {}: {} ({} papers)</li>\n",
            escape_html(&e.timestamp),
            escape_html(&e.stage_name),
            escape_html(&e.action),
            e.paper_count
        ));
    }
    h.push_str("</ol>\n</body>\n</html>\n");
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn escapes_markup() {
        assert_eq!(
            escape_html("<a href=\"x\">&'"),
            "&lt;a href=&quot;x&quot;&gt;&amp;&#39;"
        );
    }
}
