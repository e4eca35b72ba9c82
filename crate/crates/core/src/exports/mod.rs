//! Synchronized artifacts regenerated from [`PipelineState`].
//!
//! Every renderer is a pure function of the state, so equal states give
//! byte-identical files. Files are written through a temp file in the
//! target directory and renamed into place.

pub mod bibtex;
pub mod dashboard;

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

pub use bibtex::{bibtex_key, render_bibliography, render_bibtex};
pub use dashboard::render_dashboard;

use crate::analytics::{compute_stats, Stats};
use crate::corpus::PaperRecord;
use crate::error::{Error, Result};
use crate::eval::metrics::MetricRow;
use crate::intent::{QueryIntent, SearchSpec};
use crate::pipeline::{PipelineConfig, PipelineState, StepEntry, StepMetrics};
use crate::scoring::SearchMode;

pub const PAPERS_JSON: &str = "papers.json";
pub const LINKS_JSON: &str = "links.json";
pub const STATS_JSON: &str = "stats.json";
pub const SUMMARY_JSON: &str = "summary.json";
pub const RETRIEVAL_METRICS_JSON: &str = "retrieval_metrics.json";
pub const PAPERS_CSV: &str = "papers.csv";
pub const PAPERS_BIB: &str = "papers.bib";
pub const PAPERS_MD: &str = "papers.md";
pub const DASHBOARD_HTML: &str = "dashboard.html";

pub const LEADERBOARD_SIZE: usize = 10;
pub const KEY_FINDINGS: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub file_name: &'static str,
    pub bytes: Vec<u8>,
}

/// Rendered artifacts in a fixed order. The metrics file is present only
/// when the run had an evaluation target.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ArtifactSet {
    pub artifacts: Vec<Artifact>,
}

impl ArtifactSet {
    pub fn get(&self, file_name: &str) -> Option<&[u8]> {
        self.artifacts
            .iter()
            .find(|a| a.file_name == file_name)
            .map(|a| a.bytes.as_slice())
    }

    pub fn file_names(&self) -> Vec<&'static str> {
        self.artifacts.iter().map(|a| a.file_name).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkEntry {
    pub id: String,
    pub title: String,
    pub url: Option<String>,
    pub pdf_url: Option<String>,
    pub doi: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeaderboardEntry {
    pub rank: Option<u32>,
    pub id: String,
    pub title: String,
    pub combined: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsDocument {
    pub stats: Stats,
    pub leaderboard: Vec<LeaderboardEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryDocument {
    pub query: String,
    pub step: usize,
    pub config: PipelineConfig,
    pub resolved_mode: SearchMode,
    pub intent: Option<QueryIntent>,
    pub search_spec: Option<SearchSpec>,
    pub insights: Vec<String>,
    pub key_findings: Vec<String>,
    pub hidden_gems: Vec<PaperRecord>,
    pub canonical_papers: Vec<PaperRecord>,
    pub warnings: Vec<String>,
    pub step_log: Vec<StepEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RetrievalMetricsDocument {
    pub target: String,
    #[serde(rename = "final")]
    pub final_metrics: Option<MetricRow>,
    pub steps: Vec<StepMetrics>,
}

/// Pretty JSON with a trailing newline.
pub fn to_json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}

pub fn links(papers: &[PaperRecord]) -> Vec<LinkEntry> {
    papers
        .iter()
        .map(|p| LinkEntry {
            id: p.id.clone(),
            title: p.title.clone(),
            url: p.url.clone(),
            pdf_url: p.pdf_url.clone(),
            doi: p.doi.clone(),
        })
        .collect()
}

/// Top papers by combined score; unscored papers are left out.
pub fn leaderboard(papers: &[PaperRecord]) -> Vec<LeaderboardEntry> {
    let mut scored: Vec<&PaperRecord> = papers.iter().filter(|p| p.scores.is_some()).collect();
    scored.sort_by(|a, b| combined(b).total_cmp(&combined(a)));
    scored
        .into_iter()
        .take(LEADERBOARD_SIZE)
        .map(|p| LeaderboardEntry {
            rank: p.rank,
            id: p.id.clone(),
            title: p.title.clone(),
            combined: combined(p),
        })
        .collect()
}

fn combined(p: &PaperRecord) -> f64 {
    p.scores.map_or(0.0, |s| s.combined)
}

pub fn key_findings(state: &PipelineState) -> Vec<String> {
    let mut out: Vec<String> = state
        .papers
        .iter()
        .take(KEY_FINDINGS)
        .map(|p| {
            let mut line = format!("#{} {}", p.rank.unwrap_or(0), one_line(&p.title));
            match (p.venue.is_empty(), p.year) {
                (false, Some(y)) => line.push_str(&format!(" ({} {y})", p.venue)),
                (false, None) => line.push_str(&format!(" ({})", p.venue)),
                (true, Some(y)) => line.push_str(&format!(" ({y})")),
                (true, None) => {}
            }
            line
        })
        .collect();
    if let Some(gem) = state.hidden_gems.first() {
        out.push(format!("Hidden gem: {}", one_line(&gem.title)));
    }
    out
}

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

pub fn summary(state: &PipelineState) -> SummaryDocument {
    SummaryDocument {
        query: state.query.clone(),
        step: state.step,
        config: state.config.clone(),
        resolved_mode: state.resolved_mode,
        intent: state.intent.clone(),
        search_spec: state.search_spec.clone(),
        insights: state.insights.clone(),
        key_findings: key_findings(state),
        hidden_gems: state.hidden_gems.clone(),
        canonical_papers: state.canonical_papers.clone(),
        warnings: state.warnings.clone(),
        step_log: state.step_log.clone(),
    }
}

pub const CSV_HEADER: [&str; 20] = [
    "id",
    "title",
    "authors",
    "abstract",
    "venue",
    "year",
    "track",
    "keywords",
    "doi",
    "url",
    "pdf_url",
    "citations",
    "source",
    "rank",
    "similarity",
    "recency",
    "novelty",
    "bm25_norm",
    "citations_norm",
    "combined",
];

fn fixed(x: f64) -> String {
    format!("{x:.6}")
}

/// Quoted, comma-separated, LF-terminated. List fields are joined by "; ".
pub fn render_csv(papers: &[PaperRecord]) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new()
        .quote_style(csv::QuoteStyle::Always)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::Config(format!("csv rendering failed: {e}"));
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for p in papers {
        let opt = |o: &Option<String>| o.clone().unwrap_or_default();
        let s = p.scores;
        let score = |f: fn(&crate::scoring::ScoreVector) -> f64| s.as_ref().map(f).map(fixed).unwrap_or_default();
        w.write_record([
            p.id.clone(),
            p.title.clone(),
            p.authors.join("; "),
            p.abstract_text.clone(),
            p.venue.clone(),
            p.year.map(|y| y.to_string()).unwrap_or_default(),
            opt(&p.track),
            p.keywords.join("; "),
            opt(&p.doi),
            opt(&p.url),
            opt(&p.pdf_url),
            p.citations.map(|c| c.to_string()).unwrap_or_default(),
            p.source.to_string(),
            p.rank.map(|r| r.to_string()).unwrap_or_default(),
            score(|s| s.similarity),
            score(|s| s.recency),
            score(|s| s.novelty),
            score(|s| s.bm25_norm),
            score(|s| s.citations_norm),
            score(|s| s.combined),
        ])
        .map_err(csv_err)?;
    }
    w.into_inner()
        .map_err(|e| Error::Config(format!("csv rendering failed: {e}")))
}

/// Numbered Markdown list, one item per paper.
pub fn render_markdown(state: &PipelineState) -> String {
    let mut md = format!("# Results: {}\n\n", one_line(&state.query));
    md.push_str(&format!(
        "{} papers after step {} (mode: {}).\n\n",
        state.papers.len(),
        state.step,
        state.resolved_mode
    ));
    if state.papers.is_empty() {
        md.push_str("_No papers found._\n");
        return md;
    }
    for (i, p) in state.papers.iter().enumerate() {
        md.push_str(&format!("{}. **{}**", i + 1, one_line(&p.title)));
        let mut meta = Vec::new();
        if !p.venue.is_empty() {
            meta.push(one_line(&p.venue));
        }
        if let Some(y) = p.year {
            meta.push(y.to_string());
        }
        if !meta.is_empty() {
            md.push_str(&format!(" ({})", meta.join(", ")));
        }
        if !p.authors.is_empty() {
            md.push_str(&format!(". {}", p.authors.join(", ")));
        }
        if let Some(s) = p.scores {
            md.push_str(&format!(". combined {}", fixed(s.combined)));
        }
        if let Some(url) = p.pdf_url.as_ref().or(p.url.as_ref()) {
            md.push_str(&format!(". <{url}>"));
        }
        md.push('\n');
    }
    md
}

/// Renders every artifact without touching the filesystem.
pub fn render_all(state: &PipelineState) -> Result<ArtifactSet> {
    let stats = compute_stats(&state.papers);
    let mut artifacts = vec![
        Artifact {
            file_name: PAPERS_JSON,
            bytes: to_json_bytes(&state.papers)?,
        },
        Artifact {
            file_name: LINKS_JSON,
            bytes: to_json_bytes(&links(&state.papers))?,
        },
        Artifact {
            file_name: STATS_JSON,
            bytes: to_json_bytes(&StatsDocument {
                stats,
                leaderboard: leaderboard(&state.papers),
            })?,
        },
        Artifact {
            file_name: SUMMARY_JSON,
            bytes: to_json_bytes(&summary(state))?,
        },
    ];
    if let Some(target) = &state.config.target {
        artifacts.push(Artifact {
            file_name: RETRIEVAL_METRICS_JSON,
            bytes: to_json_bytes(&RetrievalMetricsDocument {
                target: target.clone(),
                final_metrics: state.metrics_log.last().map(|m| m.metrics.clone()),
                steps: state.metrics_log.clone(),
            })?,
        });
    }
    artifacts.extend([
        Artifact {
            file_name: PAPERS_CSV,
            bytes: render_csv(&state.papers)?,
        },
        Artifact {
            file_name: PAPERS_BIB,
            bytes: render_bibliography(&state.papers).into_bytes(),
        },
        Artifact {
            file_name: PAPERS_MD,
            bytes: render_markdown(state).into_bytes(),
        },
        Artifact {
            file_name: DASHBOARD_HTML,
            bytes: render_dashboard(state).into_bytes(),
        },
    ]);
    Ok(ArtifactSet { artifacts })
}

/// Writes `bytes` to `dir/file_name` via a temp file and rename, so readers
/// never observe a partial file under the final name.
pub fn write_atomic(dir: &Path, file_name: &str, bytes: &[u8]) -> Result<()> {
    let err = |source: std::io::Error| Error::ArtifactWrite {
        artifact: file_name.to_string(),
        source,
    };
    let mut tmp = tempfile::Builder::new()
        .prefix(&format!(".{file_name}."))
        .tempfile_in(dir)
        .map_err(err)?;
    tmp.write_all(bytes).map_err(err)?;
    tmp.as_file().sync_all().map_err(err)?;
    tmp.persist(dir.join(file_name)).map_err(|e| err(e.error))?;
    Ok(())
}

pub fn write_all(state: &PipelineState, out_dir: &Path) -> Result<ArtifactSet> {
    let set = render_all(state)?;
    std::fs::create_dir_all(out_dir).map_err(|source| Error::ArtifactWrite {
        artifact: out_dir.display().to_string(),
        source,
    })?;
    for a in &set.artifacts {
        write_atomic(out_dir, a.file_name, &a.bytes)?;
    }
    Ok(set)
}

/// Rebuilds a state from a previously written output directory.
pub fn load_state(dir: &Path) -> Result<PipelineState> {
    fn read<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::StateRead {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        serde_json::from_str(&text).map_err(|e| Error::StateRead {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }
    let summary: SummaryDocument = read(&dir.join(SUMMARY_JSON))?;
    let papers: Vec<PaperRecord> = read(&dir.join(PAPERS_JSON))?;
    let metrics_path = dir.join(RETRIEVAL_METRICS_JSON);
    let metrics_log = if summary.config.target.is_some() && metrics_path.exists() {
        read::<RetrievalMetricsDocument>(&metrics_path)?.steps
    } else {
        Vec::new()
    };
    Ok(PipelineState {
        step: summary.step,
        query: summary.query,
        papers,
        step_log: summary.step_log,
        config: summary.config,
        intent: summary.intent,
        search_spec: summary.search_spec,
        resolved_mode: summary.resolved_mode,
        insights: summary.insights,
        hidden_gems: summary.hidden_gems,
        canonical_papers: summary.canonical_papers,
        warnings: summary.warnings,
        metrics_log,
        output_dir: Some(dir.to_path_buf()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::PipelineConfig;

    fn state(n: usize) -> PipelineState {
        let mut st = PipelineState::new("q", PipelineConfig::default(), None);
        st.papers = (0..n)
            .map(|i| {
                let mut p = PaperRecord::new(format!("p{i}"), format!("Paper, \"number\" {i}"));
                p.authors = vec![format!("Author{i} Smith")];
                p.year = Some(2020 + i as i32);
                p.rank = Some(i as u32 + 1);
                p
            })
            .collect();
        st
    }

    #[test]
    fn csv_rows_match_papers() {
        let bytes = render_csv(&state(3).papers).unwrap();
        let text = String::from_utf8(bytes.clone()).unwrap();
        assert!(!text.contains('\r'));
        let mut r = csv::Reader::from_reader(bytes.as_slice());
        assert_eq!(r.headers().unwrap().len(), CSV_HEADER.len());
        assert_eq!(r.records().count(), 3);
    }

    #[test]
    fn empty_state_renders_valid_documents() {
        let set = render_all(&state(0)).unwrap();
        assert_eq!(set.artifacts.len(), 8);
        let papers: Vec<PaperRecord> = serde_json::from_slice(set.get(PAPERS_JSON).unwrap()).unwrap();
        assert!(papers.is_empty());
        assert!(String::from_utf8_lossy(set.get(PAPERS_MD).unwrap()).contains("No papers"));
    }

    #[test]
    fn markdown_items_match_papers() {
        let md = render_markdown(&state(4));
        let items = md
            .lines()
            .filter(|l| l.split_once(". ").is_some_and(|(n, _)| n.parse::<usize>().is_ok()))
            .count();
        assert_eq!(items, 4);
    }

    #[test]
    fn metrics_artifact_only_with_target() {
        let mut st = state(1);
        st.config.target = Some("p0".into());
        assert!(render_all(&st).unwrap().get(RETRIEVAL_METRICS_JSON).is_some());
    }

    #[test]
    fn write_then_load_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let st = state(2);
        write_all(&st, dir.path()).unwrap();
        let back = load_state(dir.path()).unwrap();
        assert_eq!(back.papers, st.papers);
        assert_eq!(back.query, st.query);
        let stray: Vec<_> = std::fs::read_dir(dir.path())
            .unwrap()
            .filter_map(|e| e.ok())
            .filter(|e| e.file_name().to_string_lossy().starts_with('.'))
            .collect();
        assert!(stray.is_empty());
    }
}
