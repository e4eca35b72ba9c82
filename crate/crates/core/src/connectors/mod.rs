//! Online retrieval clients for arXiv, Semantic Scholar, OpenAlex and DBLP.
//!
//! Every client talks through a [`Transport`], so tests replay recorded
//! bodies instead of reaching the network. Fetch failures never escape as
//! errors: they are folded into a [`FetchOutcome`] with a status tag.

pub mod arxiv;
pub mod dblp;
pub mod openalex;
pub mod semantic_scholar;
pub mod transport;

use std::fmt;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

pub use transport::{HttpResponse, Transport, TransportError, UreqTransport};

pub use crate::corpus::normalize_doi;
use crate::corpus::{current_year, PaperRecord, Source, MIN_YEAR};
use crate::error::{Error, Result};

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(10);
pub const DEFAULT_MAX_RETRIES: u32 = 3;
pub const DEFAULT_MIN_INTERVAL: Duration = Duration::from_secs(1);
pub const DEFAULT_BACKOFF_BASE: Duration = Duration::from_secs(1);

#[derive(Debug, Clone, PartialEq)]
pub struct SourceConfig {
    pub source: Source,
    pub base_url: String,
    pub api_key: Option<String>,
    pub timeout: Duration,
    pub max_retries: u32,
    pub min_request_interval: Duration,
    /// First retry waits this long; each later retry doubles it.
    pub backoff_base: Duration,
    pub enabled: bool,
}

impl SourceConfig {
    /// Defaults for an online source. Panics on [`Source::Offline`].
    pub fn new(source: Source) -> Self {
        let base_url = match source {
            Source::Arxiv => arxiv::DEFAULT_BASE_URL,
            Source::SemanticScholar => semantic_scholar::DEFAULT_BASE_URL,
            Source::Openalex => openalex::DEFAULT_BASE_URL,
            Source::Dblp => dblp::DEFAULT_BASE_URL,
            Source::Offline => panic!("the offline corpus has no connector"),
        };
        Self {
            source,
            base_url: base_url.to_string(),
            api_key: None,
            timeout: DEFAULT_TIMEOUT,
            max_retries: DEFAULT_MAX_RETRIES,
            min_request_interval: DEFAULT_MIN_INTERVAL,
            backoff_base: DEFAULT_BACKOFF_BASE,
            enabled: true,
        }
    }

    pub fn base_url_var(source: Source) -> Option<&'static str> {
        match source {
            Source::Arxiv => Some("ARXIV_BASE_URL"),
            Source::SemanticScholar => Some("SEMANTIC_SCHOLAR_BASE_URL"),
            Source::Openalex => Some("OPENALEX_BASE_URL"),
            Source::Dblp => Some("DBLP_BASE_URL"),
            Source::Offline => None,
        }
    }

    /// Defaults overridden by `<SOURCE>_BASE_URL` and `SEMANTIC_SCHOLAR_API_KEY`.
    pub fn from_env(source: Source) -> Self {
        let mut cfg = Self::new(source);
        if let Some(url) = Self::base_url_var(source).and_then(|v| std::env::var(v).ok()) {
            if !url.trim().is_empty() {
                cfg.base_url = url;
            }
        }
        if source == Source::SemanticScholar {
            cfg.api_key = std::env::var("SEMANTIC_SCHOLAR_API_KEY").ok().filter(|k| !k.is_empty());
        }
        cfg
    }

    /// All four online sources, in merge priority order.
    pub fn all_from_env() -> Vec<Self> {
        Source::ONLINE.iter().map(|&s| Self::from_env(s)).collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.source == Source::Offline {
            return Err(Error::Config("offline is not an online source".into()));
        }
        if self.timeout.is_zero() {
            return Err(Error::Config(format!("{}: timeout must be positive", self.source)));
        }
        if url::Url::parse(&self.base_url).is_err() {
            return Err(Error::Config(format!(
                "{}: invalid base url {:?}",
                self.source, self.base_url
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FetchStatus {
    Ok,
    Timeout,
    HttpError,
    ParseError,
    Skipped,
}

impl FetchStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            FetchStatus::Ok => "ok",
            FetchStatus::Timeout => "timeout",
            FetchStatus::HttpError => "http_error",
            FetchStatus::ParseError => "parse_error",
            FetchStatus::Skipped => "skipped",
        }
    }
}

impl fmt::Display for FetchStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Result of one source query. `records` is empty unless `status` is ok.
#[derive(Debug, Clone, PartialEq)]
pub struct FetchOutcome {
    pub source: Source,
    pub records: Vec<PaperRecord>,
    pub status: FetchStatus,
    pub latency: Duration,
    /// Requests actually sent, including retries.
    pub attempts: u32,
    pub detail: Option<String>,
}

impl FetchOutcome {
    fn failed(source: Source, status: FetchStatus, attempts: u32, started: Instant, detail: String) -> Self {
        Self {
            source,
            records: Vec::new(),
            status,
            latency: started.elapsed(),
            attempts,
            detail: Some(detail),
        }
    }

    pub fn is_ok(&self) -> bool {
        self.status == FetchStatus::Ok
    }
}

/// One source bound to a transport. Pacing state lives here, so reuse the
/// same client for consecutive queries to keep the request interval honest.
pub struct SourceClient {
    config: SourceConfig,
    transport: Arc<dyn Transport>,
    last_request: Mutex<Option<Instant>>,
}

impl SourceClient {
    pub fn new(config: SourceConfig, transport: Arc<dyn Transport>) -> Self {
        Self {
            config,
            transport,
            last_request: Mutex::new(None),
        }
    }

    pub fn config(&self) -> &SourceConfig {
        &self.config
    }

    pub fn source(&self) -> Source {
        self.config.source
    }

    pub fn search_url(&self, query: &str, max_results: usize) -> std::result::Result<String, String> {
        let base = &self.config.base_url;
        match self.config.source {
            Source::Arxiv => arxiv::search_url(base, query, max_results),
            Source::SemanticScholar => semantic_scholar::search_url(base, query, max_results),
            Source::Openalex => openalex::search_url(base, query, max_results),
            Source::Dblp => dblp::search_url(base, query, max_results),
            Source::Offline => Err("offline has no search url".into()),
        }
    }

    pub fn parse(&self, body: &str) -> std::result::Result<Vec<PaperRecord>, String> {
        match self.config.source {
            Source::Arxiv => arxiv::parse(body),
            Source::SemanticScholar => semantic_scholar::parse(body),
            Source::Openalex => openalex::parse(body),
            Source::Dblp => dblp::parse(body),
            Source::Offline => Err("offline has no parser".into()),
        }
    }

    fn headers(&self) -> Vec<(String, String)> {
        match (&self.config.api_key, self.config.source) {
            (Some(key), Source::SemanticScholar) => vec![("x-api-key".into(), key.clone())],
            _ => Vec::new(),
        }
    }

    /// Blocks until `min_request_interval` has passed since the previous
    /// request. The lock is held while sleeping so concurrent callers queue.
    fn pace(&self) {
        let mut last = self.last_request.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(prev) = *last {
            let due = prev + self.config.min_request_interval;
            let now = Instant::now();
            if due > now {
                std::thread::sleep(due - now);
            }
        }
        *last = Some(Instant::now());
    }

    pub fn fetch(&self, query: &str, max_results: usize) -> FetchOutcome {
        let started = Instant::now();
        let source = self.config.source;
        if !self.config.enabled {
            return FetchOutcome::failed(source, FetchStatus::Skipped, 0, started, "disabled".into());
        }
        if max_results == 0 {
            return FetchOutcome {
                source,
                records: Vec::new(),
                status: FetchStatus::Ok,
                latency: started.elapsed(),
                attempts: 0,
                detail: None,
            };
        }
        if let Err(e) = self.config.validate() {
            return FetchOutcome::failed(source, FetchStatus::Skipped, 0, started, e.to_string());
        }
        let url = match self.search_url(query, max_results) {
            Ok(u) => u,
            Err(e) => return FetchOutcome::failed(source, FetchStatus::Skipped, 0, started, e),
        };
        let headers = self.headers();

        let mut attempts = 0;
        let mut last_failure = (FetchStatus::HttpError, String::new());
        while attempts <= self.config.max_retries {
            if attempts > 0 {
                std::thread::sleep(self.config.backoff_base * 2u32.saturating_pow(attempts - 1));
            }
            self.pace();
            attempts += 1;
            match self.transport.get(&url, &headers, self.config.timeout) {
                Ok(resp) if resp.is_success() => {
                    return match self.parse(&resp.body) {
                        Ok(mut records) => {
                            records.truncate(max_results);
                            FetchOutcome {
                                source,
                                records,
                                status: FetchStatus::Ok,
                                latency: started.elapsed(),
                                attempts,
                                detail: None,
                            }
                        }
                        Err(e) => FetchOutcome::failed(source, FetchStatus::ParseError, attempts, started, e),
                    };
                }
                Ok(resp) => {
                    let detail = format!("HTTP {}", resp.status);
                    // Client errors other than rate limiting will not improve on retry.
                    if resp.status != 429 && resp.status < 500 {
                        return FetchOutcome::failed(source, FetchStatus::HttpError, attempts, started, detail);
                    }
                    last_failure = (FetchStatus::HttpError, detail);
                }
                Err(TransportError::Timeout) => {
                    last_failure = (
                        FetchStatus::Timeout,
                        format!("timed out after {:?}", self.config.timeout),
                    );
                }
                Err(TransportError::Network(msg)) => last_failure = (FetchStatus::HttpError, msg),
            }
        }
        FetchOutcome::failed(source, last_failure.0, attempts, started, last_failure.1)
    }
}

/// One-shot fetch with a fresh client.
pub fn fetch_source(
    config: SourceConfig,
    transport: Arc<dyn Transport>,
    query: &str,
    max_results: usize,
) -> FetchOutcome {
    SourceClient::new(config, transport).fetch(query, max_results)
}

/// Queries every enabled client concurrently and concatenates results in
/// fixed source priority order, independent of completion order.
/// `max_results` caps each source separately.
pub fn aggregate_online(
    clients: &[SourceClient],
    query: &str,
    max_results: usize,
) -> Result<(Vec<PaperRecord>, Vec<FetchOutcome>)> {
    if !clients.iter().any(|c| c.config.enabled) {
        return Err(Error::NoSources);
    }
    let mut outcomes: Vec<FetchOutcome> = std::thread::scope(|scope| {
        let handles: Vec<_> = clients
            .iter()
            .map(|c| scope.spawn(move || c.fetch(query, max_results)))
            .collect();
        handles
            .into_iter()
            .zip(clients)
            .map(|(h, c)| {
                h.join().unwrap_or_else(|_| {
                    FetchOutcome::failed(
                        c.source(),
                        FetchStatus::ParseError,
                        0,
                        Instant::now(),
                        "fetch thread panicked".into(),
                    )
                })
            })
            .collect()
    });
    outcomes.sort_by_key(|o| o.source.priority());

    let any_enabled_ok = outcomes.iter().any(FetchOutcome::is_ok);
    if !any_enabled_ok {
        return Err(Error::AllSourcesFailed(outcomes));
    }
    let records = outcomes.iter().flat_map(|o| o.records.iter().cloned()).collect();
    Ok((records, outcomes))
}

pub(crate) fn clean_text(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Leading four-digit year of an ISO date such as `2021-03-04T00:00:00Z`.
pub(crate) fn year_prefix(date: &str) -> Option<i32> {
    date.get(..4).and_then(|y| y.parse().ok())
}

/// Shared post-processing: drops untitled records, blanks out-of-range
/// years and empty list entries.
pub(crate) fn finalize(mut p: PaperRecord) -> Option<PaperRecord> {
    p.title = clean_text(&p.title);
    if p.title.is_empty() {
        return None;
    }
    if p.year.is_some_and(|y| !(MIN_YEAR..=current_year() + 1).contains(&y)) {
        p.year = None;
    }
    p.venue = clean_text(&p.venue);
    p.authors.retain(|a| !a.trim().is_empty());
    p.keywords.retain(|k| !k.trim().is_empty());
    p.pdf_url = p.pdf_url.filter(|u| !u.is_empty());
    p.url = p.url.filter(|u| !u.is_empty());
    Some(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn doi_normalization() {
        assert_eq!(
            normalize_doi("https://doi.org/10.1000/ABC").as_deref(),
            Some("10.1000/abc")
        );
        assert_eq!(normalize_doi("doi:10.1/x").as_deref(), Some("10.1/x"));
        assert_eq!(normalize_doi("  "), None);
    }

    #[test]
    fn finalize_rejects_untitled_and_clears_bad_years() {
        assert!(finalize(PaperRecord::new("x", "  ")).is_none());
        let mut p = PaperRecord::new("x", "T");
        p.year = Some(1066);
        assert_eq!(finalize(p).unwrap().year, None);
    }

    #[test]
    fn defaults_match_polite_client() {
        let c = SourceConfig::new(Source::Dblp);
        assert_eq!(c.timeout, Duration::from_secs(10));
        assert_eq!(c.max_retries, 3);
        assert_eq!(c.min_request_interval, Duration::from_secs(1));
        assert!(c.validate().is_ok());
    }
}
