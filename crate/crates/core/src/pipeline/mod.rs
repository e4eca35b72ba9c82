//! Stage orchestration and the single authoritative [`PipelineState`].
//!
//! Stages run sequentially. Each one appends exactly one [`StepEntry`] and,
//! when an output directory is set, regenerates every export artifact.

pub mod dedup;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use chrono::{DateTime, SecondsFormat, Utc};
use serde::{Deserialize, Serialize};

pub use dedup::{dedup, normalize_title, richness};

use crate::analytics::{compute_stats, generate_insights};
use crate::connectors::{aggregate_online, SourceClient};
use crate::corpus::{searchable_text, CorpusFilter, PaperRecord};
use crate::diversity::{canonical_papers, hidden_gems, mmr_rerank, DiversityConfig};
use crate::error::{Error, Result};
use crate::eval::metrics::{compute_metrics, GroundTruth, MetricRow, DEFAULT_KS};
use crate::intent::{IntentClassifier, QueryIntent, RuleClassifier, SearchSpec};
use crate::retrieval::{
    hybrid_search, multistage_search, simple_search, Bm25Index, Bm25Params, RerankScorer, RetrievalMethod,
    TokenOverlapScorer, DEFAULT_FIRST_K,
};
use crate::scoring::{assign_ranks, score_candidates, sort_papers, ModeWeights, SearchMode, SortCriterion};
use crate::text::{tokenize, TfIdfModel};

pub const DEFAULT_MAX_RESULTS: usize = 50;
pub const PREVIEW_LIMIT: usize = 200;

/// Where candidates come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SourceMode {
    #[default]
    Offline,
    Online,
    Both,
}

impl SourceMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SourceMode::Offline => "offline",
            SourceMode::Online => "online",
            SourceMode::Both => "both",
        }
    }

    pub fn uses_offline(self) -> bool {
        matches!(self, SourceMode::Offline | SourceMode::Both)
    }

    pub fn uses_online(self) -> bool {
        matches!(self, SourceMode::Online | SourceMode::Both)
    }
}

impl fmt::Display for SourceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SourceMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "offline" => Ok(Self::Offline),
            "online" => Ok(Self::Online),
            "both" => Ok(Self::Both),
            other => Err(Error::Config(format!("unknown search mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Intent,
    Search,
    Dedup,
    Score,
    Sort,
    Diversify,
    Analyze,
    Export,
}

impl Stage {
    pub fn as_str(self) -> &'static str {
        match self {
            Stage::Intent => "intent",
            Stage::Search => "search",
            Stage::Dedup => "dedup",
            Stage::Score => "score",
            Stage::Sort => "sort",
            Stage::Diversify => "diversify",
            Stage::Analyze => "analyze",
            Stage::Export => "export",
        }
    }
}

/// Which stages run; mirrors agent-composition ablations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum PipelineStructure {
    #[default]
    Full,
    Minimal,
    SearchSort,
    SearchAnalysis,
    NoIntent,
}

impl PipelineStructure {
    pub const ALL: [PipelineStructure; 5] = [
        PipelineStructure::Full,
        PipelineStructure::Minimal,
        PipelineStructure::SearchSort,
        PipelineStructure::SearchAnalysis,
        PipelineStructure::NoIntent,
    ];

    pub fn stages(self) -> &'static [Stage] {
        use Stage::*;
        match self {
            PipelineStructure::Full => &[Intent, Search, Dedup, Score, Sort, Diversify, Analyze, Export],
            PipelineStructure::Minimal => &[Search, Dedup, Export],
            PipelineStructure::SearchSort => &[Search, Dedup, Score, Sort, Export],
            PipelineStructure::SearchAnalysis => &[Search, Dedup, Analyze, Export],
            PipelineStructure::NoIntent => &[Search, Dedup, Score, Sort, Diversify, Analyze, Export],
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PipelineStructure::Full => "full",
            PipelineStructure::Minimal => "minimal",
            PipelineStructure::SearchSort => "search_sort",
            PipelineStructure::SearchAnalysis => "search_analysis",
            PipelineStructure::NoIntent => "no_intent",
        }
    }
}

impl fmt::Display for PipelineStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PipelineStructure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|v| v.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown pipeline structure `{s}`")))
    }
}

/// Run configuration. `mode` and `search_mode` left as `None` defer to the
/// intent stage, then to the defaults (balanced, offline).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub structure: PipelineStructure,
    pub mode: Option<SearchMode>,
    pub retrieval: RetrievalMethod,
    pub search_mode: Option<SourceMode>,
    pub filter: CorpusFilter,
    /// Per source before merging, and for the final list.
    pub max_results: usize,
    /// Overrides the mode's weights entirely.
    pub weights: Option<ModeWeights>,
    /// Runtime replacements for built-in mode weights.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub mode_weights: BTreeMap<SearchMode, ModeWeights>,
    pub seed: u64,
    /// Gold title or id; enables per-step retrieval metrics.
    pub target: Option<String>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            structure: PipelineStructure::Full,
            mode: None,
            retrieval: RetrievalMethod::Bm25,
            search_mode: None,
            filter: CorpusFilter::default(),
            max_results: DEFAULT_MAX_RESULTS,
            weights: None,
            mode_weights: BTreeMap::new(),
            seed: 0,
            target: None,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_results == 0 {
            return Err(Error::Config("max_results must be at least 1".into()));
        }
        self.filter.validate()?;
        if let Some(w) = &self.weights {
            w.validate()?;
        }
        self.mode_weights.values().try_for_each(ModeWeights::validate)
    }

    pub fn weights_for(&self, mode: SearchMode) -> ModeWeights {
        self.weights
            .or_else(|| self.mode_weights.get(&mode).copied())
            .unwrap_or_else(|| mode.weights())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepEntry {
    pub timestamp: String,
    pub stage_name: String,
    pub action: String,
    pub params: BTreeMap<String, String>,
    pub result_preview: String,
    pub paper_count: usize,
}

/// Retrieval metrics of the current list after one step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepMetrics {
    pub step: usize,
    pub stage_name: String,
    pub metrics: MetricRow,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineState {
    pub step: usize,
    pub query: String,
    pub papers: Vec<PaperRecord>,
    pub step_log: Vec<StepEntry>,
    pub config: PipelineConfig,
    pub intent: Option<QueryIntent>,
    pub search_spec: Option<SearchSpec>,
    /// Mode actually used for scoring and diversification.
    pub resolved_mode: SearchMode,
    pub insights: Vec<String>,
    pub hidden_gems: Vec<PaperRecord>,
    pub canonical_papers: Vec<PaperRecord>,
    pub warnings: Vec<String>,
    pub metrics_log: Vec<StepMetrics>,
    #[serde(skip)]
    pub output_dir: Option<PathBuf>,
}

impl PipelineState {
    pub fn new(query: impl Into<String>, config: PipelineConfig, output_dir: Option<PathBuf>) -> Self {
        let resolved_mode = config.mode.unwrap_or_default();
        Self {
            step: 0,
            query: query.into(),
            papers: Vec::new(),
            step_log: Vec::new(),
            config,
            intent: None,
            search_spec: None,
            resolved_mode,
            insights: Vec::new(),
            hidden_gems: Vec::new(),
            canonical_papers: Vec::new(),
            warnings: Vec::new(),
            metrics_log: Vec::new(),
            output_dir,
        }
    }
}

/// Timestamp source for step entries.
pub trait Clock: Send + Sync {
    fn now(&self) -> DateTime<Utc>;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SystemClock;

impl Clock for SystemClock {
    fn now(&self) -> DateTime<Utc> {
        Utc::now()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct FixedClock(pub DateTime<Utc>);

impl FixedClock {
    pub fn from_unix(secs: i64) -> Self {
        Self(DateTime::from_timestamp(secs, 0).unwrap_or_default())
    }
}

impl Clock for FixedClock {
    fn now(&self) -> DateTime<Utc> {
        self.0
    }
}

/// Shared, immutable discovery engine. One instance serves many runs.
pub struct Engine {
    corpus: Arc<Vec<PaperRecord>>,
    corpus_index: OnceLock<Option<Bm25Index>>,
    clients: Vec<SourceClient>,
    classifier: Arc<dyn IntentClassifier>,
    reranker: Arc<dyn RerankScorer>,
    clock: Arc<dyn Clock>,
}

impl Engine {
    pub fn new(corpus: Vec<PaperRecord>) -> Self {
        Self::from_shared(Arc::new(corpus))
    }

    pub fn from_shared(corpus: Arc<Vec<PaperRecord>>) -> Self {
        Self {
            corpus,
            corpus_index: OnceLock::new(),
            clients: Vec::new(),
            classifier: Arc::new(RuleClassifier::default()),
            reranker: Arc::new(TokenOverlapScorer),
            clock: Arc::new(SystemClock),
        }
    }

    pub fn with_clients(mut self, clients: Vec<SourceClient>) -> Self {
        self.clients = clients;
        self
    }

    pub fn with_classifier(mut self, classifier: Arc<dyn IntentClassifier>) -> Self {
        self.classifier = classifier;
        self
    }

    pub fn with_reranker(mut self, reranker: Arc<dyn RerankScorer>) -> Self {
        self.reranker = reranker;
        self
    }

    pub fn with_clock(mut self, clock: Arc<dyn Clock>) -> Self {
        self.clock = clock;
        self
    }

    pub fn corpus(&self) -> &[PaperRecord] {
        &self.corpus
    }

    pub fn classifier(&self) -> &dyn IntentClassifier {
        self.classifier.as_ref()
    }

    /// Index over the whole corpus, reused by unfiltered offline searches.
    fn corpus_index(&self) -> Option<&Bm25Index> {
        self.corpus_index
            .get_or_init(|| {
                let docs: Vec<(&str, String)> = self
                    .corpus
                    .iter()
                    .map(|p| (p.id.as_str(), searchable_text(p)))
                    .collect();
                Bm25Index::build(&docs, Bm25Params::default()).ok()
            })
            .as_ref()
    }

    /// Runs every stage of `config.structure`, writing artifacts to
    /// `output_dir` after each one when given.
    pub fn run(&self, query: &str, config: PipelineConfig, output_dir: Option<&Path>) -> Result<PipelineState> {
        self.run_observed(query, config, output_dir, &mut |_, _| {})
    }

    /// Like [`Engine::run`], calling `observe` once each stage has logged
    /// its step and written its artifacts.
    pub fn run_observed(
        &self,
        query: &str,
        config: PipelineConfig,
        output_dir: Option<&Path>,
        observe: &mut dyn FnMut(Stage, &PipelineState),
    ) -> Result<PipelineState> {
        config.validate()?;
        if let Some(dir) = output_dir {
            std::fs::create_dir_all(dir).map_err(|source| Error::ArtifactWrite {
                artifact: dir.display().to_string(),
                source,
            })?;
        }
        let mut run = Run {
            engine: self,
            state: PipelineState::new(query, config, output_dir.map(Path::to_path_buf)),
            search_text: query.to_string(),
            sort: SortCriterion::Combined,
            filter: CorpusFilter::default(),
            search_mode: SourceMode::Offline,
            max_results: 0,
        };
        run.resolve(None);
        for &stage in run.state.config.structure.stages() {
            run.execute(stage)?;
            observe(stage, &run.state);
        }
        Ok(run.state)
    }
}

/// Offline-only convenience wrapper around [`Engine::run`].
pub fn run_pipeline(
    corpus: &[PaperRecord],
    query: &str,
    config: PipelineConfig,
    output_dir: Option<&Path>,
) -> Result<PipelineState> {
    Engine::new(corpus.to_vec()).run(query, config, output_dir)
}

struct Run<'e> {
    engine: &'e Engine,
    state: PipelineState,
    /// Text the search and scoring stages rank against.
    search_text: String,
    sort: SortCriterion,
    filter: CorpusFilter,
    search_mode: SourceMode,
    max_results: usize,
}

type Params = BTreeMap<String, String>;

fn param(params: &mut Params, key: &str, value: impl ToString) {
    params.insert(key.to_string(), value.to_string());
}

impl Run<'_> {
    /// Merges explicit config, intent (when present) and defaults.
    /// Explicit config always wins.
    fn resolve(&mut self, intent: Option<&QueryIntent>) {
        let cfg = &self.state.config;
        self.state.resolved_mode = cfg.mode.or(intent.and_then(|i| i.mode)).unwrap_or_default();
        self.search_mode = cfg
            .search_mode
            .or(intent.and_then(|i| i.search_mode))
            .unwrap_or_default();
        self.sort = intent.and_then(|i| i.sort_preference).unwrap_or_default();
        let mut filter = cfg.filter.clone();
        if let Some(i) = intent {
            if filter.conferences.is_empty() {
                filter.conferences = i.conferences.clone();
            }
            filter.year_min = filter.year_min.or(i.year_min);
            filter.year_max = filter.year_max.or(i.year_max);
            if filter.validate().is_err() {
                // config bounds contradict intent bounds; keep config's
                filter.year_min = cfg.filter.year_min;
                filter.year_max = cfg.filter.year_max;
            }
        }
        self.filter = filter;
        // "top 10" in the text can only shrink the configured cap
        self.max_results = intent
            .and_then(|i| i.max_results)
            .map_or(cfg.max_results, |n| n.clamp(1, cfg.max_results));
    }

    fn execute(&mut self, stage: Stage) -> Result<()> {
        let (action, params) = match stage {
            Stage::Intent => self.intent(),
            Stage::Search => self.search()?,
            Stage::Dedup => self.dedup(),
            Stage::Score => self.score()?,
            Stage::Sort => self.sort(),
            Stage::Diversify => self.diversify()?,
            Stage::Analyze => self.analyze(),
            Stage::Export => ("regenerate artifacts".to_string(), Params::new()),
        };
        self.log(stage, action, params);
        if let Some(target) = self.state.config.target.clone() {
            let truth = GroundTruth {
                query: self.state.query.clone(),
                target,
                filters: None,
            };
            self.state.metrics_log.push(StepMetrics {
                step: self.state.step,
                stage_name: stage.as_str().to_string(),
                metrics: compute_metrics(&self.state.papers, &truth, &DEFAULT_KS),
            });
        }
        if let Some(dir) = self.state.output_dir.clone() {
            crate::exports::write_all(&self.state, &dir)?;
        }
        Ok(())
    }

    fn log(&mut self, stage: Stage, action: String, params: Params) {
        let preview = preview(&self.state.papers);
        self.state.step_log.push(StepEntry {
            timestamp: self.engine.clock.now().to_rfc3339_opts(SecondsFormat::Secs, true),
            stage_name: stage.as_str().to_string(),
            action,
            params,
            result_preview: preview,
            paper_count: self.state.papers.len(),
        });
        self.state.step = self.state.step_log.len();
    }

    fn warn(&mut self, params: &mut Params, message: String) {
        param(params, "warning", &message);
        self.state.warnings.push(message);
    }

    fn intent(&mut self) -> (String, Params) {
        let (intent, spec) = self.engine.classifier.classify(&self.state.query);
        self.resolve(Some(&intent));
        if !intent.search_text.trim().is_empty() {
            self.search_text = intent.search_text.clone();
        }
        let mut params = Params::new();
        param(&mut params, "search_text", &self.search_text);
        param(&mut params, "mode", self.state.resolved_mode);
        param(&mut params, "search_mode", self.search_mode);
        param(&mut params, "sort", self.sort);
        if !self.filter.conferences.is_empty() {
            let confs: Vec<&str> = self.filter.conferences.iter().map(String::as_str).collect();
            param(&mut params, "conferences", confs.join(","));
        }
        if let Some(y) = self.filter.year_min {
            param(&mut params, "year_min", y);
        }
        if let Some(y) = self.filter.year_max {
            param(&mut params, "year_max", y);
        }
        if !spec.negative_keywords.is_empty() {
            param(&mut params, "negative_keywords", spec.negative_keywords.join(","));
        }
        if !spec.required_constraints.is_empty() {
            param(
                &mut params,
                "required_constraints",
                spec.required_constraints.join(" | "),
            );
        }
        self.state.intent = Some(intent);
        self.state.search_spec = Some(spec);
        ("classify query intent".to_string(), params)
    }

    /// True when the record survives the search spec's negative keywords and required phrases.
    fn satisfies_spec(&self, p: &PaperRecord) -> bool {
        let Some(spec) = &self.state.search_spec else {
            return true;
        };
        if !spec.has_constraints() {
            return true;
        }
        let text = searchable_text(p);
        let normalized = format!(" {} ", normalize_title(&text));
        let tokens: std::collections::HashSet<String> = tokenize(&text).into_iter().collect();
        spec.negative_keywords
            .iter()
            .all(|n| !tokens.contains(&n.to_lowercase()))
            && spec
                .required_constraints
                .iter()
                .all(|r| normalized.contains(&format!(" {} ", normalize_title(r))))
    }

    fn search(&mut self) -> Result<(String, Params)> {
        let mut params = Params::new();
        let cfg_retrieval = self.state.config.retrieval;
        param(&mut params, "query", &self.search_text);
        param(&mut params, "retrieval", cfg_retrieval);
        param(&mut params, "search_mode", self.search_mode);
        param(&mut params, "max_results", self.max_results);

        let mut found = Vec::new();
        if self.search_mode.uses_offline() {
            let offline = self.search_offline()?;
            param(&mut params, "offline_hits", offline.len());
            found.extend(offline);
        }
        if self.search_mode.uses_online() {
            match aggregate_online(&self.engine.clients, &self.search_text, self.max_results) {
                Ok((records, outcomes)) => {
                    for o in &outcomes {
                        param(
                            &mut params,
                            &format!("source.{}", o.source),
                            format!(
                                "{} ({} records, {} ms)",
                                o.status,
                                o.records.len(),
                                o.latency.as_millis()
                            ),
                        );
                    }
                    let before = records.len();
                    let kept: Vec<PaperRecord> = records
                        .into_iter()
                        .filter(|p| self.filter.matches(p) && self.satisfies_spec(p))
                        .collect();
                    param(&mut params, "online_hits", kept.len());
                    if kept.len() < before {
                        param(&mut params, "online_filtered_out", before - kept.len());
                    }
                    found.extend(kept);
                }
                Err(e) => self.warn(&mut params, format!("online retrieval unavailable: {e}")),
            }
        }
        if found.is_empty() {
            self.warn(&mut params, "retrieval returned no papers".to_string());
        }
        assign_ranks(&mut found);
        self.state.papers = found;
        Ok((format!("{} retrieval", cfg_retrieval), params))
    }

    fn search_offline(&self) -> Result<Vec<PaperRecord>> {
        let corpus = self.engine.corpus();
        let unconstrained =
            self.filter.is_empty() && !self.state.search_spec.as_ref().is_some_and(SearchSpec::has_constraints);
        let pool: Vec<&PaperRecord> = if unconstrained {
            corpus.iter().collect()
        } else {
            corpus
                .iter()
                .filter(|p| self.filter.matches(p) && self.satisfies_spec(p))
                .collect()
        };
        if pool.is_empty() {
            return Ok(Vec::new());
        }
        let k = self.max_results;
        if tokenize(&self.search_text).is_empty() {
            // Nothing to rank on; a pure filter query lists matches in corpus order.
            return Ok(if unconstrained {
                Vec::new()
            } else {
                pool.into_iter().take(k).cloned().collect()
            });
        }
        let docs: Vec<(&str, String)> = pool.iter().map(|p| (p.id.as_str(), searchable_text(p))).collect();
        let local_index;
        let index = match (unconstrained, self.engine.corpus_index()) {
            (true, Some(idx)) => idx,
            _ => {
                local_index = Bm25Index::build(&docs, Bm25Params::default())?;
                &local_index
            }
        };
        let q = self.search_text.as_str();
        let hits = match self.state.config.retrieval {
            RetrievalMethod::Bm25 => index.search(q, k),
            RetrievalMethod::Simple => simple_search(q, &docs, k),
            RetrievalMethod::Hybrid => hybrid_search(index, &docs, q, k),
            RetrievalMethod::Bm25Rerank => multistage_search(
                index,
                &docs,
                self.engine.reranker.as_ref(),
                q,
                DEFAULT_FIRST_K.max(k),
                k,
            )?,
        };
        let by_id: HashMap<&str, &PaperRecord> = pool.iter().map(|p| (p.id.as_str(), *p)).collect();
        Ok(hits
            .into_iter()
            .filter_map(|(id, _)| by_id.get(id.as_str()).map(|p| (*p).clone()))
            .collect())
    }

    fn dedup(&mut self) -> (String, Params) {
        let before = self.state.papers.len();
        let mut papers = dedup(std::mem::take(&mut self.state.papers));
        let removed = before - papers.len();
        papers.truncate(self.max_results);
        assign_ranks(&mut papers);
        self.state.papers = papers;
        let mut params = Params::new();
        param(&mut params, "input", before);
        param(&mut params, "removed", removed);
        ("doi then title deduplication".to_string(), params)
    }

    fn score(&mut self) -> Result<(String, Params)> {
        let weights = self.state.config.weights_for(self.state.resolved_mode);
        score_candidates(&self.search_text, &mut self.state.papers, &weights)?;
        let mut params = Params::new();
        param(&mut params, "mode", self.state.resolved_mode);
        param(
            &mut params,
            "weights",
            format!(
                "{},{},{},{},{}",
                weights.w_s, weights.w_r, weights.w_n, weights.w_b, weights.w_c
            ),
        );
        Ok(("multi-criteria scoring".to_string(), params))
    }

    fn sort(&mut self) -> (String, Params) {
        sort_papers(&mut self.state.papers, self.sort);
        let mut params = Params::new();
        param(&mut params, "criterion", self.sort);
        (format!("sort by {}", self.sort), params)
    }

    fn diversify(&mut self) -> Result<(String, Params)> {
        let cfg = DiversityConfig::for_mode(self.state.resolved_mode);
        let mut params = Params::new();
        param(&mut params, "lambda", cfg.lambda);
        param(&mut params, "window", cfg.window);
        // An explicit non-combined sort request is honored as-is.
        if self.sort == SortCriterion::Combined && self.state.papers.len() > 1 {
            let texts: Vec<String> = self.state.papers.iter().map(PaperRecord::title_abstract).collect();
            let model = TfIdfModel::fit(&texts)?;
            let papers = std::mem::take(&mut self.state.papers);
            self.state.papers = mmr_rerank(papers, &self.search_text, cfg.lambda, cfg.window, &model);
            assign_ranks(&mut self.state.papers);
        } else {
            param(&mut params, "mmr", "skipped");
        }
        self.state.hidden_gems = hidden_gems(&self.state.papers, cfg.gems_rank_floor, cfg.gems_take);
        self.state.canonical_papers = canonical_papers(&self.state.papers, cfg.canonical_percentile, &cfg.top_venues);
        param(&mut params, "hidden_gems", self.state.hidden_gems.len());
        param(&mut params, "canonical_papers", self.state.canonical_papers.len());
        Ok(("mmr diversification".to_string(), params))
    }

    fn analyze(&mut self) -> (String, Params) {
        let stats = compute_stats(&self.state.papers);
        self.state.insights = generate_insights(&stats, &self.state.papers);
        let mut params = Params::new();
        param(&mut params, "insights", self.state.insights.len());
        ("statistics and insights".to_string(), params)
    }
}

/// Titles of the current list, cut to [`PREVIEW_LIMIT`] characters.
fn preview(papers: &[PaperRecord]) -> String {
    let joined = papers
        .iter()
        .take(5)
        .map(|p| p.title.as_str())
        .collect::<Vec<_>>()
        .join("; ");
    if joined.chars().count() <= PREVIEW_LIMIT {
        joined
    } else {
        let mut cut: String = joined.chars().take(PREVIEW_LIMIT - 3).collect();
        cut.push_str("...");
        cut
    }
}
