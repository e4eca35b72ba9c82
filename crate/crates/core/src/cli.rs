//! Command-line entry point. Exit codes: 0 success, 1 usage error,
//! 2 runtime error.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::Write;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use crate::connectors::{SourceClient, SourceConfig, Transport, UreqTransport};
use crate::corpus::{load_corpus, CorpusFilter, PaperRecord};
use crate::error::{Error, Result};
use crate::eval::{generate_semanticbench, load_truths, run_benchmark};
use crate::exports::{to_json_bytes, write_all};
use crate::pipeline::{
    Clock, Engine, FixedClock, PipelineConfig, PipelineStructure, SourceMode, SystemClock, DEFAULT_MAX_RESULTS,
};
use crate::retrieval::RetrievalMethod;
use crate::scoring::{ModeWeights, SearchMode};
use crate::service::{AppState, DEFAULT_PORT};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_RUNTIME: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "litscout", version, about = "Deterministic literature discovery")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the discovery pipeline for one query and write all artifacts.
    Search(SearchArgs),
    /// Evaluate retrieval over a truths file.
    Benchmark(BenchmarkArgs),
    /// Generate a seeded synthetic truths file from a corpus.
    GenBench(GenBenchArgs),
    /// Serve the HTTP API.
    Serve(ServeArgs),
    /// Re-render every artifact from a saved output directory.
    Export(ExportArgs),
}

#[derive(Debug, Args)]
struct CorpusArg {
    /// Offline corpus (JSON array of paper records).
    #[arg(long, env = "CORPUS_PATH")]
    corpus: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[group(multiple = false)]
struct SourceFlags {
    /// Search the local corpus only (default).
    #[arg(long)]
    offline: bool,
    /// Query arXiv, Semantic Scholar, OpenAlex and DBLP live.
    #[arg(long)]
    online: bool,
    /// Local corpus plus live sources.
    #[arg(long)]
    both: bool,
}

impl SourceFlags {
    fn mode(&self) -> Option<SourceMode> {
        match (self.offline, self.online, self.both) {
            (true, _, _) => Some(SourceMode::Offline),
            (_, true, _) => Some(SourceMode::Online),
            (_, _, true) => Some(SourceMode::Both),
            _ => None,
        }
    }
}

fn parse_weights(s: &str) -> std::result::Result<ModeWeights, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_mode(s: &str) -> std::result::Result<SearchMode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_structure(s: &str) -> std::result::Result<PipelineStructure, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_retrieval(s: &str) -> std::result::Result<RetrievalMethod, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Args)]
struct PipelineArgs {
    /// stable | discovery | balanced (default: from query text, else balanced).
    #[arg(long, value_parser = parse_mode)]
    mode: Option<SearchMode>,
    /// full | minimal | search_sort | search_analysis | no_intent
    #[arg(long, value_parser = parse_structure)]
    structure: Option<PipelineStructure>,
    /// bm25 | simple | hybrid | bm25_rerank
    #[arg(long, value_parser = parse_retrieval, default_value = "bm25")]
    retrieval: RetrievalMethod,
    #[command(flatten)]
    sources: SourceFlags,
    /// Venue filter; repeat or comma-separate.
    #[arg(long, value_delimiter = ',')]
    conference: Vec<String>,
    #[arg(long)]
    year_min: Option<i32>,
    #[arg(long)]
    year_max: Option<i32>,
    /// Result cap, applied per source before merging and to the final list.
    #[arg(long, default_value_t = DEFAULT_MAX_RESULTS)]
    max_results: usize,
    /// w_s,w_r,w_n,w_b[,w_c]; must sum to 1.
    #[arg(long, value_parser = parse_weights, allow_hyphen_values = true)]
    weights: Option<ModeWeights>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl PipelineArgs {
    fn config(&self, default_structure: PipelineStructure) -> PipelineConfig {
        PipelineConfig {
            structure: self.structure.unwrap_or(default_structure),
            mode: self.mode,
            retrieval: self.retrieval,
            search_mode: self.sources.mode(),
            filter: CorpusFilter {
                conferences: self
                    .conference
                    .iter()
                    .map(|c| c.trim().to_string())
                    .filter(|c| !c.is_empty())
                    .collect::<BTreeSet<_>>(),
                year_min: self.year_min,
                year_max: self.year_max,
            },
            max_results: self.max_results,
            weights: self.weights,
            mode_weights: Default::default(),
            seed: self.seed,
            target: None,
        }
    }
}

#[derive(Debug, Args)]
struct SearchArgs {
    query: String,
    #[command(flatten)]
    pipeline: PipelineArgs,
    #[command(flatten)]
    corpus: CorpusArg,
    #[arg(long, env = "OUTPUT_DIR", default_value = "output")]
    out_dir: PathBuf,
    /// Gold title or id; writes retrieval_metrics.json.
    #[arg(long)]
    target: Option<String>,
}

#[derive(Debug, Args)]
struct BenchmarkArgs {
    #[arg(long)]
    truths: PathBuf,
    #[arg(long, default_value_t = 1)]
    parallelism: usize,
    #[command(flatten)]
    pipeline: PipelineArgs,
    #[command(flatten)]
    corpus: CorpusArg,
    /// Report directory; per-query artifacts land under `queries/`.
    #[arg(long, env = "OUTPUT_DIR", default_value = "output/benchmark")]
    out_dir: PathBuf,
}

#[derive(Debug, Args)]
struct GenBenchArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    corpus: CorpusArg,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ServeArgs {
    #[arg(long, env = "PORT", default_value_t = DEFAULT_PORT)]
    port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    host: std::net::IpAddr,
    #[command(flatten)]
    corpus: CorpusArg,
    /// Per-request artifacts are written here when set.
    #[arg(long, env = "OUTPUT_DIR")]
    out_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ExportArgs {
    /// Directory holding summary.json and papers.json.
    #[arg(long)]
    state: PathBuf,
    /// Destination; defaults to the state directory.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

/// `SOURCE_DATE_EPOCH` pins step timestamps for reproducible output.
fn clock_from_env() -> Arc<dyn Clock> {
    match std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|v| v.trim().parse::<i64>().ok())
    {
        Some(secs) => Arc::new(FixedClock::from_unix(secs)),
        None => Arc::new(SystemClock),
    }
}

fn load(corpus: &CorpusArg, required: bool) -> Result<Vec<PaperRecord>> {
    match &corpus.corpus {
        Some(path) => {
            let (papers, report) = load_corpus(path, &CorpusFilter::default())?;
            if report.skipped > 0 {
                eprintln!(
                    "warning: skipped {} invalid records in {}",
                    report.skipped,
                    path.display()
                );
                for r in report.reasons.iter().take(5) {
                    eprintln!("  record {}: {}", r.index, r.reason);
                }
            }
            Ok(papers)
        }
        None if required => Err(Error::Config(
            "no corpus given; pass --corpus or set CORPUS_PATH".into(),
        )),
        None => Ok(Vec::new()),
    }
}

fn online_clients() -> Vec<SourceClient> {
    let transport: Arc<dyn Transport> = Arc::new(UreqTransport);
    SourceConfig::all_from_env()
        .into_iter()
        .map(|c| SourceClient::new(c, transport.clone()))
        .collect()
}

fn engine_for(corpus: Vec<PaperRecord>, online: bool) -> Engine {
    let engine = Engine::new(corpus).with_clock(clock_from_env());
    if online {
        engine.with_clients(online_clients())
    } else {
        engine
    }
}

fn cmd_search(args: SearchArgs, out: &mut dyn Write) -> Result<()> {
    let mut config = args.pipeline.config(PipelineStructure::Full);
    config.target = args.target;
    let wants_online = config.search_mode.is_some_and(SourceMode::uses_online);
    let offline_only = config.search_mode.is_none_or(|m| m == SourceMode::Offline);
    let corpus = load(&args.corpus, offline_only)?;
    // Intent may still ask for online sources, so clients are attached
    // unless the flags pinned offline.
    let engine = engine_for(corpus, wants_online || config.search_mode.is_none());
    let state = engine.run(&args.query, config, Some(&args.out_dir))?;
    for w in &state.warnings {
        eprintln!("warning: {w}");
    }
    writeln!(out, "{} papers -> {}", state.papers.len(), args.out_dir.display())?;
    for p in state.papers.iter().take(10) {
        let score = p
            .scores
            .map(|s| format!("{:.3}", s.combined))
            .unwrap_or_else(|| "-".into());
        writeln!(out, "{:>3}. [{score}] {}", p.rank.unwrap_or(0), p.title)?;
    }
    Ok(())
}

fn cmd_benchmark(args: BenchmarkArgs, out: &mut dyn Write) -> Result<()> {
    let truths = load_truths(&args.truths)?;
    let config = args.pipeline.config(PipelineStructure::Minimal);
    let online = config.search_mode.is_some_and(SourceMode::uses_online);
    let corpus = load(&args.corpus, !online)?;
    let engine = engine_for(corpus, online);
    let report = run_benchmark(&engine, &truths, &config, args.parallelism, Some(&args.out_dir))?;
    let a = &report.aggregate;
    writeln!(
        out,
        "queries {}  success {:.3}  hit {:.3}  mrr {:.3}  r@1 {:.3}  r@10 {:.3}  r@50 {:.3}  mean {:.1} ms  wall {:.1} ms",
        a.queries,
        a.success_rate,
        a.hit_rate,
        a.mrr,
        a.recall.get(&1).copied().unwrap_or(0.0),
        a.recall.get(&10).copied().unwrap_or(0.0),
        a.recall.get(&50).copied().unwrap_or(0.0),
        a.mean_latency_ms,
        a.total_wall_ms
    )?;
    writeln!(
        out,
        "report -> {}",
        args.out_dir.join("retrieval_metrics.json").display()
    )?;
    Ok(())
}

fn cmd_gen_bench(args: GenBenchArgs, out: &mut dyn Write) -> Result<()> {
    let corpus = load(&args.corpus, true)?;
    let truths = generate_semanticbench(&corpus, args.n, args.seed)?;
    let bytes = to_json_bytes(&truths)?;
    match args.out {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent)?;
            }
            crate::exports::write_atomic(
                path.parent()
                    .filter(|p| !p.as_os_str().is_empty())
                    .unwrap_or(Path::new(".")),
                &path
                    .file_name()
                    .map(|f| f.to_string_lossy().into_owned())
                    .unwrap_or_default(),
                &bytes,
            )?;
            writeln!(out, "{} truths -> {}", truths.len(), path.display())?;
        }
        None => out.write_all(&bytes)?,
    }
    Ok(())
}

fn cmd_serve(args: ServeArgs) -> Result<()> {
    let corpus = load(&args.corpus, true)?;
    let engine = Arc::new(engine_for(corpus, true));
    let app = Arc::new(AppState::new(engine, args.out_dir));
    let addr = SocketAddr::new(args.host, args.port);
    let rt = tokio::runtime::Builder::new_multi_thread().enable_all().build()?;
    eprintln!("listening on http://{addr}");
    rt.block_on(crate::service::serve(addr, app))?;
    Ok(())
}

fn cmd_export(args: ExportArgs, out: &mut dyn Write) -> Result<()> {
    let state = crate::exports::load_state(&args.state)?;
    let dest = args.out_dir.unwrap_or(args.state);
    let set = write_all(&state, &dest)?;
    writeln!(out, "{} artifacts -> {}", set.artifacts.len(), dest.display())?;
    Ok(())
}

/// Parses `argv` (program name first) and runs the subcommand, writing
/// normal output to `out`.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Search(a) => cmd_search(a, out),
        Command::Benchmark(a) => cmd_benchmark(a, out),
        Command::GenBench(a) => cmd_gen_bench(a, out),
        Command::Serve(a) => cmd_serve(a),
        Command::Export(a) => cmd_export(a, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e @ (Error::InvalidWeights(_) | Error::InvalidFilter(_) | Error::UnknownCriterion(_))) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_RUNTIME
        }
    }
}

pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(argv, &mut std::io::stdout().lock())
}
