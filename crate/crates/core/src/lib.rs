//! Deterministic literature discovery.
//!
//! Papers come from a local JSON corpus or public scholarly APIs. They are
//! ranked by BM25 or TF-IDF, scored on similarity, recency, novelty and
//! BM25 under per-mode weights, diversified with MMR, and written out as a
//! set of synchronized artifacts after every pipeline step.

pub mod analytics;
pub mod cli;
pub mod connectors;
pub mod corpus;
pub mod diversity;
pub mod error;
pub mod eval;
pub mod exports;
pub mod intent;
pub mod pipeline;
pub mod retrieval;
pub mod scoring;
pub mod service;
pub mod synth;
pub mod text;

pub use corpus::{load_corpus, CorpusFilter, PaperRecord, Source};
pub use error::{Error, Result};
pub use pipeline::{run_pipeline, Engine, PipelineConfig, PipelineState, PipelineStructure, SourceMode};
pub use scoring::{ModeWeights, ScoreVector, SearchMode};
