use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read corpus {path}: {source}")]
    CorpusIo {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("corpus {path} is not a JSON array of records: {message}")]
    CorpusFormat { path: PathBuf, message: String },

    #[error("invalid filter: {0}")]
    InvalidFilter(String),

    #[error("cannot fit a model on an empty document list")]
    EmptyDocuments,

    #[error("cannot take the centroid of zero vectors")]
    EmptyCentroid,

    #[error("duplicate document id `{0}`")]
    DuplicateDocId(String),

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("unknown sort criterion `{0}`")]
    UnknownCriterion(String),

    #[error("reranker `{scorer}` failed on (query `{query}`, doc `{doc_id}`): {message}")]
    Rerank {
        scorer: String,
        query: String,
        doc_id: String,
        message: String,
    },

    #[error("no online source is enabled")]
    NoSources,

    #[error("all online sources failed: {}", summarize_outcomes(.0))]
    AllSourcesFailed(Vec<crate::connectors::FetchOutcome>),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("failed to write artifact {artifact}: {source}")]
    ArtifactWrite {
        artifact: String,
        #[source]
        source: std::io::Error,
    },

    #[error("failed to read saved state from {path}: {message}")]
    StateRead { path: PathBuf, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn summarize_outcomes(outcomes: &[crate::connectors::FetchOutcome]) -> String {
    outcomes
        .iter()
        .map(|o| format!("{}={}", o.source, o.status))
        .collect::<Vec<_>>()
        .join(", ")
}
