//! Concurrent fan-out to the four online sources, replayed from recorded
//! responses. Pass `--live` to hit the real APIs instead.

use std::sync::Arc;
use std::time::Duration;

use litscout::connectors::{
    aggregate_online, HttpResponse, SourceClient, SourceConfig, Transport, TransportError, UreqTransport,
};
use litscout::Source;

/// Serves a canned body per host.
struct Replay;

impl Transport for Replay {
    fn get(&self, url: &str, _: &[(String, String)], _: Duration) -> Result<HttpResponse, TransportError> {
        let body = if url.contains("arxiv") {
            include_str!("../tests/fixtures/arxiv.xml")
        } else if url.contains("semanticscholar") {
            include_str!("../tests/fixtures/semantic_scholar.json")
        } else if url.contains("openalex") {
            include_str!("../tests/fixtures/openalex.json")
        } else if url.contains("dblp") {
            include_str!("../tests/fixtures/dblp.json")
        } else {
            return Ok(HttpResponse {
                status: 404,
                body: String::new(),
            });
        };
        Ok(HttpResponse::ok(body))
    }
}

fn main() -> litscout::Result<()> {
    let live = std::env::args().any(|a| a == "--live");
    let transport: Arc<dyn Transport> = if live {
        Arc::new(UreqTransport)
    } else {
        Arc::new(Replay)
    };
    let clients: Vec<SourceClient> = Source::ONLINE
        .iter()
        .map(|&s| SourceClient::new(SourceConfig::from_env(s), transport.clone()))
        .collect();

    let (records, outcomes) = aggregate_online(&clients, "sparse retrieval", 5)?;
    for o in &outcomes {
        println!(
            "{:<17} {:<11} {} records in {:?}",
            o.source,
            o.status,
            o.records.len(),
            o.latency
        );
    }
    for p in &records {
        println!(
            "  [{}] {} ({} {}) doi={} cites={}",
            p.source,
            p.title,
            p.venue,
            p.year.map_or_else(String::new, |y| y.to_string()),
            p.doi.as_deref().unwrap_or("-"),
            p.citations.map_or_else(|| "-".into(), |c| c.to_string())
        );
    }
    let merged = litscout::pipeline::dedup(records);
    println!("after dedup: {} records", merged.len());
    Ok(())
}
