//! Serves the HTTP API over the sample corpus.
//!
//! cargo run --example http_service -- [port]
//!
//! then, for example:
//!   curl localhost:8080/v1/modes
//!   curl -X PUT localhost:8080/v1/modes/discovery -d '{"w_s":0.25,"w_r":0.15,"w_n":0.4,"w_b":0.2}'
//!   curl -X POST localhost:8080/v1/discover -d '{"query":"diffusion models since 2021","max_results":5}'

use std::net::SocketAddr;
use std::sync::Arc;

use litscout::corpus::load_corpus;
use litscout::service::{serve, AppState};
use litscout::{CorpusFilter, Engine};

#[tokio::main]
async fn main() -> litscout::Result<()> {
    let port: u16 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(8080);
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/sample_corpus.json");
    let (corpus, _) = load_corpus(path.as_ref(), &CorpusFilter::default())?;
    let app = Arc::new(AppState::new(Arc::new(Engine::new(corpus)), None));
    let addr = SocketAddr::from(([127, 0, 0, 1], port));
    println!("listening on http://{addr}");
    serve(addr, app).await?;
    Ok(())
}
