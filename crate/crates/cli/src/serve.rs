//! Local HTTP service over the wire API.

use std::collections::HashMap;
use std::net::SocketAddr;

use axum::body::Body;
use axum::extract::Query;
use axum::http::{header, StatusCode};
use axum::response::Response;
use axum::routing::{get, post};
use axum::Router;
use serde::Deserialize;
use ssmach::api::{self, RenderFormat, Reply};
use ssmach::validator::Mode;

fn respond(reply: Reply) -> Response {
    Response::builder()
        .status(StatusCode::from_u16(reply.outcome.http_status()).unwrap_or(StatusCode::OK))
        .header(header::CONTENT_TYPE, reply.content_type)
        .body(Body::from(reply.body))
        .expect("static headers are valid")
}

fn parse_bool(value: Option<&String>) -> Result<bool, String> {
    match value.map(String::as_str) {
        None | Some("false") | Some("0") => Ok(false),
        Some("true") | Some("1") | Some("") => Ok(true),
        Some(other) => Err(format!("strict must be true or false, got {other:?}")),
    }
}

async fn parse(body: String) -> Response {
    respond(api::parse(&body))
}

async fn validate(Query(query): Query<HashMap<String, String>>, body: String) -> Response {
    match parse_bool(query.get("strict")) {
        Ok(strict) => {
            let mode = if strict { Mode::Strict } else { Mode::Default };
            respond(api::validate(&body, mode))
        }
        Err(e) => respond(Reply::bad_request(e)),
    }
}

async fn render(Query(query): Query<HashMap<String, String>>, body: String) -> Response {
    let format = match query.get("format") {
        Some(f) => f.parse::<RenderFormat>(),
        None => Err("missing format; expected html or svg".to_string()),
    };
    match format {
        Ok(format) => respond(api::render(&body, format)),
        Err(e) => respond(Reply::bad_request(e)),
    }
}

#[derive(Deserialize)]
struct DiffRequest {
    old: String,
    new: String,
}

async fn diff(body: String) -> Response {
    match serde_json::from_str::<DiffRequest>(&body) {
        Ok(req) => respond(api::diff(&req.old, &req.new)),
        Err(e) => respond(Reply::bad_request(format!(
            "expected a JSON object with string fields \"old\" and \"new\": {e}"
        ))),
    }
}

pub fn router() -> Router {
    Router::new()
        .route("/parse", post(parse))
        .route("/validate", post(validate))
        .route("/render", post(render))
        .route("/diff", post(diff))
        .route("/schema", get(|| async { respond(api::schema()) }))
        .route("/health", get(|| async { respond(api::health()) }))
}

/// Binds 127.0.0.1:`port` and serves until Ctrl-C.
pub fn run(port: u16) -> anyhow::Result<()> {
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(async move {
        let listener = tokio::net::TcpListener::bind(SocketAddr::from(([127, 0, 0, 1], port))).await?;
        let addr = listener.local_addr()?;
        eprintln!("listening on http://{addr}");
        axum::serve(listener, router())
            .with_graceful_shutdown(async {
                let _ = tokio::signal::ctrl_c().await;
            })
            .await?;
        Ok(())
    })
}
