//! HTTP and WebSocket front end for selection sessions.
//!
//! | method | path                    | body            | reply                          |
//! |--------|-------------------------|-----------------|--------------------------------|
//! | POST   | `/sessions`             | `CreateRequest` | 201 `SessionDescriptor`        |
//! | POST   | `/sessions/:id/input`   | `ClientInput`   | 200 array of `SequencedEvent`  |
//! | GET    | `/sessions/:id`         |                 | 200 `Snapshot`                 |
//! | DELETE | `/sessions/:id`         |                 | 204                            |
//! | GET    | `/sessions/:id/stream`  | WebSocket       | newline-delimited JSON         |
//!
//! On the stream every text frame from the client holds one or more
//! `ClientInput` lines; the server answers each frame with one text frame
//! holding one `SequencedEvent` per line, or a single `{"error":..}` line.
//! Errors over HTTP use status 400 (validation), 404 (unknown session) or
//! 409 (protocol) with a body of `{"error": kind, "message": text}`.

use std::future::Future;
use std::net::SocketAddr;
use std::sync::Arc;

use axum::extract::ws::{Message, WebSocket, WebSocketUpgrade};
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use onedtouch_core::session::{ClientInput, CreateRequest, SessionError, SessionManager};
use serde_json::json;
use tokio::net::TcpListener;

pub use onedtouch_core::session;

struct ApiError(SessionError);

fn classify(e: &SessionError) -> (StatusCode, serde_json::Value) {
    let (status, kind) = match e {
        SessionError::NotFound(_) => (StatusCode::NOT_FOUND, "not_found"),
        SessionError::Validation(_) => (StatusCode::BAD_REQUEST, "validation"),
        SessionError::Protocol(_) => (StatusCode::CONFLICT, "protocol"),
    };
    (status, json!({ "error": kind, "message": e.to_string() }))
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let (status, body) = classify(&self.0);
        (status, Json(body)).into_response()
    }
}

impl From<SessionError> for ApiError {
    fn from(e: SessionError) -> Self {
        ApiError(e)
    }
}

type Shared = Arc<SessionManager>;

pub fn router(manager: Shared) -> Router {
    Router::new()
        .route("/sessions", post(create))
        .route("/sessions/:id", get(snapshot).delete(remove))
        .route("/sessions/:id/input", post(input))
        .route("/sessions/:id/stream", get(stream))
        .with_state(manager)
}

/// Serves until `shutdown` resolves, then lets in-flight requests finish.
pub async fn serve(
    listener: TcpListener,
    manager: Shared,
    shutdown: impl Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    axum::serve(listener, router(manager)).with_graceful_shutdown(shutdown).await
}

pub async fn bind(addr: SocketAddr) -> std::io::Result<TcpListener> {
    TcpListener::bind(addr).await
}

async fn create(State(manager): State<Shared>, Json(request): Json<CreateRequest>) -> Result<Response, ApiError> {
    // Fetching parses from an endpoint blocks.
    let descriptor = tokio::task::spawn_blocking(move || manager.create(request))
        .await
        .map_err(|e| SessionError::Validation(format!("session setup failed: {e}")))??;
    if let Some(warning) = &descriptor.warning {
        log::warn!("session {} uses the flat tree: {warning}", descriptor.id);
    }
    Ok((StatusCode::CREATED, Json(descriptor)).into_response())
}

async fn input(
    State(manager): State<Shared>,
    Path(id): Path<String>,
    Json(input): Json<ClientInput>,
) -> Result<Response, ApiError> {
    Ok(Json(manager.input(&id, input)?).into_response())
}

async fn snapshot(State(manager): State<Shared>, Path(id): Path<String>) -> Result<Response, ApiError> {
    Ok(Json(manager.snapshot(&id)?).into_response())
}

async fn remove(State(manager): State<Shared>, Path(id): Path<String>) -> Result<StatusCode, ApiError> {
    manager.delete(&id)?;
    Ok(StatusCode::NO_CONTENT)
}

async fn stream(
    State(manager): State<Shared>,
    Path(id): Path<String>,
    upgrade: WebSocketUpgrade,
) -> Result<Response, ApiError> {
    manager.snapshot(&id)?;
    Ok(upgrade.on_upgrade(move |socket| run_stream(socket, manager, id)))
}

async fn run_stream(mut socket: WebSocket, manager: Shared, id: String) {
    while let Some(Ok(message)) = socket.recv().await {
        let text = match message {
            Message::Text(text) => text,
            Message::Close(_) => break,
            _ => continue,
        };
        let reply = handle_lines(&manager, &id, &text);
        if socket.send(Message::Text(reply)).await.is_err() {
            break;
        }
    }
}

/// Applies each input line in order. Stops at the first failing line;
/// events from earlier lines are still returned before the error.
fn handle_lines(manager: &SessionManager, id: &str, text: &str) -> String {
    let mut out = String::new();
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let result = serde_json::from_str::<ClientInput>(line)
            .map_err(|e| SessionError::Protocol(format!("bad input line: {e}")))
            .and_then(|input| manager.input(id, input));
        match result {
            Ok(events) => {
                for e in events {
                    out.push_str(&serde_json::to_string(&e).expect("events serialize"));
                    out.push('\n');
                }
            }
            Err(e) => {
                out.push_str(&classify(&e).1.to_string());
                out.push('\n');
                break;
            }
        }
    }
    out
}
