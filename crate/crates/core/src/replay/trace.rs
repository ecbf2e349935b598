use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TouchKind {
    Down,
    Move,
    Up,
}

/// One recorded touch sample. `token_hit` is resolved by whoever captured
/// the trace; the engine never hit-tests.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceEvent {
    pub t_ms: u64,
    pub kind: TouchKind,
    pub x_px: f64,
    pub y_px: f64,
    #[serde(default)]
    pub token_hit: Option<usize>,
}

impl TraceEvent {
    pub fn down(t_ms: u64, x_px: f64, y_px: f64, token_hit: Option<usize>) -> Self {
        TraceEvent { t_ms, kind: TouchKind::Down, x_px, y_px, token_hit }
    }

    pub fn moved(t_ms: u64, x_px: f64, y_px: f64) -> Self {
        TraceEvent { t_ms, kind: TouchKind::Move, x_px, y_px, token_hit: None }
    }

    pub fn up(t_ms: u64, x_px: f64, y_px: f64) -> Self {
        TraceEvent { t_ms, kind: TouchKind::Up, x_px, y_px, token_hit: None }
    }
}

/// A problem in a trace. `line` is 1-based and counts blank lines, so it
/// points into the file as written.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum TraceError {
    #[error("trace line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("trace line {line}: timestamp {t_ms} is earlier than the previous {previous}")]
    OutOfOrder { line: usize, t_ms: u64, previous: u64 },
    #[error("trace line {line}: {kind:?} while the finger is {state}")]
    BadSequence { line: usize, kind: TouchKind, state: &'static str },
    #[error("trace line {line}: token_hit {index} is outside the document ({len} tokens)")]
    TokenOutOfRange { line: usize, index: usize, len: usize },
}

/// Parses a JSON-lines trace and checks ordering and Down/Up alternation.
pub fn parse_trace(text: &str) -> Result<Vec<TraceEvent>, TraceError> {
    let mut events = Vec::new();
    let mut lines = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let event: TraceEvent =
            serde_json::from_str(line).map_err(|e| TraceError::Malformed { line: i + 1, message: e.to_string() })?;
        events.push(event);
        lines.push(i + 1);
    }
    check_sequence(&events, |i| lines[i])?;
    Ok(events)
}

/// Same checks as [`parse_trace`] on an in-memory trace; positions are
/// reported 1-based.
pub fn validate_trace(events: &[TraceEvent]) -> Result<(), TraceError> {
    check_sequence(events, |i| i + 1)
}

/// A trace whose final gesture has not been lifted is still well formed.
fn check_sequence(events: &[TraceEvent], line_of: impl Fn(usize) -> usize) -> Result<(), TraceError> {
    let mut down = false;
    let mut previous = 0;
    for (i, e) in events.iter().enumerate() {
        let line = line_of(i);
        if e.t_ms < previous {
            return Err(TraceError::OutOfOrder { line, t_ms: e.t_ms, previous });
        }
        previous = e.t_ms;
        if !e.x_px.is_finite() || !e.y_px.is_finite() {
            return Err(TraceError::Malformed { line, message: "coordinates must be finite".into() });
        }
        match (e.kind, down) {
            (TouchKind::Down, true) => return Err(TraceError::BadSequence { line, kind: e.kind, state: "down" }),
            (TouchKind::Move | TouchKind::Up, false) => {
                return Err(TraceError::BadSequence { line, kind: e.kind, state: "up" })
            }
            (TouchKind::Down, false) => down = true,
            (TouchKind::Up, true) => down = false,
            (TouchKind::Move, true) => {}
        }
    }
    Ok(())
}

pub fn write_trace(events: &[TraceEvent]) -> String {
    let mut out = String::new();
    for e in events {
        out.push_str(&serde_json::to_string(e).expect("trace events always serialize"));
        out.push('\n');
    }
    out
}
