//! Transport-independent session handling behind the network service.
//!
//! Each session owns one engine. Inputs to a session are applied one at a
//! time under its own lock, so sessions never block each other.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;
use uuid::Uuid;

use crate::corpus::{Corpus, ParseSource};
use crate::gesture::{EngineEvent, GestureConfig, GestureEngine, Mode, Phase};
use crate::replay::{TouchKind, TraceEvent};
use crate::text::{Token, TokenRange};

pub const DEFAULT_PARSE_TIMEOUT_MS: u64 = 5000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SessionError {
    #[error("no session {0}")]
    NotFound(String),
    #[error("invalid request: {0}")]
    Validation(String),
    #[error("protocol error: {0}")]
    Protocol(String),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ParseRequest {
    Inline {
        lines: Vec<String>,
    },
    Endpoint {
        url: String,
        #[serde(default)]
        timeout_ms: Option<u64>,
    },
    #[default]
    Fallback,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CreateRequest {
    pub text: String,
    /// Falls back to the manager's default mode.
    #[serde(default)]
    pub mode: Option<Mode>,
    /// Partial config laid over the server's defaults.
    #[serde(default)]
    pub config: Option<Value>,
    #[serde(default)]
    pub parse: ParseRequest,
    /// When set, lifting with exactly this selection emits `Completed`.
    #[serde(default)]
    pub target: Option<TokenRange>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionDescriptor {
    pub id: String,
    pub mode: Mode,
    pub fallback: bool,
    /// Why the requested parse was not used.
    pub warning: Option<String>,
    pub config: GestureConfig,
    pub tokens: Vec<Token>,
}

/// A trace event as sent by a client; the timestamp may be left out.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClientInput {
    #[serde(default)]
    pub t_ms: Option<u64>,
    pub kind: TouchKind,
    pub x_px: f64,
    pub y_px: f64,
    #[serde(default)]
    pub token_hit: Option<usize>,
}

impl From<TraceEvent> for ClientInput {
    fn from(e: TraceEvent) -> Self {
        ClientInput { t_ms: Some(e.t_ms), kind: e.kind, x_px: e.x_px, y_px: e.y_px, token_hit: e.token_hit }
    }
}

/// An engine event numbered within its session, starting at 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequencedEvent {
    pub seq: u64,
    #[serde(flatten)]
    pub event: EngineEvent,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BracketRanges {
    pub backward: Vec<TokenRange>,
    pub forward: Vec<TokenRange>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub seq: u64,
    pub phase: Phase,
    pub mode: Mode,
    pub fallback: bool,
    pub selection: Option<TokenRange>,
    pub brackets: Option<BracketRanges>,
    pub alpha: f64,
    pub pending: Option<TokenRange>,
}

struct Session {
    engine: GestureEngine,
    seq: u64,
    last_t: Option<u64>,
    finger_down: bool,
    started: Instant,
}

impl Session {
    fn apply(&mut self, input: ClientInput) -> Result<Vec<SequencedEvent>, SessionError> {
        let len = self.engine.corpus().doc().len();
        if let Some(index) = input.token_hit.filter(|&i| i >= len) {
            return Err(SessionError::Protocol(format!("token_hit {index} outside document of {len} tokens")));
        }
        if !input.x_px.is_finite() || !input.y_px.is_finite() {
            return Err(SessionError::Protocol("coordinates must be finite".into()));
        }
        match (input.kind, self.finger_down) {
            (TouchKind::Down, true) => return Err(SessionError::Protocol("Down while a touch is in progress".into())),
            (TouchKind::Move | TouchKind::Up, false) => {
                return Err(SessionError::Protocol(format!("{:?} without a preceding Down", input.kind)))
            }
            _ => {}
        }
        let t_ms = match input.t_ms {
            Some(t) => t,
            None => {
                let now = self.started.elapsed().as_millis() as u64;
                now.max(self.last_t.unwrap_or(0))
            }
        };
        if let Some(last) = self.last_t.filter(|&last| t_ms < last) {
            return Err(SessionError::Protocol(format!("timestamp {t_ms} is earlier than the previous {last}")));
        }
        self.last_t = Some(t_ms);
        self.finger_down = input.kind != TouchKind::Up;

        let event =
            TraceEvent { t_ms, kind: input.kind, x_px: input.x_px, y_px: input.y_px, token_hit: input.token_hit };
        Ok(self
            .engine
            .feed(&event)
            .into_iter()
            .map(|event| {
                self.seq += 1;
                SequencedEvent { seq: self.seq, event }
            })
            .collect())
    }

    fn snapshot(&self) -> Snapshot {
        let state = self.engine.state();
        let (alpha, pending) = self.engine.progress();
        Snapshot {
            seq: self.seq,
            phase: state.phase,
            mode: state.mode,
            fallback: self.engine.corpus().is_fallback(),
            selection: state.selection,
            brackets: self.engine.brackets().map(|b| BracketRanges {
                backward: b.backward.iter().map(|c| c.range).collect(),
                forward: b.forward.iter().map(|c| c.range).collect(),
            }),
            alpha,
            pending,
        }
    }
}

/// All live sessions. Cheap to share behind an `Arc`.
pub struct SessionManager {
    sessions: Mutex<HashMap<String, Arc<Mutex<Session>>>>,
    defaults: GestureConfig,
    default_mode: Mode,
}

impl SessionManager {
    /// Sessions default to Chunk mode.
    pub fn new(defaults: GestureConfig) -> Self {
        SessionManager { sessions: Mutex::new(HashMap::new()), defaults, default_mode: Mode::Chunk }
    }

    pub fn with_default_mode(mut self, mode: Mode) -> Self {
        self.default_mode = mode;
        self
    }

    pub fn defaults(&self) -> &GestureConfig {
        &self.defaults
    }

    /// Builds and registers a session. Fetching from a parse endpoint
    /// blocks; async callers should run this off their executor.
    pub fn create(&self, request: CreateRequest) -> Result<SessionDescriptor, SessionError> {
        if request.text.trim().is_empty() {
            return Err(SessionError::Validation("text must not be empty".into()));
        }
        let config = self.config_for(request.config.as_ref())?;
        let source = match request.parse {
            ParseRequest::Inline { lines } => ParseSource::Inline(lines),
            ParseRequest::Endpoint { url, timeout_ms } => ParseSource::Endpoint {
                url,
                timeout: Duration::from_millis(timeout_ms.unwrap_or(DEFAULT_PARSE_TIMEOUT_MS)),
            },
            ParseRequest::Fallback => ParseSource::Fallback,
        };
        let (corpus, warning) = Corpus::load(&request.text, &source);
        if let Some(target) = request.target {
            corpus.doc().check_range(target).map_err(|e| SessionError::Validation(format!("target: {e}")))?;
        }
        let corpus = Arc::new(corpus);
        let mode = request.mode.unwrap_or(self.default_mode);
        let mut engine = GestureEngine::new(corpus.clone(), mode, config.clone())
            .map_err(|e| SessionError::Validation(e.to_string()))?;
        if let Some(target) = request.target {
            engine = engine.with_target(target);
        }
        let id = Uuid::new_v4().to_string();
        let descriptor = SessionDescriptor {
            id: id.clone(),
            mode,
            fallback: corpus.is_fallback(),
            warning,
            config,
            tokens: corpus.doc().tokens().to_vec(),
        };
        let session = Session { engine, seq: 0, last_t: None, finger_down: false, started: Instant::now() };
        self.sessions.lock().expect("session table poisoned").insert(id, Arc::new(Mutex::new(session)));
        Ok(descriptor)
    }

    pub fn input(&self, id: &str, input: ClientInput) -> Result<Vec<SequencedEvent>, SessionError> {
        let session = self.get(id)?;
        let mut session = session.lock().expect("session poisoned");
        session.apply(input)
    }

    pub fn snapshot(&self, id: &str) -> Result<Snapshot, SessionError> {
        let session = self.get(id)?;
        let session = session.lock().expect("session poisoned");
        Ok(session.snapshot())
    }

    pub fn delete(&self, id: &str) -> Result<(), SessionError> {
        self.sessions
            .lock()
            .expect("session table poisoned")
            .remove(id)
            .map(|_| ())
            .ok_or_else(|| SessionError::NotFound(id.to_string()))
    }

    pub fn len(&self) -> usize {
        self.sessions.lock().expect("session table poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn get(&self, id: &str) -> Result<Arc<Mutex<Session>>, SessionError> {
        self.sessions
            .lock()
            .expect("session table poisoned")
            .get(id)
            .cloned()
            .ok_or_else(|| SessionError::NotFound(id.to_string()))
    }

    fn config_for(&self, overlay: Option<&Value>) -> Result<GestureConfig, SessionError> {
        let config = match overlay {
            Some(overlay) => self.defaults.overlay(overlay).map_err(SessionError::Validation)?,
            None => self.defaults.clone(),
        };
        config.validate().map_err(|e| SessionError::Validation(e.to_string()))?;
        Ok(config)
    }
}
