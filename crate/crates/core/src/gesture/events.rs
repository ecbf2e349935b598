//! Feedback events emitted by the engine.
//!
//! On the wire every event is a JSON object with exactly three fields in
//! this order: `kind`, `t_ms`, `payload`.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::chunking::BracketPreview;
use crate::text::TokenRange;

#[derive(Debug, Clone, PartialEq)]
pub enum EventKind {
    /// A press was held long enough. `selection` is the starting selection:
    /// the anchor word for a fresh press, the existing selection for a clutch.
    Activated {
        selection: TokenRange,
        clutch: bool,
    },
    SelectionChanged(TokenRange),
    HapticTick,
    /// Ranges of the previewed chunks on each side, nearest first.
    BracketsUpdated {
        backward: Vec<TokenRange>,
        forward: Vec<TokenRange>,
    },
    ProgressAlpha {
        alpha: f64,
        pending: Option<TokenRange>,
    },
    Cleared,
    Completed,
}

impl EventKind {
    pub fn brackets(preview: &BracketPreview) -> EventKind {
        EventKind::BracketsUpdated {
            backward: preview.backward.iter().map(|c| c.range).collect(),
            forward: preview.forward.iter().map(|c| c.range).collect(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            EventKind::Activated { .. } => "Activated",
            EventKind::SelectionChanged(_) => "SelectionChanged",
            EventKind::HapticTick => "HapticTick",
            EventKind::BracketsUpdated { .. } => "BracketsUpdated",
            EventKind::ProgressAlpha { .. } => "ProgressAlpha",
            EventKind::Cleared => "Cleared",
            EventKind::Completed => "Completed",
        }
    }

    fn payload(&self) -> Value {
        match self {
            EventKind::Activated { selection, clutch } => json!({ "selection": selection, "clutch": clutch }),
            EventKind::SelectionChanged(range) => json!({ "selection": range }),
            EventKind::BracketsUpdated { backward, forward } => {
                json!({ "backward": backward, "forward": forward })
            }
            EventKind::ProgressAlpha { alpha, pending } => json!({ "alpha": alpha, "pending": pending }),
            EventKind::HapticTick | EventKind::Cleared | EventKind::Completed => Value::Null,
        }
    }

    fn from_wire(kind: &str, payload: Value) -> Result<EventKind, String> {
        fn field<T: serde::de::DeserializeOwned>(payload: &Value, name: &str) -> Result<T, String> {
            serde_json::from_value(payload.get(name).cloned().unwrap_or(Value::Null))
                .map_err(|e| format!("payload field {name}: {e}"))
        }
        Ok(match kind {
            "Activated" => {
                EventKind::Activated { selection: field(&payload, "selection")?, clutch: field(&payload, "clutch")? }
            }
            "SelectionChanged" => EventKind::SelectionChanged(field(&payload, "selection")?),
            "HapticTick" => EventKind::HapticTick,
            "BracketsUpdated" => EventKind::BracketsUpdated {
                backward: field(&payload, "backward")?,
                forward: field(&payload, "forward")?,
            },
            "ProgressAlpha" => {
                EventKind::ProgressAlpha { alpha: field(&payload, "alpha")?, pending: field(&payload, "pending")? }
            }
            "Cleared" => EventKind::Cleared,
            "Completed" => EventKind::Completed,
            other => return Err(format!("unknown event kind {other:?}")),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "WireEvent", try_from = "WireEvent")]
pub struct EngineEvent {
    pub t_ms: u64,
    pub kind: EventKind,
}

impl EngineEvent {
    pub fn new(t_ms: u64, kind: EventKind) -> Self {
        EngineEvent { t_ms, kind }
    }

    /// Single-line JSON, as written to event logs.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("events always serialize")
    }
}

#[derive(Serialize, Deserialize)]
struct WireEvent {
    kind: String,
    t_ms: u64,
    payload: Value,
}

impl From<EngineEvent> for WireEvent {
    fn from(e: EngineEvent) -> Self {
        WireEvent { kind: e.kind.name().to_string(), t_ms: e.t_ms, payload: e.kind.payload() }
    }
}

impl TryFrom<WireEvent> for EngineEvent {
    type Error = String;

    fn try_from(w: WireEvent) -> Result<Self, Self::Error> {
        Ok(EngineEvent { t_ms: w.t_ms, kind: EventKind::from_wire(&w.kind, w.payload)? })
    }
}
