use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::corpus::Corpus;
use crate::gesture::{ConfigError, EngineEvent, EventKind, GestureConfig, GestureEngine, Mode};
use crate::replay::trace::{validate_trace, TouchKind, TraceError, TraceEvent};
use crate::text::{RangeError, TokenRange};

/// Everything a trial needs besides the trace.
#[derive(Debug, Clone)]
pub struct TrialSpec {
    pub corpus: Arc<Corpus>,
    pub mode: Mode,
    pub config: GestureConfig,
    pub target: TokenRange,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialMetrics {
    pub completed: bool,
    /// First Down to last selection change; only set for completed trials.
    pub completion_ms: Option<u64>,
    pub overshoots: usize,
    /// Zero when nothing was ever activated.
    pub attempts: usize,
}

#[derive(Debug, Clone)]
pub struct TrialOutcome {
    pub metrics: TrialMetrics,
    pub events: Vec<EngineEvent>,
}

impl TrialOutcome {
    /// The event log as JSON lines.
    pub fn event_log(&self) -> String {
        event_log(&self.events)
    }

    pub fn selections(&self) -> Vec<TokenRange> {
        selection_changes(&self.events)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TrialError {
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("target {target} is not valid: {source}")]
    Target { target: TokenRange, source: RangeError },
}

pub fn event_log(events: &[EngineEvent]) -> String {
    let mut out = String::new();
    for e in events {
        out.push_str(&e.to_json_line());
        out.push('\n');
    }
    out
}

pub fn selection_changes(events: &[EngineEvent]) -> Vec<TokenRange> {
    events
        .iter()
        .filter_map(|e| match e.kind {
            EventKind::SelectionChanged(r) => Some(r),
            _ => None,
        })
        .collect()
}

/// Feeds the trace to a fresh engine and measures the trial. Feeding stops
/// at the first `Completed`.
pub fn run_trial(spec: &TrialSpec, trace: &[TraceEvent]) -> Result<TrialOutcome, TrialError> {
    validate_trace(trace)?;
    let len = spec.corpus.doc().len();
    spec.corpus.doc().check_range(spec.target).map_err(|source| TrialError::Target { target: spec.target, source })?;
    for (i, e) in trace.iter().enumerate() {
        if let Some(index) = e.token_hit.filter(|&index| index >= len) {
            return Err(TraceError::TokenOutOfRange { line: i + 1, index, len }.into());
        }
    }

    let mut engine = GestureEngine::new(spec.corpus.clone(), spec.mode, spec.config.clone())?.with_target(spec.target);
    let mut events = Vec::new();
    for e in trace {
        events.extend(engine.feed(e));
        if matches!(events.last(), Some(EngineEvent { kind: EventKind::Completed, .. })) {
            break;
        }
    }
    let first_down = trace.iter().find(|e| e.kind == TouchKind::Down).map(|e| e.t_ms);
    let metrics = measure(&events, spec.target, first_down);
    Ok(TrialOutcome { metrics, events })
}

/// Metrics from an event log.
///
/// An overshoot is a change into a selection that extends past the target
/// on a side where the previous selection did not; the state at activation
/// is the baseline, so starting outside the target is not counted.
pub fn measure(events: &[EngineEvent], target: TokenRange, first_down_ms: Option<u64>) -> TrialMetrics {
    let over = |r: TokenRange| (r.start < target.start, r.end > target.end);
    let mut completed = false;
    let mut last_change = None;
    let mut overshoots = 0;
    let mut state = (false, false);
    let mut attempts = 0;
    let mut cleared = false;
    for e in events {
        match &e.kind {
            EventKind::Activated { selection, .. } => {
                state = over(*selection);
                if attempts == 0 {
                    attempts = 1;
                } else if cleared {
                    attempts += 1;
                }
                cleared = false;
            }
            EventKind::SelectionChanged(r) => {
                let now = over(*r);
                overshoots += usize::from(now.0 && !state.0) + usize::from(now.1 && !state.1);
                state = now;
                last_change = Some(e.t_ms);
            }
            EventKind::Cleared => cleared = true,
            EventKind::Completed => completed = true,
            _ => {}
        }
    }
    let completion_ms = match (completed, first_down_ms, last_change) {
        (true, Some(down), Some(last)) => Some(last.saturating_sub(down)),
        _ => None,
    };
    TrialMetrics { completed, completion_ms, overshoots, attempts }
}
