//! Deterministic trial replay, synthetic traces and metrics.

mod aggregate;
mod manifest;
mod synth;
mod trace;
mod trial;

pub use aggregate::{aggregate, to_csv, Summary, TrialRecord, CSV_HEADER};
pub use manifest::{load_trial, manifests_in, LoadedTrial, ManifestError, TrialManifest};
pub use synth::{
    render, synthesize_trace, GesturePlan, Policy, SynthError, GESTURE_GAP_MS, PRESS_Y_PX, SAMPLE_STEP_MS,
};
pub use trace::{parse_trace, validate_trace, write_trace, TouchKind, TraceError, TraceEvent};
pub use trial::{event_log, measure, run_trial, selection_changes, TrialError, TrialMetrics, TrialOutcome, TrialSpec};
