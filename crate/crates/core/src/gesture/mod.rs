//! The slide-to-select state machine and its feedback events.

mod config;
mod engine;
mod events;
mod steps;

pub use config::{progress_alpha, units_from_distance, ConfigError, GestureConfig, Mode, MM_PER_INCH};
pub use engine::{GestureEngine, GestureState, Phase};
pub use events::{EngineEvent, EventKind};
pub use steps::{expand_once, retract_once};
