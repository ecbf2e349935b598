use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::chunking::{compute_brackets_with, BracketPreview, Direction};
use crate::corpus::Corpus;
use crate::gesture::config::{units_from_distance, ConfigError, GestureConfig, Mode};
use crate::gesture::events::{EngineEvent, EventKind};
use crate::gesture::steps::{expand_once, retract_once};
use crate::replay::{TouchKind, TraceEvent};
use crate::text::TokenRange;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Idle,
    Pressing,
    Active,
    Ended,
}

/// Observable gesture state. `direction` is `None` until the first unit
/// triggers; displacements are in pixels along the locked direction.
#[derive(Debug, Clone, PartialEq)]
pub struct GestureState {
    pub phase: Phase,
    pub mode: Mode,
    pub anchor_token: Option<usize>,
    pub base_selection: Option<TokenRange>,
    pub direction: Option<Direction>,
    pub p_px: f64,
    pub p_max_px: f64,
    pub n_units: usize,
    pub r_words: usize,
    pub selection: Option<TokenRange>,
}

#[derive(Debug, Clone)]
struct Press {
    t_ms: u64,
    x_px: f64,
    y_px: f64,
    clutch: bool,
}

/// Drives one selection through presses, slides and lifts.
///
/// Operations called in the wrong phase are ignored and produce no events.
#[derive(Debug, Clone)]
pub struct GestureEngine {
    corpus: Arc<Corpus>,
    config: GestureConfig,
    state: GestureState,
    target: Option<TokenRange>,
    press: Option<Press>,
    origin_y: f64,
    /// `expansions[i]` is the base grown by `i` units in the locked direction.
    expansions: Vec<TokenRange>,
    expansions_done: bool,
    /// `retractions[j]` is `expansions[n_units]` rewound by `j` words.
    retractions: Vec<TokenRange>,
    retractions_done: bool,
    alpha: (f64, Option<TokenRange>),
}

impl GestureEngine {
    pub fn new(corpus: Arc<Corpus>, mode: Mode, config: GestureConfig) -> Result<Self, ConfigError> {
        config.validate()?;
        Ok(GestureEngine {
            corpus,
            config,
            state: GestureState {
                phase: Phase::Idle,
                mode,
                anchor_token: None,
                base_selection: None,
                direction: None,
                p_px: 0.0,
                p_max_px: 0.0,
                n_units: 0,
                r_words: 0,
                selection: None,
            },
            target: None,
            press: None,
            origin_y: 0.0,
            expansions: Vec::new(),
            expansions_done: false,
            retractions: Vec::new(),
            retractions_done: false,
            alpha: (0.0, None),
        })
    }

    /// Sets the range whose selection at lift completes a trial.
    pub fn with_target(mut self, target: TokenRange) -> Self {
        self.target = Some(target);
        self
    }

    pub fn state(&self) -> &GestureState {
        &self.state
    }

    pub fn config(&self) -> &GestureConfig {
        &self.config
    }

    pub fn corpus(&self) -> &Arc<Corpus> {
        &self.corpus
    }

    pub fn target(&self) -> Option<TokenRange> {
        self.target
    }

    /// Time at which the current press activates, if one is pending.
    pub fn activation_deadline(&self) -> Option<u64> {
        match (self.state.phase, &self.press) {
            (Phase::Pressing, Some(p)) => Some(p.t_ms + self.config.longpress_ms),
            _ => None,
        }
    }

    /// Bracket preview around the current selection (Chunk mode only).
    pub fn brackets(&self) -> Option<BracketPreview> {
        if self.state.mode != Mode::Chunk {
            return None;
        }
        let sel = self.state.selection?;
        compute_brackets_with(self.corpus.tree(), self.corpus.doc(), sel, self.config.bracket_levels).ok()
    }

    /// Last emitted pending-chunk opacity and range.
    pub fn progress(&self) -> (f64, Option<TokenRange>) {
        self.alpha
    }

    pub fn begin_touch(&mut self, token_hit: Option<usize>, x_px: f64, y_px: f64, t_ms: u64) -> Vec<EngineEvent> {
        let mut out = Vec::new();
        if matches!(self.state.phase, Phase::Pressing | Phase::Active) {
            return out;
        }
        let hit = token_hit.filter(|&i| i < self.corpus.doc().len());
        if let Some(sel) = self.state.selection {
            if !hit.is_some_and(|i| sel.contains(i)) {
                self.state.selection = None;
                self.state.base_selection = None;
                self.state.anchor_token = None;
                self.set_alpha(&mut out, t_ms, 0.0, None);
                out.push(EngineEvent::new(t_ms, EventKind::Cleared));
            }
        }
        self.state.phase = Phase::Idle;
        let Some(hit) = hit else {
            return out;
        };
        let clutch = self.state.selection.is_some();
        self.press = Some(Press { t_ms, x_px, y_px, clutch });
        self.state.phase = Phase::Pressing;
        if !clutch {
            self.state.anchor_token = Some(hit);
        }
        out
    }

    /// Activates a pending press once it has been held long enough.
    pub fn tick(&mut self, t_ms: u64) -> Vec<EngineEvent> {
        let mut out = Vec::new();
        let Some(deadline) = self.activation_deadline() else {
            return out;
        };
        if t_ms < deadline {
            return out;
        }
        let press = self.press.clone().expect("pressing implies a press");
        let base = if press.clutch {
            self.state.selection.expect("clutch implies a selection")
        } else {
            TokenRange::single(self.state.anchor_token.expect("fresh press has an anchor"))
        };
        self.state.phase = Phase::Active;
        self.state.base_selection = Some(base);
        self.state.selection = Some(base);
        self.state.direction = None;
        self.state.p_px = 0.0;
        self.state.p_max_px = 0.0;
        self.state.n_units = 0;
        self.state.r_words = 0;
        self.origin_y = press.y_px;
        self.expansions = vec![base];
        self.expansions_done = false;
        self.retractions = vec![base];
        self.retractions_done = false;

        out.push(EngineEvent::new(t_ms, EventKind::Activated { selection: base, clutch: press.clutch }));
        out.push(EngineEvent::new(t_ms, EventKind::HapticTick));
        if !press.clutch {
            out.push(EngineEvent::new(t_ms, EventKind::SelectionChanged(base)));
            self.push_brackets(&mut out, t_ms);
        }
        out
    }

    pub fn update_touch(&mut self, x_px: f64, y_px: f64, t_ms: u64) -> Vec<EngineEvent> {
        match self.state.phase {
            Phase::Pressing => {
                let press = self.press.as_ref().expect("pressing implies a press");
                let moved = (x_px - press.x_px).hypot(y_px - press.y_px);
                if self.config.px_to_mm(moved) > self.config.slop_mm {
                    if !press.clutch {
                        self.state.anchor_token = None;
                    }
                    self.press = None;
                    self.state.phase = Phase::Idle;
                }
                Vec::new()
            }
            Phase::Active => self.slide(y_px - self.origin_y, t_ms),
            _ => Vec::new(),
        }
    }

    pub fn end_touch(&mut self, t_ms: u64) -> Vec<EngineEvent> {
        match self.state.phase {
            Phase::Pressing => {
                self.press = None;
                self.state.phase = Phase::Idle;
                if self.state.selection.is_none() {
                    self.state.anchor_token = None;
                }
                Vec::new()
            }
            Phase::Active => {
                self.press = None;
                self.state.phase = Phase::Ended;
                let mut out = Vec::new();
                self.set_alpha(&mut out, t_ms, 0.0, None);
                if self.target.is_some() && self.state.selection == self.target {
                    out.push(EngineEvent::new(t_ms, EventKind::Completed));
                }
                out
            }
            _ => Vec::new(),
        }
    }

    /// Applies one trace event. A pending press whose deadline falls at or
    /// before the event activates first, stamped with the deadline.
    pub fn feed(&mut self, event: &TraceEvent) -> Vec<EngineEvent> {
        let mut out = Vec::new();
        if let Some(deadline) = self.activation_deadline() {
            if event.t_ms >= deadline {
                out.extend(self.tick(deadline));
            }
        }
        match event.kind {
            TouchKind::Down => out.extend(self.begin_touch(event.token_hit, event.x_px, event.y_px, event.t_ms)),
            TouchKind::Move => out.extend(self.update_touch(event.x_px, event.y_px, event.t_ms)),
            TouchKind::Up => {
                out.extend(self.update_touch(event.x_px, event.y_px, event.t_ms));
                out.extend(self.end_touch(event.t_ms));
            }
        }
        out
    }

    fn slide(&mut self, dy: f64, t_ms: u64) -> Vec<EngineEvent> {
        let mut out = Vec::new();
        let mode = self.state.mode;
        let d_mode = self.config.unit_mm(mode);
        let Some(dir) = self.state.direction.or_else(|| {
            (self.units(dy.abs(), d_mode) >= 1).then_some(if dy > 0.0 {
                Direction::Forward
            } else {
                Direction::Backward
            })
        }) else {
            self.preview_unlocked(&mut out, dy, t_ms);
            return out;
        };
        self.state.direction = Some(dir);

        let p = match dir {
            Direction::Forward => dy,
            Direction::Backward => -dy,
        };
        self.state.p_px = p;
        self.state.p_max_px = self.state.p_max_px.max(p);

        let n_target = self.reachable_units(self.units(self.state.p_max_px, d_mode), dir);
        if n_target > self.state.n_units {
            while self.state.r_words > 0 {
                self.state.r_words -= 1;
                self.emit_step(&mut out, t_ms);
            }
            while self.state.n_units < n_target {
                self.state.n_units += 1;
                self.retractions = vec![self.expansions[self.state.n_units]];
                self.retractions_done = false;
                self.emit_step(&mut out, t_ms);
            }
        }
        let r_target = self.reachable_retractions(self.units(self.state.p_max_px - p, self.config.d_word_mm), dir);
        while self.state.r_words < r_target {
            self.state.r_words += 1;
            self.emit_step(&mut out, t_ms);
        }
        while self.state.r_words > r_target {
            self.state.r_words -= 1;
            self.emit_step(&mut out, t_ms);
        }

        if mode == Mode::Chunk {
            let (alpha, pending) = if self.state.r_words == 0 {
                match self.pending_chunk(dir) {
                    Some(pending) => {
                        let done_px = self.config.mm_to_px(self.state.n_units as f64 * d_mode);
                        let alpha = crate::gesture::progress_alpha(
                            (p - done_px).max(0.0),
                            self.config.ppi,
                            d_mode,
                            self.config.alpha_max,
                        );
                        (alpha, Some(pending))
                    }
                    None => (0.0, None),
                }
            } else {
                (0.0, None)
            };
            self.set_alpha(&mut out, t_ms, alpha, pending);
        }
        out
    }

    /// Before the direction locks, Chunk mode previews the first chunk on
    /// the side the finger is heading.
    fn preview_unlocked(&mut self, out: &mut Vec<EngineEvent>, dy: f64, t_ms: u64) {
        if self.state.mode != Mode::Chunk {
            return;
        }
        let base = self.expansions[0];
        let candidate = if dy > 0.0 {
            Some(Direction::Forward)
        } else if dy < 0.0 {
            Some(Direction::Backward)
        } else {
            None
        };
        let preview = candidate.and_then(|dir| {
            let next = expand_once(&self.corpus, Mode::Chunk, base, dir)?;
            let alpha = crate::gesture::progress_alpha(
                dy.abs(),
                self.config.ppi,
                self.config.d_chunk_mm,
                self.config.alpha_max,
            );
            Some((alpha, added_part(base, next, dir)))
        });
        match preview {
            Some((alpha, pending)) => self.set_alpha(out, t_ms, alpha, Some(pending)),
            None => self.set_alpha(out, t_ms, 0.0, None),
        }
    }

    fn pending_chunk(&mut self, dir: Direction) -> Option<TokenRange> {
        let n = self.state.n_units;
        self.reachable_units(n + 1, dir);
        let next = *self.expansions.get(n + 1)?;
        Some(added_part(self.expansions[n], next, dir))
    }

    fn units(&self, p_px: f64, d_mm: f64) -> usize {
        units_from_distance(p_px, self.config.ppi, d_mm).unwrap_or(0)
    }

    /// Grows the expansion cache up to `wanted` units and returns how many
    /// are actually available.
    fn reachable_units(&mut self, wanted: usize, dir: Direction) -> usize {
        while self.expansions.len() <= wanted && !self.expansions_done {
            let last = *self.expansions.last().expect("cache holds the base");
            match expand_once(&self.corpus, self.state.mode, last, dir) {
                Some(next) => self.expansions.push(next),
                None => self.expansions_done = true,
            }
        }
        wanted.min(self.expansions.len() - 1)
    }

    fn reachable_retractions(&mut self, wanted: usize, dir: Direction) -> usize {
        while self.retractions.len() <= wanted && !self.retractions_done {
            let last = *self.retractions.last().expect("cache holds the unrewound selection");
            match retract_once(self.corpus.doc(), last, dir) {
                Some(next) => self.retractions.push(next),
                None => self.retractions_done = true,
            }
        }
        wanted.min(self.retractions.len() - 1)
    }

    fn emit_step(&mut self, out: &mut Vec<EngineEvent>, t_ms: u64) {
        let sel = self.retractions[self.state.r_words];
        self.state.selection = Some(sel);
        out.push(EngineEvent::new(t_ms, EventKind::SelectionChanged(sel)));
        out.push(EngineEvent::new(t_ms, EventKind::HapticTick));
        self.push_brackets(out, t_ms);
    }

    fn push_brackets(&self, out: &mut Vec<EngineEvent>, t_ms: u64) {
        if let Some(preview) = self.brackets() {
            out.push(EngineEvent::new(t_ms, EventKind::brackets(&preview)));
        }
    }

    fn set_alpha(&mut self, out: &mut Vec<EngineEvent>, t_ms: u64, alpha: f64, pending: Option<TokenRange>) {
        if self.state.mode != Mode::Chunk || self.alpha == (alpha, pending) {
            return;
        }
        self.alpha = (alpha, pending);
        out.push(EngineEvent::new(t_ms, EventKind::ProgressAlpha { alpha, pending }));
    }
}

/// The tokens `grown` adds to `from` on side `dir`.
fn added_part(from: TokenRange, grown: TokenRange, dir: Direction) -> TokenRange {
    match dir {
        Direction::Forward => TokenRange::new(from.end + 1, grown.end),
        Direction::Backward => TokenRange::new(grown.start, from.start - 1),
    }
}
