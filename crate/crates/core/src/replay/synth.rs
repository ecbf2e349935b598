//! Synthetic traces that stand in for human gestures.
//!
//! A plan is a list of gestures, each a press on some token followed by a
//! slide of `units` expansion units in one direction and a rewind of
//! `rewinds` words. Slide samples sit in the middle of each quantization
//! band, so small numeric drift never changes the outcome.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::chunking::Direction;
use crate::corpus::Corpus;
use crate::gesture::{expand_once, retract_once, GestureConfig, Mode};
use crate::replay::trace::TraceEvent;
use crate::replay::trial::{run_trial, TrialSpec};
use crate::text::TokenRange;

/// Time between consecutive samples of a synthetic trace.
pub const SAMPLE_STEP_MS: u64 = 50;
/// Pause between lifting and the next press.
pub const GESTURE_GAP_MS: u64 = 200;
/// Vertical position of every press.
pub const PRESS_Y_PX: f64 = 1000.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Policy {
    /// Fewest slide units with no rewinding.
    Ideal,
    /// One gesture that goes `k` units past the target and rewinds.
    Overshooting(usize),
    /// The expansion split over `n` gestures.
    Clutching(usize),
    /// A single exact gesture, else overshooting(1), else ideal, else
    /// clutching(2).
    Auto,
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Policy::Ideal => write!(f, "ideal"),
            Policy::Overshooting(k) => write!(f, "overshooting({k})"),
            Policy::Clutching(n) => write!(f, "clutching({n})"),
            Policy::Auto => write!(f, "auto"),
        }
    }
}

impl FromStr for Policy {
    type Err = String;

    /// Accepts `ideal`, `auto`, `overshooting(k)` and `clutching(n)`; the
    /// argument may also follow a colon.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim().to_ascii_lowercase();
        let (name, arg) = match s.find(['(', ':']) {
            Some(i) => {
                let arg = s[i + 1..].trim_end_matches(')');
                let arg: usize = arg.trim().parse().map_err(|_| format!("bad policy argument in {s:?}"))?;
                (&s[..i], Some(arg))
            }
            None => (s.as_str(), None),
        };
        match (name, arg) {
            ("ideal", None) => Ok(Policy::Ideal),
            ("auto", None) => Ok(Policy::Auto),
            ("overshooting", Some(k)) if k >= 1 => Ok(Policy::Overshooting(k)),
            ("clutching", Some(n)) if n >= 1 => Ok(Policy::Clutching(n)),
            ("overshooting", None) => Ok(Policy::Overshooting(1)),
            ("clutching", None) => Ok(Policy::Clutching(2)),
            _ => Err(format!("unknown policy {s:?}; expected ideal, auto, overshooting(k) or clutching(n)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SynthError {
    #[error("target {target} cannot be reached under policy {policy}")]
    Unreachable { target: TokenRange, policy: Policy },
    #[error("target {0} is outside the document")]
    BadTarget(TokenRange),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GesturePlan {
    pub press_token: usize,
    pub direction: Direction,
    pub units: usize,
    pub rewinds: usize,
}

pub fn synthesize_trace(spec: &TrialSpec, policy: Policy) -> Result<Vec<TraceEvent>, SynthError> {
    spec.corpus.doc().check_range(spec.target).map_err(|_| SynthError::BadTarget(spec.target))?;
    let planner = Planner { corpus: &spec.corpus, mode: spec.mode, config: &spec.config, target: spec.target };
    // Stages are tried lazily in order; a plan is accepted only once the
    // engine confirms that it completes.
    let stages: Vec<Box<dyn Fn() -> Option<Vec<GesturePlan>> + '_>> = match policy {
        Policy::Ideal => vec![Box::new(|| planner.ideal())],
        Policy::Overshooting(k) => vec![Box::new(move || planner.overshooting(k))],
        Policy::Clutching(n) => vec![Box::new(move || planner.clutching(n))],
        Policy::Auto => vec![
            Box::new(|| planner.cheapest(planner.single(|from, dir| planner.exact_leg(from, dir)))),
            Box::new(|| planner.overshooting(1)),
            Box::new(|| planner.ideal()),
            Box::new(|| planner.clutching(2)),
        ],
    };
    for stage in stages {
        let Some(plan) = stage() else { continue };
        let trace = render(&plan, spec.mode, &spec.config);
        if run_trial(spec, &trace).is_ok_and(|o| o.metrics.completed) {
            return Ok(trace);
        }
    }
    Err(SynthError::Unreachable { target: spec.target, policy })
}

/// Turns gesture plans into a touch trace starting at t = 0.
pub fn render(plan: &[GesturePlan], mode: Mode, config: &GestureConfig) -> Vec<TraceEvent> {
    let unit_px = config.mm_to_px(config.unit_mm(mode));
    let word_px = config.mm_to_px(config.d_word_mm);
    let mut trace = Vec::new();
    let mut t = 0;
    for (i, g) in plan.iter().enumerate() {
        if i > 0 {
            t += GESTURE_GAP_MS;
        }
        let sign = match g.direction {
            Direction::Forward => 1.0,
            Direction::Backward => -1.0,
        };
        trace.push(TraceEvent::down(t, 0.0, PRESS_Y_PX, Some(g.press_token)));
        t += config.longpress_ms;
        trace.push(TraceEvent::moved(t, 0.0, PRESS_Y_PX));
        let mut p = 0.0;
        for k in 1..=g.units {
            p = (k as f64 + 0.5) * unit_px;
            t += SAMPLE_STEP_MS;
            trace.push(TraceEvent::moved(t, 0.0, PRESS_Y_PX + sign * p));
        }
        let p_max = p;
        for k in 1..=g.rewinds {
            p = p_max - (k as f64 + 0.5) * word_px;
            t += SAMPLE_STEP_MS;
            trace.push(TraceEvent::moved(t, 0.0, PRESS_Y_PX + sign * p));
        }
        t += SAMPLE_STEP_MS;
        trace.push(TraceEvent::up(t, 0.0, PRESS_Y_PX + sign * p));
    }
    trace
}

struct Planner<'a> {
    corpus: &'a Corpus,
    mode: Mode,
    config: &'a GestureConfig,
    target: TokenRange,
}

/// A way to grow `from` on one side until that side matches the target.
#[derive(Debug, Clone, Copy)]
struct Leg {
    units: usize,
    rewinds: usize,
    result: TokenRange,
}

impl Planner<'_> {
    fn cost(&self, plan: &[GesturePlan]) -> f64 {
        plan.iter()
            .map(|g| g.units as f64 * self.config.unit_mm(self.mode) + g.rewinds as f64 * self.config.d_word_mm)
            .sum()
    }

    fn cheapest(&self, plans: impl IntoIterator<Item = Vec<GesturePlan>>) -> Option<Vec<GesturePlan>> {
        plans
            .into_iter()
            .min_by(|a, b| (a.len(), self.cost(a)).partial_cmp(&(b.len(), self.cost(b))).expect("costs are finite"))
    }

    fn expansions(&self, from: TokenRange, dir: Direction) -> Vec<TokenRange> {
        let mut out = vec![from];
        while let Some(next) = expand_once(self.corpus, self.mode, *out.last().unwrap(), dir) {
            out.push(next);
        }
        out
    }

    fn side_matches(&self, r: TokenRange, dir: Direction) -> bool {
        match dir {
            Direction::Forward => r.end == self.target.end,
            Direction::Backward => r.start == self.target.start,
        }
    }

    fn past(&self, r: TokenRange, dir: Direction) -> bool {
        match dir {
            Direction::Forward => r.end > self.target.end,
            Direction::Backward => r.start < self.target.start,
        }
    }

    /// Grow `from` toward `dir` to land exactly on the target's side.
    fn exact_leg(&self, from: TokenRange, dir: Direction) -> Option<Leg> {
        let exps = self.expansions(from, dir);
        exps.iter().position(|&r| self.side_matches(r, dir)).map(|units| Leg { units, rewinds: 0, result: exps[units] })
    }

    /// Grow past the target's side by `k` units, then rewind onto it.
    fn overshoot_leg(&self, from: TokenRange, dir: Direction, k: usize) -> Option<Leg> {
        let exps = self.expansions(from, dir);
        let first_past = exps.iter().position(|&r| self.past(r, dir))?;
        let units = first_past + k - 1;
        let mut current = *exps.get(units)?;
        let mut rewinds = 0;
        while self.past(current, dir) {
            current = retract_once(self.corpus.doc(), current, dir)?;
            rewinds += 1;
        }
        self.side_matches(current, dir).then_some(Leg { units, rewinds, result: current })
    }

    fn leg(&self, from: TokenRange, dir: Direction) -> Option<Leg> {
        self.exact_leg(from, dir).or_else(|| self.overshoot_leg(from, dir, 1))
    }

    fn single(&self, leg: impl Fn(TokenRange, Direction) -> Option<Leg>) -> Vec<Vec<GesturePlan>> {
        let t = self.target;
        let mut plans = Vec::new();
        for (press, dir) in [(t.start, Direction::Forward), (t.end, Direction::Backward)] {
            if let Some(l) = leg(TokenRange::single(press), dir).filter(|l| l.result == t) {
                plans.push(vec![GesturePlan {
                    press_token: press,
                    direction: dir,
                    units: l.units,
                    rewinds: l.rewinds,
                }]);
            }
        }
        plans
    }

    /// Press inside the target, reach one side, then clutch for the other.
    fn two_sided(&self, leg: impl Fn(TokenRange, Direction) -> Option<Leg>) -> Vec<Vec<GesturePlan>> {
        let t = self.target;
        let mut plans = Vec::new();
        for anchor in t.indices() {
            for first in [Direction::Forward, Direction::Backward] {
                let Some(a) = leg(TokenRange::single(anchor), first) else { continue };
                let second = first.opposite();
                let Some(b) = leg(a.result, second).filter(|b| b.result == t) else { continue };
                plans.push(vec![
                    GesturePlan { press_token: anchor, direction: first, units: a.units, rewinds: a.rewinds },
                    GesturePlan { press_token: a.result.start, direction: second, units: b.units, rewinds: b.rewinds },
                ]);
            }
        }
        plans
    }

    fn ideal(&self) -> Option<Vec<GesturePlan>> {
        let exact = |from, dir| self.exact_leg(from, dir);
        self.cheapest(self.single(exact)).or_else(|| self.cheapest(self.two_sided(exact)))
    }

    fn overshooting(&self, k: usize) -> Option<Vec<GesturePlan>> {
        self.cheapest(self.single(|from, dir| self.overshoot_leg(from, dir, k)))
    }

    fn clutching(&self, n: usize) -> Option<Vec<GesturePlan>> {
        let t = self.target;
        let mut plans = Vec::new();
        for (press, dir) in [(t.start, Direction::Forward), (t.end, Direction::Backward)] {
            let Some(l) = self.leg(TokenRange::single(press), dir).filter(|l| l.result == t) else { continue };
            if let Some(plan) = split(press, dir, l, n, self.corpus, self.mode) {
                plans.push(plan);
            }
        }
        if n == 2 {
            plans.extend(self.two_sided(|from, dir| self.leg(from, dir)));
        }
        self.cheapest(plans)
    }
}

/// Splits one leg into `n` same-direction gestures. Every gesture after the
/// first must expand at least one unit; the last one carries the rewind.
fn split(press: usize, dir: Direction, leg: Leg, n: usize, corpus: &Corpus, mode: Mode) -> Option<Vec<GesturePlan>> {
    if n == 0 || leg.units + 1 < n {
        return None;
    }
    let share = leg.units / n;
    let mut sizes = vec![share; n];
    for size in sizes.iter_mut().rev().take(leg.units % n) {
        *size += 1;
    }
    let mut plan = Vec::with_capacity(n);
    let mut current = TokenRange::single(press);
    for (i, &units) in sizes.iter().enumerate() {
        let press_token = if i == 0 { press } else { current.start };
        let rewinds = if i + 1 == n { leg.rewinds } else { 0 };
        plan.push(GesturePlan { press_token, direction: dir, units, rewinds });
        for _ in 0..units {
            current = expand_once(corpus, mode, current, dir)?;
        }
    }
    Some(plan)
}
