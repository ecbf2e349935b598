//! Fixtures, brute-force oracles and seeded generators shared by the
//! integration tests. Nothing here calls into the library's chunking or
//! quantization code; the oracles are written from the definitions.

#![allow(dead_code)]

use std::sync::Arc;

use onedtouch_core::chunking::Direction;
use onedtouch_core::corpus::Corpus;
use onedtouch_core::gesture::{expand_once, retract_once, GestureConfig, Mode};
use onedtouch_core::replay::TraceEvent;
use onedtouch_core::text::{Document, TokenRange};
use onedtouch_core::treebank::ParseTree;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub const FOX_TEXT: &str = "The quick brown fox jumps over the lazy dog.";
pub const FOX_PARSE: &str = "(ROOT (S (NP (DT The) (JJ quick) (JJ brown) (NN fox)) (VP (VBZ jumps) (PP (IN over) (NP (DT the) (JJ lazy) (NN dog)))) (. .)))";

pub struct Sample {
    pub name: &'static str,
    pub text: &'static str,
    pub parses: &'static [&'static str],
}

/// Hand-written parses covering flat and deep shapes, quotes, brackets,
/// clitics, multi-sentence paragraphs and sentences without punctuation.
pub const TREES: &[Sample] = &[
    Sample { name: "fox", text: FOX_TEXT, parses: &[FOX_PARSE] },
    Sample {
        name: "sea shells",
        text: "She sells sea shells by the sea shore.",
        parses: &["(ROOT (S (NP (PRP She)) (VP (VBZ sells) (NP (NN sea) (NNS shells)) (PP (IN by) (NP (DT the) (NN sea) (NN shore)))) (. .)))"],
    },
    Sample {
        name: "fronted pp",
        text: "After the storm, the village rebuilt its bridge.",
        parses: &["(ROOT (S (PP (IN After) (NP (DT the) (NN storm))) (, ,) (NP (DT the) (NN village)) (VP (VBD rebuilt) (NP (PRP$ its) (NN bridge))) (. .)))"],
    },
    Sample {
        name: "clitic",
        text: "I can't believe it!",
        parses: &["(ROOT (S (NP (PRP I)) (VP (MD ca) (RB n't) (VP (VB believe) (NP (PRP it)))) (. !)))"],
    },
    Sample {
        name: "quotation",
        text: "He said, \"Run home now.\"",
        parses: &["(ROOT (S (NP (PRP He)) (VP (VBD said) (, ,) (`` \") (S (VP (VB Run) (NP (NN home)) (ADVP (RB now))))) (. .) ('' \")))"],
    },
    Sample {
        name: "parenthetical",
        text: "The results (see below) were surprising.",
        parses: &["(ROOT (S (NP (NP (DT The) (NNS results)) (PRN (-LRB- -LRB-) (VP (VB see) (ADVP (RB below))) (-RRB- -RRB-))) (VP (VBD were) (ADJP (JJ surprising))) (. .)))"],
    },
    Sample {
        name: "coordination",
        text: "Cats, dogs, and birds live here.",
        parses: &["(ROOT (S (NP (NNS Cats) (, ,) (NNS dogs) (, ,) (CC and) (NNS birds)) (VP (VBP live) (ADVP (RB here))) (. .)))"],
    },
    Sample {
        name: "relative clause",
        text: "When the bell rang, the students who had finished left the room quietly.",
        parses: &["(ROOT (S (SBAR (WHADVP (WRB When)) (S (NP (DT the) (NN bell)) (VP (VBD rang)))) (, ,) (NP (NP (DT the) (NNS students)) (SBAR (WHNP (WP who)) (S (VP (VBD had) (VP (VBN finished)))))) (VP (VBD left) (NP (DT the) (NN room)) (ADVP (RB quietly))) (. .)))"],
    },
    Sample { name: "one word", text: "Go.", parses: &["(ROOT (S (VP (VB Go)) (. .)))"] },
    Sample {
        name: "semicolon",
        text: "Time flies like an arrow; fruit flies like a banana.",
        parses: &["(ROOT (S (S (NP (NN Time)) (VP (VBZ flies) (PP (IN like) (NP (DT an) (NN arrow))))) (: ;) (S (NP (NN fruit) (NNS flies)) (VP (VBP like) (NP (DT a) (NN banana)))) (. .)))"],
    },
    Sample {
        name: "two sentences",
        text: "It rained. We stayed inside.",
        parses: &[
            "(ROOT (S (NP (PRP It)) (VP (VBD rained)) (. .)))",
            "(ROOT (S (NP (PRP We)) (VP (VBD stayed) (ADVP (RB inside))) (. .)))",
        ],
    },
    Sample {
        name: "interrupted subject",
        text: "The committee, after long debate, approved the plan that the mayor had proposed in March.",
        parses: &["(ROOT (S (NP (DT The) (NN committee)) (, ,) (PP (IN after) (NP (JJ long) (NN debate))) (, ,) (VP (VBD approved) (NP (NP (DT the) (NN plan)) (SBAR (IN that) (S (NP (DT the) (NN mayor)) (VP (VBD had) (VP (VBN proposed) (PP (IN in) (NP (NNP March))))))))) (. .)))"],
    },
    Sample { name: "interjection", text: "Yes!", parses: &["(ROOT (INTJ (UH Yes) (. !)))"] },
    Sample {
        name: "question",
        text: "Why did you leave so early?",
        parses: &["(ROOT (SBARQ (WHADVP (WRB Why)) (SQ (VBD did) (NP (PRP you)) (VP (VB leave) (ADVP (RB so) (RB early)))) (. ?)))"],
    },
    Sample {
        name: "possessive",
        text: "Her brother's old car finally broke down yesterday.",
        parses: &["(ROOT (S (NP (NP (PRP$ Her) (NN brother) (POS 's)) (JJ old) (NN car)) (ADVP (RB finally)) (VP (VBD broke) (PRT (RP down)) (NP (NN yesterday))) (. .)))"],
    },
    Sample {
        name: "colon",
        text: "To be or not to be: that is the question.",
        parses: &["(ROOT (S (S (VP (VP (TO To) (VP (VB be))) (CC or) (VP (RB not) (TO to) (VP (VB be))))) (: :) (S (NP (DT that)) (VP (VBZ is) (NP (DT the) (NN question)))) (. .)))"],
    },
    Sample {
        name: "long",
        text: "The data were collected, cleaned, and analysed over three months by a small team of volunteers working remotely.",
        parses: &["(ROOT (S (NP (DT The) (NNS data)) (VP (VBD were) (VP (VP (VBN collected)) (, ,) (VP (VBN cleaned)) (, ,) (CC and) (VP (VBN analysed) (PP (IN over) (NP (CD three) (NNS months))) (PP (IN by) (NP (NP (DT a) (JJ small) (NN team)) (PP (IN of) (NP (NP (NNS volunteers)) (VP (VBG working) (ADVP (RB remotely)))))))))) (. .)))"],
    },
    Sample { name: "bare word", text: "Stop", parses: &["(ROOT (VP (VB Stop)))"] },
    Sample {
        name: "ellipsis",
        text: "Well, that was unexpected...",
        parses: &["(ROOT (S (INTJ (UH Well)) (, ,) (NP (DT that)) (VP (VBD was) (ADJP (JJ unexpected))) (: ...)))"],
    },
    Sample {
        name: "percent",
        text: "Prices rose 5% in the first quarter of 2024.",
        parses: &["(ROOT (S (NP (NNS Prices)) (VP (VBD rose) (NP (CD 5) (NN %)) (PP (IN in) (NP (NP (DT the) (JJ first) (NN quarter)) (PP (IN of) (NP (CD 2024)))))) (. .)))"],
    },
    Sample {
        name: "center embedding",
        text: "the cat that the dog that the man owned chased ran away.",
        parses: &["(ROOT (S (NP (NP (DT the) (NN cat)) (SBAR (WHNP (WDT that)) (S (NP (NP (DT the) (NN dog)) (SBAR (WHNP (WDT that)) (S (NP (DT the) (NN man)) (VP (VBD owned))))) (VP (VBD chased))))) (VP (VBD ran) (ADVP (RB away))) (. .)))"],
    },
    Sample {
        name: "recipe",
        text: "First, mix the flour. Then add water slowly. Finally, bake it for an hour.",
        parses: &[
            "(ROOT (S (ADVP (RB First)) (, ,) (VP (VB mix) (NP (DT the) (NN flour))) (. .)))",
            "(ROOT (S (ADVP (RB Then)) (VP (VB add) (NP (NN water)) (ADVP (RB slowly))) (. .)))",
            "(ROOT (S (ADVP (RB Finally)) (, ,) (VP (VB bake) (NP (PRP it)) (PP (IN for) (NP (DT an) (NN hour)))) (. .)))",
        ],
    },
    Sample {
        name: "two paragraphs",
        text: "Rain fell all night.\n\nBy morning, the river had risen.",
        parses: &[
            "(ROOT (S (NP (NN Rain)) (VP (VBD fell) (NP (DT all) (NN night))) (. .)))",
            "",
            "(ROOT (S (PP (IN By) (NP (NN morning))) (, ,) (NP (DT the) (NN river)) (VP (VBD had) (VP (VBN risen))) (. .)))",
        ],
    },
];

pub fn sample_corpus(sample: &Sample) -> Corpus {
    Corpus::with_parses(sample.text, sample.parses)
        .unwrap_or_else(|e| panic!("fixture {:?} does not load: {e}", sample.name))
}

pub fn fox_corpus() -> Corpus {
    Corpus::with_parses(FOX_TEXT, &[FOX_PARSE]).unwrap()
}

/// Every selection of a document with `n` tokens.
pub fn all_selections(n: usize) -> impl Iterator<Item = TokenRange> {
    (0..n).flat_map(move |s| (s..n).map(move |e| TokenRange::new(s, e)))
}

// ---------------------------------------------------------------------------
// Unit quantization, in exact integer arithmetic.

/// Units for a slide of `quarter_px / 4` pixels at `ppi`, with a unit of
/// `tenth_mm / 10` millimetres. An inch is exactly 254 tenths of a mm, so
/// the count is `floor(254 * quarter_px / (4 * ppi * tenth_mm))`.
pub fn exact_units(quarter_px: u64, ppi: u64, tenth_mm: u64) -> u64 {
    254 * quarter_px / (4 * ppi * tenth_mm)
}

/// Units for a signed whole-pixel distance.
pub fn exact_units_px(px: i64, ppi: u64, tenth_mm: u64) -> usize {
    if px <= 0 {
        0
    } else {
        exact_units(4 * px as u64, ppi, tenth_mm) as usize
    }
}

// ---------------------------------------------------------------------------
// Sibling oracle.

fn node_depth(tree: &ParseTree, index: usize) -> usize {
    let nodes = tree.nodes();
    let mut depth = 0;
    let mut at = nodes[index].parent;
    while let Some(p) = at {
        depth += 1;
        at = nodes[p.0].parent;
    }
    depth
}

/// Brute force: of all nodes that start right after (or end right before)
/// the selection and whose parent covers the boundary token, the one whose
/// parent is deepest. That parent is the first ancestor met on the way up
/// from the boundary leaf that has a sibling on that side.
pub fn oracle_sibling(tree: &ParseTree, sel: TokenRange, dir: Direction) -> Option<(TokenRange, usize)> {
    let nodes = tree.nodes();
    let boundary = match dir {
        Direction::Forward => sel.end,
        Direction::Backward => sel.start,
    };
    let mut best: Option<(usize, usize)> = None;
    for (i, node) in nodes.iter().enumerate() {
        let adjacent = match dir {
            Direction::Forward => node.span.start == sel.end + 1,
            Direction::Backward => node.span.end + 1 == sel.start,
        };
        let Some(parent) = node.parent else { continue };
        if !adjacent || !nodes[parent.0].span.contains(boundary) {
            continue;
        }
        let parent_depth = node_depth(tree, parent.0);
        if best.is_none_or(|(d, _)| parent_depth > d) {
            best = Some((parent_depth, i));
        }
    }
    best.map(|(_, i)| (nodes[i].span, node_depth(tree, i)))
}

/// The chunk a selection grows by: the oracle sibling, merged with the ones
/// after it while everything taken so far is punctuation, then (going
/// forward) extended over any punctuation that directly follows.
pub fn oracle_chunk(tree: &ParseTree, doc: &Document, sel: TokenRange, dir: Direction) -> Option<(TokenRange, usize)> {
    let is_punct = |i: usize| doc.tokens()[i].is_punctuation();
    let mut current = sel;
    let mut taken: Option<(TokenRange, usize)> = None;
    while let Some((span, depth)) = oracle_sibling(tree, current, dir) {
        let range = match taken {
            None => span,
            Some((r, _)) => TokenRange::new(r.start.min(span.start), r.end.max(span.end)),
        };
        taken = Some((range, depth));
        current = TokenRange::new(current.start.min(span.start), current.end.max(span.end));
        if span.indices().any(|i| !is_punct(i)) {
            break;
        }
    }
    let (mut range, depth) = taken?;
    if dir == Direction::Forward {
        while range.end + 1 < doc.len() && is_punct(range.end + 1) {
            range.end += 1;
        }
    }
    Some((range, depth))
}

// ---------------------------------------------------------------------------
// Random documents and parses.

const WORDS: &[&str] = &[
    "apple", "river", "stone", "quiet", "run", "blue", "over", "under", "with", "small", "house", "light", "north",
    "sing", "paper", "cold", "garden", "wind", "old", "bright", "walk", "table", "fast", "seven", "glass",
];

pub struct RandomText {
    pub text: String,
    pub parses: Vec<String>,
    pub tokens: usize,
}

impl RandomText {
    pub fn corpus(&self) -> Corpus {
        Corpus::with_parses(&self.text, &self.parses).expect("generated parse matches its text")
    }

    pub fn flat(&self) -> Corpus {
        Corpus::fallback(&self.text)
    }
}

/// One token of a generated sentence: `(tag, text)`.
type Leaf = (&'static str, String);

fn random_sentence(rng: &mut TestRng, max_tokens: usize) -> Vec<Leaf> {
    let words = rng.gen_range(1..=8.min(max_tokens.saturating_sub(1)).max(1));
    let mut leaves: Vec<Leaf> = Vec::new();
    for i in 0..words {
        leaves.push(("NN", WORDS.choose(rng).unwrap().to_string()));
        if i + 1 < words && rng.gen_bool(0.15) && leaves.len() + 2 < max_tokens {
            leaves.push((",", ",".into()));
        }
    }
    if leaves.len() < max_tokens {
        let end = [".", ".", ".", "!", "?"].choose(rng).unwrap();
        leaves.push((".", end.to_string()));
    }
    leaves
}

/// Random bracketing over `leaves`: each group splits into 2 to 4 runs.
fn bracket(rng: &mut TestRng, leaves: &[Leaf]) -> String {
    if leaves.len() == 1 {
        let (tag, text) = &leaves[0];
        return format!("({tag} {text})");
    }
    let parts = rng.gen_range(2..=4.min(leaves.len()));
    let mut cuts: Vec<usize> = (1..leaves.len()).collect();
    cuts.shuffle(rng);
    let mut cuts = cuts[..parts - 1].to_vec();
    cuts.sort_unstable();
    let mut out = String::from("(X");
    let mut start = 0;
    for cut in cuts.into_iter().chain([leaves.len()]) {
        out.push(' ');
        let run = &leaves[start..cut];
        // sometimes leave single children unwrapped, sometimes add a unary node
        let inner = bracket(rng, run);
        if run.len() > 1 && rng.gen_bool(0.2) {
            out.push_str(&format!("(Y {inner})"));
        } else {
            out.push_str(&inner);
        }
        start = cut;
    }
    out.push(')');
    out
}

/// A random text of at most `max_tokens` tokens with a random parse. The
/// text starts with a word and every sentence ends with `.`, `!` or `?`.
pub fn random_text(rng: &mut TestRng, max_tokens: usize) -> RandomText {
    assert!(max_tokens >= 2);
    let mut text = String::new();
    let mut parses = Vec::new();
    let mut tokens = 0;
    while tokens + 2 <= max_tokens {
        let sentence = random_sentence(rng, max_tokens - tokens);
        if !text.is_empty() {
            if rng.gen_bool(0.2) {
                text.push_str("\n\n");
                parses.push(String::new());
            } else {
                text.push(' ');
            }
        }
        for (i, (tag, leaf)) in sentence.iter().enumerate() {
            if i > 0 && tag == &"NN" {
                text.push(' ');
            }
            text.push_str(leaf);
        }
        tokens += sentence.len();
        parses.push(format!("(ROOT {})", bracket(rng, &sentence)));
        if rng.gen_bool(0.15) {
            break;
        }
    }
    RandomText { text, parses, tokens }
}

// ---------------------------------------------------------------------------
// Random touch traces.

/// Settings that keep every coordinate on whole pixels: 254 ppi is a tenth
/// of a millimetre per pixel.
pub fn whole_pixel_config() -> GestureConfig {
    GestureConfig { ppi: 254.0, ..GestureConfig::default() }
}

/// A random sequence of gestures on a document of `len` tokens: taps, early
/// releases, presses that drift beyond the slop, and slides in both
/// directions with turns. All coordinates are whole pixels.
pub fn random_trace(rng: &mut TestRng, len: usize, config: &GestureConfig) -> Vec<TraceEvent> {
    let hold = config.longpress_ms;
    let mut trace = Vec::new();
    let mut t = rng.gen_range(0..100u64);
    for _ in 0..rng.gen_range(1..=4) {
        let hit = if rng.gen_bool(0.1) { None } else { Some(rng.gen_range(0..len)) };
        let (x0, y0) = (rng.gen_range(0..300) as f64, rng.gen_range(500..1500) as f64);
        trace.push(TraceEvent::down(t, x0, y0, hit));
        let (mut x, mut y) = (x0, y0);
        match rng.gen_range(0..10) {
            // lift before the press activates
            0 => {
                t += rng.gen_range(1..hold);
            }
            // drift past the slop while holding
            1 => {
                t += rng.gen_range(1..hold);
                y += rng.gen_range(15..40) as f64;
                trace.push(TraceEvent::moved(t, x, y));
                t += rng.gen_range(1..50);
            }
            _ => {
                // jitter within the slop, then hold past the deadline
                for _ in 0..rng.gen_range(0..3) {
                    t += rng.gen_range(1..hold / 4);
                    x = x0 + rng.gen_range(-5..=5) as f64;
                    y = y0 + rng.gen_range(-5..=5) as f64;
                    trace.push(TraceEvent::moved(t, x, y));
                }
                t = t.max(trace.last().unwrap().t_ms) + rng.gen_range(0..hold / 2);
                t = t.max(
                    trace.iter().rev().find(|e| e.kind == onedtouch_core::replay::TouchKind::Down).unwrap().t_ms + hold,
                );
                let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                for _ in 0..rng.gen_range(1..25) {
                    t += rng.gen_range(5..80);
                    let step = if rng.gen_bool(0.75) { rng.gen_range(0..40) } else { -rng.gen_range(0..30) };
                    y += sign * step as f64;
                    x += rng.gen_range(-3..=3) as f64;
                    trace.push(TraceEvent::moved(t, x, y));
                }
                t += rng.gen_range(5..80);
            }
        }
        trace.push(TraceEvent::up(t, x, y));
        t += rng.gen_range(50..400);
    }
    trace
}

// ---------------------------------------------------------------------------
// Reference model of the gesture bookkeeping.

#[derive(Debug, Clone, Copy, PartialEq)]
enum ModelPhase {
    Idle,
    Pressing { hit: usize, clutch: bool, x0: f64, y0: f64, deadline: u64 },
    Active,
}

/// What a trace should produce, counted from the definitions: when each
/// press activates, and how many unit boundaries each slide crosses.
#[derive(Debug, Default, PartialEq)]
pub struct Expected {
    pub activations: Vec<u64>,
    pub crossings: usize,
    pub final_selection: Option<TokenRange>,
}

/// Replays a trace against a model that knows only the activation rules
/// and the unit arithmetic. Expansion and rewind steps come from the
/// library's single-step functions, whose own behaviour is tested apart.
pub fn expected(corpus: &Corpus, mode: Mode, config: &GestureConfig, trace: &[TraceEvent]) -> Expected {
    let ppi = config.ppi as u64;
    assert_eq!(ppi as f64, config.ppi, "the model needs whole-number ppi");
    let tenths = |mm: f64| {
        let t = (mm * 10.0).round();
        assert!((t - mm * 10.0).abs() < 1e-9, "the model needs tenth-of-mm units");
        t as u64
    };
    let unit = tenths(config.unit_mm(mode));
    let word = tenths(config.d_word_mm);
    let slop_px = config.mm_to_px(config.slop_mm);

    let mut out = Expected::default();
    let mut phase = ModelPhase::Idle;
    let mut selection: Option<TokenRange> = None;
    // active gesture
    let mut base = TokenRange::single(0);
    let mut y_press = 0.0;
    let mut dir: Option<Direction> = None;
    let mut p_max: i64 = 0;
    let (mut n, mut r) = (0usize, 0usize);
    let mut expansions: Vec<TokenRange> = Vec::new();

    for e in trace {
        use onedtouch_core::replay::TouchKind::*;
        if let ModelPhase::Pressing { hit, clutch, deadline, .. } = phase {
            if e.t_ms >= deadline {
                out.activations.push(deadline);
                base = if clutch { selection.unwrap() } else { TokenRange::single(hit) };
                selection = Some(base);
                dir = None;
                p_max = 0;
                n = 0;
                r = 0;
                phase = ModelPhase::Active;
            }
        }
        match e.kind {
            Down => {
                if let Some(sel) = selection {
                    if e.token_hit.is_none_or(|h| !sel.contains(h)) {
                        selection = None;
                    }
                }
                phase = match (e.token_hit, selection) {
                    (Some(hit), Some(_)) => ModelPhase::Pressing {
                        hit,
                        clutch: true,
                        x0: e.x_px,
                        y0: e.y_px,
                        deadline: e.t_ms + config.longpress_ms,
                    },
                    (Some(hit), None) => ModelPhase::Pressing {
                        hit,
                        clutch: false,
                        x0: e.x_px,
                        y0: e.y_px,
                        deadline: e.t_ms + config.longpress_ms,
                    },
                    (None, _) => ModelPhase::Idle,
                };
                if let ModelPhase::Pressing { y0, .. } = phase {
                    y_press = y0;
                }
            }
            Move | Up => {
                match phase {
                    ModelPhase::Pressing { x0, y0, .. } => {
                        if ((e.x_px - x0).powi(2) + (e.y_px - y0).powi(2)).sqrt() > slop_px {
                            phase = ModelPhase::Idle;
                        }
                    }
                    ModelPhase::Active => {
                        let dy = (e.y_px - y_press).round() as i64;
                        if dir.is_none() && exact_units_px(dy.abs(), ppi, unit) >= 1 {
                            dir = Some(if dy > 0 { Direction::Forward } else { Direction::Backward });
                            expansions = vec![base];
                        }
                        if let Some(d) = dir {
                            let p = if d == Direction::Forward { dy } else { -dy };
                            p_max = p_max.max(p);
                            let want_n = exact_units_px(p_max, ppi, unit);
                            while expansions.len() <= want_n {
                                match expand_once(corpus, mode, *expansions.last().unwrap(), d) {
                                    Some(next) => expansions.push(next),
                                    None => break,
                                }
                            }
                            let new_n = want_n.min(expansions.len() - 1);
                            let mut rewound = expansions[new_n];
                            let want_r = exact_units_px(p_max - p, ppi, word);
                            let mut new_r = 0;
                            while new_r < want_r {
                                match retract_once(corpus.doc(), rewound, d) {
                                    Some(prev) => {
                                        rewound = prev;
                                        new_r += 1;
                                    }
                                    None => break,
                                }
                            }
                            out.crossings += if new_n > n { r + (new_n - n) + new_r } else { r.abs_diff(new_r) };
                            n = new_n;
                            r = new_r;
                            selection = Some(rewound);
                        }
                    }
                    ModelPhase::Idle => {}
                }
                if e.kind == Up {
                    phase = ModelPhase::Idle;
                }
            }
        }
    }
    out.final_selection = selection;
    out
}

pub fn spec(
    corpus: Corpus,
    mode: Mode,
    config: GestureConfig,
    target: TokenRange,
) -> onedtouch_core::replay::TrialSpec {
    onedtouch_core::replay::TrialSpec { corpus: Arc::new(corpus), mode, config, target }
}

/// Word-to-word ranges: both ends on word tokens.
pub fn word_targets(doc: &Document) -> Vec<TokenRange> {
    let words: Vec<usize> = (0..doc.len()).filter(|&i| doc.is_word(i)).collect();
    let mut out = Vec::new();
    for (i, &s) in words.iter().enumerate() {
        for &e in &words[i..] {
            out.push(TokenRange::new(s, e));
        }
    }
    out
}
