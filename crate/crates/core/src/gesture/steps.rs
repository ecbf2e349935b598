//! Single expansion and rewind steps on a selection.
//!
//! A word step adds the next word on the moving side together with the
//! punctuation between it and the selection; forward steps also take the
//! punctuation run that trails the new word, mirroring chunk adjustment, so
//! that word steps and flat-tree chunk steps coincide. With no word left,
//! the remaining punctuation on that side is one final step.
//!
//! A forward rewind step drops trailing punctuation, then one word, then
//! any punctuation left dangling, undoing one forward word step. Backward
//! selections start with punctuation only when a chunk began with it; a
//! backward rewind step sheds that punctuation on its own, and otherwise
//! drops the first word and the punctuation after it, so every word start
//! can be rewound onto. The fixed end never moves, and when only
//! punctuation separates it from the moving end, the step returns to the
//! fixed token alone.

use crate::chunking::{next_sibling_chunk, Direction};
use crate::corpus::Corpus;
use crate::gesture::Mode;
use crate::text::{Document, TokenRange};

pub fn expand_once(corpus: &Corpus, mode: Mode, selection: TokenRange, dir: Direction) -> Option<TokenRange> {
    match mode {
        Mode::Word => word_step(corpus.doc(), selection, dir),
        Mode::Chunk => next_sibling_chunk(corpus.tree(), corpus.doc(), selection, dir)
            .ok()
            .flatten()
            .map(|chunk| selection.union(&chunk.range)),
    }
}

fn word_step(doc: &Document, selection: TokenRange, dir: Direction) -> Option<TokenRange> {
    match dir {
        Direction::Forward => {
            let after = selection.end + 1;
            if after >= doc.len() {
                return None;
            }
            let end = match (after..doc.len()).find(|&i| doc.is_word(i)) {
                Some(word) => {
                    let mut end = word;
                    while end + 1 < doc.len() && doc.is_punctuation(end + 1) {
                        end += 1;
                    }
                    end
                }
                None => doc.len() - 1,
            };
            Some(TokenRange::new(selection.start, end))
        }
        Direction::Backward => {
            if selection.start == 0 {
                return None;
            }
            let start = (0..selection.start).rev().find(|&i| doc.is_word(i)).unwrap_or(0);
            Some(TokenRange::new(start, selection.end))
        }
    }
}

/// Moves the end opposite the fixed end one word inward. `dir` is the
/// direction the selection was grown in.
pub fn retract_once(doc: &Document, selection: TokenRange, dir: Direction) -> Option<TokenRange> {
    match dir {
        Direction::Forward => {
            let fixed = selection.start;
            let mut end = selection.end;
            if end == fixed {
                return None;
            }
            while end > fixed && doc.is_punctuation(end) {
                end -= 1;
            }
            if end > fixed {
                end -= 1;
                while end > fixed && doc.is_punctuation(end) {
                    end -= 1;
                }
            }
            Some(TokenRange::new(fixed, end))
        }
        Direction::Backward => {
            let fixed = selection.end;
            let mut start = selection.start;
            if start == fixed {
                return None;
            }
            if doc.is_punctuation(start) {
                while start < fixed && doc.is_punctuation(start) {
                    start += 1;
                }
            } else {
                start += 1;
                while start < fixed && doc.is_punctuation(start) {
                    start += 1;
                }
            }
            Some(TokenRange::new(start, fixed))
        }
    }
}
