//! Slide-to-select text selection.
//!
//! A long press on a word starts a selection; a vertical slide then grows it
//! word by word or by syntactic chunks taken from a constituency parse, with
//! rewind, clutching and bracket previews. The crate also replays recorded
//! gesture traces and computes per-trial metrics.

pub mod chunking;
pub mod corpus;
pub mod gesture;
pub mod replay;
pub mod session;
pub mod text;
pub mod treebank;
