//! Syntactic chunk expansion.
//!
//! The next chunk on either side of a selection is found by anchoring on the
//! selection's boundary leaf and climbing the tree until a node on the path
//! has an immediately adjacent sibling; that sibling's span is the chunk.
//! Forward chunks absorb the punctuation that follows them. Chunks consisting
//! only of punctuation are merged with the chunk after them so that every
//! expansion step adds at least one word when one is available.

use serde::{Deserialize, Serialize};

use crate::text::{Document, RangeError, TokenRange};
use crate::treebank::{NodeId, ParseTree};

/// Number of bracket pairs previewed on each side of a selection.
pub const BRACKET_LEVELS: usize = 3;

/// Side of the selection being grown. Sliding up grows backward, sliding
/// down grows forward.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Backward,
    Forward,
}

impl Direction {
    pub fn opposite(self) -> Direction {
        match self {
            Direction::Backward => Direction::Forward,
            Direction::Forward => Direction::Backward,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chunk {
    pub range: TokenRange,
    /// Node whose span produced the chunk (the last one when punctuation-only
    /// siblings were merged in).
    pub source_node: NodeId,
    /// Depth of `source_node`, with the whole-text root at 0.
    pub level_hint: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketPreview {
    /// Nearest first.
    pub backward: Vec<Chunk>,
    /// Nearest first.
    pub forward: Vec<Chunk>,
}

impl BracketPreview {
    /// Cumulative extents: the selection grown by 1, 2, 3 chunks on each side.
    pub fn extents(&self, selection: TokenRange) -> (Vec<TokenRange>, Vec<TokenRange>) {
        let grow = |chunks: &[Chunk]| {
            let mut current = selection;
            chunks
                .iter()
                .map(|c| {
                    current = current.union(&c.range);
                    current
                })
                .collect()
        };
        (grow(&self.backward), grow(&self.forward))
    }
}

fn check(tree: &ParseTree, selection: TokenRange) -> Result<(), RangeError> {
    if selection.start > selection.end {
        return Err(RangeError::Inverted { start: selection.start, end: selection.end });
    }
    if selection.end >= tree.leaf_count() {
        return Err(RangeError::OutOfBounds { start: selection.start, end: selection.end, len: tree.leaf_count() });
    }
    Ok(())
}

/// Raw sibling search without punctuation handling: the adjacent sibling of
/// the lowest ancestor-or-self of the boundary leaf that has one.
pub fn adjacent_sibling(tree: &ParseTree, selection: TokenRange, dir: Direction) -> Result<Option<NodeId>, RangeError> {
    check(tree, selection)?;
    let boundary = match dir {
        Direction::Backward => selection.start,
        Direction::Forward => selection.end,
    };
    let mut anchor = tree.leaf_of(boundary).expect("checked above");
    loop {
        let sibling = match dir {
            Direction::Backward => tree.prev_sibling(anchor),
            Direction::Forward => tree.next_sibling(anchor),
        };
        if sibling.is_some() {
            return Ok(sibling);
        }
        match tree.parent(anchor) {
            Some(parent) => anchor = parent,
            None => return Ok(None),
        }
    }
}

/// Forward chunks swallow the run of punctuation tokens right after them.
/// Backward chunks are returned unchanged.
pub fn adjust_punctuation(doc: &Document, chunk: Chunk, dir: Direction) -> Chunk {
    if dir == Direction::Backward {
        return chunk;
    }
    let mut end = chunk.range.end;
    while end + 1 < doc.len() && doc.is_punctuation(end + 1) {
        end += 1;
    }
    Chunk { range: TokenRange::new(chunk.range.start, end), ..chunk }
}

/// The next chunk to merge on side `dir`, or `None` at the corpus edge.
pub fn next_sibling_chunk(
    tree: &ParseTree,
    doc: &Document,
    selection: TokenRange,
    dir: Direction,
) -> Result<Option<Chunk>, RangeError> {
    check(tree, selection)?;
    let mut current = selection;
    let mut found: Option<(TokenRange, NodeId)> = None;
    while let Some(node) = adjacent_sibling(tree, current, dir)? {
        let span = tree.node(node).span;
        let range = found.map_or(span, |(r, _)| r.union(&span));
        found = Some((range, node));
        current = current.union(&span);
        if doc.word_count(span) > 0 {
            break;
        }
    }
    Ok(found.map(|(range, source_node)| {
        let chunk = Chunk { range, source_node, level_hint: tree.depth(source_node) };
        adjust_punctuation(doc, chunk, dir)
    }))
}

/// Up to `k` successive chunks, each found from the selection grown by the
/// chunks before it.
pub fn expansion_sequence(
    tree: &ParseTree,
    doc: &Document,
    selection: TokenRange,
    dir: Direction,
    k: usize,
) -> Result<Vec<Chunk>, RangeError> {
    check(tree, selection)?;
    let mut out = Vec::with_capacity(k);
    let mut current = selection;
    while out.len() < k {
        let Some(chunk) = next_sibling_chunk(tree, doc, current, dir)? else {
            break;
        };
        current = current.union(&chunk.range);
        out.push(chunk);
    }
    Ok(out)
}

pub fn compute_brackets(tree: &ParseTree, doc: &Document, selection: TokenRange) -> Result<BracketPreview, RangeError> {
    compute_brackets_with(tree, doc, selection, BRACKET_LEVELS)
}

pub fn compute_brackets_with(
    tree: &ParseTree,
    doc: &Document,
    selection: TokenRange,
    levels: usize,
) -> Result<BracketPreview, RangeError> {
    Ok(BracketPreview {
        backward: expansion_sequence(tree, doc, selection, Direction::Backward, levels)?,
        forward: expansion_sequence(tree, doc, selection, Direction::Forward, levels)?,
    })
}
