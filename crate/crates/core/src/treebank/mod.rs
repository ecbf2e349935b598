//! Constituency trees over a [`Document`].
//!
//! Per-sentence parses are joined under a synthetic whole-text `ROOT` so that
//! sibling search can climb across sentence boundaries. Leaves line up one to
//! one with document tokens; part-of-speech tags sit on the leaf's parent.

mod bracketed;
pub mod external;

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::text::{AlignmentError, Document, TokenRange};

pub use external::{fetch_external_parses, FetchError};

pub const ROOT_LABEL: &str = "ROOT";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreebankError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("sentence {sentence}: {message}")]
    Alignment { sentence: usize, message: String },
}

impl From<AlignmentError> for TreebankError {
    fn from(e: AlignmentError) -> Self {
        TreebankError::Alignment {
            sentence: e.sentence,
            message: format!("leaf {:?} does not match the text at byte {}", e.leaf, e.offset),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NodeId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseNode {
    pub id: NodeId,
    /// Constituent or POS tag; for leaves, the leaf string as written.
    pub label: String,
    pub span: TokenRange,
    pub children: Vec<NodeId>,
    pub parent: Option<NodeId>,
    pub is_leaf: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseTree {
    nodes: Vec<ParseNode>,
    root: NodeId,
    leaf_of_token: Vec<NodeId>,
}

/// Sentence-level tree shape handed to the arena builder.
enum Shape<'a> {
    Node { label: &'a str, children: Vec<Shape<'a>> },
    Leaf(&'a str),
}

impl<'a> Shape<'a> {
    fn from_raw(raw: &'a bracketed::RawNode) -> Shape<'a> {
        let label = if raw.label.is_empty() { ROOT_LABEL } else { raw.label.as_str() };
        Shape::Node {
            label,
            children: raw
                .children
                .iter()
                .map(|c| match c {
                    bracketed::RawChild::Node(n) => Shape::from_raw(n),
                    bracketed::RawChild::Leaf(l) => Shape::Leaf(l),
                })
                .collect(),
        }
    }

    fn flat(leaves: Vec<&'a str>) -> Shape<'a> {
        Shape::Node { label: ROOT_LABEL, children: leaves.into_iter().map(Shape::Leaf).collect() }
    }
}

struct Builder {
    nodes: Vec<ParseNode>,
    leaf_of_token: Vec<NodeId>,
}

impl Builder {
    fn new() -> Self {
        let root = ParseNode {
            id: NodeId(0),
            label: ROOT_LABEL.to_string(),
            span: TokenRange::single(0),
            children: Vec::new(),
            parent: None,
            is_leaf: false,
        };
        Builder { nodes: vec![root], leaf_of_token: Vec::new() }
    }

    fn add(&mut self, shape: &Shape<'_>, parent: NodeId) -> NodeId {
        let id = NodeId(self.nodes.len());
        let (label, is_leaf) = match shape {
            Shape::Node { label, .. } => (label.to_string(), false),
            Shape::Leaf(text) => (text.to_string(), true),
        };
        let token = self.leaf_of_token.len();
        self.nodes.push(ParseNode {
            id,
            label,
            span: TokenRange::single(token),
            children: Vec::new(),
            parent: Some(parent),
            is_leaf,
        });
        self.nodes[parent.0].children.push(id);
        match shape {
            Shape::Leaf(_) => self.leaf_of_token.push(id),
            Shape::Node { children, .. } => {
                for child in children {
                    self.add(child, id);
                }
                let first = self.nodes[id.0].children.first().map(|c| self.nodes[c.0].span.start);
                let last = self.nodes[id.0].children.last().map(|c| self.nodes[c.0].span.end);
                if let (Some(start), Some(end)) = (first, last) {
                    self.nodes[id.0].span = TokenRange::new(start, end);
                }
            }
        }
        id
    }

    fn finish(mut self) -> ParseTree {
        if !self.leaf_of_token.is_empty() {
            self.nodes[0].span = TokenRange::new(0, self.leaf_of_token.len() - 1);
        }
        ParseTree { nodes: self.nodes, root: NodeId(0), leaf_of_token: self.leaf_of_token }
    }
}

fn leaf_matches(leaf: &str, token: &str) -> bool {
    if leaf == token {
        return true;
    }
    // Reuse the surface-form table through a one-leaf alignment.
    Document::from_leaves(token, &[vec![leaf]]).map(|d| d.len() == 1 && d.tokens()[0].text == token).unwrap_or(false)
}

/// Builds a tree from bracketed sentence parses, one per non-blank line.
///
/// Line `i` must cover exactly the tokens of the document's sentence `i`.
/// Lines with no leaves are skipped; sentences made only of punctuation are
/// kept flat regardless of the bracketing.
pub fn parse_bracketed<S: AsRef<str>>(doc: &Document, lines: &[S]) -> Result<ParseTree, TreebankError> {
    let mut raws = Vec::new();
    for (i, line) in lines.iter().enumerate() {
        let line = line.as_ref();
        if line.trim().is_empty() {
            continue;
        }
        let raw = bracketed::parse_line(line, i + 1)?;
        if !raw.leaves().is_empty() {
            raws.push(raw);
        }
    }

    let bounds = doc.sentence_bounds();
    if raws.len() != bounds.len() {
        let sentence = raws.len().min(bounds.len());
        return Err(TreebankError::Alignment {
            sentence,
            message: format!("{} parsed sentences for {} document sentences", raws.len(), bounds.len()),
        });
    }

    let mut builder = Builder::new();
    for (sentence, (raw, bound)) in raws.iter().zip(bounds).enumerate() {
        let leaves = raw.leaves();
        if leaves.len() != bound.len() {
            return Err(TreebankError::Alignment {
                sentence,
                message: format!("{} leaves for {} tokens", leaves.len(), bound.len()),
            });
        }
        for (leaf, t) in leaves.iter().zip(bound.indices()) {
            let token = &doc.tokens()[t].text;
            if !leaf_matches(leaf, token) {
                return Err(TreebankError::Alignment {
                    sentence,
                    message: format!("leaf {leaf:?} does not match token {t} {token:?}"),
                });
            }
        }
        let punctuation_only = bound.indices().all(|t| doc.is_punctuation(t));
        let shape = if punctuation_only { Shape::flat(leaves) } else { Shape::from_raw(raw) };
        builder.add(&shape, NodeId(0));
    }
    Ok(builder.finish())
}

/// Leaf-authoritative load: the document is re-tokenized from the parse
/// leaves, then the tree is built over it.
pub fn parse_with_text<S: AsRef<str>>(raw_text: &str, lines: &[S]) -> Result<(Document, ParseTree), TreebankError> {
    let mut raws = Vec::new();
    for (i, line) in lines.iter().enumerate() {
        let line = line.as_ref();
        if line.trim().is_empty() {
            continue;
        }
        raws.push(bracketed::parse_line(line, i + 1)?);
    }
    let sentences: Vec<Vec<&str>> = raws.iter().map(|r| r.leaves()).filter(|l| !l.is_empty()).collect();
    let doc = Document::from_leaves(raw_text, &sentences)?;
    let consumed = doc.tokens().last().map_or(0, |t| t.char_end);
    if !raw_text[consumed..].trim().is_empty() {
        return Err(TreebankError::Alignment {
            sentence: sentences.len(),
            message: format!("text after byte {consumed} is not covered by any parse"),
        });
    }
    let tree = parse_bracketed(&doc, lines)?;
    Ok((doc, tree))
}

/// Flat tree: every token is a direct child of a single node under the
/// whole-text root, so each leaf has depth 2.
///
/// The flat level spans the whole document rather than one node per
/// sentence, so sibling steps never jump a whole sentence at once.
pub fn fallback_tree(doc: &Document) -> ParseTree {
    let mut builder = Builder::new();
    if !doc.is_empty() {
        let leaves = doc.tokens().iter().map(|t| t.text.as_str()).collect();
        builder.add(&Shape::flat(leaves), NodeId(0));
    }
    builder.finish()
}

fn escape_leaf(label: &str) -> String {
    match label {
        "(" => "-LRB-".to_string(),
        ")" => "-RRB-".to_string(),
        _ => label.replace('(', "-LRB-").replace(')', "-RRB-"),
    }
}

impl ParseTree {
    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn node(&self, id: NodeId) -> &ParseNode {
        &self.nodes[id.0]
    }

    pub fn nodes(&self) -> &[ParseNode] {
        &self.nodes
    }

    /// Number of leaves, equal to the number of document tokens.
    pub fn leaf_count(&self) -> usize {
        self.leaf_of_token.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leaf_of_token.is_empty()
    }

    pub fn leaf_of(&self, token: usize) -> Option<NodeId> {
        self.leaf_of_token.get(token).copied()
    }

    pub fn parent(&self, id: NodeId) -> Option<NodeId> {
        self.nodes[id.0].parent
    }

    /// Strict ancestors, nearest first, ending at the root.
    pub fn ancestors(&self, id: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        std::iter::successors(self.parent(id), move |n| self.parent(*n))
    }

    pub fn depth(&self, id: NodeId) -> usize {
        self.ancestors(id).count()
    }

    fn position_in_parent(&self, id: NodeId) -> Option<(NodeId, usize)> {
        let parent = self.parent(id)?;
        let pos = self.nodes[parent.0].children.iter().position(|c| *c == id)?;
        Some((parent, pos))
    }

    pub fn prev_sibling(&self, id: NodeId) -> Option<NodeId> {
        let (parent, pos) = self.position_in_parent(id)?;
        pos.checked_sub(1).map(|p| self.nodes[parent.0].children[p])
    }

    pub fn next_sibling(&self, id: NodeId) -> Option<NodeId> {
        let (parent, pos) = self.position_in_parent(id)?;
        self.nodes[parent.0].children.get(pos + 1).copied()
    }

    pub fn sentence_roots(&self) -> &[NodeId] {
        &self.nodes[self.root.0].children
    }

    /// One bracketed line per child of the whole-text root.
    pub fn to_bracketed(&self) -> Vec<String> {
        self.sentence_roots().iter().map(|id| self.write_node(*id)).collect()
    }

    fn write_node(&self, id: NodeId) -> String {
        let mut out = String::new();
        self.write_into(id, &mut out);
        out
    }

    fn write_into(&self, id: NodeId, out: &mut String) {
        let node = &self.nodes[id.0];
        if node.is_leaf {
            out.push_str(&escape_leaf(&node.label));
            return;
        }
        let _ = write!(out, "({}", node.label);
        for child in &node.children {
            out.push(' ');
            self.write_into(*child, out);
        }
        out.push(')');
    }

    /// Checks the structural invariants; returns a description of the first
    /// violation.
    pub fn validate(&self) -> Result<(), String> {
        let roots: Vec<_> = self.nodes.iter().filter(|n| n.parent.is_none()).collect();
        if roots.len() != 1 || roots[0].id != self.root {
            return Err("exactly one parentless node expected".into());
        }
        for node in &self.nodes {
            if node.is_leaf {
                if !node.children.is_empty() || node.span.len() != 1 {
                    return Err(format!("leaf {:?} must cover one token", node.id));
                }
                if self.leaf_of_token.get(node.span.start) != Some(&node.id) {
                    return Err(format!("leaf {:?} is not indexed by its token", node.id));
                }
                continue;
            }
            let mut expected = node.span.start;
            for child in &node.children {
                let child = &self.nodes[child.0];
                if child.parent != Some(node.id) || child.span.start != expected {
                    return Err(format!("children of {:?} are not contiguous", node.id));
                }
                expected = child.span.end + 1;
            }
            if !node.children.is_empty() && expected != node.span.end + 1 {
                return Err(format!("span of {:?} differs from its children", node.id));
            }
        }
        Ok(())
    }
}
