//! A document paired with the tree used for chunking.

use std::time::Duration;

use crate::text::{tokenize, Document};
use crate::treebank::{fallback_tree, fetch_external_parses, parse_with_text, ParseTree, TreebankError};

#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    doc: Document,
    tree: ParseTree,
    fallback: bool,
}

/// Where a corpus gets its parse from.
#[derive(Debug, Clone, PartialEq)]
pub enum ParseSource {
    /// Bracketed lines supplied by the caller.
    Inline(Vec<String>),
    /// A parser server reachable over HTTP.
    Endpoint { url: String, timeout: Duration },
    /// No parse; use the flat tree.
    Fallback,
}

impl Corpus {
    pub fn fallback(raw_text: &str) -> Corpus {
        let doc = tokenize(raw_text);
        let tree = fallback_tree(&doc);
        Corpus { doc, tree, fallback: true }
    }

    /// Parse leaves decide the tokenization.
    pub fn with_parses<S: AsRef<str>>(raw_text: &str, lines: &[S]) -> Result<Corpus, TreebankError> {
        let (doc, tree) = parse_with_text(raw_text, lines)?;
        Ok(Corpus { doc, tree, fallback: false })
    }

    pub fn from_parts(doc: Document, tree: ParseTree, fallback: bool) -> Corpus {
        assert_eq!(doc.len(), tree.leaf_count(), "tree leaves must match document tokens");
        Corpus { doc, tree, fallback }
    }

    /// Never fails: any parse problem yields the flat tree, with the reason
    /// returned alongside.
    pub fn load(raw_text: &str, source: &ParseSource) -> (Corpus, Option<String>) {
        let lines = match source {
            ParseSource::Fallback => return (Corpus::fallback(raw_text), None),
            ParseSource::Inline(lines) => lines.clone(),
            ParseSource::Endpoint { url, timeout } => match fetch_external_parses(url, &tokenize(raw_text), *timeout) {
                Ok(lines) => lines,
                Err(e) => return (Corpus::fallback(raw_text), Some(e.to_string())),
            },
        };
        match Corpus::with_parses(raw_text, &lines) {
            Ok(corpus) => (corpus, None),
            Err(e) => (Corpus::fallback(raw_text), Some(e.to_string())),
        }
    }

    pub fn doc(&self) -> &Document {
        &self.doc
    }

    pub fn tree(&self) -> &ParseTree {
        &self.tree
    }

    /// True when the flat tree is in use.
    pub fn is_fallback(&self) -> bool {
        self.fallback
    }
}
