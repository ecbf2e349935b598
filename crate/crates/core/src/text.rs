//! Tokenized documents and inclusive token ranges.
//!
//! Tokenization is rule based: text is split on whitespace, and runs of
//! punctuation at either edge of a whitespace-delimited chunk are detached
//! into one token per character. Characters inside a chunk (hyphens,
//! apostrophes) stay with the word. Sentences end after a chunk whose
//! trailing punctuation contains `.`, `!` or `?`, and at paragraph breaks.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;
use unicode_general_category::{get_general_category, GeneralCategory};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RangeError {
    #[error("token range [{start}..{end}] is out of bounds for a document of {len} tokens")]
    OutOfBounds { start: usize, end: usize, len: usize },
    #[error("token range start {start} is after end {end}")]
    Inverted { start: usize, end: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot align leaf {leaf:?} of sentence {sentence} with the text at byte {offset}")]
pub struct AlignmentError {
    pub sentence: usize,
    pub leaf: String,
    pub offset: usize,
}

/// Contiguous span of tokens, both ends inclusive.
///
/// Serialized as a two-element array `[start, end]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TokenRange {
    pub start: usize,
    pub end: usize,
}

impl TokenRange {
    pub fn new(start: usize, end: usize) -> Self {
        assert!(start <= end, "inverted token range [{start}..{end}]");
        TokenRange { start, end }
    }

    pub fn try_new(start: usize, end: usize) -> Result<Self, RangeError> {
        if start > end {
            return Err(RangeError::Inverted { start, end });
        }
        Ok(TokenRange { start, end })
    }

    pub fn single(index: usize) -> Self {
        TokenRange { start: index, end: index }
    }

    pub fn len(&self) -> usize {
        self.end - self.start + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, index: usize) -> bool {
        self.start <= index && index <= self.end
    }

    pub fn contains_range(&self, other: &TokenRange) -> bool {
        self.start <= other.start && other.end <= self.end
    }

    pub fn overlaps(&self, other: &TokenRange) -> bool {
        self.start <= other.end && other.start <= self.end
    }

    /// Smallest range covering both.
    pub fn union(&self, other: &TokenRange) -> TokenRange {
        TokenRange { start: self.start.min(other.start), end: self.end.max(other.end) }
    }

    pub fn indices(&self) -> std::ops::RangeInclusive<usize> {
        self.start..=self.end
    }
}

impl fmt::Display for TokenRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}..{}]", self.start, self.end)
    }
}

impl Serialize for TokenRange {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        [self.start, self.end].serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TokenRange {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let [start, end] = <[usize; 2]>::deserialize(deserializer)?;
        TokenRange::try_new(start, end).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TokenKind {
    Word,
    Punctuation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub index: usize,
    pub text: String,
    /// Byte offset of the first character in the raw text.
    pub char_start: usize,
    /// Byte offset one past the last character in the raw text.
    pub char_end: usize,
    pub kind: TokenKind,
    pub sentence_index: usize,
}

impl Token {
    pub fn is_word(&self) -> bool {
        self.kind == TokenKind::Word
    }

    pub fn is_punctuation(&self) -> bool {
        self.kind == TokenKind::Punctuation
    }
}

/// Unicode general category `P*`.
pub fn is_punctuation_char(c: char) -> bool {
    use GeneralCategory::*;
    matches!(
        get_general_category(c),
        ConnectorPunctuation
            | DashPunctuation
            | OpenPunctuation
            | ClosePunctuation
            | InitialPunctuation
            | FinalPunctuation
            | OtherPunctuation
    )
}

fn classify(text: &str) -> TokenKind {
    if !text.is_empty() && text.chars().all(is_punctuation_char) {
        TokenKind::Punctuation
    } else {
        TokenKind::Word
    }
}

const SENTENCE_FINAL: [char; 3] = ['.', '!', '?'];

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Document {
    raw_text: String,
    tokens: Vec<Token>,
    sentence_bounds: Vec<TokenRange>,
}

/// Splits raw text into word and punctuation tokens grouped into sentences.
pub fn tokenize(raw_text: &str) -> Document {
    let mut spans: Vec<(usize, usize)> = Vec::new();
    let mut sentence_of: Vec<usize> = Vec::new();
    let mut sentence = 0usize;
    let mut open_sentence = false;

    for (chunk_start, chunk, gap_before) in whitespace_chunks(raw_text) {
        if open_sentence && is_paragraph_break(gap_before) {
            sentence += 1;
        }

        let chars: Vec<(usize, char)> = chunk.char_indices().collect();
        let lead = chars.iter().take_while(|(_, c)| is_punctuation_char(*c)).count();
        let trail = if lead == chars.len() {
            0
        } else {
            chars.iter().rev().take_while(|(_, c)| is_punctuation_char(*c)).count()
        };
        let char_end = |i: usize| chars.get(i + 1).map_or(chunk.len(), |(b, _)| *b);

        for (i, (b, _)) in chars.iter().enumerate().take(lead) {
            spans.push((chunk_start + b, chunk_start + char_end(i)));
        }
        if lead < chars.len() {
            let core_last = chars.len() - trail - 1;
            spans.push((chunk_start + chars[lead].0, chunk_start + char_end(core_last)));
            for (i, (b, _)) in chars.iter().enumerate().skip(core_last + 1) {
                spans.push((chunk_start + b, chunk_start + char_end(i)));
            }
        }
        sentence_of.resize(spans.len(), sentence);
        open_sentence = true;

        let trailing = if lead == chars.len() { &chars[..] } else { &chars[chars.len() - trail..] };
        if trailing.iter().any(|(_, c)| SENTENCE_FINAL.contains(c)) {
            sentence += 1;
            open_sentence = false;
        }
    }

    let tokens = spans
        .into_iter()
        .zip(sentence_of)
        .enumerate()
        .map(|(index, ((start, end), sentence_index))| {
            let text = raw_text[start..end].to_string();
            Token { index, kind: classify(&text), text, char_start: start, char_end: end, sentence_index }
        })
        .collect();
    Document::assemble(raw_text.to_string(), tokens)
}

/// Yields `(byte offset, chunk, whitespace preceding the chunk)`.
fn whitespace_chunks(text: &str) -> impl Iterator<Item = (usize, &str, &str)> {
    let mut pos = 0;
    std::iter::from_fn(move || {
        let rest = &text[pos..];
        let skip = rest.find(|c: char| !c.is_whitespace())?;
        let gap = &rest[..skip];
        let start = pos + skip;
        let len = text[start..].find(char::is_whitespace).unwrap_or(text.len() - start);
        pos = start + len;
        Some((start, &text[start..start + len], gap))
    })
}

fn is_paragraph_break(gap: &str) -> bool {
    gap.matches('\n').count() >= 2
}

/// Raw-text spellings a treebank leaf may stand for.
fn leaf_surface_forms(leaf: &str) -> Vec<&str> {
    let mapped: &[&str] = match leaf {
        "-LRB-" => &["("],
        "-RRB-" => &[")"],
        "-LSB-" => &["["],
        "-RSB-" => &["]"],
        "-LCB-" => &["{"],
        "-RCB-" => &["}"],
        "``" => &["\"", "\u{201c}", "'", "\u{2018}"],
        "''" => &["\"", "\u{201d}", "'", "\u{2019}"],
        "`" => &["'", "\u{2018}"],
        "--" => &["\u{2013}", "\u{2014}"],
        _ => &[],
    };
    let mut forms = vec![leaf];
    forms.extend_from_slice(mapped);
    forms
}

impl Document {
    fn assemble(raw_text: String, tokens: Vec<Token>) -> Document {
        let mut sentence_bounds: Vec<TokenRange> = Vec::new();
        for token in &tokens {
            match sentence_bounds.last_mut() {
                Some(last) if tokens[last.start].sentence_index == token.sentence_index => {
                    last.end = token.index;
                }
                _ => sentence_bounds.push(TokenRange::single(token.index)),
            }
        }
        // Re-number so indices are dense even if a paragraph break and a
        // sentence-final mark coincide.
        let mut tokens = tokens;
        for (i, bounds) in sentence_bounds.iter().enumerate() {
            for t in bounds.indices() {
                tokens[t].sentence_index = i;
            }
        }
        Document { raw_text, tokens, sentence_bounds }
    }

    /// Rebuilds the tokenization from treebank leaves, one leaf list per
    /// sentence. Offsets are recovered by matching leaves left to right; only
    /// whitespace may separate consecutive leaves.
    pub fn from_leaves<S: AsRef<str>>(raw_text: &str, sentences: &[Vec<S>]) -> Result<Document, AlignmentError> {
        let mut cursor = 0usize;
        let mut tokens = Vec::new();
        for (sentence_index, leaves) in sentences.iter().enumerate() {
            for leaf in leaves {
                let leaf = leaf.as_ref();
                let rest = &raw_text[cursor..];
                let skip = rest.find(|c: char| !c.is_whitespace()).unwrap_or(rest.len());
                let start = cursor + skip;
                let form = leaf_surface_forms(leaf)
                    .into_iter()
                    .find(|form| !form.is_empty() && raw_text[start..].starts_with(form))
                    .ok_or_else(|| AlignmentError {
                        sentence: sentence_index,
                        leaf: leaf.to_string(),
                        offset: start,
                    })?;
                let end = start + form.len();
                let text = raw_text[start..end].to_string();
                tokens.push(Token {
                    index: tokens.len(),
                    kind: classify(&text),
                    text,
                    char_start: start,
                    char_end: end,
                    sentence_index,
                });
                cursor = end;
            }
        }
        Ok(Document::assemble(raw_text.to_string(), tokens))
    }

    pub fn raw_text(&self) -> &str {
        &self.raw_text
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn token(&self, index: usize) -> Option<&Token> {
        self.tokens.get(index)
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn sentence_bounds(&self) -> &[TokenRange] {
        &self.sentence_bounds
    }

    /// Range covering every token, if any.
    pub fn full_range(&self) -> Option<TokenRange> {
        (!self.tokens.is_empty()).then(|| TokenRange::new(0, self.tokens.len() - 1))
    }

    pub fn check_range(&self, range: TokenRange) -> Result<TokenRange, RangeError> {
        if range.start > range.end {
            return Err(RangeError::Inverted { start: range.start, end: range.end });
        }
        if range.end >= self.tokens.len() {
            return Err(RangeError::OutOfBounds { start: range.start, end: range.end, len: self.tokens.len() });
        }
        Ok(range)
    }

    /// Raw text from the first token's start to the last token's end,
    /// including the original whitespace between them.
    pub fn range_text(&self, range: TokenRange) -> Result<&str, RangeError> {
        let range = self.check_range(range)?;
        let start = self.tokens[range.start].char_start;
        let end = self.tokens[range.end].char_end;
        Ok(&self.raw_text[start..end])
    }

    /// Number of word tokens in `range`; tokens past the end are not counted.
    pub fn word_count(&self, range: TokenRange) -> usize {
        self.tokens.iter().skip(range.start).take(range.len()).filter(|t| t.is_word()).count()
    }

    pub fn is_punctuation(&self, index: usize) -> bool {
        self.tokens[index].is_punctuation()
    }

    pub fn is_word(&self, index: usize) -> bool {
        self.tokens[index].is_word()
    }

    /// Token texts grouped by sentence.
    pub fn sentence_texts(&self) -> Vec<Vec<&str>> {
        self.sentence_bounds.iter().map(|b| b.indices().map(|i| self.tokens[i].text.as_str()).collect()).collect()
    }

    /// Byte ranges of paragraphs (text separated by blank lines).
    pub fn paragraphs(&self) -> Vec<&str> {
        let mut out = Vec::new();
        let mut current: Option<(usize, usize)> = None;
        for (start, chunk, gap) in whitespace_chunks(&self.raw_text) {
            let end = start + chunk.len();
            current = match current {
                Some((s, e)) if !is_paragraph_break(gap) => Some((s, end.max(e))),
                Some((s, e)) => {
                    out.push(&self.raw_text[s..e]);
                    Some((start, end))
                }
                None => Some((start, end)),
            };
        }
        if let Some((s, e)) = current {
            out.push(&self.raw_text[s..e]);
        }
        out
    }
}
