//! Reader for Penn Treebank style S-expressions, one tree per line.

use super::TreebankError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum RawChild {
    Node(RawNode),
    Leaf(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct RawNode {
    pub label: String,
    pub children: Vec<RawChild>,
}

impl RawNode {
    pub fn leaves(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a str>) {
        for child in &self.children {
            match child {
                RawChild::Leaf(text) => out.push(text),
                RawChild::Node(node) => node.collect_leaves(out),
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Lexeme<'a> {
    Open,
    Close,
    Atom(&'a str),
}

/// Lexemes paired with 1-based character columns.
fn lex(line: &str) -> Vec<(usize, Lexeme<'_>)> {
    let mut out = Vec::new();
    let mut atom_start: Option<(usize, usize)> = None;
    let mut column = 0;
    for (byte, c) in line.char_indices() {
        column += 1;
        let delimiter = c == '(' || c == ')' || c.is_whitespace();
        if delimiter {
            if let Some((start_byte, start_col)) = atom_start.take() {
                out.push((start_col, Lexeme::Atom(&line[start_byte..byte])));
            }
            match c {
                '(' => out.push((column, Lexeme::Open)),
                ')' => out.push((column, Lexeme::Close)),
                _ => {}
            }
        } else if atom_start.is_none() {
            atom_start = Some((byte, column));
        }
    }
    if let Some((start_byte, start_col)) = atom_start {
        out.push((start_col, Lexeme::Atom(&line[start_byte..])));
    }
    out
}

/// Parses a single bracketed tree. `line_no` is 1-based and only used for
/// error reporting.
pub(crate) fn parse_line(line: &str, line_no: usize) -> Result<RawNode, TreebankError> {
    let lexemes = lex(line);
    let end_column = line.chars().count() + 1;
    let err =
        |column: usize, message: &str| TreebankError::Parse { line: line_no, column, message: message.to_string() };

    let mut stack: Vec<(usize, RawNode)> = Vec::new();
    let mut finished: Option<RawNode> = None;
    let mut iter = lexemes.into_iter().peekable();

    while let Some((column, lexeme)) = iter.next() {
        if finished.is_some() {
            return Err(err(column, "unexpected content after the closing bracket"));
        }
        match lexeme {
            Lexeme::Open => {
                let label = match iter.peek() {
                    Some((_, Lexeme::Atom(label))) => {
                        let label = label.to_string();
                        iter.next();
                        label
                    }
                    _ => String::new(),
                };
                stack.push((column, RawNode { label, children: Vec::new() }));
            }
            Lexeme::Close => {
                let (_, node) = stack.pop().ok_or_else(|| err(column, "unbalanced ')'"))?;
                match stack.last_mut() {
                    Some((_, parent)) => parent.children.push(RawChild::Node(node)),
                    None => finished = Some(node),
                }
            }
            Lexeme::Atom(text) => match stack.last_mut() {
                Some((_, parent)) => parent.children.push(RawChild::Leaf(text.to_string())),
                None => return Err(err(column, "leaf outside of any bracket")),
            },
        }
    }

    if let Some((open_column, _)) = stack.last() {
        return Err(err(end_column, &format!("unbalanced '(' opened at column {open_column}")));
    }
    finished.ok_or_else(|| err(1, "empty tree"))
}
