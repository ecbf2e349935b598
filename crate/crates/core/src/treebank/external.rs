//! Client for constituency-parser HTTP servers.
//!
//! Follows the common parser-server convention: the raw text is POSTed as
//! the request body, annotator properties travel in a `properties` query
//! parameter, and the JSON response carries a `sentences` array whose items
//! hold a bracketed `parse` string.

use std::time::Duration;

use reqwest::blocking::Client;
use reqwest::Url;
use serde::Deserialize;
use thiserror::Error;

use crate::text::Document;

const DEFAULT_PROPERTIES: &str = r#"{"annotators":"tokenize,ssplit,pos,parse","outputFormat":"json"}"#;

#[derive(Debug, Error)]
pub enum FetchError {
    #[error("invalid endpoint url {0:?}")]
    Url(String),
    #[error("parser request timed out")]
    Timeout,
    #[error("parser request failed: {0}")]
    Network(String),
    #[error("parser returned HTTP {0}")]
    Status(u16),
    #[error("malformed parser response: {0}")]
    Format(String),
}

#[derive(Deserialize)]
struct Annotation {
    sentences: Vec<SentenceAnnotation>,
}

#[derive(Deserialize)]
struct SentenceAnnotation {
    parse: String,
}

fn endpoint_with_properties(endpoint_url: &str) -> Result<Url, FetchError> {
    let mut url = Url::parse(endpoint_url).map_err(|_| FetchError::Url(endpoint_url.to_string()))?;
    if !url.query_pairs().any(|(k, _)| k == "properties") {
        url.query_pairs_mut().append_pair("properties", DEFAULT_PROPERTIES);
    }
    Ok(url)
}

/// Extracts one single-line bracketed parse per sentence from a parser
/// response body.
pub fn parses_from_response(body: &str) -> Result<Vec<String>, FetchError> {
    let annotation: Annotation = serde_json::from_str(body).map_err(|e| FetchError::Format(e.to_string()))?;
    annotation
        .sentences
        .into_iter()
        .map(|s| {
            let line = s.parse.split_whitespace().collect::<Vec<_>>().join(" ");
            if line.starts_with('(') && line.ends_with(')') {
                Ok(line)
            } else {
                Err(FetchError::Format(format!("not a bracketed parse: {line:?}")))
            }
        })
        .collect()
}

/// Sends the document to a parser server one paragraph at a time and
/// returns the bracketed parses, with a blank line between paragraphs.
///
/// Any error here means the caller should fall back to the flat tree.
pub fn fetch_external_parses(endpoint_url: &str, doc: &Document, timeout: Duration) -> Result<Vec<String>, FetchError> {
    let url = endpoint_with_properties(endpoint_url)?;
    let client = Client::builder().timeout(timeout).build().map_err(|e| FetchError::Network(e.to_string()))?;

    let mut lines = Vec::new();
    for (i, paragraph) in doc.paragraphs().into_iter().enumerate() {
        let response = client
            .post(url.clone())
            .header("Content-Type", "text/plain; charset=utf-8")
            .body(paragraph.to_string())
            .send()
            .map_err(|e| if e.is_timeout() { FetchError::Timeout } else { FetchError::Network(e.to_string()) })?;
        if !response.status().is_success() {
            return Err(FetchError::Status(response.status().as_u16()));
        }
        let body = response.text().map_err(|e| FetchError::Network(e.to_string()))?;
        if i > 0 {
            lines.push(String::new());
        }
        lines.extend(parses_from_response(&body)?);
    }
    Ok(lines)
}
