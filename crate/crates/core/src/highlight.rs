//! Dictionary-entity highlighting on free text.
//!
//! Matching is leftmost-longest and non-overlapping: scanning left to
//! right, the longest entity that matches at a position wins and scanning
//! resumes at its end. Offsets are byte offsets into the UTF-8 document.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::fold::fold_char;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct HighlightOptions {
    pub case_insensitive: bool,
    /// Both match edges must touch a non-alphanumeric char or a document edge.
    pub word_boundary: bool,
}

impl Default for HighlightOptions {
    fn default() -> Self {
        HighlightOptions {
            case_insensitive: true,
            word_boundary: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HighlightSpan {
    pub start: usize,
    pub end: usize,
    /// The dictionary surface that matched.
    pub surface: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RenderFormat {
    Html,
    Json,
}

impl std::str::FromStr for RenderFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "html" => Ok(RenderFormat::Html),
            "json" => Ok(RenderFormat::Json),
            other => Err(format!("unknown render format {other:?}")),
        }
    }
}

#[derive(Default)]
struct Node {
    children: HashMap<char, usize>,
    // first entity (in input order) ending here
    terminal: Option<usize>,
}

/// Char trie over (optionally folded) entity surfaces.
struct Trie {
    nodes: Vec<Node>,
}

impl Trie {
    fn build<S: AsRef<str>>(entities: &[S], case_insensitive: bool) -> Self {
        let mut nodes = vec![Node::default()];
        for (id, entity) in entities.iter().enumerate() {
            let entity = entity.as_ref();
            if entity.is_empty() {
                continue;
            }
            let mut at = 0;
            for c in entity.chars() {
                let c = if case_insensitive { fold_char(c) } else { c };
                at = match nodes[at].children.get(&c) {
                    Some(&next) => next,
                    None => {
                        nodes.push(Node::default());
                        let next = nodes.len() - 1;
                        nodes[at].children.insert(c, next);
                        next
                    }
                };
            }
            nodes[at].terminal.get_or_insert(id);
        }
        Trie { nodes }
    }
}

/// Finds the leftmost-longest, non-overlapping occurrences of `entities`.
pub fn highlight<S: AsRef<str>>(
    document: &str,
    entities: &[S],
    options: HighlightOptions,
) -> Vec<HighlightSpan> {
    let trie = Trie::build(entities, options.case_insensitive);
    if trie.nodes[0].children.is_empty() {
        return Vec::new();
    }
    let chars: Vec<(usize, char)> = document.char_indices().collect();
    let keys: Vec<char> = if options.case_insensitive {
        chars.iter().map(|&(_, c)| fold_char(c)).collect()
    } else {
        chars.iter().map(|&(_, c)| c).collect()
    };
    let byte_at = |i: usize| chars.get(i).map_or(document.len(), |&(b, _)| b);
    let is_word = |i: usize| chars.get(i).is_some_and(|&(_, c)| c.is_alphanumeric());

    let mut spans = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let can_start = !options.word_boundary || i == 0 || !is_word(i - 1);
        let mut best: Option<(usize, usize)> = None;
        if can_start {
            let mut at = 0;
            for (j, key) in keys.iter().enumerate().skip(i) {
                let Some(&next) = trie.nodes[at].children.get(key) else {
                    break;
                };
                at = next;
                if let Some(id) = trie.nodes[at].terminal {
                    if !options.word_boundary || !is_word(j + 1) {
                        best = Some((j + 1, id));
                    }
                }
            }
        }
        match best {
            Some((end, id)) => {
                spans.push(HighlightSpan {
                    start: byte_at(i),
                    end: byte_at(end),
                    surface: entities[id].as_ref().to_owned(),
                });
                i = end;
            }
            None => i += 1,
        }
    }
    spans
}

/// Checks that spans are in bounds, on char boundaries, sorted and
/// non-overlapping.
pub fn validate_spans(document: &str, spans: &[HighlightSpan]) -> Result<()> {
    let mut prev_end = 0;
    for span in spans {
        let invalid = |reason| Error::InvalidSpan {
            start: span.start,
            end: span.end,
            reason,
        };
        if span.start >= span.end {
            return Err(invalid("empty or reversed"));
        }
        if span.end > document.len() {
            return Err(invalid("past end of document"));
        }
        if !document.is_char_boundary(span.start) || !document.is_char_boundary(span.end) {
            return Err(invalid("not on a char boundary"));
        }
        if span.start < prev_end {
            return Err(invalid("overlaps or precedes previous span"));
        }
        prev_end = span.end;
    }
    Ok(())
}

/// HTML with each span wrapped in `<mark data-entity="...">`, or JSON
/// `{"document": ..., "spans": [...]}`.
pub fn render_annotated(
    document: &str,
    spans: &[HighlightSpan],
    format: RenderFormat,
) -> Result<Vec<u8>> {
    validate_spans(document, spans)?;
    match format {
        RenderFormat::Html => {
            let mut out = String::with_capacity(document.len() + spans.len() * 32);
            let mut at = 0;
            for span in spans {
                escape_into(&mut out, &document[at..span.start]);
                out.push_str("<mark data-entity=\"");
                escape_into(&mut out, &span.surface);
                out.push_str("\">");
                escape_into(&mut out, &document[span.start..span.end]);
                out.push_str("</mark>");
                at = span.end;
            }
            escape_into(&mut out, &document[at..]);
            Ok(out.into_bytes())
        }
        RenderFormat::Json => {
            #[derive(Serialize)]
            struct Annotated<'a> {
                document: &'a str,
                spans: &'a [HighlightSpan],
            }
            Ok(serde_json::to_vec(&Annotated { document, spans }).expect("spans serialize"))
        }
    }
}

fn escape_into(out: &mut String, text: &str) {
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&#39;"),
            _ => out.push(c),
        }
    }
}
