//! The `.rhg` hypergraph text format.
//!
//! ```text
//! # optional comment lines
//! r n m
//! classes c_0 c_1 ... c_{n-1}
//! v v v
//! ...
//! ```
//!
//! The `classes` line is optional. Vertex tokens are either dense ids `0..n`
//! or arbitrary labels; labels are mapped to dense ids in order of first
//! appearance and kept so the writer can emit them again. Comment lines
//! before the header are preserved; text after `#` elsewhere is dropped.
//! Writing a parsed canonical file reproduces it byte for byte.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::hypergraph::{Hypergraph, HypergraphError, PartitionSource};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing `r n m` header")]
    MissingHeader,
    #[error("header declares {declared} edges but {found} were given")]
    EdgeCountMismatch { declared: usize, found: usize },
    #[error(transparent)]
    Invalid(#[from] HypergraphError),
}

/// A parsed `.rhg` file.
#[derive(Debug, Clone)]
pub struct RhgFile {
    pub comments: Vec<String>,
    pub hypergraph: Hypergraph,
    /// Original vertex labels, by dense id. `None` when the file used ids.
    pub labels: Option<Vec<String>>,
}

impl RhgFile {
    pub fn new(hypergraph: Hypergraph) -> Self {
        RhgFile { comments: Vec::new(), hypergraph, labels: None }
    }

    pub fn with_comments(mut self, comments: impl IntoIterator<Item = String>) -> Self {
        self.comments = comments.into_iter().collect();
        self
    }

    pub fn label(&self, v: usize) -> String {
        match &self.labels {
            Some(labels) => labels[v].clone(),
            None => v.to_string(),
        }
    }
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, message: message.into() }
}

fn parse_usize(token: &str, line: usize) -> Result<usize, FormatError> {
    token
        .parse()
        .map_err(|_| syntax(line, format!("expected a non-negative integer, got `{token}`")))
}

pub fn parse(text: &str) -> Result<RhgFile, FormatError> {
    let mut comments = Vec::new();
    let mut header: Option<(usize, usize, usize)> = None;
    let mut classes: Option<Vec<usize>> = None;
    let mut raw_edges: Vec<(usize, Vec<&str>)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        if header.is_none() {
            if let Some(comment) = raw.strip_prefix('#') {
                comments.push(comment.strip_prefix(' ').unwrap_or(comment).to_string());
                continue;
            }
        }
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match header {
            None => {
                if tokens.len() != 3 {
                    return Err(syntax(line_no, "header must be `r n m`"));
                }
                header = Some((
                    parse_usize(tokens[0], line_no)?,
                    parse_usize(tokens[1], line_no)?,
                    parse_usize(tokens[2], line_no)?,
                ));
            }
            Some(_) if tokens[0] == "classes" => {
                if classes.is_some() || !raw_edges.is_empty() {
                    return Err(syntax(line_no, "`classes` must directly follow the header"));
                }
                let values = tokens[1..]
                    .iter()
                    .map(|t| parse_usize(t, line_no))
                    .collect::<Result<Vec<_>, _>>()?;
                classes = Some(values);
            }
            Some((r, _, _)) => {
                if tokens.len() != r {
                    return Err(syntax(line_no, format!("edge must list {r} vertices")));
                }
                raw_edges.push((line_no, tokens));
            }
        }
    }

    let (r, n, m) = header.ok_or(FormatError::MissingHeader)?;
    if raw_edges.len() != m {
        return Err(FormatError::EdgeCountMismatch { declared: m, found: raw_edges.len() });
    }

    let numeric = raw_edges
        .iter()
        .flat_map(|(_, t)| t.iter())
        .all(|t| t.parse::<usize>().is_ok_and(|v| v < n) && canonical_integer(t));

    let (edges, labels) = if numeric {
        let edges = raw_edges
            .iter()
            .map(|(line, t)| t.iter().map(|tok| parse_usize(tok, *line)).collect())
            .collect::<Result<Vec<Vec<usize>>, _>>()?;
        (edges, None)
    } else {
        let mut ids: HashMap<&str, usize> = HashMap::new();
        let mut labels = Vec::new();
        let mut edges = Vec::with_capacity(m);
        for (_, tokens) in &raw_edges {
            let edge = tokens
                .iter()
                .map(|&tok| {
                    *ids.entry(tok).or_insert_with(|| {
                        labels.push(tok.to_string());
                        labels.len() - 1
                    })
                })
                .collect();
            edges.push(edge);
        }
        if labels.len() != n {
            return Err(syntax(
                raw_edges.first().map_or(1, |(l, _)| *l),
                format!("labelled vertices: header declares {n} but {} labels appear", labels.len()),
            ));
        }
        (edges, Some(labels))
    };

    let hypergraph = Hypergraph::new(r, n, edges, classes)?;
    Ok(RhgFile { comments, hypergraph, labels })
}

fn canonical_integer(token: &str) -> bool {
    token == "0" || !token.starts_with('0')
}

/// Serialises in canonical form: comments, header, supplied classes, edges.
pub fn write(file: &RhgFile) -> String {
    let h = &file.hypergraph;
    let mut out = String::new();
    for comment in &file.comments {
        if comment.is_empty() {
            out.push_str("#\n");
        } else {
            let _ = writeln!(out, "# {comment}");
        }
    }
    let _ = writeln!(out, "{} {} {}", h.r(), h.vertex_count(), h.edge_count());
    if h.partition_source() == Some(PartitionSource::Supplied) {
        out.push_str("classes");
        for c in h.partition().unwrap() {
            let _ = write!(out, " {c}");
        }
        out.push('\n');
    }
    for edge in h.edges() {
        let line: Vec<String> = edge.iter().map(|&v| file.label(v)).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const K23: &str = "# K_{2,3}\n2 5 6\nclasses 0 0 1 1 1\n0 2\n0 3\n0 4\n1 2\n1 3\n1 4\n";

    #[test]
    fn canonical_text_round_trips_exactly() {
        let parsed = parse(K23).unwrap();
        assert_eq!(parsed.comments, vec!["K_{2,3}".to_string()]);
        assert_eq!(parsed.hypergraph.edge_count(), 6);
        assert_eq!(write(&parsed), K23);
    }

    #[test]
    fn labels_are_remapped_and_preserved() {
        let text = "3 4 2\nx y z\ny z w\n";
        let parsed = parse(text).unwrap();
        assert_eq!(parsed.labels.as_deref().unwrap(), ["x", "y", "z", "w"]);
        assert_eq!(parsed.hypergraph.edge(1), &[1, 2, 3]);
        assert_eq!(write(&parsed), text);
    }

    #[test]
    fn inline_comments_and_blank_lines_are_ignored() {
        let parsed = parse("2 3 2\n\n0 1 # first\n1 2\n").unwrap();
        assert_eq!(parsed.hypergraph.edge_count(), 2);
        // bipartition was detected, not supplied, so it is not written back
        assert_eq!(write(&parsed), "2 3 2\n0 1\n1 2\n");
    }

    #[test]
    fn reports_errors() {
        assert!(matches!(parse("# only\n"), Err(FormatError::MissingHeader)));
        assert!(matches!(parse("2 2 2\n0 1\n"), Err(FormatError::EdgeCountMismatch { .. })));
        assert!(matches!(parse("3 3 1\n0 1\n"), Err(FormatError::Syntax { line: 2, .. })));
        assert!(matches!(
            parse("3 3 1\nclasses 0 0 1\n0 1 2\n"),
            Err(FormatError::Invalid(HypergraphError::NotRPartite { .. }))
        ));
    }
}
