//! Resolving a graph argument: fixture name, file path, or inline text.

use std::path::Path;

use clap::ValueEnum;
use qgi_core::fixtures;
use qgi_core::graph::{parse_adjacency, parse_edge_list, parse_graph6, Graph, GraphError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Auto,
    Graph6,
    Adjacency,
    Edges,
}

#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("reading {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("{origin}: {source}")]
    Parse { origin: String, source: GraphError },
}

impl InputError {
    pub fn is_resource_cap(&self) -> bool {
        matches!(
            self,
            InputError::Parse {
                source: GraphError::TooManyVertices { .. },
                ..
            }
        )
    }
}

/// Guesses the format of `text`.
///
/// A single token of graph6 characters is graph6; text with `;` is an edge
/// list; text made only of 0/1 tokens forming a square is a matrix; anything
/// else is an edge list.
pub fn detect(text: &str) -> Format {
    let trimmed = text.trim();
    if trimmed.starts_with(">>graph6<<")
        || (!trimmed.is_empty() && trimmed.bytes().all(|b| (63..=126).contains(&b)))
    {
        return Format::Graph6;
    }
    if trimmed.contains(';') {
        return Format::Edges;
    }
    let tokens: Vec<&str> = trimmed
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .collect();
    let k = (tokens.len() as f64).sqrt().round() as usize;
    if k * k == tokens.len() && tokens.iter().all(|t| *t == "0" || *t == "1") {
        Format::Adjacency
    } else {
        Format::Edges
    }
}

pub fn parse(text: &str, format: Format) -> Result<Graph, GraphError> {
    match format {
        Format::Auto => parse(text, detect(text)),
        Format::Graph6 => parse_graph6(text.trim()),
        Format::Adjacency => parse_adjacency(text),
        Format::Edges => parse_edge_list(text),
    }
}

/// Fixture names win over files, and files over inline text.
pub fn resolve(arg: &str, format: Format) -> Result<Graph, InputError> {
    if format == Format::Auto {
        if let Some(g) = fixtures::by_name(arg) {
            return Ok(g);
        }
    }
    let path = Path::new(arg);
    let (text, origin) = if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|source| InputError::Read {
            path: arg.to_owned(),
            source,
        })?;
        (text, arg.to_owned())
    } else {
        (arg.to_owned(), "inline graph".to_owned())
    };
    parse(&text, format).map_err(|source| InputError::Parse { origin, source })
}
