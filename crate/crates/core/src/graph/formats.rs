//! Text input formats: graph6, 0/1 adjacency matrices and edge lists.

use super::{check_vertex_count, Graph, GraphError, MAX_VERTICES};

const GRAPH6_HEADER: &str = ">>graph6<<";
const OFFSET: u8 = 63;

fn g6_err(offset: usize, reason: impl Into<String>) -> GraphError {
    GraphError::Graph6 {
        offset,
        reason: reason.into(),
    }
}

/// Decodes one graph6 line. Trailing whitespace is ignored and the optional
/// `>>graph6<<` header is accepted. Byte offsets in errors index into `text`.
pub fn parse_graph6(text: &str) -> Result<Graph, GraphError> {
    let bytes = text.trim_end().as_bytes();
    let start = if bytes.starts_with(GRAPH6_HEADER.as_bytes()) {
        GRAPH6_HEADER.len()
    } else {
        0
    };
    let body = &bytes[start..];
    if body.is_empty() {
        return Err(g6_err(start, "empty input"));
    }
    if let Some(pos) = body.iter().position(|&b| !(OFFSET..=126).contains(&b)) {
        return Err(g6_err(
            start + pos,
            format!(
                "byte 0x{:02x} outside the printable range 63..=126",
                body[pos]
            ),
        ));
    }

    let (n, header_len) = if body[0] != 126 {
        ((body[0] - OFFSET) as usize, 1)
    } else {
        let (width, skip) = if body.get(1) == Some(&126) {
            (6, 2)
        } else {
            (3, 1)
        };
        if body.len() < skip + width {
            return Err(g6_err(start + body.len(), "truncated vertex-count header"));
        }
        let n = body[skip..skip + width]
            .iter()
            .fold(0usize, |acc, &b| (acc << 6) | (b - OFFSET) as usize);
        (n, skip + width)
    };
    if n == 0 {
        return Err(g6_err(start, "graph has no vertices"));
    }
    if n > MAX_VERTICES {
        return Err(g6_err(
            start,
            format!("{n} vertices exceeds the limit of {MAX_VERTICES}"),
        ));
    }

    let bit_count = n * (n - 1) / 2;
    let data = &body[header_len..];
    let expected = bit_count.div_ceil(6);
    if data.len() < expected {
        return Err(g6_err(
            start + body.len(),
            format!(
                "truncated edge data: expected {expected} bytes, found {}",
                data.len()
            ),
        ));
    }
    if data.len() > expected {
        return Err(g6_err(
            start + header_len + expected,
            "unexpected trailing data",
        ));
    }

    let mut adj = vec![0u32; n];
    let mut k = 0usize;
    for j in 1..n {
        for i in 0..j {
            let byte = data[k / 6] - OFFSET;
            if byte >> (5 - k % 6) & 1 == 1 {
                adj[i] |= 1 << j;
                adj[j] |= 1 << i;
            }
            k += 1;
        }
    }
    if bit_count % 6 != 0 {
        let last = data[expected - 1] - OFFSET;
        let pad = 6 - bit_count % 6;
        if last & ((1 << pad) - 1) != 0 {
            return Err(g6_err(
                start + header_len + expected - 1,
                "nonzero padding bits",
            ));
        }
    }
    Graph::from_adjacency_rows(adj)
}

/// Encodes a graph as a graph6 line without header or newline.
pub fn encode_graph6(g: &Graph) -> String {
    let n = g.vertex_count();
    let mut out = Vec::with_capacity(2 + n * n / 12);
    // n <= MAX_VERTICES < 63, so the short header always applies
    out.push(n as u8 + OFFSET);
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + OFFSET);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + OFFSET);
    }
    String::from_utf8(out).expect("graph6 output is ASCII")
}

fn adj_err(row: usize, col: usize, reason: impl Into<String>) -> GraphError {
    GraphError::Adjacency {
        row,
        col,
        reason: reason.into(),
    }
}

/// Parses a square 0/1 matrix. Rows are separated by newlines or commas and
/// entries by whitespace. A single row holding k² entries is read as a k×k
/// matrix.
pub fn parse_adjacency(text: &str) -> Result<Graph, GraphError> {
    let mut rows: Vec<Vec<&str>> = text
        .split(['\n', ','])
        .map(|line| line.split_whitespace().collect::<Vec<_>>())
        .filter(|row| !row.is_empty())
        .collect();
    if rows.len() == 1 && rows[0].len() > 1 {
        let len = rows[0].len();
        let k = (len as f64).sqrt().round() as usize;
        if k * k == len {
            rows = rows[0].chunks(k).map(<[&str]>::to_vec).collect();
        }
    }
    let n = rows.len();
    check_vertex_count(n)?;

    let mut adj = vec![0u32; n];
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(adj_err(
                i,
                row.len().min(n),
                format!(
                    "matrix is not square: row has {} entries, expected {n}",
                    row.len()
                ),
            ));
        }
        for (j, tok) in row.iter().enumerate() {
            match *tok {
                "0" => {}
                "1" if i == j => return Err(adj_err(i, j, "nonzero diagonal entry")),
                "1" => adj[i] |= 1 << j,
                other => return Err(adj_err(i, j, format!("entry {other:?} is not 0 or 1"))),
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if (adj[i] >> j & 1) != (adj[j] >> i & 1) {
                return Err(adj_err(i, j, "matrix is not symmetric"));
            }
        }
    }
    Graph::from_adjacency_rows(adj)
}

/// Parses `"n; i j; i j; ..."`. Entries may be separated by `;` or newlines;
/// vertex indices are 0-based.
pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut entries = text
        .split([';', '\n'])
        .map(str::trim)
        .filter(|e| !e.is_empty())
        .enumerate();
    let (_, head) = entries.next().ok_or(GraphError::EdgeList {
        entry: 0,
        reason: "missing vertex count".into(),
    })?;
    let n: usize = head.parse().map_err(|_| GraphError::EdgeList {
        entry: 0,
        reason: format!("vertex count {head:?} is not a number"),
    })?;
    let mut g = Graph::empty(n)?;
    for (entry, text) in entries {
        let err = |reason: String| GraphError::EdgeList { entry, reason };
        let ends: Vec<&str> = text.split_whitespace().collect();
        if ends.len() != 2 {
            return Err(err(format!("expected two vertex indices, found {text:?}")));
        }
        let parse = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| err(format!("{s:?} is not a vertex index")))
        };
        let (a, b) = (parse(ends[0])?, parse(ends[1])?);
        g.insert_edge(a, b).map_err(|e| err(e.to_string()))?;
    }
    Ok(g)
}
