//! Text encodings of graphs: graph6 and a plain edge list.
//!
//! graph6 packs the upper triangle of the adjacency matrix in column order
//! `x(0,1), x(0,2), x(1,2), x(0,3), ...` into 6-bit groups, most significant bit
//! first, each written as `value + 63`. The order prefix is the single byte
//! `63 + n` for `n <= 62`; the 4- and 8-byte forms for larger orders are
//! understood on input only.

use thiserror::Error;

use crate::graph::{Graph, GraphError};

/// Largest order [`to_graph6`] will write.
pub const MAX_GRAPH6_OUTPUT_ORDER: usize = 62;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("graph6: {reason} at byte {offset}")]
    Graph6 { offset: usize, reason: String },
    #[error("graph6 output is limited to n <= {MAX_GRAPH6_OUTPUT_ORDER}, got n = {0}")]
    Graph6TooLarge(usize),
    #[error("edge list line {line}: {reason}")]
    EdgeList { line: usize, reason: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn g6_err(offset: usize, reason: impl Into<String>) -> FormatError {
    FormatError::Graph6 {
        offset,
        reason: reason.into(),
    }
}

pub fn to_graph6(g: &Graph) -> Result<String, FormatError> {
    let n = g.order();
    if n > MAX_GRAPH6_OUTPUT_ORDER {
        return Err(FormatError::Graph6TooLarge(n));
    }
    let mut out = Vec::with_capacity(1 + (n * n.saturating_sub(1) / 2).div_ceil(6));
    out.push(63 + n as u8);
    let mut acc = 0u8;
    let mut filled = 0;
    for v in 1..n {
        for u in 0..v {
            acc = (acc << 1) | u8::from(g.has_edge(u, v));
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    Ok(String::from_utf8(out).expect("graph6 bytes are printable ASCII"))
}

pub fn from_graph6(text: &str) -> Result<Graph, FormatError> {
    let mut bytes = text.trim_end_matches(['\n', '\r']).as_bytes();
    let mut base = 0;
    if let Some(rest) = bytes.strip_prefix(b">>graph6<<") {
        bytes = rest;
        base = 10;
    }
    if bytes.is_empty() {
        return Err(g6_err(base, "missing order byte"));
    }
    for (i, &b) in bytes.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(g6_err(base + i, format!("byte {b} outside 63..=126")));
        }
    }

    let (n, header) = if bytes[0] != 126 {
        ((bytes[0] - 63) as usize, 1)
    } else if bytes.len() >= 2 && bytes[1] != 126 {
        if bytes.len() < 4 {
            return Err(g6_err(base + bytes.len(), "truncated 4-byte order prefix"));
        }
        (read_sixes(&bytes[1..4]), 4)
    } else {
        if bytes.len() < 8 {
            return Err(g6_err(base + bytes.len(), "truncated 8-byte order prefix"));
        }
        (read_sixes(&bytes[2..8]), 8)
    };

    let nbits = n * n.saturating_sub(1) / 2;
    let expected = nbits.div_ceil(6);
    let body = &bytes[header..];
    if body.len() != expected {
        let at = base + header + body.len().min(expected);
        return Err(g6_err(
            at,
            format!(
                "expected {expected} adjacency bytes for n = {n}, found {}",
                body.len()
            ),
        ));
    }

    let mut g = Graph::empty(n);
    let mut k = 0;
    for v in 1..n {
        for u in 0..v {
            let byte = body[k / 6] - 63;
            if byte >> (5 - k % 6) & 1 == 1 {
                g.set_edge(u, v);
            }
            k += 1;
        }
    }
    if nbits % 6 != 0 {
        let last = body[expected - 1] - 63;
        let pad = 6 - nbits % 6;
        if last & ((1 << pad) - 1) != 0 {
            return Err(g6_err(
                base + header + expected - 1,
                "non-zero padding bits",
            ));
        }
    }
    Ok(g)
}

fn read_sixes(bytes: &[u8]) -> usize {
    bytes
        .iter()
        .fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize)
}

/// `n m` on the first line, then one `u v` pair per line.
pub fn to_edge_list(g: &Graph) -> String {
    let mut s = format!("{} {}\n", g.order(), g.edge_count());
    for (u, v) in g.edges() {
        s.push_str(&format!("{u} {v}\n"));
    }
    s
}

pub fn from_edge_list(text: &str) -> Result<Graph, FormatError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines.next().ok_or(FormatError::EdgeList {
        line: 1,
        reason: "missing \"n m\" header".into(),
    })?;
    let [n, m] = parse_pair(hline, header)?;
    let mut edges = Vec::with_capacity(m);
    for (line, l) in lines {
        if edges.len() == m {
            return Err(FormatError::EdgeList {
                line,
                reason: format!("more than the declared {m} edges"),
            });
        }
        let [u, v] = parse_pair(line, l)?;
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(FormatError::EdgeList {
            line: hline,
            reason: format!("declared {m} edges, found {}", edges.len()),
        });
    }
    Ok(Graph::from_edge_list(n, &edges)?)
}

fn parse_pair(line: usize, text: &str) -> Result<[usize; 2], FormatError> {
    let fields: Vec<&str> = text.split_whitespace().collect();
    if fields.len() != 2 {
        return Err(FormatError::EdgeList {
            line,
            reason: format!("expected two integers, found {:?}", text),
        });
    }
    let mut out = [0; 2];
    for (slot, f) in out.iter_mut().zip(&fields) {
        *slot = f.parse().map_err(|_| FormatError::EdgeList {
            line,
            reason: format!("not a non-negative integer: {f:?}"),
        })?;
    }
    Ok(out)
}
