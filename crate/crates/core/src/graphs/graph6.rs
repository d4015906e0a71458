//! The graph6 text format: a size prefix followed by the upper triangle of
//! the adjacency matrix, column by column, packed six bits per printable byte.

use crate::error::{argument, Error, Result};

use super::DenseGraph;

const HEADER: &str = ">>graph6<<";
const MAX_ORDER: usize = 68_719_476_735;

fn parse_err(offset: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        offset,
        message: message.into(),
    }
}

fn push_size(out: &mut String, n: usize) {
    if n <= 62 {
        out.push((n as u8 + 63) as char);
    } else if n <= 258_047 {
        out.push('~');
        for shift in [12, 6, 0] {
            out.push((((n >> shift) & 63) as u8 + 63) as char);
        }
    } else {
        out.push_str("~~");
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push((((n >> shift) & 63) as u8 + 63) as char);
        }
    }
}

pub fn encode_graph6(g: &DenseGraph) -> Result<String> {
    let n = g.order();
    if n > MAX_ORDER {
        return Err(argument(format!("order {n} too large for graph6")));
    }
    let mut out = String::with_capacity(8 + (n * n.saturating_sub(1) / 2).div_ceil(6));
    push_size(&mut out, n);
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push((acc + 63) as char);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push(((acc << (6 - filled)) + 63) as char);
    }
    Ok(out)
}

fn sextet(bytes: &[u8], offset: usize) -> Result<u8> {
    match bytes.get(offset) {
        None => Err(parse_err(offset, "unexpected end of input")),
        Some(&b) if (63..=126).contains(&b) => Ok(b - 63),
        Some(&b) => Err(parse_err(offset, format!("byte {b:#04x} outside 63..=126"))),
    }
}

/// Decodes one graph6 string. An optional `>>graph6<<` header and one
/// trailing newline are accepted; errors report the offending byte offset.
pub fn decode_graph6(text: &str) -> Result<DenseGraph> {
    let mut start = 0;
    if text.starts_with(HEADER) {
        start = HEADER.len();
    }
    let body = text.strip_suffix('\n').unwrap_or(text);
    let bytes = body.as_bytes();
    let mut pos = start;
    let n = match bytes.get(pos) {
        None => return Err(parse_err(pos, "empty input")),
        Some(b'~') => {
            if bytes.get(pos + 1) == Some(&b'~') {
                let mut n = 0usize;
                for k in 0..6 {
                    n = (n << 6) | sextet(bytes, pos + 2 + k)? as usize;
                }
                pos += 8;
                n
            } else {
                let mut n = 0usize;
                for k in 0..3 {
                    n = (n << 6) | sextet(bytes, pos + 1 + k)? as usize;
                }
                pos += 4;
                n
            }
        }
        Some(_) => {
            let n = sextet(bytes, pos)? as usize;
            pos += 1;
            n
        }
    };
    let bit_count = n * n.saturating_sub(1) / 2;
    let expected = bit_count.div_ceil(6);
    if bytes.len() - pos < expected {
        return Err(parse_err(
            bytes.len(),
            format!("expected {expected} data bytes for order {n}"),
        ));
    }
    if bytes.len() - pos > expected {
        return Err(parse_err(pos + expected, "trailing bytes after graph data"));
    }
    let mut g = DenseGraph::empty(n);
    let (mut i, mut j) = (0usize, 1usize);
    for k in 0..expected {
        let off = pos + k;
        let s = sextet(bytes, off)?;
        for b in (0..6).rev() {
            let index = k * 6 + (5 - b);
            let bit = s >> b & 1;
            if index >= bit_count {
                if bit != 0 {
                    return Err(parse_err(off, "nonzero padding bit"));
                }
                continue;
            }
            if bit == 1 {
                g.set_edge(i, j);
            }
            i += 1;
            if i == j {
                i = 0;
                j += 1;
            }
        }
    }
    Ok(g)
}
