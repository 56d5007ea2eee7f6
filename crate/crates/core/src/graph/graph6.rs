//! graph6 reading and writing.
//!
//! Format: an optional `>>graph6<<` header, the vertex count `N(n)`, then the
//! upper triangle of the adjacency matrix in column order
//! (`x(0,1) x(0,2) x(1,2) x(0,3) ...`), packed big-endian into 6-bit groups,
//! zero padded, each group offset by 63 into the printable range.

use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use super::{Graph, MAX_VERTICES};

const HEADER: &str = ">>graph6<<";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Graph6Error {
    #[error("empty graph6 string")]
    Empty,
    #[error("byte {byte:#04x} at offset {offset} is outside the graph6 range 63..=126")]
    InvalidByte { offset: usize, byte: u8 },
    #[error("truncated at offset {offset}: expected {expected} more byte(s)")]
    Truncated { offset: usize, expected: usize },
    #[error("unexpected trailing data at offset {offset}")]
    TrailingData { offset: usize },
    #[error("non-zero padding bits in the final byte at offset {offset}")]
    NonZeroPadding { offset: usize },
    #[error("vertex count {n} at offset {offset} exceeds the supported maximum of {MAX_VERTICES}")]
    VertexCountOverflow { offset: usize, n: u64 },
    #[error("graph6 string at offset {offset} encodes a graph with no vertices")]
    NoVertices { offset: usize },
}

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {source}")]
    Parse {
        path: PathBuf,
        line: usize,
        #[source]
        source: Graph6Error,
    },
}

fn check_byte(bytes: &[u8], offset: usize) -> Result<u8, Graph6Error> {
    match bytes.get(offset) {
        None => Err(Graph6Error::Truncated { offset, expected: 1 }),
        Some(&b) if (63..=126).contains(&b) => Ok(b - 63),
        Some(&b) => Err(Graph6Error::InvalidByte { offset, byte: b }),
    }
}

/// Decodes one graph6 line. Trailing whitespace (such as the newline) is
/// ignored; any other extra byte is an error.
pub fn parse_graph6(text: &str) -> Result<Graph, Graph6Error> {
    let text = text.trim_end();
    let (bytes, base) = match text.strip_prefix(HEADER) {
        Some(rest) => (rest.as_bytes(), HEADER.len()),
        None => (text.as_bytes(), 0),
    };
    if bytes.is_empty() {
        return Err(Graph6Error::Empty);
    }
    let err_at = |e: Graph6Error| -> Graph6Error {
        match e {
            Graph6Error::InvalidByte { offset, byte } => Graph6Error::InvalidByte { offset: offset + base, byte },
            Graph6Error::Truncated { offset, expected } => Graph6Error::Truncated { offset: offset + base, expected },
            other => other,
        }
    };

    let first = check_byte(bytes, 0).map_err(err_at)?;
    let (n, mut pos) = if first < 63 {
        (first as u64, 1)
    } else {
        let second = check_byte(bytes, 1).map_err(err_at)?;
        let (width, start) = if second == 63 { (6, 2) } else { (3, 1) };
        let mut n = 0u64;
        for k in 0..width {
            n = (n << 6) | check_byte(bytes, start + k).map_err(err_at)? as u64;
        }
        (n, start + width)
    };
    if n == 0 {
        return Err(Graph6Error::NoVertices { offset: base });
    }
    if n > MAX_VERTICES as u64 {
        return Err(Graph6Error::VertexCountOverflow { offset: base, n });
    }
    let n = n as usize;
    let nbits = n * (n - 1) / 2;
    let nbytes = nbits.div_ceil(6);
    let available = bytes.len() - pos;
    if available < nbytes {
        return Err(Graph6Error::Truncated { offset: base + bytes.len(), expected: nbytes - available });
    }
    if available > nbytes {
        return Err(Graph6Error::TrailingData { offset: base + pos + nbytes });
    }

    let mut rows = vec![0u128; n];
    let (mut i, mut j) = (0usize, 1usize);
    let mut bit = 0usize;
    for _ in 0..nbytes {
        let v = check_byte(bytes, pos).map_err(err_at)?;
        for shift in (0..6).rev() {
            let set = v >> shift & 1 == 1;
            if bit < nbits {
                if set {
                    rows[i] |= 1 << j;
                    rows[j] |= 1 << i;
                }
                i += 1;
                if i == j {
                    i = 0;
                    j += 1;
                }
            } else if set {
                return Err(Graph6Error::NonZeroPadding { offset: base + pos });
            }
            bit += 1;
        }
        pos += 1;
    }
    Ok(Graph::from_rows_unchecked(rows))
}

/// Encodes a graph as a graph6 line without header or newline.
pub fn encode_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out: Vec<u8> = Vec::with_capacity(4 + (n * n).div_ceil(12));
    if n <= 62 {
        out.push(n as u8 + 63);
    } else {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 0x3f) as u8 + 63);
        }
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.adjacent(i, j) as u8;
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
    String::from_utf8(out).expect("graph6 output is ASCII")
}

/// Reads every graph in a graph6 file, one per line; blank lines are skipped.
pub fn read_graph6_file(path: impl AsRef<Path>) -> Result<Vec<Graph>, CatalogError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| CatalogError::Io { path: path.to_owned(), source })?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            parse_graph6(l).map_err(|source| CatalogError::Parse { path: path.to_owned(), line: i + 1, source })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference strings produced by networkx's independent graph6 writer.
    const K1: &str = "@";
    const C5: &str = "Dhc";
    const K4: &str = "C~";
    const P5: &str = "DhC";
    const PETERSEN: &str = "IheA@GUAo";

    #[test]
    fn single_vertex() {
        let g = parse_graph6(K1).unwrap();
        assert_eq!(g.n(), 1);
        assert_eq!(g.edge_count(), 0);
        assert_eq!(encode_graph6(&g), K1);
    }

    #[test]
    fn five_cycle() {
        let g = parse_graph6(C5).unwrap();
        assert_eq!(g.n(), 5);
        assert_eq!(g.edge_count(), 5);
        assert!(g.degrees().iter().all(|&d| d == 2));
        assert_eq!(g, Graph::cycle(5).unwrap());
        assert_eq!(encode_graph6(&g), C5);
    }

    #[test]
    fn complete_four() {
        let g = parse_graph6(K4).unwrap();
        assert_eq!(g, Graph::complete(4).unwrap());
        assert_eq!(encode_graph6(&Graph::complete(4).unwrap()), K4);
    }

    #[test]
    fn reference_strings() {
        assert_eq!(encode_graph6(&Graph::path(5).unwrap()), P5);
        assert_eq!(encode_graph6(&Graph::petersen()), PETERSEN);
        assert_eq!(parse_graph6(PETERSEN).unwrap(), Graph::petersen());
    }

    #[test]
    fn header_and_newline() {
        let g = parse_graph6(">>graph6<<Dhc\n").unwrap();
        assert_eq!(g, Graph::cycle(5).unwrap());
    }

    #[test]
    fn long_form_vertex_count() {
        let g = Graph::cycle(63).unwrap();
        let s = encode_graph6(&g);
        assert!(s.starts_with("~??~"));
        assert_eq!(parse_graph6(&s).unwrap(), g);
    }

    #[test]
    fn errors_carry_offsets() {
        assert_eq!(parse_graph6(""), Err(Graph6Error::Empty));
        assert_eq!(parse_graph6(">>graph6<<"), Err(Graph6Error::Empty));
        assert_eq!(parse_graph6("Dh"), Err(Graph6Error::Truncated { offset: 2, expected: 1 }));
        assert_eq!(parse_graph6("Dhcc"), Err(Graph6Error::TrailingData { offset: 3 }));
        assert_eq!(parse_graph6("D h"), Err(Graph6Error::InvalidByte { offset: 1, byte: b' ' }));
        assert_eq!(parse_graph6("?"), Err(Graph6Error::NoVertices { offset: 0 }));
        // 4095 vertices in the three-byte form.
        assert_eq!(parse_graph6("~?~~"), Err(Graph6Error::VertexCountOverflow { offset: 0, n: 4095 }));
        // C5 has 10 bits; the final byte's low two bits are padding.
        assert_eq!(parse_graph6("Dhd"), Err(Graph6Error::NonZeroPadding { offset: 2 }));
        assert_eq!(parse_graph6(">>graph6<<D"), Err(Graph6Error::Truncated { offset: 11, expected: 2 }));
    }
}
