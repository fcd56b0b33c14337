use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::{EdgeList, Graph, VertexId, Weight, MAX_VERTICES};
use crate::error::{Error, Result};

/// Magic bytes opening a binary CSR file; the last byte is the format version.
pub const BINARY_MAGIC: &[u8; 8] = b"SSSPCSR1";
const HEADER_LEN: usize = 8 + 8 + 8 + 1 + 7;

/// Parses whitespace-separated `u v w` lines. Lines starting with `#` or `c`
/// are comments; an optional `p <n> <m>` header fixes the vertex count.
pub fn parse_edge_list(text: &[u8]) -> Result<EdgeList> {
    let text = std::str::from_utf8(text).map_err(|e| Error::Parse {
        line: 1 + text[..e.valid_up_to()].iter().filter(|&&b| b == b'\n').count(),
        msg: "input is not valid UTF-8".into(),
    })?;
    let mut header_n: Option<usize> = None;
    let mut edges = Vec::new();
    let mut max_id: Option<u64> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let s = raw.trim();
        if s.is_empty() || s.starts_with('#') || s.starts_with('c') {
            continue;
        }
        let mut toks = s.split_whitespace();
        if s.starts_with('p') {
            toks.next();
            let n = parse_tok::<u64>(toks.next(), line, "vertex count")?;
            parse_tok::<u64>(toks.next(), line, "edge count")?;
            if toks.next().is_some() {
                return Err(Error::Parse { line, msg: "trailing tokens after header".into() });
            }
            if header_n.is_some() || !edges.is_empty() {
                return Err(Error::Parse { line, msg: "header must precede all edges".into() });
            }
            if n as usize > MAX_VERTICES {
                return Err(Error::Parse { line, msg: format!("vertex count {n} too large") });
            }
            header_n = Some(n as usize);
            continue;
        }
        let u = parse_tok::<u64>(toks.next(), line, "source id")?;
        let v = parse_tok::<u64>(toks.next(), line, "target id")?;
        let w = parse_tok::<Weight>(toks.next(), line, "weight")?;
        if toks.next().is_some() {
            return Err(Error::Parse { line, msg: "expected exactly three tokens".into() });
        }
        for id in [u, v] {
            match header_n {
                Some(n) if id >= n as u64 => return Err(Error::Range { line, id, n }),
                None if id >= MAX_VERTICES as u64 => {
                    return Err(Error::Range { line, id, n: MAX_VERTICES })
                }
                _ => {}
            }
        }
        max_id = max_id.max(Some(u.max(v)));
        edges.push((u as VertexId, v as VertexId, w));
    }

    let n = header_n.unwrap_or_else(|| max_id.map_or(0, |m| m as usize + 1));
    Ok(EdgeList::new(n, edges))
}

fn parse_tok<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| Error::Parse { line, msg: format!("missing {what}") })?;
    tok.parse()
        .map_err(|_| Error::Parse { line, msg: format!("malformed {what} {tok:?}") })
}

pub fn read_edge_list(path: impl AsRef<Path>) -> Result<EdgeList> {
    parse_edge_list(&fs::read(path)?)
}

/// Writes the little-endian binary CSR layout.
pub fn save_binary(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    w.write_all(BINARY_MAGIC)?;
    w.write_all(&(g.n() as u64).to_le_bytes())?;
    w.write_all(&(g.m() as u64).to_le_bytes())?;
    w.write_all(&[g.is_directed() as u8])?;
    w.write_all(&[0u8; 7])?;
    for &o in g.offsets() {
        w.write_all(&o.to_le_bytes())?;
    }
    for &t in g.targets() {
        w.write_all(&t.to_le_bytes())?;
    }
    for &x in g.weights() {
        w.write_all(&x.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn load_binary(path: impl AsRef<Path>) -> Result<Graph> {
    decode_binary(&fs::read(path)?)
}

/// Loads a binary CSR file, or else parses an edge list and builds it with
/// the given orientation. Binary files carry their own orientation.
pub fn load_graph(path: impl AsRef<Path>, directed: bool) -> Result<Graph> {
    let buf = fs::read(path)?;
    if buf.starts_with(&BINARY_MAGIC[..7]) {
        decode_binary(&buf)
    } else {
        super::build_csr(&parse_edge_list(&buf)?, directed)
    }
}

/// Writes `e` as a `p n m` header followed by one `u v w` line per edge.
pub fn save_edge_list(e: &EdgeList, path: impl AsRef<Path>) -> Result<()> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    writeln!(w, "p {} {}", e.n, e.edges.len())?;
    for &(u, v, x) in &e.edges {
        writeln!(w, "{u} {v} {x}")?;
    }
    w.flush()?;
    Ok(())
}

pub(crate) fn decode_binary(buf: &[u8]) -> Result<Graph> {
    if buf.len() < HEADER_LEN {
        return Err(Error::Format(format!(
            "truncated header: {} bytes, need {HEADER_LEN}",
            buf.len()
        )));
    }
    let magic = &buf[..8];
    if magic != BINARY_MAGIC {
        if magic[..7] == BINARY_MAGIC[..7] {
            return Err(Error::Format(format!(
                "unsupported version {:?}, expected {:?}",
                magic[7] as char, BINARY_MAGIC[7] as char
            )));
        }
        return Err(Error::Format(format!(
            "bad magic {:?}, expected {:?}",
            String::from_utf8_lossy(magic),
            std::str::from_utf8(BINARY_MAGIC).unwrap()
        )));
    }
    let n = read_u64(buf, 8);
    let m = read_u64(buf, 16);
    let directed = match buf[24] {
        0 => false,
        1 => true,
        b => return Err(Error::Format(format!("invalid directed flag {b}"))),
    };
    if n > MAX_VERTICES as u64 {
        return Err(Error::Format(format!("vertex count {n} too large")));
    }
    let expected = (n as u128 + 1) * 8 + m as u128 * 8 + HEADER_LEN as u128;
    if buf.len() as u128 != expected {
        return Err(Error::Format(format!(
            "file has {} bytes but header implies {expected}",
            buf.len()
        )));
    }
    let (n, m) = (n as usize, m as usize);
    let mut pos = HEADER_LEN;
    let offsets = (0..=n).map(|i| read_u64(buf, pos + 8 * i)).collect();
    pos += 8 * (n + 1);
    let targets = (0..m).map(|i| read_u32(buf, pos + 4 * i)).collect();
    pos += 4 * m;
    let weights = (0..m).map(|i| read_u32(buf, pos + 4 * i)).collect();
    Graph::from_parts(offsets, targets, weights, directed)
}

fn read_u64(buf: &[u8], at: usize) -> u64 {
    u64::from_le_bytes(buf[at..at + 8].try_into().unwrap())
}

fn read_u32(buf: &[u8], at: usize) -> u32 {
    u32::from_le_bytes(buf[at..at + 4].try_into().unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_csr, generate_random_digraph};

    #[test]
    fn parse_simple() {
        let e = parse_edge_list(b"0 1 1\n1 2 1").unwrap();
        assert_eq!(e, EdgeList::new(3, vec![(0, 1, 1), (1, 2, 1)]));
    }

    #[test]
    fn parse_empty() {
        assert_eq!(parse_edge_list(b"").unwrap(), EdgeList::new(0, vec![]));
    }

    #[test]
    fn parse_malformed_token() {
        match parse_edge_list(b"0 1 x") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parse_header_comments_and_range() {
        let e = parse_edge_list(b"# comment\nc another\np 5 1\n\n3 4 9\n").unwrap();
        assert_eq!(e.n, 5);
        assert_eq!(e.edges, vec![(3, 4, 9)]);
        match parse_edge_list(b"p 3 1\n0 3 1\n") {
            Err(Error::Range { line, id, n }) => assert_eq!((line, id, n), (2, 3, 3)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parse_wrong_arity() {
        assert!(matches!(parse_edge_list(b"0 1\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_edge_list(b"0 1 2\n0 1 2 3\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn parse_keeps_zero_weight_verbatim() {
        let e = parse_edge_list(b"0 1 0\n").unwrap();
        assert_eq!(e.edges, vec![(0, 1, 0)]);
    }

    fn encode(g: &Graph) -> Vec<u8> {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("g.bin");
        save_binary(g, &p).unwrap();
        fs::read(&p).unwrap()
    }

    #[test]
    fn binary_layout_and_round_trip() {
        let g = build_csr(&generate_random_digraph(50, 200, 1).unwrap(), true).unwrap();
        let bytes = encode(&g);
        assert_eq!(&bytes[..8], b"SSSPCSR1");
        assert_eq!(read_u64(&bytes, 8), 50);
        assert_eq!(read_u64(&bytes, 16), 200);
        assert_eq!(bytes[24], 1);
        assert_eq!(bytes.len(), 32 + 51 * 8 + 200 * 8);
        assert_eq!(decode_binary(&bytes).unwrap(), g);
    }

    #[test]
    fn truncated_file_rejected() {
        let g = build_csr(&generate_random_digraph(20, 50, 1).unwrap(), true).unwrap();
        let bytes = encode(&g);
        for cut in [0, 10, 31, bytes.len() - 1] {
            assert!(matches!(decode_binary(&bytes[..cut]), Err(Error::Format(_))));
        }
    }

    #[test]
    fn bad_magic_names_expected() {
        let g = build_csr(&generate_random_digraph(5, 5, 1).unwrap(), true).unwrap();
        let mut bytes = encode(&g);
        bytes[0] = b'X';
        let msg = decode_binary(&bytes).unwrap_err().to_string();
        assert!(msg.contains("SSSPCSR1"), "{msg}");
        bytes[0] = b'S';
        bytes[7] = b'2';
        let msg = decode_binary(&bytes).unwrap_err().to_string();
        assert!(msg.contains("version"), "{msg}");
    }
}
