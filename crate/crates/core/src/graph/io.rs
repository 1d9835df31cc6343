//! The edge-stream text format: a header line `n delta`, then one `u v`
//! line per edge. Blank lines are skipped.

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use super::{Graph, GraphError};

/// Streaming reader over an edge file. The body is never buffered; only the
/// optional duplicate detector keeps per-edge state.
pub struct EdgeStreamReader<R> {
    source: R,
    n: usize,
    delta: usize,
    line_no: usize,
    line: String,
    seen: Option<HashSet<(u32, u32)>>,
}

/// Parses the header and returns a reader positioned at the first edge.
pub fn read_edge_stream<R: BufRead>(mut source: R, check_duplicates: bool) -> Result<EdgeStreamReader<R>, GraphError> {
    let mut line = String::new();
    let mut line_no = 0;
    loop {
        line.clear();
        line_no += 1;
        if source.read_line(&mut line)? == 0 {
            return Err(GraphError::MalformedHeader { line: line_no, reason: "missing header".into() });
        }
        if !line.trim().is_empty() {
            break;
        }
    }
    let fields: Vec<&str> = line.split_whitespace().collect();
    let parse = |s: &str| {
        s.parse::<usize>()
            .map_err(|e| GraphError::MalformedHeader { line: line_no, reason: format!("{s:?}: {e}") })
    };
    if fields.len() != 2 {
        return Err(GraphError::MalformedHeader {
            line: line_no,
            reason: format!("expected `n delta`, got {} fields", fields.len()),
        });
    }
    let n = parse(fields[0])?;
    let delta = parse(fields[1])?;
    if n > u32::MAX as usize {
        return Err(GraphError::MalformedHeader { line: line_no, reason: "n exceeds 2^32 - 1".into() });
    }
    Ok(EdgeStreamReader {
        source,
        n,
        delta,
        line_no,
        line,
        seen: check_duplicates.then(HashSet::new),
    })
}

impl<R: BufRead> EdgeStreamReader<R> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    fn parse_line(&self) -> Result<(usize, usize), GraphError> {
        let line = self.line_no;
        let mut it = self.line.split_whitespace();
        let mut next = || -> Result<usize, GraphError> {
            let tok = it
                .next()
                .ok_or_else(|| GraphError::MalformedEdge { line, reason: "expected two endpoints".into() })?;
            tok.parse::<usize>()
                .map_err(|e| GraphError::MalformedEdge { line, reason: format!("{tok:?}: {e}") })
        };
        let u = next()?;
        let v = next()?;
        if it.next().is_some() {
            return Err(GraphError::MalformedEdge { line, reason: "trailing fields".into() });
        }
        if u == v {
            return Err(GraphError::SelfLoop { line, v: u });
        }
        for w in [u, v] {
            if w >= self.n {
                return Err(GraphError::VertexOutOfRange { line, v: w, n: self.n });
            }
        }
        Ok((u, v))
    }
}

impl<R: BufRead> Iterator for EdgeStreamReader<R> {
    type Item = Result<(usize, usize), GraphError>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            self.line.clear();
            self.line_no += 1;
            match self.source.read_line(&mut self.line) {
                Ok(0) => return None,
                Ok(_) if self.line.trim().is_empty() => continue,
                Ok(_) => break,
                Err(e) => return Some(Err(e.into())),
            }
        }
        let edge = self.parse_line();
        if let (Ok((u, v)), Some(seen)) = (&edge, self.seen.as_mut()) {
            let key = ((*u).min(*v) as u32, (*u).max(*v) as u32);
            if !seen.insert(key) {
                return Some(Err(GraphError::DuplicateEdge { u: key.0 as usize, v: key.1 as usize }));
            }
        }
        Some(edge)
    }
}

pub fn write_edge_stream<W: Write, I>(mut out: W, n: usize, delta: usize, edges: I) -> std::io::Result<()>
where
    I: IntoIterator<Item = (usize, usize)>,
{
    writeln!(out, "{n} {delta}")?;
    for (u, v) in edges {
        writeln!(out, "{u} {v}")?;
    }
    out.flush()
}

/// Loads a whole stream file into a [`Graph`]; duplicates are always
/// rejected here (sorted-merge inside [`Graph::from_edges`]).
pub fn load_graph(path: &Path) -> Result<Graph, GraphError> {
    let reader = read_edge_stream(BufReader::new(File::open(path)?), false)?;
    let (n, delta) = (reader.n(), reader.delta());
    let edges = reader.collect::<Result<Vec<_>, _>>()?;
    Graph::from_edges(n, delta, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn read_all(text: &str, dup: bool) -> Result<(usize, usize, Vec<(usize, usize)>), GraphError> {
        let r = read_edge_stream(text.as_bytes(), dup)?;
        let (n, d) = (r.n(), r.delta());
        Ok((n, d, r.collect::<Result<_, _>>()?))
    }

    #[test]
    fn header_and_body() {
        assert_eq!(read_all("4 3\n0 1\n1 2\n", false).unwrap(), (4, 3, vec![(0, 1), (1, 2)]));
        assert_eq!(read_all("4 3\n", false).unwrap(), (4, 3, vec![]));
        assert!(matches!(read_all("4 3\n2 2\n", false), Err(GraphError::SelfLoop { line: 2, v: 2 })));
        assert!(matches!(read_all("4 3\n0 4\n", false), Err(GraphError::VertexOutOfRange { .. })));
        assert!(matches!(read_all("4\n", false), Err(GraphError::MalformedHeader { .. })));
        assert!(matches!(read_all("", false), Err(GraphError::MalformedHeader { .. })));
        assert!(matches!(read_all("4 3\n0 x\n", false), Err(GraphError::MalformedEdge { .. })));
    }

    #[test]
    fn duplicate_detection_is_opt_in() {
        assert_eq!(read_all("3 2\n0 1\n1 0\n", false).unwrap().2.len(), 2);
        assert!(matches!(read_all("3 2\n0 1\n1 0\n", true), Err(GraphError::DuplicateEdge { u: 0, v: 1 })));
    }

    proptest! {
        #[test]
        fn write_then_read_is_identity(n in 2usize..40, raw in proptest::collection::vec((0usize..40, 0usize..40), 0..80)) {
            let mut edges: Vec<(usize, usize)> = raw.into_iter()
                .map(|(u, v)| (u % n, v % n))
                .filter(|(u, v)| u != v)
                .map(|(u, v)| (u.min(v), u.max(v)))
                .collect();
            edges.sort_unstable();
            edges.dedup();
            let mut buf = Vec::new();
            write_edge_stream(&mut buf, n, n, edges.iter().copied()).unwrap();
            let (rn, rd, back) = read_all(std::str::from_utf8(&buf).unwrap(), true).unwrap();
            prop_assert_eq!((rn, rd), (n, n));
            prop_assert_eq!(back, edges);
        }
    }
}
