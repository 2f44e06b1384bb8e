use std::collections::HashMap;
use std::io::{BufRead, Write};

use crate::{Graph, GraphError, VertexId, Weight};

fn parse_err(line: usize, message: impl Into<String>) -> GraphError {
    GraphError::Parse {
        line,
        message: message.into(),
    }
}

/// Parses a DIMACS `.gr` document held in memory.
pub fn load_graph(text: &str) -> Result<Graph, GraphError> {
    read_graph(text.as_bytes())
}

/// Parses DIMACS `.gr`. Vertex ids `1..n` become `0..n-1`. An arc whose
/// reverse was already seen with the same weight is merged into one
/// undirected edge; any other repetition is a duplicate-edge error.
pub fn read_graph<R: BufRead>(reader: R) -> Result<Graph, GraphError> {
    let mut header: Option<(usize, usize)> = None;
    let mut arcs = 0usize;
    let mut g = Graph::new(0);
    // (min, max) -> (first direction, weight, reverse seen)
    let mut seen: HashMap<(VertexId, VertexId), (VertexId, Weight, bool)> = HashMap::new();
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let mut tok = line.split_whitespace();
        let Some(kind) = tok.next() else { continue };
        match kind {
            "c" => continue,
            "p" => {
                if header.is_some() {
                    return Err(parse_err(lineno, "second problem line"));
                }
                if tok.next() != Some("sp") {
                    return Err(parse_err(lineno, "expected `p sp <n> <m>`"));
                }
                let n = number::<usize>(tok.next(), lineno, "vertex count")?;
                let m = number::<usize>(tok.next(), lineno, "arc count")?;
                if u32::try_from(n).is_err() {
                    return Err(parse_err(lineno, "vertex count too large"));
                }
                header = Some((n, m));
                g = Graph::new(n);
            }
            "a" => {
                let Some((n, _)) = header else {
                    return Err(parse_err(lineno, "arc before problem line"));
                };
                let u = number::<u64>(tok.next(), lineno, "tail")?;
                let v = number::<u64>(tok.next(), lineno, "head")?;
                let w = number::<Weight>(tok.next(), lineno, "weight")?;
                for x in [u, v] {
                    if x == 0 || x > n as u64 {
                        return Err(parse_err(lineno, format!("vertex {x} outside 1..={n}")));
                    }
                }
                let (u, v) = ((u - 1) as VertexId, (v - 1) as VertexId);
                arcs += 1;
                if u == v {
                    return Err(GraphError::SelfLoop { vertex: u });
                }
                let key = (u.min(v), u.max(v));
                match seen.get_mut(&key) {
                    None => {
                        g.add_edge(u, v, w)?;
                        seen.insert(key, (u, w, false));
                    }
                    Some((tail, weight, reverse)) => {
                        if *tail == u || *weight != w || *reverse {
                            return Err(GraphError::DuplicateEdge { u, v });
                        }
                        *reverse = true;
                    }
                }
            }
            other => return Err(parse_err(lineno, format!("unknown line type `{other}`"))),
        }
        if tok.next().is_some() {
            return Err(parse_err(lineno, "trailing tokens"));
        }
    }
    let Some((_, m)) = header else {
        return Err(parse_err(0, "missing problem line"));
    };
    if arcs != m {
        return Err(parse_err(0, format!("header announces {m} arcs, found {arcs}")));
    }
    Ok(g)
}

fn number<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T, GraphError> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| parse_err(line, format!("bad {what} `{tok}`")))
}

/// Writes each undirected edge once as an arc.
pub fn write_graph<W: Write>(g: &Graph, mut out: W) -> std::io::Result<()> {
    writeln!(out, "p sp {} {}", g.n(), g.m())?;
    for e in g.edges() {
        writeln!(out, "a {} {} {}", e.u + 1, e.v + 1, e.weight)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_graph() {
        let g = load_graph("p sp 2 1\na 1 2 1\n").unwrap();
        assert_eq!((g.n(), g.m()), (2, 1));
        assert_eq!(g.edge(0).weight, 1);
    }

    #[test]
    fn triangle_and_reverse_arcs() {
        let g = load_graph("c tri\np sp 3 3\na 1 2 1\na 2 3 1\na 3 1 1\n").unwrap();
        assert_eq!((g.n(), g.m()), (3, 3));
        let g = load_graph("p sp 2 2\na 1 2 4\na 2 1 4\n").unwrap();
        assert_eq!(g.m(), 1);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(load_graph("p sp 1 1\na 1 1 1\n"), Err(GraphError::SelfLoop { .. })));
        assert!(matches!(
            load_graph("p sp 2 2\na 1 2 1\na 1 2 1\n"),
            Err(GraphError::DuplicateEdge { .. })
        ));
        assert!(matches!(
            load_graph("p sp 2 2\na 1 2 1\na 2 1 3\n"),
            Err(GraphError::DuplicateEdge { .. })
        ));
        match load_graph("p sp 2 1\na 1 x 1\n") {
            Err(GraphError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(load_graph("p sp 2 2\na 1 2 1\n").is_err());
        assert!(load_graph("a 1 2 1\n").is_err());
    }

    #[test]
    fn write_then_read() {
        let g = Graph::from_edges(4, [(0, 1, 3), (1, 2, 1), (2, 3, 7)]).unwrap();
        let mut buf = Vec::new();
        write_graph(&g, &mut buf).unwrap();
        let back = read_graph(buf.as_slice()).unwrap();
        assert_eq!(g, back);
    }
}
