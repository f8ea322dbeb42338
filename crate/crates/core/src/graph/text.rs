//! Plain-text graph format.
//!
//! ```text
//! # comments start with '#'
//! 3        <- vertex count
//! 0 1      <- one edge u -> v per line
//! 1 2
//! 2 0
//! ```

use std::fmt::Write as _;

use super::{GraphError, OrientedGraph};

fn parse_err(line: usize, message: impl Into<String>) -> GraphError {
    GraphError::Parse {
        line,
        message: message.into(),
    }
}

pub fn parse_graph(text: &str) -> Result<OrientedGraph, GraphError> {
    let mut graph: Option<OrientedGraph> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match graph.as_mut() {
            None => {
                if fields.len() != 1 {
                    return Err(parse_err(line_no, "expected the vertex count on its own line"));
                }
                let n: usize = fields[0]
                    .parse()
                    .map_err(|_| parse_err(line_no, format!("invalid vertex count {:?}", fields[0])))?;
                graph = Some(OrientedGraph::empty(n));
            }
            Some(g) => {
                if fields.len() != 2 {
                    return Err(parse_err(line_no, "expected an edge line `u v`"));
                }
                let parse_vertex = |s: &str| {
                    s.parse::<usize>()
                        .map_err(|_| parse_err(line_no, format!("invalid vertex {s:?}")))
                };
                let u = parse_vertex(fields[0])?;
                let v = parse_vertex(fields[1])?;
                g.add_edge(u, v).map_err(|e| parse_err(line_no, e.to_string()))?;
            }
        }
    }
    graph.ok_or_else(|| parse_err(0, "missing vertex count"))
}

/// Serialises with edges sorted by `(u, v)`.
pub fn serialize_graph(g: &OrientedGraph) -> String {
    let mut out = String::new();
    writeln!(out, "{}", g.n()).unwrap();
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::graph::random_oriented;

    #[test]
    fn parse_examples() {
        let g = parse_graph("3\n0 1\n1 2\n2 0\n").unwrap();
        assert_eq!(g, OrientedGraph::directed_cycle(3));
        let g = parse_graph("# triangle\n3 # vertices\n\n0 1\n1 2 # edge\n2 0\n").unwrap();
        assert_eq!(g, OrientedGraph::directed_cycle(3));
        assert_eq!(serialize_graph(&g), "3\n0 1\n1 2\n2 0\n");
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse_graph("2\n0 1\n1 0\n").unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 3, .. }), "{err}");
        assert!(matches!(parse_graph("2\n0 5\n"), Err(GraphError::Parse { line: 2, .. })));
        assert!(matches!(parse_graph("2\n0\n"), Err(GraphError::Parse { line: 2, .. })));
        assert!(matches!(parse_graph("x\n"), Err(GraphError::Parse { line: 1, .. })));
        assert!(matches!(parse_graph("2\n1 1\n"), Err(GraphError::Parse { line: 2, .. })));
        assert!(matches!(parse_graph("# nothing\n"), Err(GraphError::Parse { line: 0, .. })));
    }

    proptest! {
        #[test]
        fn round_trip(n in 0usize..20, p in 0.0f64..=1.0, seed in any::<u64>()) {
            let g = random_oriented(n, p, seed).unwrap();
            prop_assert_eq!(parse_graph(&serialize_graph(&g)).unwrap(), g);
        }
    }
}
