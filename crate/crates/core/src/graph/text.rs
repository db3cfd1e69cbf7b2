//! Plain-text edge lists.
//!
//! ```text
//! # optional comments
//! n=5
//! 0 1
//! 1 2
//! ```
//!
//! The first non-comment line gives the vertex count; every following non-empty
//! line is one edge `u v`. Text after `#` on any line is ignored.

use std::fmt::Write;

use super::{Graph, GraphError};

pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    let mut n = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let syntax = |message: String| GraphError::Syntax {
            line: line_no,
            message,
        };
        let Some(count) = n else {
            let value = line
                .strip_prefix("n=")
                .or_else(|| line.strip_prefix("n ="))
                .ok_or_else(|| syntax(format!("expected `n=<count>`, found `{line}`")))?;
            let count: usize = value
                .trim()
                .parse()
                .map_err(|_| syntax(format!("bad vertex count `{}`", value.trim())))?;
            n = Some(count);
            continue;
        };
        let mut fields = line.split_whitespace();
        let mut vertex = |what: &str| -> Result<usize, GraphError> {
            let tok = fields
                .next()
                .ok_or_else(|| syntax(format!("missing {what} endpoint")))?;
            let v: usize = tok
                .parse()
                .map_err(|_| syntax(format!("bad vertex `{tok}`")))?;
            if v >= count {
                return Err(syntax(format!("vertex {v} out of range for n={count}")));
            }
            Ok(v)
        };
        let u = vertex("first")?;
        let v = vertex("second")?;
        if let Some(extra) = fields.next() {
            return Err(syntax(format!("unexpected token `{extra}`")));
        }
        edges.push((u, v));
    }
    let n = n.ok_or(GraphError::Syntax {
        line: 1,
        message: "missing `n=<count>` header".into(),
    })?;
    Graph::from_edges(n, edges)
}

/// Canonical form: header, then edges `u v` with `u < v` in lexicographic order.
pub fn serialize_graph(g: &Graph) -> String {
    let mut out = format!("n={}\n", g.vertex_count());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_named, NamedFamily};

    #[test]
    fn path_on_three() {
        let g = parse_graph("n=3\n0 1\n1 2").unwrap();
        assert_eq!(g, Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap());
    }

    #[test]
    fn single_vertex() {
        let g = parse_graph("n=1").unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert!(g.is_edgeless());
    }

    #[test]
    fn comments_and_blank_lines() {
        let g = parse_graph("# header\n\nn=4  # four\n0 3 # edge\n\n2 1\n").unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 3), (1, 2)]);
    }

    #[test]
    fn petersen_round_trip() {
        let p = make_named(&NamedFamily::Petersen).unwrap();
        let text = serialize_graph(&p);
        assert_eq!(parse_graph(&text).unwrap(), p);
        assert_eq!(serialize_graph(&parse_graph(&text).unwrap()), text);
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert!(matches!(
            parse_graph("n=3\n0 1\n1 x"),
            Err(GraphError::Syntax { line: 3, .. })
        ));
        assert!(matches!(
            parse_graph("0 1"),
            Err(GraphError::Syntax { line: 1, .. })
        ));
        assert!(matches!(
            parse_graph("n=3\n0 3"),
            Err(GraphError::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            parse_graph("n=3\n0 1 2"),
            Err(GraphError::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            parse_graph("# nothing"),
            Err(GraphError::Syntax { .. })
        ));
        assert_eq!(
            parse_graph("n=3\n0 1\n1 0"),
            Err(GraphError::DuplicateEdge { u: 0, v: 1 })
        );
        assert_eq!(
            parse_graph("n=3\n2 2"),
            Err(GraphError::SelfLoop { vertex: 2 })
        );
    }
}
