//! The `.sgr` text format.
//!
//! ```text
//! # E(2,1)
//! vertex u
//! vertex w
//! edge e0 : u -> w @ red
//! edge e1 : u -> w @ red
//! edge f0 : u -> w @ blue
//! ```

use std::fmt::Write as _;

use crate::error::{ParseError, ParseErrorKind};
use crate::graph::{GraphBuilder, SeparatedGraph};

pub fn parse(text: &str) -> Result<SeparatedGraph, ParseError> {
    let mut b = GraphBuilder::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let at = |kind: ParseErrorKind| ParseError { line: i + 1, kind };
        let malformed = || at(ParseErrorKind::Malformed(line.to_string()));
        let (keyword, rest) = line.split_once(char::is_whitespace).ok_or_else(malformed)?;
        match keyword {
            "vertex" => {
                b.vertex(rest.trim()).map_err(|e| at(e.into()))?;
            }
            "edge" => {
                let (name, rest) = rest.split_once(':').ok_or_else(malformed)?;
                let (src, rest) = rest.split_once("->").ok_or_else(malformed)?;
                let (rng, label) = rest.split_once('@').ok_or_else(malformed)?;
                b.edge(name.trim(), src.trim(), rng.trim(), label.trim())
                    .map_err(|e| at(e.into()))?;
            }
            _ => return Err(malformed()),
        }
    }
    Ok(b.build())
}

/// Canonical text: vertices, then edges, both in identifier order.
pub fn serialize(g: &SeparatedGraph) -> String {
    let mut out = String::new();
    for v in g.vertices() {
        let _ = writeln!(out, "vertex {}", g.vertex_name(v));
    }
    for e in g.edge_ids() {
        let edge = g.edge(e);
        let _ = writeln!(
            out,
            "edge {} : {} -> {} @ {}",
            edge.name,
            g.vertex_name(edge.source),
            g.vertex_name(edge.range),
            g.group(edge.group).label
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::GraphError;

    const E23: &str = "vertex u\nvertex w\n\
        edge e0 : u -> w @ red\nedge e1 : u -> w @ red\n\
        edge f0 : u -> w @ blue\nedge f1 : u -> w @ blue\nedge f2 : u -> w @ blue\n";

    #[test]
    fn e23_shape() {
        let g = parse(E23).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (2, 5));
        let w = g.vertex("w").unwrap();
        let u = g.vertex("u").unwrap();
        let sizes: Vec<(String, usize)> = g
            .groups_at(w)
            .iter()
            .map(|&x| (g.group(x).label.clone(), g.group(x).members.len()))
            .collect();
        assert_eq!(sizes, vec![("blue".into(), 3), ("red".into(), 2)]);
        assert!(g.groups_at(u).is_empty());
    }

    #[test]
    fn round_trip() {
        let g = parse(E23).unwrap();
        let text = serialize(&g);
        assert_eq!(parse(&text).unwrap(), g);
        assert_eq!(serialize(&parse(&text).unwrap()), text);
    }

    #[test]
    fn single_vertex_is_isolated() {
        let g = parse("# bare\n\nvertex v\n").unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.isolated_vertices().len(), 1);
        assert!(parse(E23).unwrap().isolated_vertices().is_empty());
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse("vertex u\n\nedge e : u -> x @ red\n").unwrap_err();
        assert_eq!(err.line, 3);
        assert_eq!(
            err.kind,
            ParseErrorKind::Graph(GraphError::UndeclaredVertex("x".into()))
        );
        let err = parse("vertex u\nvertex u\n").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(matches!(parse("vertex u\nedge e u -> u @ a\n").unwrap_err().kind, ParseErrorKind::Malformed(_)));
        assert!(matches!(parse("loop u\n").unwrap_err().kind, ParseErrorKind::Malformed(_)));
        assert!(parse("vertex u-v\n").is_err());
    }

    #[test]
    fn spacing_is_flexible() {
        let g = parse("vertex u\nedge  l:u->u@ c \n").unwrap();
        assert_eq!(g.edge_count(), 1);
    }
}
