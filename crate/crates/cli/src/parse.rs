//! Graph input formats: edge lists, a small DOT subset, and JSON.

use std::path::Path;

use outraag::graph_core::GraphBuilder;
use outraag::SimplicialGraph;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    EdgeList,
    Dot,
    Json,
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("invalid graph: {0}")]
    Graph(#[from] outraag::Error),
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
}

impl Format {
    /// Guess from the file extension; edge lists otherwise.
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some("dot" | "gv") => Format::Dot,
            Some("json") => Format::Json,
            _ => Format::EdgeList,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonGraph {
    vertices: Vec<String>,
    edges: Vec<(String, String)>,
}

pub fn parse(text: &str, format: Format) -> Result<SimplicialGraph, ParseError> {
    match format {
        Format::EdgeList => parse_edge_list(text),
        Format::Dot => parse_dot(text),
        Format::Json => parse_json(text),
    }
}

fn add_edge(b: &mut GraphBuilder, u: &str, v: &str, line: usize) -> Result<(), ParseError> {
    b.edge(u, v).map_err(|e| match e {
        outraag::Error::SelfLoop(_) => ParseError::Graph(e),
        other => ParseError::Syntax {
            line,
            msg: other.to_string(),
        },
    })
}

fn valid_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '.' || c == '\'')
}

fn parse_edge_list(text: &str) -> Result<SimplicialGraph, ParseError> {
    let mut b = GraphBuilder::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let toks: Vec<&str> = content.split_whitespace().collect();
        let bad = |msg: &str| ParseError::Syntax {
            line,
            msg: format!("{msg}: `{content}`"),
        };
        match toks.as_slice() {
            ["vertex", w] if valid_name(w) => {
                b.vertex(w);
            }
            [u, v] if *u != "vertex" && valid_name(u) && valid_name(v) => add_edge(&mut b, u, v, line)?,
            _ => return Err(bad("expected `u v` or `vertex w`")),
        }
    }
    Ok(b.build()?)
}

fn parse_dot(text: &str) -> Result<SimplicialGraph, ParseError> {
    // Strip comments, remembering line numbers of statements.
    let mut cleaned = String::new();
    let mut line_of = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let s = raw.split("//").next().unwrap_or("");
        let s = s.split('#').next().unwrap_or("");
        for ch in s.chars() {
            cleaned.push(ch);
            line_of.push(i + 1);
        }
        cleaned.push('\n');
        line_of.push(i + 1);
    }
    let at = |pos: usize| line_of.get(pos).copied().unwrap_or(1);
    let open = cleaned.find('{').ok_or(ParseError::Syntax {
        line: 1,
        msg: "expected `graph {`".into(),
    })?;
    let head = cleaned[..open].trim();
    let head_ok = {
        let mut t = head.split_whitespace();
        let first = t.next();
        let second = t.next();
        matches!(first, Some("graph") | Some("strict")) && t.next().is_none() && second.map_or(true, valid_name)
    };
    if !head_ok {
        return Err(ParseError::Syntax {
            line: at(0),
            msg: format!("expected `graph {{`, found `{head}`"),
        });
    }
    let close = cleaned.rfind('}').ok_or(ParseError::Syntax {
        line: at(cleaned.len().saturating_sub(1)),
        msg: "missing `}`".into(),
    })?;
    if !cleaned[close + 1..].trim().is_empty() {
        return Err(ParseError::Syntax {
            line: at(close + 1),
            msg: "text after closing `}`".into(),
        });
    }
    let body = &cleaned[open + 1..close];
    let mut b = GraphBuilder::new();
    let mut offset = open + 1;
    for stmt in body.split(|c| c == ';' || c == '\n') {
        let start = offset;
        offset += stmt.len() + 1;
        let s = stmt.trim();
        if s.is_empty() {
            continue;
        }
        let line = at(start + stmt.find(s).unwrap_or(0));
        let parts: Vec<&str> = s.split("--").map(str::trim).collect();
        if parts.iter().any(|p| !valid_name(p)) {
            return Err(ParseError::Syntax {
                line,
                msg: format!("expected `a -- b` or `a`, found `{s}`"),
            });
        }
        if parts.len() == 1 {
            b.vertex(parts[0]);
        } else {
            for w in parts.windows(2) {
                add_edge(&mut b, w[0], w[1], line)?;
            }
        }
    }
    Ok(b.build()?)
}

fn parse_json(text: &str) -> Result<SimplicialGraph, ParseError> {
    let doc: JsonGraph = serde_json::from_str(text)?;
    let mut b = GraphBuilder::new();
    for v in &doc.vertices {
        b.vertex(v);
    }
    for (u, v) in &doc.edges {
        b.edge(u, v)?;
    }
    Ok(b.build()?)
}

pub fn to_text(g: &SimplicialGraph, format: Format) -> String {
    let edges: Vec<(String, String)> = g
        .edges()
        .into_iter()
        .map(|(a, b)| (g.name(a).to_string(), g.name(b).to_string()))
        .collect();
    match format {
        Format::EdgeList => {
            let mut s = String::new();
            for v in g.names() {
                s.push_str(&format!("vertex {v}\n"));
            }
            for (a, b) in &edges {
                s.push_str(&format!("{a} {b}\n"));
            }
            s
        }
        Format::Dot => {
            let mut s = String::from("graph {\n");
            for v in g.names() {
                s.push_str(&format!("  {v};\n"));
            }
            for (a, b) in &edges {
                s.push_str(&format!("  {a} -- {b};\n"));
            }
            s.push_str("}\n");
            s
        }
        Format::Json => serde_json::to_string(&JsonGraph {
            vertices: g.names().to_vec(),
            edges,
        })
        .expect("plain data serializes"),
    }
}

pub fn read_graph(path: &Path, format: Option<Format>) -> Result<SimplicialGraph, crate::CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| crate::CliError::Io(path.display().to_string(), e))?;
    let fmt = format.unwrap_or_else(|| Format::from_path(path));
    parse(&text, fmt).map_err(|e| crate::CliError::Parse(path.display().to_string(), e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_list_path() {
        let g = parse("a b\nb c", Format::EdgeList).unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn comments_vertices_duplicates() {
        let g = parse("# hi\nvertex w\na b # trailing\nb a\n", Format::EdgeList).unwrap();
        assert_eq!(g.names(), &["w", "a", "b"]);
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn malformed_line_number() {
        match parse("a b\na b c\n", Format::EdgeList) {
            Err(ParseError::Syntax { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn dot_subset() {
        let g = parse("graph { a -- b; c; b -- c -- d }", Format::Dot).unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.edge_count(), 3);
        assert!(matches!(parse("graph { a -- a; }", Format::Dot), Err(ParseError::Graph(_))));
        assert!(parse("digraph { a -> b }", Format::Dot).is_err());
    }

    #[test]
    fn self_loop_rejected() {
        assert!(matches!(parse("a a", Format::EdgeList), Err(ParseError::Graph(_))));
    }

    #[test]
    fn json_round_trip() {
        let g = parse("vertex q\na b\nb c\n", Format::EdgeList).unwrap();
        for f in [Format::EdgeList, Format::Dot, Format::Json] {
            assert_eq!(parse(&to_text(&g, f), f).unwrap(), g);
        }
    }
}
