//! Text formats for embeddings (`.emb`) and colorings (`.col`).
//!
//! An embedding file holds `vertices N`, one `edge ID U V SIGN` line per
//! edge (ids `0..E` in order, SIGN `+` or `-`), one `rot V D1 D2 ...` line
//! per vertex with darts written `IDa` (the `U` end) or `IDb` (the `V`
//! end), and optional `cuff V1 V2 ...` lines. `#` starts a comment.
//!
//! A coloring file holds `VERTEX COLOR` lines with colors 1 to 3.

use std::fmt::Write;

use crate::coloring::Coloring;
use crate::error::{Error, Result};
use crate::map::{Dart, Edge, EmbeddedGraph, End, Sign, Vertex};

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Non-empty lines with comments stripped, numbered from 1.
fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("");
        let toks: Vec<&str> = l.split_whitespace().collect();
        (!toks.is_empty()).then_some((i + 1, toks))
    })
}

fn num(line: usize, tok: &str, what: &str) -> Result<usize> {
    tok.parse()
        .map_err(|_| perr(line, format!("expected {what}, found `{tok}`")))
}

fn dart(line: usize, tok: &str) -> Result<Dart> {
    let (id, end) = match tok.strip_suffix('a') {
        Some(id) => (id, End::First),
        None => match tok.strip_suffix('b') {
            Some(id) => (id, End::Second),
            None => return Err(perr(line, format!("dart `{tok}` must end in a or b"))),
        },
    };
    Ok(Dart::new(num(line, id, "edge id")?, end))
}

pub fn parse_emb(text: &str) -> Result<EmbeddedGraph> {
    let mut n: Option<usize> = None;
    let mut edges: Vec<Edge> = Vec::new();
    let mut rots: Vec<Option<Vec<Dart>>> = Vec::new();
    let mut cuffs = Vec::new();
    let mut last = 0;
    for (ln, toks) in lines(text) {
        last = ln;
        let need_n = || n.ok_or_else(|| perr(ln, "`vertices` must come first"));
        match toks[0] {
            "vertices" => {
                if n.is_some() {
                    return Err(perr(ln, "repeated `vertices`"));
                }
                if toks.len() != 2 {
                    return Err(perr(ln, "usage: vertices N"));
                }
                let v = num(ln, toks[1], "vertex count")?;
                n = Some(v);
                rots = vec![None; v];
            }
            "edge" => {
                let n = need_n()?;
                if toks.len() != 5 {
                    return Err(perr(ln, "usage: edge ID U V SIGN"));
                }
                let id = num(ln, toks[1], "edge id")?;
                if id != edges.len() {
                    return Err(perr(ln, format!("edge ids must be consecutive; expected {}", edges.len())));
                }
                let u = num(ln, toks[2], "vertex")?;
                let v = num(ln, toks[3], "vertex")?;
                if u >= n || v >= n {
                    return Err(perr(ln, "edge endpoint out of range"));
                }
                let sign = match toks[4] {
                    "+" => Sign::Pos,
                    "-" => Sign::Neg,
                    s => return Err(perr(ln, format!("sign must be + or -, found `{s}`"))),
                };
                edges.push(Edge { u, v, sign });
            }
            "rot" => {
                let n = need_n()?;
                if toks.len() < 2 {
                    return Err(perr(ln, "usage: rot V D1 D2 ..."));
                }
                let v = num(ln, toks[1], "vertex")?;
                if v >= n {
                    return Err(perr(ln, "vertex out of range"));
                }
                if rots[v].is_some() {
                    return Err(perr(ln, format!("repeated rotation for vertex {v}")));
                }
                let ds = toks[2..].iter().map(|t| dart(ln, t)).collect::<Result<Vec<_>>>()?;
                rots[v] = Some(ds);
            }
            "cuff" => {
                let n = need_n()?;
                let vs = toks[1..]
                    .iter()
                    .map(|t| num(ln, t, "vertex"))
                    .collect::<Result<Vec<_>>>()?;
                if vs.is_empty() || vs.iter().any(|&v| v >= n) {
                    return Err(perr(ln, "cuff needs vertices in range"));
                }
                cuffs.push(vs);
            }
            other => return Err(perr(ln, format!("unknown directive `{other}`"))),
        }
    }
    let n = n.ok_or_else(|| perr(last.max(1), "missing `vertices`"))?;
    let rotations = rots
        .into_iter()
        .enumerate()
        .map(|(v, r)| r.ok_or_else(|| perr(last.max(1), format!("missing rotation for vertex {v}"))))
        .collect::<Result<Vec<_>>>()?;
    EmbeddedGraph::new(n, edges, rotations, cuffs)
}

pub fn write_emb(g: &EmbeddedGraph) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "vertices {}", g.vertex_count());
    for (i, e) in g.edges().iter().enumerate() {
        let sign = if e.sign == Sign::Pos { '+' } else { '-' };
        let _ = writeln!(s, "edge {i} {} {} {sign}", e.u, e.v);
    }
    for v in 0..g.vertex_count() {
        let _ = write!(s, "rot {v}");
        for d in g.rotation(v) {
            let end = if d.end == End::First { 'a' } else { 'b' };
            let _ = write!(s, " {}{end}", d.edge);
        }
        s.push('\n');
    }
    for c in g.cuffs() {
        let vs: Vec<String> = c.iter().map(Vertex::to_string).collect();
        let _ = writeln!(s, "cuff {}", vs.join(" "));
    }
    s
}

/// Parses a coloring of a graph with `vertex_count` vertices.
pub fn parse_col(text: &str, vertex_count: usize) -> Result<Coloring> {
    let mut c = Coloring::new(vertex_count);
    for (ln, toks) in lines(text) {
        if toks.len() != 2 {
            return Err(perr(ln, "usage: VERTEX COLOR"));
        }
        let v = num(ln, toks[0], "vertex")?;
        if v >= vertex_count {
            return Err(perr(ln, format!("vertex {v} out of range")));
        }
        let col: u8 = match toks[1] {
            "1" => 1,
            "2" => 2,
            "3" => 3,
            t => return Err(perr(ln, format!("color must be 1, 2 or 3, found `{t}`"))),
        };
        if c.get(v).is_some() {
            return Err(perr(ln, format!("duplicate vertex {v}")));
        }
        c.set(v, col);
    }
    Ok(c)
}

pub fn write_col(c: &Coloring) -> String {
    let mut s = String::new();
    for (v, col) in c.assigned() {
        let _ = writeln!(s, "{v} {col}");
    }
    s
}
