//! On-disk formats: configuration JSON, colouring certificates, graph
//! exports. Emission is hand-rolled so output bytes are deterministic;
//! parsing goes through serde_json and reports a JSON path with each shape
//! error. Rationals travel as "p/q" strings in lowest terms with positive
//! denominator ("/1" omitted), so serializing after a parse reproduces
//! serializer output byte for byte.

use serde_json::Value;
use std::fmt::Write as _;

use crate::coloring::Coloring;
use crate::config::{Configuration, Probe};
use crate::geom::{cmp_rat, format_rational, parse_rational, Point, Rational, Rect, Segment};
use crate::graph::Graph;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    /// Lexical / grammatical JSON fault; carries serde's line and column.
    #[error("json syntax: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("{at}: {why}")]
    Malformed { at: String, why: String },
}

fn fail<T>(at: impl Into<String>, why: impl Into<String>) -> Result<T, IoError> {
    Err(IoError::Malformed {
        at: at.into(),
        why: why.into(),
    })
}

fn rect_array(r: &Rect) -> String {
    format!(
        "[\"{}\",\"{}\",\"{}\",\"{}\"]",
        format_rational(&r.x_lo),
        format_rational(&r.x_hi),
        format_rational(&r.y_lo),
        format_rational(&r.y_hi)
    )
}

fn segment_record(s: &Segment) -> String {
    format!(
        "{{\"a\":[\"{}\",\"{}\"],\"b\":[\"{}\",\"{}\"]}}",
        format_rational(&s.a.x),
        format_rational(&s.a.y),
        format_rational(&s.b.x),
        format_rational(&s.b.y)
    )
}

fn probe_record(p: &Probe) -> String {
    let pillars: Vec<String> = p.pillars.iter().map(rect_array).collect();
    format!(
        "{{\"rect\":{},\"root\":{},\"pillars\":[{}]}}",
        rect_array(&p.rect),
        rect_array(&p.root),
        pillars.join(",")
    )
}

fn record_block(out: &mut String, key: &str, records: &[String], terminal: bool) {
    let tail = if terminal { "\n" } else { ",\n" };
    if records.is_empty() {
        out.push_str("  \"");
        out.push_str(key);
        out.push_str("\": []");
        out.push_str(tail);
        return;
    }
    out.push_str("  \"");
    out.push_str(key);
    out.push_str("\": [\n");
    for (i, r) in records.iter().enumerate() {
        out.push_str("    ");
        out.push_str(r);
        out.push_str(if i + 1 == records.len() { "\n" } else { ",\n" });
    }
    out.push_str("  ]");
    out.push_str(tail);
}

/// Segments in insertion order; probes sorted by (y_lo, x_lo), ties keeping
/// insertion order. Pillar order inside a probe is meaningful and never
/// reordered.
pub fn serialize_configuration(config: &Configuration) -> String {
    let segments: Vec<String> = config.segments.iter().map(segment_record).collect();
    let mut order: Vec<usize> = (0..config.probes.len()).collect();
    order.sort_by(|&i, &j| {
        let (a, b) = (&config.probes[i].rect, &config.probes[j].rect);
        cmp_rat(&a.y_lo, &b.y_lo)
            .then_with(|| cmp_rat(&a.x_lo, &b.x_lo))
            .then(i.cmp(&j))
    });
    let probes: Vec<String> = order
        .iter()
        .map(|&i| probe_record(&config.probes[i]))
        .collect();
    let mut out = String::from("{\n");
    record_block(&mut out, "segments", &segments, false);
    record_block(&mut out, "probes", &probes, true);
    out.push_str("}\n");
    out
}

fn as_obj<'a>(v: &'a Value, at: &str) -> Result<&'a serde_json::Map<String, Value>, IoError> {
    match v.as_object() {
        Some(m) => Ok(m),
        None => fail(at, "expected an object"),
    }
}

fn as_arr<'a>(v: &'a Value, at: &str) -> Result<&'a Vec<Value>, IoError> {
    match v.as_array() {
        Some(a) => Ok(a),
        None => fail(at, "expected an array"),
    }
}

fn field<'a>(
    m: &'a serde_json::Map<String, Value>,
    key: &str,
    at: &str,
) -> Result<&'a Value, IoError> {
    match m.get(key) {
        Some(v) => Ok(v),
        None => fail(at, format!("missing field \"{key}\"")),
    }
}

fn rational_at(v: &Value, at: &str) -> Result<Rational, IoError> {
    let s = match v.as_str() {
        Some(s) => s,
        None => return fail(at, "expected a rational string"),
    };
    parse_rational(s).or_else(|e| fail(at, e.to_string()))
}

fn point_at(v: &Value, at: &str) -> Result<Point, IoError> {
    let a = as_arr(v, at)?;
    if a.len() != 2 {
        return fail(at, "expected [x, y]");
    }
    Ok(Point::new(
        rational_at(&a[0], &format!("{at}[0]"))?,
        rational_at(&a[1], &format!("{at}[1]"))?,
    ))
}

fn rect_at(v: &Value, at: &str) -> Result<Rect, IoError> {
    let a = as_arr(v, at)?;
    if a.len() != 4 {
        return fail(at, "expected [x_lo, x_hi, y_lo, y_hi]");
    }
    let mut parts = Vec::with_capacity(4);
    for (k, item) in a.iter().enumerate() {
        parts.push(rational_at(item, &format!("{at}[{k}]"))?);
    }
    let y_hi = parts.pop().unwrap();
    let y_lo = parts.pop().unwrap();
    let x_hi = parts.pop().unwrap();
    let x_lo = parts.pop().unwrap();
    Rect::new(x_lo, x_hi, y_lo, y_hi).or_else(|e| fail(at, e.to_string()))
}

fn segment_at(v: &Value, at: &str) -> Result<Segment, IoError> {
    let m = as_obj(v, at)?;
    let a = point_at(field(m, "a", at)?, &format!("{at}.a"))?;
    let b = point_at(field(m, "b", at)?, &format!("{at}.b"))?;
    Segment::new(a, b).or_else(|e| fail(at, e.to_string()))
}

fn probe_at(v: &Value, at: &str) -> Result<Probe, IoError> {
    let m = as_obj(v, at)?;
    let rect = rect_at(field(m, "rect", at)?, &format!("{at}.rect"))?;
    let root = rect_at(field(m, "root", at)?, &format!("{at}.root"))?;
    let pillars_v = as_arr(field(m, "pillars", at)?, &format!("{at}.pillars"))?;
    let mut pillars = Vec::with_capacity(pillars_v.len());
    for (k, item) in pillars_v.iter().enumerate() {
        pillars.push(rect_at(item, &format!("{at}.pillars[{k}]"))?);
    }
    Ok(Probe {
        rect,
        root,
        pillars,
    })
}

/// Probe order is taken from the file as written; no validation beyond the
/// type invariants (non-degenerate segments, non-empty rectangles) runs here.
pub fn parse_configuration(text: &str) -> Result<Configuration, IoError> {
    let v: Value = serde_json::from_str(text)?;
    let m = as_obj(&v, "$")?;
    let mut segments = Vec::new();
    for (i, item) in as_arr(field(m, "segments", "$")?, "$.segments")?.iter().enumerate() {
        segments.push(segment_at(item, &format!("$.segments[{i}]"))?);
    }
    let mut probes = Vec::new();
    for (i, item) in as_arr(field(m, "probes", "$")?, "$.probes")?.iter().enumerate() {
        probes.push(probe_at(item, &format!("$.probes[{i}]"))?);
    }
    Ok(Configuration { segments, probes })
}

/// Vertex keys ascending; colour rows as stored on the `Coloring`.
pub fn serialize_coloring(c: &Coloring) -> String {
    let mut out = String::from("{\n");
    let _ = writeln!(out, "  \"t\": {},", c.t);
    let _ = writeln!(out, "  \"palette\": {},", c.palette);
    if c.assignment.is_empty() {
        out.push_str("  \"assignment\": {}\n}\n");
        return out;
    }
    out.push_str("  \"assignment\": {\n");
    for (v, row) in c.assignment.iter().enumerate() {
        let colors: Vec<String> = row.iter().map(|c| c.to_string()).collect();
        let tail = if v + 1 == c.assignment.len() { "\n" } else { ",\n" };
        let _ = write!(out, "    \"{}\": [{}]{}", v, colors.join(", "), tail);
    }
    out.push_str("  }\n}\n");
    out
}

fn u32_at(v: &Value, at: &str) -> Result<u32, IoError> {
    match v.as_u64().and_then(|x| u32::try_from(x).ok()) {
        Some(x) => Ok(x),
        None => fail(at, "expected an unsigned 32-bit integer"),
    }
}

pub fn parse_coloring(text: &str) -> Result<Coloring, IoError> {
    let v: Value = serde_json::from_str(text)?;
    let m = as_obj(&v, "$")?;
    let t = u32_at(field(m, "t", "$")?, "$.t")?;
    let palette = u32_at(field(m, "palette", "$")?, "$.palette")?;
    let am = as_obj(field(m, "assignment", "$")?, "$.assignment")?;
    let mut rows: Vec<(usize, Vec<u32>)> = Vec::with_capacity(am.len());
    for (key, row_v) in am {
        let at = format!("$.assignment.{key}");
        let idx: usize = match key.parse() {
            Ok(i) => i,
            Err(_) => return fail(&at, "key must be a vertex index"),
        };
        let row_a = as_arr(row_v, &at)?;
        let mut row = Vec::with_capacity(row_a.len());
        for (k, c) in row_a.iter().enumerate() {
            row.push(u32_at(c, &format!("{at}[{k}]"))?);
        }
        rows.push((idx, row));
    }
    rows.sort_by_key(|(idx, _)| *idx);
    for (pos, (idx, _)) in rows.iter().enumerate() {
        if *idx != pos {
            return fail(
                "$.assignment",
                format!("vertex keys must cover 0..n once; hole or repeat at {idx}"),
            );
        }
    }
    Ok(Coloring {
        t,
        palette,
        assignment: rows.into_iter().map(|(_, row)| row).collect(),
    })
}

/// "n m" header, one "u v" line per edge, 0-based, edges ascending.
pub fn graph_text(g: &Graph) -> String {
    let edges = g.edges();
    let mut out = format!("{} {}\n", g.n(), edges.len());
    for (u, v) in edges {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

pub fn parse_graph_text(text: &str) -> Result<Graph, IoError> {
    let mut tokens = text.split_whitespace();
    let mut next_num = |at: &str| -> Result<usize, IoError> {
        match tokens.next() {
            Some(tok) => match tok.parse() {
                Ok(x) => Ok(x),
                Err(_) => fail(at, format!("not a number: \"{tok}\"")),
            },
            None => fail(at, "unexpected end of input"),
        }
    };
    let n = next_num("header n")?;
    let m = next_num("header m")?;
    let mut g = Graph::new(n);
    for e in 0..m {
        let at = format!("edge {e}");
        let u = next_num(&at)?;
        let v = next_num(&at)?;
        if u == v {
            return fail(&at, "loop");
        }
        if u >= n || v >= n {
            return fail(&at, format!("vertex out of range: {} {}", u, v));
        }
        g.add_edge(u, v);
    }
    if tokens.next().is_some() {
        return fail("trailer", "content after the last edge");
    }
    Ok(g)
}

/// Adjacency as JSON, with the slope-class id of each vertex alongside.
pub fn graph_json(g: &Graph, classes: &[usize]) -> String {
    assert_eq!(classes.len(), g.n(), "one class id per vertex");
    let ids: Vec<String> = classes.iter().map(|c| c.to_string()).collect();
    let mut out = String::from("{\n");
    let _ = writeln!(out, "  \"n\": {},", g.n());
    let _ = writeln!(out, "  \"classes\": [{}],", ids.join(", "));
    let edges = g.edges();
    if edges.is_empty() {
        out.push_str("  \"edges\": []\n}\n");
        return out;
    }
    out.push_str("  \"edges\": [\n");
    for (i, (u, v)) in edges.iter().enumerate() {
        let tail = if i + 1 == edges.len() { "\n" } else { ",\n" };
        let _ = write!(out, "    [{u}, {v}]{tail}");
    }
    out.push_str("  ]\n}\n");
    out
}

/// 1-based DIMACS for third-party solvers.
pub fn graph_dimacs(g: &Graph) -> String {
    let edges = g.edges();
    let mut out = format!("p edge {} {}\n", g.n(), edges.len());
    for (u, v) in edges {
        let _ = writeln!(out, "e {} {}", u + 1, v + 1);
    }
    out
}
