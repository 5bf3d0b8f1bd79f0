//! Text formats for graphs, clouds, distance matrices, complexes and
//! key=value files.
//!
//! Every format is line-oriented with `#` comments. Floats are written with
//! Rust's shortest round-trip representation, so write-then-parse is
//! bit-exact.

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::complex::FlagComplex;
use crate::geometry::Point;
use crate::metric_graph::EmbeddedGraph;
use crate::path_metric::{DistanceMatrix, FiniteMetric};
use crate::sampling::PointCloud;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    File {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

fn perr(line: usize, msg: impl Into<String>) -> IoError {
    IoError::Parse {
        line,
        msg: msg.into(),
    }
}

pub fn read_file(path: impl AsRef<Path>) -> Result<String, IoError> {
    let p = path.as_ref();
    std::fs::read_to_string(p).map_err(|source| IoError::File {
        path: p.display().to_string(),
        source,
    })
}

pub fn write_file(path: impl AsRef<Path>, text: &str) -> Result<(), IoError> {
    let p = path.as_ref();
    std::fs::write(p, text).map_err(|source| IoError::File {
        path: p.display().to_string(),
        source,
    })
}

/// Non-empty lines with comments stripped, numbered from 1.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

fn parse_f64(tok: &str, line: usize) -> Result<f64, IoError> {
    let x: f64 = tok
        .parse()
        .map_err(|_| perr(line, format!("bad number `{tok}`")))?;
    if !x.is_finite() {
        return Err(perr(line, format!("non-finite coordinate `{tok}`")));
    }
    Ok(x)
}

/// Parses `v <id> <x> <y> ...` and `e <id> <u> <v> [bend coords]` lines.
pub fn parse_graph(text: &str) -> Result<EmbeddedGraph, IoError> {
    let mut g = EmbeddedGraph::new(0);
    for (line, l) in content_lines(text) {
        let toks: Vec<&str> = l.split_whitespace().collect();
        match toks[0] {
            "v" => {
                if toks.len() < 4 {
                    return Err(perr(
                        line,
                        "vertex needs an id and at least two coordinates",
                    ));
                }
                let coords = toks[2..]
                    .iter()
                    .map(|t| parse_f64(t, line))
                    .collect::<Result<Vec<_>, _>>()?;
                g.add_vertex(toks[1], Point::new(coords))
                    .map_err(|e| perr(line, e.to_string()))?;
            }
            "e" => {
                if toks.len() < 4 {
                    return Err(perr(line, "edge needs an id and two endpoints"));
                }
                let dim = g.dim().max(2);
                let vals = toks[4..]
                    .iter()
                    .map(|t| parse_f64(t, line))
                    .collect::<Result<Vec<_>, _>>()?;
                if vals.len() % dim != 0 {
                    return Err(perr(
                        line,
                        format!(
                            "{} bend coordinates are not a multiple of dimension {dim}",
                            vals.len()
                        ),
                    ));
                }
                let bends = vals.chunks(dim).map(|c| Point::new(c.to_vec())).collect();
                g.add_edge(toks[1], toks[2], toks[3], bends)
                    .map_err(|e| perr(line, e.to_string()))?;
            }
            other => return Err(perr(line, format!("unknown record `{other}`"))),
        }
    }
    Ok(g)
}

pub fn write_graph(g: &EmbeddedGraph) -> String {
    let mut s = String::new();
    for v in g.vertices() {
        let _ = write!(s, "v {}", v.id);
        for c in v.pos.coords() {
            let _ = write!(s, " {c}");
        }
        s.push('\n');
    }
    for e in g.edges() {
        let _ = write!(
            s,
            "e {} {} {}",
            e.id,
            g.vertices()[e.u].id,
            g.vertices()[e.v].id
        );
        for b in &e.bends {
            for c in b.coords() {
                let _ = write!(s, " {c}");
            }
        }
        s.push('\n');
    }
    s
}

/// Comma-separated rows under a `# dim=N` header.
pub fn parse_cloud(text: &str) -> Result<PointCloud, IoError> {
    let mut dim: Option<usize> = None;
    for (i, l) in text.lines().enumerate() {
        if let Some(rest) = l.trim().strip_prefix('#') {
            if let Some(d) = rest.trim().strip_prefix("dim=") {
                let d: usize = d
                    .trim()
                    .parse()
                    .map_err(|_| perr(i + 1, format!("bad dimension `{d}`")))?;
                dim = Some(d);
            }
        }
    }
    let mut coords = Vec::new();
    for (line, l) in content_lines(text) {
        let row = l
            .split(',')
            .map(|t| parse_f64(t.trim(), line))
            .collect::<Result<Vec<_>, _>>()?;
        match dim {
            None => dim = Some(row.len()),
            Some(d) if d != row.len() => {
                return Err(perr(
                    line,
                    format!("expected {d} columns, found {}", row.len()),
                ))
            }
            _ => {}
        }
        coords.extend(row);
    }
    let dim = dim.ok_or_else(|| perr(1, "empty cloud without a `# dim=N` header"))?;
    if dim == 0 {
        return Err(perr(1, "dimension must be positive"));
    }
    Ok(PointCloud::new(dim, coords))
}

pub fn write_cloud(c: &PointCloud) -> String {
    let mut s = format!("# dim={}\n", c.dim());
    for i in 0..c.len() {
        let row: Vec<String> = c.row(i).iter().map(|x| format!("{x}")).collect();
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

/// `n x n` CSV with `inf` for unreachable pairs.
pub fn write_distance_matrix<M: FiniteMetric + ?Sized>(m: &M) -> String {
    let n = m.len();
    let mut s = String::new();
    for i in 0..n {
        let row: Vec<String> = (0..n)
            .map(|j| {
                m.distance(i, j)
                    .map_or_else(|| "inf".to_string(), |d| format!("{d}"))
            })
            .collect();
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

pub fn parse_distance_matrix(text: &str) -> Result<DistanceMatrix, IoError> {
    let mut data = Vec::new();
    let mut n = None;
    let mut rows = 0;
    for (line, l) in content_lines(text) {
        let row = l
            .split(',')
            .map(|t| match t.trim() {
                "inf" => Ok(None),
                t => t
                    .parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite() && *x >= 0.0)
                    .map(Some)
                    .ok_or_else(|| perr(line, format!("bad distance `{t}`"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        match n {
            None => n = Some(row.len()),
            Some(k) if k != row.len() => return Err(perr(line, format!("expected {k} columns"))),
            _ => {}
        }
        data.extend(row);
        rows += 1;
    }
    let n = n.unwrap_or(0);
    if rows != n {
        return Err(perr(
            rows.max(1),
            format!("matrix has {rows} rows and {n} columns"),
        ));
    }
    Ok(DistanceMatrix::new(n, data))
}

/// One simplex per line, `s v0 ... vk`, after a header recording the vertex
/// count and the enumeration cap.
pub fn write_complex(k: &FlagComplex) -> String {
    let mut s = format!("# vertices={}", k.vertex_count());
    if let Some(t) = k.truncated_at() {
        let _ = write!(s, " max_dim={t}");
    }
    s.push('\n');
    for d in 0..=k.top_dim() {
        for simplex in k.simplices(d) {
            s.push('s');
            for v in simplex {
                let _ = write!(s, " {v}");
            }
            s.push('\n');
        }
    }
    s
}

/// Parses a complex dump. Without a `max_dim` header the list is taken as
/// the whole complex.
pub fn parse_complex(text: &str) -> Result<FlagComplex, IoError> {
    let mut n: Option<usize> = None;
    let mut cap: Option<usize> = None;
    for (i, l) in text.lines().enumerate() {
        if let Some(rest) = l.trim().strip_prefix('#') {
            for tok in rest.split_whitespace() {
                if let Some(v) = tok.strip_prefix("vertices=") {
                    n = Some(
                        v.parse()
                            .map_err(|_| perr(i + 1, format!("bad vertex count `{v}`")))?,
                    );
                } else if let Some(v) = tok.strip_prefix("max_dim=") {
                    cap = Some(
                        v.parse()
                            .map_err(|_| perr(i + 1, format!("bad max_dim `{v}`")))?,
                    );
                }
            }
        }
    }
    let mut list = Vec::new();
    let mut max_v = None;
    for (line, l) in content_lines(text) {
        let mut toks = l.split_whitespace();
        if toks.next() != Some("s") {
            return Err(perr(line, "expected `s v0 v1 ...`"));
        }
        let s = toks
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| perr(line, format!("bad vertex `{t}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if s.is_empty() {
            return Err(perr(line, "empty simplex"));
        }
        max_v = max_v.max(s.iter().copied().max());
        list.push(s);
    }
    let n = n.unwrap_or_else(|| max_v.map_or(0, |m| m + 1));
    FlagComplex::from_simplices(n, &list, cap).map_err(|e| perr(0, e.to_string()))
}

/// `key=value` pairs in file order.
pub fn parse_key_values(text: &str) -> Result<Vec<(String, String)>, IoError> {
    content_lines(text)
        .map(|(line, l)| {
            let (k, v) = l
                .split_once('=')
                .ok_or_else(|| perr(line, format!("expected key=value, found `{l}`")))?;
            let k = k.trim();
            if k.is_empty() {
                return Err(perr(line, "empty key"));
            }
            Ok((k.to_string(), v.trim().to_string()))
        })
        .collect()
}
