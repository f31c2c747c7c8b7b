//! Text formats: the edge-list graph file and the `id,z,y` observation table.
//!
//! Edge list: the first content line holds the vertex count `N`; every later
//! line that is neither blank nor a `#` comment holds two whitespace-separated
//! vertex indices. Edges are undirected and repeated pairs are ignored.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::Graph;

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

pub fn parse_edge_list<R: BufRead>(reader: R) -> Result<Graph> {
    let mut n: Option<usize> = None;
    let mut pairs = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let content = line.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match n {
            None => {
                if tokens.len() != 1 {
                    return Err(parse_err(line_no, "expected the vertex count on its own line"));
                }
                let count = tokens[0]
                    .parse::<usize>()
                    .map_err(|_| parse_err(line_no, format!("invalid vertex count {:?}", tokens[0])))?;
                n = Some(count);
            }
            Some(count) => {
                if tokens.len() != 2 {
                    return Err(parse_err(line_no, format!("expected 2 vertex indices, found {}", tokens.len())));
                }
                let mut ends = [0usize; 2];
                for (slot, tok) in ends.iter_mut().zip(&tokens) {
                    *slot = tok
                        .parse::<usize>()
                        .map_err(|_| parse_err(line_no, format!("invalid vertex index {tok:?}")))?;
                    if *slot >= count {
                        return Err(Error::OutOfRangeVertex { vertex: *slot, n: count });
                    }
                }
                if ends[0] == ends[1] {
                    return Err(parse_err(line_no, format!("self-loop at vertex {}", ends[0])));
                }
                pairs.push((ends[0], ends[1]));
            }
        }
    }
    let n = n.ok_or_else(|| parse_err(1, "missing vertex count"))?;
    Graph::new(n, pairs)
}

pub fn read_edge_list(path: impl AsRef<Path>) -> Result<Graph> {
    parse_edge_list(BufReader::new(File::open(path)?))
}

pub fn write_edge_list_to<W: Write>(g: &Graph, mut out: W) -> Result<()> {
    writeln!(out, "{}", g.n())?;
    for &(i, j) in g.edges() {
        writeln!(out, "{i} {j}")?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_edge_list(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    write_edge_list_to(g, BufWriter::new(File::create(path)?))
}

/// Treatment indicators and outcomes, indexed by graph vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct Observations {
    pub z: Vec<bool>,
    pub y: Vec<f64>,
}

/// Parses a CSV with header `id,z,y` (columns in any order). Each `id` must
/// name a vertex of the edge list (its decimal index) and every vertex must
/// appear exactly once; `z` must be `0` or `1`, `y` a finite real.
pub fn parse_observations<R: Read>(reader: R, n: usize) -> Result<Observations> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers()?.clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| parse_err(1, format!("missing column {name:?}")))
    };
    let (id_col, z_col, y_col) = (column("id")?, column("z")?, column("y")?);

    let labels: HashMap<String, usize> = (0..n).map(|v| (v.to_string(), v)).collect();
    let mut z = vec![false; n];
    let mut y = vec![0.0; n];
    let mut seen = vec![false; n];
    let mut rows = 0usize;
    for (idx, record) in rdr.records().enumerate() {
        let record = record?;
        let line = record.position().map_or(idx + 2, |p| p.line() as usize);
        let field = |col: usize| record.get(col).unwrap_or("");
        let id = field(id_col);
        let &v = labels
            .get(id)
            .ok_or_else(|| parse_err(line, format!("id {id:?} is not a vertex of the graph")))?;
        if std::mem::replace(&mut seen[v], true) {
            return Err(parse_err(line, format!("duplicate id {id:?}")));
        }
        z[v] = match field(z_col) {
            "0" => false,
            "1" => true,
            other => return Err(parse_err(line, format!("treatment must be 0 or 1, found {other:?}"))),
        };
        let raw = field(y_col);
        y[v] = raw
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| parse_err(line, format!("invalid outcome {raw:?}")))?;
        rows += 1;
    }
    if rows != n {
        return Err(Error::LengthMismatch { expected: n, actual: rows });
    }
    Ok(Observations { z, y })
}

pub fn read_observations(path: impl AsRef<Path>, n: usize) -> Result<Observations> {
    parse_observations(File::open(path)?, n)
}

pub fn write_observations(obs: &Observations, path: impl AsRef<Path>) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["id", "z", "y"])?;
    for (v, (&z, &y)) in obs.z.iter().zip(&obs.y).enumerate() {
        w.write_record([v.to_string(), u8::from(z).to_string(), y.to_string()])?;
    }
    w.flush()?;
    Ok(())
}
