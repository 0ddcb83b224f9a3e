//! Plain-text graph and partition files.
//!
//! Edge list: a first line `n m`, then `m` lines `u v` with 0-based
//! `u < v`. Partition: `n` lines holding one label each.

use std::io::{BufRead, Write};

use super::{Graph, Partition};
use crate::error::{Result, SbmError};

pub fn write_edge_list<W: Write>(g: &Graph, mut out: W) -> Result<()> {
    writeln!(out, "{} {}", g.n(), g.edge_count())?;
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}")?;
    }
    out.flush()?;
    Ok(())
}

fn parse_pair(line: &str, lineno: usize) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace().map(str::parse::<usize>);
    match (it.next(), it.next(), it.next()) {
        (Some(Ok(a)), Some(Ok(b)), None) => Ok((a, b)),
        _ => Err(SbmError::Parse(format!(
            "line {lineno}: expected two non-negative integers, got {line:?}"
        ))),
    }
}

pub fn read_edge_list<R: BufRead>(input: R) -> Result<Graph> {
    let mut lines = input
        .lines()
        .enumerate()
        .filter(|(_, l)| l.as_ref().map_or(true, |l| !l.trim().is_empty()));
    let (n, m) = match lines.next() {
        Some((i, line)) => parse_pair(&line?, i + 1)?,
        None => return Err(SbmError::Parse("empty edge list".into())),
    };
    let mut edges = Vec::with_capacity(m);
    for (i, line) in lines {
        let (u, v) = parse_pair(&line?, i + 1)?;
        if u >= v {
            return Err(SbmError::Parse(format!(
                "line {}: edge ({u}, {v}) must satisfy u < v",
                i + 1
            )));
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(SbmError::Parse(format!(
            "header announces {m} edges, found {}",
            edges.len()
        )));
    }
    let g = Graph::from_edges(n, edges)?;
    if g.edge_count() != m {
        return Err(SbmError::Parse("edge list contains duplicate edges".into()));
    }
    Ok(g)
}

pub fn write_partition<W: Write>(p: &Partition, mut out: W) -> Result<()> {
    for &l in p.labels() {
        writeln!(out, "{l}")?;
    }
    out.flush()?;
    Ok(())
}

/// Reads one label per line. `k` defaults to `max label + 1`.
pub fn read_partition<R: BufRead>(input: R, k: Option<usize>) -> Result<Partition> {
    let mut labels = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        labels.push(t.parse::<usize>().map_err(|_| {
            SbmError::Parse(format!("line {}: bad label {t:?}", i + 1))
        })?);
    }
    let k = k.unwrap_or_else(|| labels.iter().max().map_or(1, |m| m + 1));
    Partition::new(labels, k)
}
