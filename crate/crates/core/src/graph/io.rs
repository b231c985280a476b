//! Edge-list and DIMACS `.gr` readers, and the edge-list writer.
//!
//! Edge list: one `u v w` line per undirected edge, 0-based ids. Lines
//! starting with `#` are comments; `# nodes N` fixes the node count so
//! isolated trailing nodes survive a round trip.
//!
//! DIMACS: `c` comments, a `p sp n m` header and `a u v w` arcs with 1-based
//! ids. Arcs are symmetrized; antiparallel duplicates collapse into one edge
//! carrying the smaller length.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use super::{Edge, WeightedGraph};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn field<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| parse_err(line, format!("invalid {what} `{tok}`")))
}

pub fn read_edge_list<F: Scalar>(reader: impl BufRead) -> Result<WeightedGraph<F>> {
    let mut declared = 0usize;
    let mut max_id = None;
    let mut edges = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        if let Some(rest) = t.strip_prefix('#') {
            let mut toks = rest.split_whitespace();
            if toks.next() == Some("nodes") {
                declared = field(toks.next(), lineno, "node count")?;
            }
            continue;
        }
        let mut toks = t.split_whitespace();
        let u: usize = field(toks.next(), lineno, "source id")?;
        let v: usize = field(toks.next(), lineno, "target id")?;
        let w: f64 = field(toks.next(), lineno, "length")?;
        if toks.next().is_some() {
            return Err(parse_err(lineno, "trailing tokens"));
        }
        max_id = Some(max_id.unwrap_or(0).max(u).max(v));
        edges.push(Edge {
            u,
            v,
            length: F::lit(w),
        });
    }
    let n = declared.max(max_id.map_or(0, |m| m + 1));
    WeightedGraph::new(n, edges)
}

pub fn write_edge_list<F: Scalar>(g: &WeightedGraph<F>, mut out: impl Write) -> Result<()> {
    writeln!(out, "# nodes {}", g.node_count())?;
    for e in g.edges() {
        writeln!(out, "{} {} {}", e.u, e.v, e.length)?;
    }
    Ok(())
}

pub fn read_dimacs<F: Scalar>(reader: impl BufRead) -> Result<WeightedGraph<F>> {
    let mut n = None;
    let mut lengths: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    let mut order = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let mut toks = line.split_whitespace();
        match toks.next() {
            None | Some("c") => {}
            Some("p") => {
                if toks.next() != Some("sp") {
                    return Err(parse_err(lineno, "expected `p sp n m`"));
                }
                n = Some(field::<usize>(toks.next(), lineno, "node count")?);
                let _m: usize = field(toks.next(), lineno, "arc count")?;
            }
            Some("a") => {
                let n = n.ok_or_else(|| parse_err(lineno, "arc before `p` header"))?;
                let u: usize = field(toks.next(), lineno, "arc tail")?;
                let v: usize = field(toks.next(), lineno, "arc head")?;
                let w: f64 = field(toks.next(), lineno, "arc length")?;
                if u == 0 || v == 0 || u > n || v > n {
                    return Err(parse_err(lineno, "node id outside 1..=n"));
                }
                let key = ((u - 1).min(v - 1), (u - 1).max(v - 1));
                match lengths.get_mut(&key) {
                    Some(old) => *old = old.min(w),
                    None => {
                        lengths.insert(key, w);
                        order.push(key);
                    }
                }
            }
            Some(other) => return Err(parse_err(lineno, format!("unknown line type `{other}`"))),
        }
    }
    let n = n.ok_or_else(|| parse_err(0, "missing `p sp n m` header"))?;
    let edges = order
        .into_iter()
        .map(|(u, v)| Edge {
            u,
            v,
            length: F::lit(lengths[&(u, v)]),
        })
        .collect();
    WeightedGraph::new(n, edges)
}
