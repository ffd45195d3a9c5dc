//! The `graphpair v1` instance file format.
//!
//! ```text
//! graphpair v1
//! n <N>
//! g <u> <v> <w>
//! h <u> <v> <w>
//! ```
//!
//! `#` starts a comment. Each unordered pair appears at most once per graph;
//! `u == v` is a self-loop. The header line is optional on input and always
//! written on output.

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{InstancePair, WeightedGraph};

pub const HEADER: &str = "graphpair v1";

pub fn parse_instance(text: &str) -> Result<InstancePair> {
    let mut n: Option<usize> = None;
    let mut seen_content = false;
    let mut g_edges = Vec::new();
    let mut h_edges = Vec::new();
    let mut g_seen = HashSet::new();
    let mut h_seen = HashSet::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = body.split_whitespace().collect();
        let malformed = |msg: &str| Error::Malformed {
            line,
            msg: msg.to_string(),
        };
        match tokens[0] {
            "graphpair" => {
                if seen_content {
                    return Err(malformed("header must be the first line"));
                }
                if tokens.len() != 2 || tokens[1] != "v1" {
                    return Err(malformed("unsupported header, expected 'graphpair v1'"));
                }
            }
            "n" => {
                if n.is_some() {
                    return Err(malformed("repeated 'n' line"));
                }
                if tokens.len() != 2 {
                    return Err(malformed("expected 'n <N>'"));
                }
                let value: usize = tokens[1]
                    .parse()
                    .map_err(|_| malformed("vertex count is not a nonnegative integer"))?;
                if value == 0 {
                    return Err(malformed("vertex count must be positive"));
                }
                n = Some(value);
            }
            kind @ ("g" | "h") => {
                let n = n.ok_or_else(|| malformed("edge before 'n' line"))?;
                if tokens.len() != 4 {
                    return Err(malformed("expected '<g|h> <u> <v> <w>'"));
                }
                let u: usize = tokens[1]
                    .parse()
                    .map_err(|_| malformed("vertex index is not a nonnegative integer"))?;
                let v: usize = tokens[2]
                    .parse()
                    .map_err(|_| malformed("vertex index is not a nonnegative integer"))?;
                let w: f64 = tokens[3]
                    .parse()
                    .map_err(|_| malformed("weight is not a decimal number"))?;
                if !w.is_finite() {
                    return Err(malformed("weight is not finite"));
                }
                if w < 0.0 {
                    return Err(Error::NegativeWeight { line, weight: w });
                }
                for index in [u, v] {
                    if index >= n {
                        return Err(Error::IndexOutOfRange { line, index, n });
                    }
                }
                let key = (u.min(v), u.max(v));
                let (edges, seen) = if kind == "g" {
                    (&mut g_edges, &mut g_seen)
                } else {
                    (&mut h_edges, &mut h_seen)
                };
                if !seen.insert(key) {
                    return Err(Error::DuplicatePair {
                        line,
                        u: key.0,
                        v: key.1,
                    });
                }
                edges.push((key.0, key.1, w));
            }
            other => {
                return Err(malformed(&format!("unknown record '{other}'")));
            }
        }
        seen_content = true;
    }

    let n = n.ok_or(Error::Malformed {
        line: 0,
        msg: "missing 'n' line".into(),
    })?;
    let g = WeightedGraph::from_edges(n, &g_edges)?;
    let h = WeightedGraph::from_edges(n, &h_edges)?;
    InstancePair::new(g, h)
}

pub fn write_instance(pair: &InstancePair) -> String {
    let mut out = String::new();
    writeln!(out, "{HEADER}").unwrap();
    writeln!(out, "n {}", pair.n()).unwrap();
    for (u, v, w) in pair.g.edges() {
        writeln!(out, "g {u} {v} {w}").unwrap();
    }
    for (u, v, w) in pair.h.edges() {
        writeln!(out, "h {u} {v} {w}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_instance() {
        let p = parse_instance("n 2\ng 0 1 1.0\nh 0 1 1.0\n").unwrap();
        assert_eq!(p.g.total(), 2.0);
        assert_eq!(p.h.total(), 2.0);
        assert_eq!(p.g.weight(1, 0), 1.0);
    }

    #[test]
    fn header_comments_and_loops() {
        let text = "# demo\ngraphpair v1\nn 3  # three vertices\ng 2 1 0.5\ng 0 0 2\nh 0 2 1\n";
        let p = parse_instance(text).unwrap();
        assert_eq!(p.g.weight(1, 2), 0.5);
        assert_eq!(p.g.total(), 3.0);
    }

    #[test]
    fn distinct_diagnostics() {
        let neg = parse_instance("n 2\ng 0 1 -1\nh 0 1 1\n").unwrap_err();
        assert!(neg.to_string().contains("negative weight"));
        let empty = parse_instance("n 2\ng 0 1 1\n").unwrap_err();
        assert_eq!(empty, Error::EmptyDemand);
        assert_eq!(empty.to_string(), "empty demand graph");
        assert!(matches!(
            parse_instance("n 2\ng 0 2 1\nh 0 1 1\n"),
            Err(Error::IndexOutOfRange { index: 2, .. })
        ));
        assert!(matches!(
            parse_instance("n 2\ng 0 1\nh 0 1 1\n"),
            Err(Error::Malformed { line: 2, .. })
        ));
        assert!(matches!(
            parse_instance("n 2\ng 0 1 1\ng 1 0 2\nh 0 1 1\n"),
            Err(Error::DuplicatePair { line: 3, .. })
        ));
        assert_eq!(
            parse_instance("n 2\ng 0 1 0\nh 0 1 1\n").unwrap_err(),
            Error::ZeroTotal
        );
        assert!(matches!(
            parse_instance("graphpair v2\nn 2\n"),
            Err(Error::Malformed { line: 1, .. })
        ));
    }

    #[test]
    fn writer_sorts_and_round_trips() {
        let p = parse_instance("n 3\ng 2 1 0.1\ng 0 1 0.3\nh 2 0 1e-3\nh 1 1 7\n").unwrap();
        let text = write_instance(&p);
        assert_eq!(
            text,
            "graphpair v1\nn 3\ng 0 1 0.3\ng 1 2 0.1\nh 0 2 0.001\nh 1 1 7\n"
        );
        assert_eq!(parse_instance(&text).unwrap(), p);
    }
}
