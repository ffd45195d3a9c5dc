//! Text serialization of relaxation witnesses:
//! `spectral x <v> <value>`, `metric <u> <v> <d>`, `points <v> <c1> .. <cdim>`.

use std::fmt::Write as _;

use super::{RelaxationKind, RelaxationValue, SemiMetric, VectorEmbedding, Witness};
use crate::error::{Error, Result};

pub fn write_witness(rv: &RelaxationValue) -> String {
    let mut out = String::new();
    writeln!(out, "# {} value {}", rv.kind().name(), rv.value).unwrap();
    match &rv.witness {
        Witness::Spectral(x) => {
            for (v, xv) in x.iter().enumerate() {
                writeln!(out, "spectral x {v} {xv}").unwrap();
            }
        }
        Witness::Metric(d) => {
            for u in 0..d.n() {
                for v in (u + 1)..d.n() {
                    writeln!(out, "metric {u} {v} {}", d.get(u, v)).unwrap();
                }
            }
        }
        Witness::Points(p) => {
            for v in 0..p.len() {
                write!(out, "points {v}").unwrap();
                for c in p.point(v) {
                    write!(out, " {c}").unwrap();
                }
                out.push('\n');
            }
        }
    }
    out
}

/// Parses a witness for an `n`-vertex instance. The kind is taken from the
/// records present; mixing kinds is an error.
pub fn parse_witness(text: &str, n: usize) -> Result<Witness> {
    let mut kind: Option<RelaxationKind> = None;
    let mut spectral = vec![None; n];
    let mut metric = SemiMetric::from_dense(n, &vec![0.0; n * n]);
    let mut points: Vec<Option<Vec<f64>>> = vec![None; n];

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let malformed = |msg: &str| Error::Malformed {
            line,
            msg: msg.to_string(),
        };
        let tok: Vec<&str> = body.split_whitespace().collect();
        let num = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| malformed("expected a finite number"))
        };
        let index = |s: &str| -> Result<usize> {
            let i: usize = s.parse().map_err(|_| malformed("expected a vertex index"))?;
            if i >= n {
                return Err(Error::IndexOutOfRange { line, index: i, n });
            }
            Ok(i)
        };
        let this = match tok[0] {
            "spectral" => {
                if tok.len() != 4 || tok[1] != "x" {
                    return Err(malformed("expected 'spectral x <v> <value>'"));
                }
                spectral[index(tok[2])?] = Some(num(tok[3])?);
                RelaxationKind::Spectral
            }
            "metric" => {
                if tok.len() != 4 {
                    return Err(malformed("expected 'metric <u> <v> <d>'"));
                }
                let (u, v) = (index(tok[1])?, index(tok[2])?);
                if u == v {
                    return Err(malformed("metric record on the diagonal"));
                }
                metric.set(u, v, num(tok[3])?);
                RelaxationKind::Lp
            }
            "points" => {
                if tok.len() < 3 {
                    return Err(malformed("expected 'points <v> <c1> ...'"));
                }
                let v = index(tok[1])?;
                points[v] = Some(tok[2..].iter().map(|s| num(s)).collect::<Result<_>>()?);
                RelaxationKind::Sdp
            }
            other => return Err(malformed(&format!("unknown record '{other}'"))),
        };
        match kind {
            None => kind = Some(this),
            Some(k) if k != this => return Err(malformed("mixed witness kinds")),
            _ => {}
        }
    }
    let missing = || Error::Malformed {
        line: 0,
        msg: "witness does not cover every vertex".into(),
    };
    match kind {
        Some(RelaxationKind::Spectral) => Ok(Witness::Spectral(
            spectral.into_iter().collect::<Option<Vec<_>>>().ok_or_else(missing)?,
        )),
        Some(RelaxationKind::Lp) => Ok(Witness::Metric(metric)),
        Some(RelaxationKind::Sdp) => Ok(Witness::Points(VectorEmbedding::new(
            points.into_iter().collect::<Option<Vec<_>>>().ok_or_else(missing)?,
        )?)),
        None => Err(Error::Malformed {
            line: 0,
            msg: "empty witness".into(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn points_round_trip() {
        let rv = RelaxationValue {
            value: 0.25,
            witness: Witness::Points(VectorEmbedding::new(vec![vec![0.1, -2.0], vec![3.5, 1e-9]]).unwrap()),
            rounds: 1,
            active_cuts: 0,
        };
        let text = write_witness(&rv);
        assert!(text.starts_with("# sdp value 0.25\npoints 0 0.1 -2\n"));
        assert_eq!(parse_witness(&text, 2).unwrap(), rv.witness);
    }

    #[test]
    fn rejects_mixed_and_partial() {
        assert!(parse_witness("spectral x 0 1\nmetric 0 1 2\n", 2).is_err());
        assert!(parse_witness("spectral x 0 1\n", 2).is_err());
        assert!(parse_witness("metric 0 5 1\n", 2).is_err());
    }
}
