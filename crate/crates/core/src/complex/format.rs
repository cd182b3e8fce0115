//! Plain-text complex files.
//!
//! ```text
//! # a single square
//! complex dim=2
//! vertices 4
//! coords 0: 0 0
//! coords 1: 1 0
//! coords 2: 1 1
//! coords 3: 0 1
//! cell 1 0: 0 1
//! cell 1 1: 1 2
//! cell 1 2: 2 3
//! cell 1 3: 3 0
//! cell 2 0: 0 1 2 3
//! ```
//!
//! Cell ids within a grade must be exactly `0..n` (any order). A boundary
//! list may not name an undeclared lower cell.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{ChainComplex, ComplexError};
use crate::z2::Z2Matrix;

fn parse_err(line: usize, message: impl Into<String>) -> ComplexError {
    ComplexError::Parse {
        line,
        message: message.into(),
    }
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T, ComplexError> {
    tok.parse()
        .map_err(|_| parse_err(line, format!("expected {what}, found `{tok}`")))
}

pub fn load_complex(source: &str) -> Result<ChainComplex, ComplexError> {
    let mut dim: Option<usize> = None;
    let mut n_vertices: Option<usize> = None;
    let mut systole = None;
    let mut coords: BTreeMap<usize, Vec<i64>> = BTreeMap::new();
    // grade -> id -> (line, boundary)
    let mut cells: Vec<BTreeMap<usize, (usize, Vec<usize>)>> = Vec::new();

    for (idx, raw) in source.lines().enumerate() {
        let line = idx + 1;
        let text = raw.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        let (head, rest) = text.split_once(char::is_whitespace).unwrap_or((text, ""));
        let rest = rest.trim();
        match head {
            "complex" => {
                let d = rest
                    .strip_prefix("dim=")
                    .ok_or_else(|| parse_err(line, "expected `complex dim=<d>`"))?;
                let d: usize = parse_num(d.trim(), line, "dimension")?;
                if d == 0 {
                    return Err(parse_err(line, "dimension must be at least 1"));
                }
                dim = Some(d);
                cells = vec![BTreeMap::new(); d + 1];
            }
            "vertices" => n_vertices = Some(parse_num(rest, line, "vertex count")?),
            "systole" => systole = Some(parse_num(rest, line, "systole hint")?),
            "coords" => {
                let (id, vals) = rest
                    .split_once(':')
                    .ok_or_else(|| parse_err(line, "expected `coords <id>: <ints>`"))?;
                let id: usize = parse_num(id.trim(), line, "vertex id")?;
                let vals = vals
                    .split_whitespace()
                    .map(|t| parse_num(t, line, "integer coordinate"))
                    .collect::<Result<Vec<i64>, _>>()?;
                if coords.insert(id, vals).is_some() {
                    return Err(parse_err(line, format!("duplicate coords for vertex {id}")));
                }
            }
            "cell" => {
                let d = dim.ok_or_else(|| parse_err(line, "`cell` before `complex dim=` header"))?;
                let (lhs, rhs) = rest
                    .split_once(':')
                    .ok_or_else(|| parse_err(line, "expected `cell <k> <id>: <ids>`"))?;
                let mut lhs_toks = lhs.split_whitespace();
                let (Some(k), Some(id), None) = (lhs_toks.next(), lhs_toks.next(), lhs_toks.next()) else {
                    return Err(parse_err(line, "expected `cell <k> <id>: <ids>`"));
                };
                let k: usize = parse_num(k, line, "grade")?;
                let id: usize = parse_num(id, line, "cell id")?;
                if k == 0 || k > d {
                    return Err(parse_err(line, format!("cell grade {k} outside 1..={d}")));
                }
                let faces = rhs
                    .split_whitespace()
                    .map(|t| parse_num(t, line, "face id"))
                    .collect::<Result<Vec<usize>, _>>()?;
                if cells[k].insert(id, (line, faces)).is_some() {
                    return Err(parse_err(line, format!("duplicate {k}-cell {id}")));
                }
            }
            other => return Err(parse_err(line, format!("unknown directive `{other}`"))),
        }
    }

    let dim = dim.ok_or_else(|| parse_err(1, "missing `complex dim=<d>` header"))?;
    let n_vertices = n_vertices.ok_or_else(|| parse_err(1, "missing `vertices <n>` line"))?;

    let mut counts = vec![n_vertices];
    let mut boundaries = Vec::with_capacity(dim);
    for (k, grade) in cells.iter().enumerate().skip(1) {
        let n = grade.len();
        if let Some((&id, &(line, _))) = grade.iter().find(|(&id, _)| id >= n) {
            return Err(parse_err(line, format!("{k}-cell ids must be 0..{n}, found {id}")));
        }
        let mut columns = Vec::with_capacity(n);
        for (&id, (_, faces)) in grade {
            if let Some(&bad) = faces.iter().find(|&&f| f >= counts[k - 1]) {
                return Err(ComplexError::Validation {
                    grade: k,
                    cell: id,
                    message: format!("boundary names undeclared {}-cell {bad}", k - 1),
                });
            }
            columns.push(faces.clone());
        }
        counts.push(n);
        boundaries.push(Z2Matrix::from_columns(counts[k - 1], columns));
    }

    let coords = if coords.is_empty() {
        None
    } else {
        if coords.len() != n_vertices || coords.keys().any(|&v| v >= n_vertices) {
            return Err(ComplexError::Validation {
                grade: 0,
                cell: coords.keys().find(|&&v| v >= n_vertices).copied().unwrap_or(0),
                message: "coords must cover exactly the declared vertices".into(),
            });
        }
        Some(coords.into_values().collect())
    };
    ChainComplex::new(n_vertices, boundaries, coords, systole)
}

/// Serializes a complex in the format read by [`load_complex`].
pub fn write_complex(c: &ChainComplex) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "complex dim={}", c.dim());
    let _ = writeln!(out, "vertices {}", c.count(0));
    if let Some(s) = c.systole_hint() {
        let _ = writeln!(out, "systole {s}");
    }
    if let Some(coords) = c.coords() {
        for (v, xs) in coords.iter().enumerate() {
            let xs: Vec<String> = xs.iter().map(i64::to_string).collect();
            let _ = writeln!(out, "coords {v}: {}", xs.join(" "));
        }
    }
    for k in 1..=c.dim() {
        for j in 0..c.count(k) {
            let faces: Vec<String> = c.boundary(k).column(j).iter().map(usize::to_string).collect();
            let _ = writeln!(out, "cell {k} {j}: {}", faces.join(" "));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::build_hypercubic_torus;

    const SQUARE: &str = "\
# one square
complex dim=2
vertices 4
cell 1 0: 0 1
cell 1 1: 1 2
cell 1 2: 2 3
cell 1 3: 3 0
cell 2 0: 0 1 2 3   # all four edges
";

    #[test]
    fn round_trip_torus() {
        let c = build_hypercubic_torus(2, 2);
        let text = write_complex(&c);
        assert_eq!(load_complex(&text).unwrap(), c);
    }

    #[test]
    fn hand_written_square() {
        let c = load_complex(SQUARE).unwrap();
        assert_eq!(c.counts(), &[4, 4, 1]);
        assert!(c.boundary_squares_vanish());
    }

    #[test]
    fn deleted_edge_is_rejected() {
        // Edge 3 removed; the square still names it.
        let text = SQUARE.replace("cell 1 3: 3 0\n", "");
        let err = load_complex(&text).unwrap_err();
        assert_eq!(
            err,
            ComplexError::Validation {
                grade: 2,
                cell: 0,
                message: "boundary names undeclared 1-cell 3".into()
            }
        );
    }

    #[test]
    fn odd_incidence_is_rejected() {
        let text = SQUARE.replace("cell 2 0: 0 1 2 3", "cell 2 0: 0 1 2");
        let err = load_complex(&text).unwrap_err();
        assert!(
            matches!(err, ComplexError::Validation { grade: 2, cell: 0, .. }),
            "{err}"
        );
    }

    #[test]
    fn parse_errors_carry_line() {
        let err = load_complex("complex dim=2\nvertices four\n").unwrap_err();
        assert!(matches!(err, ComplexError::Parse { line: 2, .. }));
        let err = load_complex("complex dim=1\nvertices 2\ncell 1 0 0 1\n").unwrap_err();
        assert!(matches!(err, ComplexError::Parse { line: 3, .. }));
        let err = load_complex("vertices 2\n").unwrap_err();
        assert!(matches!(err, ComplexError::Parse { .. }));
    }
}
