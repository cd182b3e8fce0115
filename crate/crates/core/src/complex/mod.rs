//! Graded cell complexes over GF(2).
//!
//! A [`ChainComplex`] stores its cells by grade together with the boundary
//! matrices between consecutive grades. Distances are hop counts on the
//! 1-skeleton; every k-cell also remembers the set of 0-cells it spans so
//! that balls can decide membership of higher cells.

mod format;
mod spacetime;
mod torus;

pub use format::{load_complex, write_complex};
pub use spacetime::{spacetime_boundary, spacetime_faces, SpacetimeCell, SpacetimeFace};
pub use torus::{build_hypercubic_torus, torus_cell_index, torus_vertex_index};

use std::collections::VecDeque;

use thiserror::Error;

use crate::z2::Z2Matrix;

/// Distance value for vertices not reached by a search.
pub const UNREACHED: u32 = u32::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid {grade}-cell {cell}: {message}")]
    Validation { grade: usize, cell: usize, message: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    dim: usize,
    counts: Vec<usize>,
    /// `boundary[k]` maps k-chains to (k−1)-chains; `boundary[0]` is an
    /// empty placeholder.
    boundary: Vec<Z2Matrix>,
    coords: Option<Vec<Vec<i64>>>,
    systole_hint: Option<usize>,
    neighbors: Vec<Vec<usize>>,
    cell_vertices: Vec<Vec<Vec<usize>>>,
}

impl ChainComplex {
    /// Assembles and validates a complex. `boundaries[k - 1]` is the
    /// boundary map of grade `k`, so `boundaries.len()` is the dimension.
    pub fn new(
        n_vertices: usize,
        boundaries: Vec<Z2Matrix>,
        coords: Option<Vec<Vec<i64>>>,
        systole_hint: Option<usize>,
    ) -> Result<Self, ComplexError> {
        let dim = boundaries.len();
        let mut counts = vec![n_vertices];
        for (i, b) in boundaries.iter().enumerate() {
            let k = i + 1;
            if b.rows() != counts[k - 1] {
                return Err(ComplexError::Validation {
                    grade: k,
                    cell: 0,
                    message: format!(
                        "boundary map has {} rows but there are {} {}-cells",
                        b.rows(),
                        counts[k - 1],
                        k - 1
                    ),
                });
            }
            counts.push(b.cols());
        }
        if let Some(c) = &coords {
            if c.len() != n_vertices {
                return Err(ComplexError::Validation {
                    grade: 0,
                    cell: c.len().min(n_vertices),
                    message: "coordinates must be given for every vertex".into(),
                });
            }
        }
        let mut boundary = vec![Z2Matrix::zeros(0, n_vertices)];
        boundary.extend(boundaries);

        for k in 1..=dim {
            for j in 0..counts[k] {
                let col = boundary[k].column(j);
                if col.is_empty() {
                    return Err(ComplexError::Validation {
                        grade: k,
                        cell: j,
                        message: "empty boundary".into(),
                    });
                }
                if k == 1 && col.len() != 2 {
                    return Err(ComplexError::Validation {
                        grade: 1,
                        cell: j,
                        message: format!("a 1-cell needs two distinct endpoints, found {}", col.len()),
                    });
                }
                if k >= 2 {
                    let mut acc = vec![false; counts[k - 2]];
                    for &f in col {
                        for &g in boundary[k - 1].column(f) {
                            acc[g] ^= true;
                        }
                    }
                    if let Some(bad) = acc.iter().position(|&b| b) {
                        return Err(ComplexError::Validation {
                            grade: k,
                            cell: j,
                            message: format!(
                                "boundary of its boundary is nonzero (odd incidence on {}-cell {bad})",
                                k - 2
                            ),
                        });
                    }
                }
            }
        }

        let mut neighbors = vec![Vec::new(); n_vertices];
        if dim >= 1 {
            for e in 0..counts[1] {
                let col = boundary[1].column(e);
                let (a, b) = (col[0], col[1]);
                neighbors[a].push(b);
                neighbors[b].push(a);
            }
        }
        for n in neighbors.iter_mut() {
            n.sort_unstable();
            n.dedup();
        }

        let mut cell_vertices: Vec<Vec<Vec<usize>>> = vec![(0..n_vertices).map(|v| vec![v]).collect()];
        for k in 1..=dim {
            let verts = (0..counts[k])
                .map(|j| {
                    let mut vs: Vec<usize> = boundary[k]
                        .column(j)
                        .iter()
                        .flat_map(|&f| cell_vertices[k - 1][f].iter().copied())
                        .collect();
                    vs.sort_unstable();
                    vs.dedup();
                    vs
                })
                .collect();
            cell_vertices.push(verts);
        }

        Ok(Self {
            dim,
            counts,
            boundary,
            coords,
            systole_hint,
            neighbors,
            cell_vertices,
        })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of cells of grade `k`.
    #[inline]
    pub fn count(&self, k: usize) -> usize {
        self.counts[k]
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// Boundary map from grade `k` to grade `k − 1`, for `1 ≤ k ≤ dim`.
    pub fn boundary(&self, k: usize) -> &Z2Matrix {
        assert!(
            (1..=self.dim).contains(&k),
            "boundary grade {k} outside 1..={}",
            self.dim
        );
        &self.boundary[k]
    }

    pub fn coords(&self) -> Option<&[Vec<i64>]> {
        self.coords.as_deref()
    }

    pub fn systole_hint(&self) -> Option<usize> {
        self.systole_hint
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.counts
            .iter()
            .enumerate()
            .map(|(k, &n)| if k % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum()
    }

    /// Vertices adjacent to `v` along 1-cells, sorted and deduplicated.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    /// The 0-cells spanned by k-cell `cell`, sorted.
    pub fn cell_vertices(&self, k: usize, cell: usize) -> &[usize] {
        &self.cell_vertices[k][cell]
    }

    /// Multi-source BFS from `sources`, stopping after `max_radius` hops.
    /// Unreached vertices get [`UNREACHED`].
    pub fn distances_from_set(&self, sources: &[usize], max_radius: Option<u32>) -> Vec<u32> {
        let mut dist = vec![UNREACHED; self.counts[0]];
        let mut queue = VecDeque::new();
        for &s in sources {
            assert!(s < self.counts[0], "vertex {s} out of range");
            if dist[s] != 0 {
                dist[s] = 0;
                queue.push_back(s);
            }
        }
        while let Some(v) = queue.pop_front() {
            let d = dist[v];
            if max_radius.is_some_and(|r| d >= r) {
                continue;
            }
            for &w in &self.neighbors[v] {
                if dist[w] == UNREACHED {
                    dist[w] = d + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn distances_from(&self, v: usize, max_radius: Option<u32>) -> Vec<u32> {
        self.distances_from_set(&[v], max_radius)
    }

    /// Graph distance between two vertices.
    pub fn distance(&self, a: usize, b: usize) -> u32 {
        self.distances_from(a, None)[b]
    }

    /// The 0-cells at graph distance at most `r` from `center`, ascending.
    pub fn metric_ball(&self, center: usize, r: u32) -> Vec<usize> {
        assert!(center < self.counts[0], "center {center} is not a 0-cell");
        self.distances_from(center, Some(r))
            .iter()
            .enumerate()
            .filter(|(_, &d)| d <= r)
            .map(|(v, _)| v)
            .collect()
    }

    /// Checks `∂∂ = 0` at every grade.
    pub fn boundary_squares_vanish(&self) -> bool {
        (2..=self.dim).all(|k| self.boundary[k - 1].mul(&self.boundary[k]).is_zero())
    }

    /// Diameter of a vertex set: the largest pairwise graph distance.
    pub fn vertex_set_diameter(&self, vertices: &[usize]) -> u32 {
        let mut best = 0;
        for &v in vertices {
            let d = self.distances_from(v, None);
            for &w in vertices {
                best = best.max(d[w]);
            }
        }
        best
    }

    /// Radius of the smallest vertex-centred ball containing `vertices`.
    pub fn vertex_set_radius(&self, vertices: &[usize]) -> u32 {
        if vertices.is_empty() {
            return 0;
        }
        let mut ecc = vec![0u32; self.counts[0]];
        for &v in vertices {
            for (c, d) in self.distances_from(v, None).into_iter().enumerate() {
                ecc[c] = ecc[c].max(d);
            }
        }
        ecc.into_iter().min().unwrap_or(0)
    }
}
