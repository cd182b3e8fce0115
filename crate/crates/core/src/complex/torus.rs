use super::ChainComplex;
use crate::z2::Z2Matrix;

/// Direction subsets of size `k` out of `d` axes, as bitmasks in
/// lexicographic order of their sorted axis lists.
fn subsets(d: usize, k: usize) -> Vec<u32> {
    fn rec(start: usize, d: usize, k: usize, acc: u32, out: &mut Vec<u32>) {
        if k == 0 {
            out.push(acc);
            return;
        }
        for i in start..d {
            rec(i + 1, d, k - 1, acc | (1 << i), out);
        }
    }
    let mut out = Vec::new();
    rec(0, d, k, 0, &mut out);
    out
}

/// The periodic cubical complex on `(Z/L)^d`.
///
/// A k-cell is a pair (base vertex, set of k axes). Vertices are numbered
/// row-major by coordinate; the k-cell `(v, S)` has index
/// `v · C(d,k) + rank(S)`. Its boundary is `(v, S∖{a})` and
/// `(v + e_a, S∖{a})` for each axis `a ∈ S`.
pub fn build_hypercubic_torus(d: usize, l: usize) -> ChainComplex {
    assert!((2..=4).contains(&d), "torus dimension must be in 2..=4, got {d}");
    assert!(l >= 2, "torus side length must be at least 2, got {l}");

    let n_vertices = l.pow(d as u32);
    let strides: Vec<usize> = (0..d).map(|a| l.pow((d - 1 - a) as u32)).collect();
    let coords_of = |v: usize| -> Vec<usize> { (0..d).map(|a| (v / strides[a]) % l).collect() };
    let shift = |v: usize, axis: usize| -> usize {
        let c = (v / strides[axis]) % l;
        if c + 1 == l {
            v + strides[axis] - l * strides[axis]
        } else {
            v + strides[axis]
        }
    };

    let by_grade: Vec<Vec<u32>> = (0..=d).map(|k| subsets(d, k)).collect();
    let rank_of =
        |k: usize, mask: u32| -> usize { by_grade[k].iter().position(|&m| m == mask).expect("subset present") };

    let mut boundaries = Vec::with_capacity(d);
    for k in 1..=d {
        let per_vertex = by_grade[k].len();
        let per_vertex_lower = by_grade[k - 1].len();
        let mut columns = Vec::with_capacity(n_vertices * per_vertex);
        for v in 0..n_vertices {
            for &mask in &by_grade[k] {
                let mut col = Vec::with_capacity(2 * k);
                for axis in (0..d).filter(|a| mask >> a & 1 == 1) {
                    let face = rank_of(k - 1, mask & !(1 << axis));
                    col.push(v * per_vertex_lower + face);
                    col.push(shift(v, axis) * per_vertex_lower + face);
                }
                columns.push(col);
            }
        }
        boundaries.push(Z2Matrix::from_columns(n_vertices * per_vertex_lower, columns));
    }

    let coords = (0..n_vertices)
        .map(|v| coords_of(v).into_iter().map(|c| c as i64).collect())
        .collect();
    ChainComplex::new(n_vertices, boundaries, Some(coords), Some(l)).expect("hypercubic torus is a valid complex")
}

/// Index of the k-cell based at vertex `v` spanning `axes` (any order).
pub fn torus_cell_index(d: usize, k: usize, v: usize, axes: &[usize]) -> usize {
    assert_eq!(axes.len(), k, "need exactly {k} axes");
    let mask = axes.iter().fold(0u32, |m, &a| m | (1 << a));
    let subs = subsets(d, k);
    v * subs.len()
        + subs
            .iter()
            .position(|&m| m == mask)
            .expect("axes must be distinct and < d")
}

/// Row-major vertex index of integer coordinates, wrapped into `[0, L)`.
pub fn torus_vertex_index(l: usize, coords: &[i64]) -> usize {
    coords
        .iter()
        .fold(0usize, |acc, &c| acc * l + c.rem_euclid(l as i64) as usize)
}
