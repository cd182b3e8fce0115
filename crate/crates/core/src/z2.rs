//! GF(2) vectors and sparse matrices.
//!
//! Vectors are packed into `u64` words. Matrices are stored sparse and
//! column-major (one sorted row list per column), which matches boundary
//! operators: column `j` is the boundary of cell `j`. Elimination routines
//! expand to dense bit rows internally.

use std::fmt;

const WORD: usize = 64;

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// A vector over GF(2); the coefficients of a chain.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Z2Vector {
    len: usize,
    words: Vec<u64>,
}

impl Z2Vector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self::zeros(len);
        for w in v.words.iter_mut() {
            *w = !0;
        }
        v.clear_tail();
        v
    }

    /// Unit vector with a single set coordinate.
    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(index, true);
        v
    }

    pub fn from_support<I: IntoIterator<Item = usize>>(len: usize, support: I) -> Self {
        let mut v = Self::zeros(len);
        for i in support {
            v.flip(i);
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        Self::from_support(bits.len(), bits.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i))
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "index {i} out of range for length {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "index {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "index {i} out of range for length {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn xor_assign(&mut self, other: &Z2Vector) {
        assert_eq!(self.len, other.len, "length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn and_assign(&mut self, other: &Z2Vector) {
        assert_eq!(self.len, other.len, "length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= *b;
        }
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &Z2Vector) -> bool {
        assert_eq!(self.len, other.len, "length mismatch");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>()
            % 2
            == 1
    }

    /// Indices of the set coordinates, ascending.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * WORD + t)
                }
            })
        })
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }
}

impl std::ops::BitXor for &Z2Vector {
    type Output = Z2Vector;
    fn bitxor(self, rhs: &Z2Vector) -> Z2Vector {
        let mut out = self.clone();
        out.xor_assign(rhs);
        out
    }
}

impl fmt::Debug for Z2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z2Vector[{}]{{", self.len)?;
        for (n, i) in self.support().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// Sparse column-major GF(2) matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Z2Matrix {
    rows: usize,
    columns: Vec<Vec<usize>>,
}

impl Z2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            columns: vec![Vec::new(); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            rows: n,
            columns: (0..n).map(|i| vec![i]).collect(),
        }
    }

    /// Builds a matrix from per-column row supports. Repeated row indices
    /// cancel in pairs.
    pub fn from_columns(rows: usize, columns: Vec<Vec<usize>>) -> Self {
        let columns = columns
            .into_iter()
            .map(|mut col| {
                for &r in &col {
                    assert!(r < rows, "row {r} out of range for {rows} rows");
                }
                col.sort_unstable();
                let mut out: Vec<usize> = Vec::with_capacity(col.len());
                for r in col {
                    if out.last() == Some(&r) {
                        out.pop();
                    } else {
                        out.push(r);
                    }
                }
                out
            })
            .collect();
        Self { rows, columns }
    }

    pub fn from_dense(rows: &[Vec<u8>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let columns = (0..ncols)
            .map(|c| (0..nrows).filter(|&r| rows[r][c] & 1 == 1).collect())
            .collect();
        Self::from_columns(nrows, columns)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    /// Row support of column `j`, sorted.
    #[inline]
    pub fn column(&self, j: usize) -> &[usize] {
        &self.columns[j]
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.columns[c].binary_search(&r).is_ok()
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn transpose(&self) -> Z2Matrix {
        let mut cols = vec![Vec::new(); self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            for &r in col {
                cols[r].push(j);
            }
        }
        Z2Matrix {
            rows: self.cols(),
            columns: cols,
        }
    }

    /// Row supports (the transpose's columns).
    pub fn row_supports(&self) -> Vec<Vec<usize>> {
        self.transpose().columns
    }

    pub fn mul_vec(&self, v: &Z2Vector) -> Z2Vector {
        assert_eq!(v.len(), self.cols(), "dimension mismatch in matrix-vector product");
        let mut out = Z2Vector::zeros(self.rows);
        for j in v.support() {
            for &r in &self.columns[j] {
                out.flip(r);
            }
        }
        out
    }

    /// Product `self · other`.
    pub fn mul(&self, other: &Z2Matrix) -> Z2Matrix {
        assert_eq!(self.cols(), other.rows, "dimension mismatch in matrix product");
        let columns = other
            .columns
            .iter()
            .map(|col| {
                let v = Z2Vector::from_support(self.cols(), col.iter().copied());
                self.mul_vec(&v).support().collect()
            })
            .collect();
        Z2Matrix {
            rows: self.rows,
            columns,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    fn dense_rows(&self) -> Vec<Z2Vector> {
        let mut rows = vec![Z2Vector::zeros(self.cols()); self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            for &r in col {
                rows[r].flip(j);
            }
        }
        rows
    }
}

/// Row echelon form produced by [`eliminate`]: the pivot column of every
/// nonzero row, in order of increasing column.
struct Echelon {
    rows: Vec<Z2Vector>,
    pivots: Vec<usize>,
}

/// Gauss-Jordan elimination. Columns are scanned left to right; the pivot
/// is the lowest-indexed remaining row with a one in that column.
fn eliminate(mut rows: Vec<Z2Vector>, ncols: usize, stop_at: usize) -> Echelon {
    let mut pivots = Vec::new();
    let mut next = 0;
    for c in 0..ncols.min(stop_at) {
        if next == rows.len() {
            break;
        }
        let Some(p) = (next..rows.len()).find(|&r| rows[r].get(c)) else {
            continue;
        };
        rows.swap(next, p);
        let pivot = rows[next].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != next && row.get(c) {
                row.xor_assign(&pivot);
            }
        }
        pivots.push(c);
        next += 1;
    }
    rows.truncate(next);
    Echelon { rows, pivots }
}

/// GF(2) rank.
pub fn rank(m: &Z2Matrix) -> usize {
    // Eliminate on whichever orientation has fewer rows.
    if m.rows() <= m.cols() {
        eliminate(m.dense_rows(), m.cols(), m.cols()).pivots.len()
    } else {
        let t = m.transpose();
        eliminate(t.dense_rows(), t.cols(), t.cols()).pivots.len()
    }
}

/// A basis of the kernel of `m`, one vector per free column, in increasing
/// free-column order.
pub fn kernel_basis(m: &Z2Matrix) -> Vec<Z2Vector> {
    let n = m.cols();
    let ech = eliminate(m.dense_rows(), n, n);
    let mut is_pivot = vec![false; n];
    for &p in &ech.pivots {
        is_pivot[p] = true;
    }
    (0..n)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = Z2Vector::unit(n, f);
            for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
                if row.get(f) {
                    v.set(p, true);
                }
            }
            v
        })
        .collect()
}

/// Some `x` with `m·x = b`, or `None` if `b` is outside the column space.
/// Free variables are set to zero, so the answer is deterministic.
pub fn solve(m: &Z2Matrix, b: &Z2Vector) -> Option<Z2Vector> {
    assert_eq!(b.len(), m.rows(), "right-hand side length must equal row count");
    let n = m.cols();
    let rows: Vec<Z2Vector> = m
        .dense_rows()
        .into_iter()
        .enumerate()
        .map(|(r, row)| {
            let mut aug = Z2Vector::zeros(n + 1);
            for j in row.support() {
                aug.set(j, true);
            }
            aug.set(n, b.get(r));
            aug
        })
        .collect();
    let ech = eliminate(rows, n + 1, n);
    let mut x = Z2Vector::zeros(n);
    for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
        if row.get(n) {
            x.set(p, true);
        }
    }
    // Any row past the pivots with a set augmented bit is inconsistent.
    if m.mul_vec(&x) == *b {
        Some(x)
    } else {
        None
    }
}

/// Membership test for the column space of a fixed matrix, via a basis of
/// its annihilator: `b ∈ im(m)` iff `h·b = 0` for every `h ∈ ker(mᵀ)`.
#[derive(Clone, Debug)]
pub struct ImageTester {
    annihilator: Vec<Z2Vector>,
    rows: usize,
}

impl ImageTester {
    pub fn new(m: &Z2Matrix) -> Self {
        Self {
            annihilator: kernel_basis(&m.transpose()),
            rows: m.rows(),
        }
    }

    pub fn contains(&self, b: &Z2Vector) -> bool {
        assert_eq!(b.len(), self.rows, "length mismatch");
        self.annihilator.iter().all(|h| !h.dot(b))
    }

    /// Dimension of the cokernel `rows − rank(m)`.
    pub fn codimension(&self) -> usize {
        self.annihilator.len()
    }
}
