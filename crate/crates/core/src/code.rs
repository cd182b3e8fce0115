//! Homology CSS codes on a cell complex.
//!
//! Qubits live on the k-cells. In the primal orientation the Z checks are
//! the (k−1)-cells (rows of `∂_k`) and the X checks are the (k+1)-cells
//! (rows of `∂_{k+1}ᵀ`). The dual orientation swaps the two roles, which
//! is how dephasing errors are decoded with the same machinery.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::complex::ChainComplex;
use crate::z2::{rank, ImageTester, Z2Matrix, Z2Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    Primal,
    Dual,
}

/// Outcome of checking a residual error against the code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    /// The residual is a product of stabilizers.
    Trivial,
    /// Zero syndrome but a nontrivial homology class.
    Logical,
    /// Nonzero syndrome remains.
    Unresolved,
}

/// A syndrome: the closed chain of violated Z checks.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Syndrome(pub Z2Vector);

impl Syndrome {
    pub fn chain(&self) -> &Z2Vector {
        &self.0
    }

    pub fn weight(&self) -> usize {
        self.0.weight()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

#[derive(Clone, Debug)]
pub struct CssCode {
    complex: ChainComplex,
    qubit_grade: usize,
    check_grade: usize,
    orientation: Orientation,
    z_checks: Z2Matrix,
    x_checks: Z2Matrix,
    /// Maps check cells to their faces, for the closure test; `None` when
    /// check cells have none.
    check_faces: Option<Z2Matrix>,
    stabilizers: ImageTester,
    n_logical: usize,
}

impl CssCode {
    /// Qubits on `k`-cells, Z checks on `(k−1)`-cells.
    pub fn from_complex(complex: ChainComplex, k: usize) -> Self {
        let d = complex.dim();
        assert!(
            k >= 1 && k < d,
            "qubit grade {k} must satisfy 1 ≤ k ≤ dim − 1 = {}",
            d.saturating_sub(1)
        );
        let z_checks = complex.boundary(k).clone();
        let x_checks = complex.boundary(k + 1).transpose();
        let check_faces = (k >= 2).then(|| complex.boundary(k - 1).clone());
        let stab_map = complex.boundary(k + 1).clone();
        Self::assemble(
            complex,
            k,
            k - 1,
            Orientation::Primal,
            z_checks,
            x_checks,
            check_faces,
            &stab_map,
        )
    }

    /// Qubits on `k`-cells, Z checks on `(k+1)`-cells.
    pub fn dual_from_complex(complex: ChainComplex, k: usize) -> Self {
        let d = complex.dim();
        assert!(
            k >= 1 && k < d,
            "qubit grade {k} must satisfy 1 ≤ k ≤ dim − 1 = {}",
            d.saturating_sub(1)
        );
        let z_checks = complex.boundary(k + 1).transpose();
        let x_checks = complex.boundary(k).clone();
        let check_faces = (k + 2 <= d).then(|| complex.boundary(k + 2).transpose());
        let stab_map = complex.boundary(k).transpose();
        Self::assemble(
            complex,
            k,
            k + 1,
            Orientation::Dual,
            z_checks,
            x_checks,
            check_faces,
            &stab_map,
        )
    }

    #[allow(clippy::too_many_arguments)]
    fn assemble(
        complex: ChainComplex,
        qubit_grade: usize,
        check_grade: usize,
        orientation: Orientation,
        z_checks: Z2Matrix,
        x_checks: Z2Matrix,
        check_faces: Option<Z2Matrix>,
        stab_map: &Z2Matrix,
    ) -> Self {
        debug_assert!(z_checks.mul(&x_checks.transpose()).is_zero());
        let n = z_checks.cols();
        let n_logical = n - rank(&z_checks) - rank(stab_map);
        Self {
            complex,
            qubit_grade,
            check_grade,
            orientation,
            z_checks,
            x_checks,
            check_faces,
            stabilizers: ImageTester::new(stab_map),
            n_logical,
        }
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn qubit_grade(&self) -> usize {
        self.qubit_grade
    }

    pub fn check_grade(&self) -> usize {
        self.check_grade
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn n_qubits(&self) -> usize {
        self.z_checks.cols()
    }

    pub fn n_checks(&self) -> usize {
        self.z_checks.rows()
    }

    pub fn n_logical(&self) -> usize {
        self.n_logical
    }

    /// Z checks: rows indexed by check cells, columns by qubits.
    pub fn z_checks(&self) -> &Z2Matrix {
        &self.z_checks
    }

    pub fn x_checks(&self) -> &Z2Matrix {
        &self.x_checks
    }

    pub fn check_faces(&self) -> Option<&Z2Matrix> {
        self.check_faces.as_ref()
    }

    /// Faces of check cell `s` under the check boundary; empty when checks
    /// have no faces.
    pub fn faces_of_check(&self, s: usize) -> &[usize] {
        self.check_faces.as_ref().map_or(&[], |f| f.column(s))
    }

    /// Vertices spanned by a qubit cell.
    pub fn qubit_vertices(&self, q: usize) -> &[usize] {
        self.complex.cell_vertices(self.qubit_grade, q)
    }

    /// Vertices spanned by a check cell.
    pub fn check_vertices(&self, s: usize) -> &[usize] {
        self.complex.cell_vertices(self.check_grade, s)
    }

    /// Minimum and maximum row weight of the Z and X check matrices.
    pub fn check_weights(&self) -> ((usize, usize), (usize, usize)) {
        fn span(m: &Z2Matrix) -> (usize, usize) {
            let rows = m.row_supports();
            let min = rows.iter().map(Vec::len).min().unwrap_or(0);
            let max = rows.iter().map(Vec::len).max().unwrap_or(0);
            (min, max)
        }
        (span(&self.z_checks), span(&self.x_checks))
    }

    pub fn syndrome(&self, error: &Z2Vector) -> Syndrome {
        assert_eq!(error.len(), self.n_qubits(), "error must have one entry per qubit");
        Syndrome(self.z_checks.mul_vec(error))
    }

    pub fn is_closed(&self, s: &Syndrome) -> bool {
        match &self.check_faces {
            Some(f) => f.mul_vec(&s.0).is_zero(),
            None => true,
        }
    }

    /// Splits a syndrome into connected components of its support, where
    /// two check cells are adjacent when they share a vertex. Components
    /// come out ordered by their smallest cell.
    pub fn atomic_decomposition(&self, s: &Syndrome) -> Vec<Syndrome> {
        assert!(self.is_closed(s), "syndrome must be a closed chain");
        let support: Vec<usize> = s.0.support().collect();
        let mut by_vertex: std::collections::HashMap<usize, Vec<usize>> = Default::default();
        for (i, &c) in support.iter().enumerate() {
            for &v in self.check_vertices(c) {
                by_vertex.entry(v).or_default().push(i);
            }
        }
        let mut seen = vec![false; support.len()];
        let mut out = Vec::new();
        for start in 0..support.len() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = Z2Vector::zeros(self.n_checks());
            let mut queue = VecDeque::from([start]);
            while let Some(i) = queue.pop_front() {
                comp.set(support[i], true);
                for &v in self.check_vertices(support[i]) {
                    for &j in &by_vertex[&v] {
                        if !seen[j] {
                            seen[j] = true;
                            queue.push_back(j);
                        }
                    }
                }
            }
            out.push(Syndrome(comp));
        }
        out
    }

    /// Classifies a residual error (cumulative errors plus corrections).
    pub fn residual_verdict(&self, residual: &Z2Vector) -> Verdict {
        if !self.syndrome(residual).is_zero() {
            Verdict::Unresolved
        } else if self.stabilizers.contains(residual) {
            Verdict::Trivial
        } else {
            Verdict::Logical
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{build_hypercubic_torus, load_complex, torus_cell_index, torus_vertex_index};
    use crate::z2::solve;
    use proptest::prelude::*;

    fn torus4(l: usize) -> CssCode {
        CssCode::from_complex(build_hypercubic_torus(4, l), 2)
    }

    #[test]
    fn logical_counts() {
        for l in 2..=4 {
            assert_eq!(CssCode::from_complex(build_hypercubic_torus(2, l), 1).n_logical(), 2);
        }
        assert_eq!(torus4(2).n_logical(), 6);
        assert_eq!(torus4(3).n_logical(), 6);
        let square = load_complex(
            "complex dim=2\nvertices 4\ncell 1 0: 0 1\ncell 1 1: 1 2\ncell 1 2: 2 3\ncell 1 3: 3 0\ncell 2 0: 0 1 2 3\n",
        )
        .unwrap();
        assert_eq!(CssCode::from_complex(square, 1).n_logical(), 0);
    }

    #[test]
    fn dual_matches_primal_count() {
        let c = build_hypercubic_torus(4, 2);
        let dual = CssCode::dual_from_complex(c, 2);
        assert_eq!(dual.n_logical(), 6);
        assert_eq!(dual.check_grade(), 3);
        assert!(dual.z_checks().mul(&dual.x_checks().transpose()).is_zero());
    }

    #[test]
    fn syndrome_examples() {
        let code = torus4(3);
        let n = code.n_qubits();
        assert!(code.syndrome(&Z2Vector::zeros(n)).is_zero());
        assert_eq!(code.syndrome(&Z2Vector::unit(n, 40)).weight(), 4);
        // Squares (v; 0,1) and (v + e1; 0,1) share one edge.
        let v = torus_vertex_index(3, &[1, 1, 1, 1]);
        let w = torus_vertex_index(3, &[1, 2, 1, 1]);
        let e = Z2Vector::from_support(
            n,
            [torus_cell_index(4, 2, v, &[0, 1]), torus_cell_index(4, 2, w, &[0, 1])],
        );
        assert_eq!(code.syndrome(&e).weight(), 6);
    }

    #[test]
    fn decomposition_examples() {
        let code = torus4(6);
        let n = code.n_qubits();
        assert!(code
            .atomic_decomposition(&code.syndrome(&Z2Vector::zeros(n)))
            .is_empty());
        let one = code.atomic_decomposition(&code.syndrome(&Z2Vector::unit(n, 0)));
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].weight(), 4);
        let a = torus_cell_index(4, 2, torus_vertex_index(6, &[0, 0, 0, 0]), &[0, 1]);
        let b = torus_cell_index(4, 2, torus_vertex_index(6, &[3, 3, 0, 0]), &[0, 1]);
        let qa = code.qubit_vertices(a);
        let qb = code.qubit_vertices(b);
        let gap = qa
            .iter()
            .flat_map(|&x| qb.iter().map(move |&y| (x, y)))
            .map(|(x, y)| code.complex().distance(x, y))
            .min()
            .unwrap();
        assert!(gap >= 3);
        let s = code.syndrome(&Z2Vector::from_support(n, [a, b]));
        let parts = code.atomic_decomposition(&s);
        assert_eq!(parts.iter().map(Syndrome::weight).collect::<Vec<_>>(), vec![4, 4]);
        let mut sum = Z2Vector::zeros(code.n_checks());
        for p in &parts {
            sum.xor_assign(p.chain());
        }
        assert_eq!(sum, *s.chain());
    }

    #[test]
    fn verdict_examples() {
        let code = torus4(3);
        let n = code.n_qubits();
        assert_eq!(code.residual_verdict(&Z2Vector::zeros(n)), Verdict::Trivial);
        let cube = code.complex().boundary(3).column(5).to_vec();
        assert_eq!(
            code.residual_verdict(&Z2Vector::from_support(n, cube)),
            Verdict::Trivial
        );
        let plane: Vec<usize> = (0..3)
            .flat_map(|x| (0..3).map(move |y| (x, y)))
            .map(|(x, y)| torus_cell_index(4, 2, torus_vertex_index(3, &[x, y, 0, 0]), &[0, 1]))
            .collect();
        let plane = Z2Vector::from_support(n, plane);
        assert!(code.syndrome(&plane).is_zero());
        assert!(solve(code.complex().boundary(3), &plane).is_none());
        assert_eq!(code.residual_verdict(&plane), Verdict::Logical);
        assert_eq!(code.residual_verdict(&Z2Vector::unit(n, 0)), Verdict::Unresolved);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn syndrome_linear_and_closed(a in proptest::collection::vec(0usize..486, 0..20),
                                      b in proptest::collection::vec(0usize..486, 0..20)) {
            let code = torus4(3);
            let n = code.n_qubits();
            let (va, vb) = (Z2Vector::from_support(n, a), Z2Vector::from_support(n, b));
            let sum = code.syndrome(&(&va ^ &vb));
            prop_assert_eq!(sum.chain(), &(code.syndrome(&va).chain() ^ code.syndrome(&vb).chain()));
            prop_assert!(code.is_closed(&sum));
        }

        #[test]
        fn verdict_invariant_under_stabilizers(cells in proptest::collection::vec(0usize..324, 0..6),
                                               logical in any::<bool>()) {
            let code = torus4(3);
            let n = code.n_qubits();
            let mut r = if logical {
                Z2Vector::from_support(n, (0..3).flat_map(|x| (0..3).map(move |y| (x, y)))
                    .map(|(x, y)| torus_cell_index(4, 2, torus_vertex_index(3, &[x, y, 0, 0]), &[0, 1])))
            } else {
                Z2Vector::zeros(n)
            };
            let before = code.residual_verdict(&r);
            for c in cells {
                for &q in code.complex().boundary(3).column(c) {
                    r.flip(q);
                }
            }
            prop_assert_eq!(code.residual_verdict(&r), before);
        }
    }
}
