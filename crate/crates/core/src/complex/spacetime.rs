//! Cells of the product of a complex with a time interval.
//!
//! With slices `0..=τ` and intervals `1..=τ`, the 2-cells of the product
//! come in two kinds: `q × {i}` for a qubit cell `q` of the space complex
//! and `s × [i]` for a check cell `s`. Only boundaries of these are ever
//! needed, so the product complex is never materialized.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::ChainComplex;
use crate::z2::Z2Matrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SpacetimeCell {
    /// Qubit cell `index` at time slice `time` (a flip during that slice).
    Spacelike { index: usize, time: usize },
    /// Check cell `index` over interval `time` (a residual syndrome bit
    /// between slices `time − 1` and `time`).
    Timelike { index: usize, time: usize },
}

impl SpacetimeCell {
    pub fn time(&self) -> usize {
        match *self {
            SpacetimeCell::Spacelike { time, .. } | SpacetimeCell::Timelike { time, .. } => time,
        }
    }

    pub fn is_spacelike(&self) -> bool {
        matches!(self, SpacetimeCell::Spacelike { .. })
    }
}

/// Cells one grade below [`SpacetimeCell`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SpacetimeFace {
    /// Check cell at a time slice.
    Slice { index: usize, time: usize },
    /// Face of a check cell over a time interval.
    Interval { index: usize, time: usize },
}

fn toggle(set: &mut BTreeSet<SpacetimeFace>, f: SpacetimeFace) {
    if !set.remove(&f) {
        set.insert(f);
    }
}

/// Faces of a single spacetime cell. The rules are `∂(q × {i}) = (∂q) × {i}`
/// and `∂(s × [i]) = (∂s) × [i] + s × {i−1} + s × {i}`.
pub fn spacetime_faces(
    cell: SpacetimeCell,
    qubit_boundary: &Z2Matrix,
    check_boundary: Option<&Z2Matrix>,
) -> Vec<SpacetimeFace> {
    match cell {
        SpacetimeCell::Spacelike { index, time } => qubit_boundary
            .column(index)
            .iter()
            .map(|&s| SpacetimeFace::Slice { index: s, time })
            .collect(),
        SpacetimeCell::Timelike { index, time } => {
            assert!(time >= 1, "timelike interval must start at 1");
            let mut out: Vec<SpacetimeFace> = check_boundary
                .map(|cb| cb.column(index))
                .unwrap_or_default()
                .iter()
                .map(|&f| SpacetimeFace::Interval { index: f, time })
                .collect();
            out.push(SpacetimeFace::Slice { index, time: time - 1 });
            out.push(SpacetimeFace::Slice { index, time });
            out
        }
    }
}

/// Support of the GF(2) boundary of `chain`.
///
/// `qubit_boundary` maps qubit cells to check cells. `check_boundary` maps
/// check cells to their faces; `None` when checks have no faces (checks on
/// 0-cells). Times must lie within `slices`.
pub fn spacetime_boundary<'a, I>(
    chain: I,
    qubit_boundary: &Z2Matrix,
    check_boundary: Option<&Z2Matrix>,
    slices: usize,
) -> BTreeSet<SpacetimeFace>
where
    I: IntoIterator<Item = &'a SpacetimeCell>,
{
    let mut out = BTreeSet::new();
    for &cell in chain {
        match cell {
            SpacetimeCell::Spacelike { time, .. } => {
                assert!(time <= slices, "spacelike time {time} beyond {slices}")
            }
            SpacetimeCell::Timelike { time, .. } => assert!(
                (1..=slices).contains(&time),
                "timelike interval {time} outside 1..={slices}"
            ),
        }
        for f in spacetime_faces(cell, qubit_boundary, check_boundary) {
            toggle(&mut out, f);
        }
    }
    out
}

impl ChainComplex {
    /// Boundary of a spacetime 2-chain with qubits on 2-cells.
    pub fn spacetime_boundary<'a, I>(&self, chain: I, slices: usize) -> BTreeSet<SpacetimeFace>
    where
        I: IntoIterator<Item = &'a SpacetimeCell>,
    {
        spacetime_boundary(chain, self.boundary(2), Some(self.boundary(1)), slices)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::build_hypercubic_torus;
    use proptest::prelude::*;

    #[test]
    fn empty_chain() {
        let c = build_hypercubic_torus(2, 3);
        assert!(c.spacetime_boundary(&[], 5).is_empty());
    }

    #[test]
    fn single_spacelike() {
        let c = build_hypercubic_torus(2, 3);
        let b = c.spacetime_boundary(&[SpacetimeCell::Spacelike { index: 4, time: 2 }], 5);
        let expect: BTreeSet<_> = c
            .boundary(2)
            .column(4)
            .iter()
            .map(|&e| SpacetimeFace::Slice { index: e, time: 2 })
            .collect();
        assert_eq!(b.len(), 4);
        assert_eq!(b, expect);
    }

    #[test]
    fn prism_is_closed() {
        let c = build_hypercubic_torus(4, 3);
        let q = 17;
        let i = 3;
        let mut chain = vec![
            SpacetimeCell::Spacelike { index: q, time: i },
            SpacetimeCell::Spacelike { index: q, time: i + 1 },
        ];
        for &s in c.boundary(2).column(q) {
            chain.push(SpacetimeCell::Timelike { index: s, time: i + 1 });
        }
        assert!(c.spacetime_boundary(&chain, 10).is_empty());
    }

    fn sym_diff(a: &BTreeSet<SpacetimeFace>, b: &BTreeSet<SpacetimeFace>) -> BTreeSet<SpacetimeFace> {
        a.symmetric_difference(b).copied().collect()
    }

    proptest! {
        #[test]
        fn boundary_is_linear(
            a in proptest::collection::btree_set((0usize..2, 0usize..18, 1usize..5), 0..12),
            b in proptest::collection::btree_set((0usize..2, 0usize..18, 1usize..5), 0..12),
        ) {
            let c = build_hypercubic_torus(2, 3);
            let to_cells = |s: &BTreeSet<(usize, usize, usize)>| -> BTreeSet<SpacetimeCell> {
                s.iter().map(|&(kind, idx, t)| if kind == 0 {
                    SpacetimeCell::Spacelike { index: idx % 9, time: t }
                } else {
                    SpacetimeCell::Timelike { index: idx, time: t }
                }).collect()
            };
            let (ca, cb) = (to_cells(&a), to_cells(&b));
            let sum: BTreeSet<SpacetimeCell> = ca.symmetric_difference(&cb).copied().collect();
            prop_assert_eq!(
                c.spacetime_boundary(&sum, 5),
                sym_diff(&c.spacetime_boundary(&ca, 5), &c.spacetime_boundary(&cb, 5))
            );
        }
    }
}
