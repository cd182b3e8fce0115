use std::collections::{HashMap, VecDeque};

use crate::code::CssCode;
use crate::complex::{spacetime_faces, SpacetimeCell};

use super::SpacetimeChain;

/// Pairs among `(chain position, qubit)` entries of one slice whose vertex
/// sets lie within `r_link` of each other.
fn close_cells(code: &CssCode, slice_cells: &[(usize, usize)], r_link: u32) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (a, &(i, q)) in slice_cells.iter().enumerate() {
        let dist = code.complex().distances_from_set(code.qubit_vertices(q), Some(r_link));
        for &(j, r) in &slice_cells[a + 1..] {
            if code.qubit_vertices(r).iter().any(|&v| dist[v] <= r_link) {
                out.push((i, j));
            }
        }
    }
    out
}

/// Splits a spacetime chain into connected components.
///
/// Two spacelike cells in the same slice are linked when their vertex sets
/// are within graph distance `r_link`; any other pair is linked when the
/// two cells share a face. Components are ordered by their smallest cell.
pub fn components(code: &CssCode, chain: &SpacetimeChain, r_link: u32) -> Vec<SpacetimeChain> {
    let cells = &chain.cells;
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); cells.len()];

    let mut by_face: HashMap<_, Vec<usize>> = HashMap::new();
    for (i, &c) in cells.iter().enumerate() {
        for f in spacetime_faces(c, code.z_checks(), code.check_faces()) {
            by_face.entry(f).or_default().push(i);
        }
    }
    for sharing in by_face.values() {
        for (a, &i) in sharing.iter().enumerate() {
            for &j in &sharing[a + 1..] {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
    }

    let mut by_slice: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
    for (i, &c) in cells.iter().enumerate() {
        if let SpacetimeCell::Spacelike { index, time } = c {
            by_slice.entry(time).or_default().push((i, index));
        }
    }
    for slice_cells in by_slice.values() {
        for (i, j) in close_cells(code, slice_cells, r_link) {
            adj[i].push(j);
            adj[j].push(i);
        }
    }

    let mut seen = vec![false; cells.len()];
    let mut out = Vec::new();
    for start in 0..cells.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut members = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            for &j in &adj[i] {
                if !seen[j] {
                    seen[j] = true;
                    members.push(j);
                    queue.push_back(j);
                }
            }
        }
        let mut comp: Vec<SpacetimeCell> = members.into_iter().map(|i| cells[i]).collect();
        comp.sort_unstable();
        out.push(SpacetimeChain::new(comp, chain.slices));
    }
    out.sort_by(|a, b| a.cells.first().cmp(&b.cells.first()));
    out
}

/// Vertices touched by the spatial parts of a component's cells.
pub fn footprint(code: &CssCode, chain: &SpacetimeChain) -> Vec<usize> {
    let mut out: Vec<usize> = chain
        .cells
        .iter()
        .flat_map(|c| match *c {
            SpacetimeCell::Spacelike { index, .. } => code.qubit_vertices(index),
            SpacetimeCell::Timelike { index, .. } => code.check_vertices(index),
        })
        .copied()
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Summary of one component.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ComponentStats {
    pub cells: usize,
    /// Diameter of the spatial footprint.
    pub diameter: u32,
    /// Footprint diameter below `systole − 2·r_dec`; `false` when the
    /// complex carries no systole hint.
    pub small: bool,
}

pub fn component_stats(code: &CssCode, comp: &SpacetimeChain, r_dec: u32) -> ComponentStats {
    let diameter = code.complex().vertex_set_diameter(&footprint(code, comp));
    let small = code
        .complex()
        .systole_hint()
        .is_some_and(|sys| (diameter as i64) < sys as i64 - 2 * r_dec as i64);
    ComponentStats {
        cells: comp.cells.len(),
        diameter,
        small,
    }
}
