//! Exact minimum-weight correction inside one ball.
//!
//! Given the syndrome on a ball's variable checks, find a set `D` of
//! interior qubits minimizing `|s ⊕ ∂D|` on those checks. Only checks hit
//! by some interior qubit can change, so the problem is posed on those
//! rows alone.
//!
//! Two exact solvers share the same problem description:
//!
//! * [`LocalProblem::solve_frontier`] sweeps the qubits in a fixed order
//!   and keeps, for every parity pattern on the checks that are still
//!   "open" (touched by both swept and unswept qubits), the cheapest
//!   partial assignment. Its search dimension is the widest frontier.
//! * [`LocalProblem::solve_gray`] enumerates every combination of a
//!   column basis of the restricted check matrix in Gray-code order. Its
//!   search dimension is the rank of that matrix.
//!
//! Both refuse to run when their search dimension exceeds the cap.

use std::collections::hash_map::Entry;

use rustc_hash::FxHashMap;

use crate::z2::Z2Vector;

/// Result of a local minimization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalSolution {
    /// Interior qubits to flip, ascending.
    pub flips: Vec<usize>,
    /// Weight of the syndrome on the touched checks before and after.
    pub weight_before: usize,
    pub weight_after: usize,
    /// False when the search gave up on its state budget and returned the
    /// greedy descent instead.
    pub exact: bool,
}

#[derive(Clone, Debug)]
struct Step {
    /// Bit mask (over the extended frontier) of rows hit by the column.
    mask: u64,
    /// Extended-frontier positions closed by this column, with their local row.
    closing: Vec<(u32, usize)>,
    closing_mask: u64,
    /// Kept positions as runs `(source shift, run mask, destination shift)`;
    /// the next state packs them to the low bits in order.
    runs: Vec<(u32, u64, u32)>,
}

impl Step {
    fn compact(&self, e: u64) -> u64 {
        self.runs
            .iter()
            .fold(0, |acc, &(src, m, dst)| acc | ((e >> src) & m) << dst)
    }
}

#[derive(Clone, Debug)]
pub struct LocalProblem {
    /// Global check ids touched by interior qubits, ascending.
    rows: Vec<usize>,
    /// Global interior qubit ids, ascending.
    cols: Vec<usize>,
    /// Local row ids of each column.
    col_rows: Vec<Vec<usize>>,
    /// Faces of each local row (vertices of an edge, for checks on edges).
    row_faces: Vec<Vec<usize>>,
    max_faces: usize,
    order: Vec<usize>,
    steps: Vec<Step>,
    frontier_width: usize,
}

impl LocalProblem {
    /// `qubit_checks(q)` returns the global check ids of qubit `q`;
    /// `check_faces(s)` the faces of check `s` (empty when checks have
    /// none), used only for a lower bound.
    pub fn new<'a, 'b, F, G>(interior: &[usize], qubit_checks: F, check_faces: G) -> Self
    where
        F: Fn(usize) -> &'a [usize],
        G: Fn(usize) -> &'b [usize],
    {
        let cols = interior.to_vec();
        let mut rows: Vec<usize> = cols.iter().flat_map(|&q| qubit_checks(q).iter().copied()).collect();
        rows.sort_unstable();
        rows.dedup();
        let col_rows: Vec<Vec<usize>> = cols
            .iter()
            .map(|&q| {
                qubit_checks(q)
                    .iter()
                    .map(|s| rows.binary_search(s).expect("row present"))
                    .collect()
            })
            .collect();

        let row_faces: Vec<Vec<usize>> = rows.iter().map(|&r| check_faces(r).to_vec()).collect();
        let max_faces = row_faces.iter().map(Vec::len).max().unwrap_or(0);
        let mut problem = Self {
            rows,
            cols,
            col_rows,
            row_faces,
            max_faces,
            order: Vec::new(),
            steps: Vec::new(),
            frontier_width: 0,
        };
        problem.plan();
        problem
    }

    /// Greedy sweep order from a given first column: repeatedly take the
    /// column leaving the smallest frontier (lowest index on ties).
    /// Returns the order and its peak frontier size.
    fn greedy_order(&self, first: usize) -> (Vec<usize>, usize) {
        let m = self.cols.len();
        let mut remaining = vec![0usize; self.rows.len()];
        for rows in &self.col_rows {
            for &r in rows {
                remaining[r] += 1;
            }
        }
        let mut open = vec![false; self.rows.len()];
        let mut open_count = 0usize;
        let mut used = vec![false; m];
        let mut order = Vec::with_capacity(m);
        let mut peak = 0;
        for step in 0..m {
            let c = if step == 0 {
                first
            } else {
                let mut best: Option<(usize, usize)> = None;
                for c in (0..m).filter(|&c| !used[c]) {
                    let mut size = open_count;
                    for &r in &self.col_rows[c] {
                        match (!open[r], remaining[r] == 1) {
                            (true, false) => size += 1,
                            (false, true) => size -= 1,
                            _ => {}
                        }
                    }
                    if best.is_none_or(|(s, _)| size < s) {
                        best = Some((size, c));
                    }
                }
                best.expect("unused column").1
            };
            used[c] = true;
            order.push(c);
            let mut widest = open_count;
            for &r in &self.col_rows[c] {
                if !open[r] {
                    open[r] = true;
                    open_count += 1;
                }
            }
            widest = widest.max(open_count);
            for &r in &self.col_rows[c] {
                remaining[r] -= 1;
                if remaining[r] == 0 {
                    open[r] = false;
                    open_count -= 1;
                }
            }
            peak = peak.max(widest);
        }
        (order, peak)
    }

    /// Picks the sweep order and precomputes the per-column transitions.
    /// Small problems try every first column; larger ones start at 0.
    fn plan(&mut self) {
        let m = self.cols.len();
        let starts = if m <= 64 { m } else { m.min(1) };
        let mut order = Vec::new();
        let mut best_peak = usize::MAX;
        for first in 0..starts {
            let (o, peak) = self.greedy_order(first);
            if peak < best_peak {
                best_peak = peak;
                order = o;
            }
        }

        let mut last_use = vec![0usize; self.rows.len()];
        for (j, &c) in order.iter().enumerate() {
            for &r in &self.col_rows[c] {
                last_use[r] = j;
            }
        }
        let mut frontier: Vec<usize> = Vec::new();
        let mut width = 0;
        let mut steps = Vec::with_capacity(m);
        for (j, &c) in order.iter().enumerate() {
            let mut ext = frontier.clone();
            for &r in &self.col_rows[c] {
                if !ext.contains(&r) {
                    ext.push(r);
                }
            }
            width = width.max(ext.len());
            let mask = self.col_rows[c]
                .iter()
                .map(|r| 1u64 << ext.iter().position(|x| x == r).expect("in frontier"))
                .fold(0, |a, b| a ^ b);
            let mut closing = Vec::new();
            let mut keep = Vec::new();
            let mut next = Vec::new();
            for (p, &r) in ext.iter().enumerate() {
                if last_use[r] == j {
                    closing.push((p as u32, r));
                } else {
                    keep.push(p as u32);
                    next.push(r);
                }
            }
            let closing_mask = closing.iter().fold(0u64, |a, &(p, _)| a | 1 << p);
            let mut runs: Vec<(u32, u64, u32)> = Vec::new();
            for (k, &p) in keep.iter().enumerate() {
                match runs.last_mut() {
                    Some((src, m, dst)) if *src + m.count_ones() == p && *dst + m.count_ones() == k as u32 => {
                        *m = (*m << 1) | 1;
                    }
                    _ => runs.push((p, 1, k as u32)),
                }
            }
            steps.push(Step {
                mask,
                closing,
                closing_mask,
                runs,
            });
            frontier = next;
        }
        debug_assert!(frontier.is_empty());
        self.order = order;
        self.steps = steps;
        self.frontier_width = width;
    }

    /// Global ids of the checks this problem can change.
    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    /// Global ids of the interior qubits.
    pub fn cols(&self) -> &[usize] {
        &self.cols
    }

    /// Search dimension of [`Self::solve_frontier`].
    pub fn frontier_width(&self) -> usize {
        self.frontier_width
    }

    fn local_syndrome(&self, syndrome: &Z2Vector) -> Vec<bool> {
        self.rows.iter().map(|&s| syndrome.get(s)).collect()
    }

    fn finish(&self, chosen: impl Iterator<Item = usize>, before: usize, after: usize) -> LocalSolution {
        let mut flips: Vec<usize> = chosen.map(|c| self.cols[c]).collect();
        flips.sort_unstable();
        if after >= before {
            // Already minimal: no flips.
            flips.clear();
            return LocalSolution {
                flips,
                weight_before: before,
                weight_after: before,
                exact: true,
            };
        }
        LocalSolution {
            flips,
            weight_before: before,
            weight_after: after,
            exact: true,
        }
    }

    /// Upper bound from greedy descent: flip the column with the largest
    /// weight reduction until none helps. Returns the weight reached and
    /// the flipped local columns.
    fn greedy_descent(&self, s: &[bool]) -> (usize, Vec<usize>) {
        let mut s = s.to_vec();
        let mut weight = s.iter().filter(|&&b| b).count();
        let mut flipped = vec![false; self.cols.len()];
        loop {
            let gain = |c: usize| -> i64 { self.col_rows[c].iter().map(|&r| if s[r] { 1 } else { -1 }).sum() };
            let Some((c, g)) = (0..self.cols.len())
                .map(|c| (c, gain(c)))
                .max_by_key(|&(c, g)| (g, std::cmp::Reverse(c)))
            else {
                break;
            };
            if g <= 0 {
                break;
            }
            for &r in &self.col_rows[c] {
                s[r] = !s[r];
            }
            flipped[c] = !flipped[c];
            weight -= g as usize;
        }
        (weight, (0..flipped.len()).filter(|&c| flipped[c]).collect())
    }

    /// Lower bound on the reachable weight: every face with odd syndrome
    /// parity keeps odd parity under any interior flip, so it must touch
    /// at least one remaining syndrome check.
    fn parity_bound(&self, s: &[bool]) -> usize {
        if self.max_faces == 0 {
            return 0;
        }
        let mut odd = std::collections::HashMap::<usize, bool>::new();
        for (r, faces) in self.row_faces.iter().enumerate() {
            if s[r] {
                for &f in faces {
                    *odd.entry(f).or_default() ^= true;
                }
            }
        }
        odd.values().filter(|&&b| b).count().div_ceil(self.max_faces)
    }

    /// Exact minimum by dynamic programming over the sweep frontier.
    ///
    /// Each layer maps a parity pattern on the open checks to the cheapest
    /// cost of the checks already closed. Patterns whose cost already
    /// exceeds a greedy solution (or reaches the current weight, when
    /// greedy finds nothing) are dropped, so sparse syndromes keep the
    /// layers small. When no flip set beats the current weight the result is empty. Ties in weight
    /// go to the fewest flips, then to leaving the later column unflipped.
    ///
    /// With a `budget`, the search stops once that many states have been
    /// stored and the greedy descent is returned, marked inexact.
    ///
    /// Returns `Err(width)` when the frontier width exceeds `cap`.
    pub fn solve_frontier(
        &self,
        syndrome: &Z2Vector,
        cap: usize,
        budget: Option<usize>,
    ) -> Result<LocalSolution, usize> {
        if self.frontier_width > cap {
            return Err(self.frontier_width);
        }
        let s = self.local_syndrome(syndrome);
        let before = s.iter().filter(|&&b| b).count();
        if self.cols.is_empty() || before == 0 || self.parity_bound(&s) >= before {
            return Ok(self.finish(std::iter::empty(), before, before));
        }
        // cost = weight · scale + flips, so weight dominates.
        let scale = self.cols.len() as u32 + 1;
        // Prune anything worse than the greedy solution (or, failing an
        // improvement there, anything not beating the current weight).
        let (gw, greedy) = self.greedy_descent(&s);
        let bound = if gw < before {
            (gw as u32 * scale + greedy.len() as u32) + 1
        } else {
            before as u32 * scale
        };

        let targets: Vec<u64> = self
            .steps
            .iter()
            .map(|st| st.closing.iter().fold(0u64, |a, &(p, r)| a | (s[r] as u64) << p))
            .collect();

        // (state, cost, predecessor index, flipped)
        let mut layers: Vec<Vec<(u64, u32, u32, bool)>> = Vec::with_capacity(self.steps.len() + 1);
        layers.push(vec![(0, 0, 0, false)]);
        let mut index: FxHashMap<u64, u32> = FxHashMap::default();
        let mut stored = 0usize;
        for (step, &target) in self.steps.iter().zip(&targets) {
            let prev = layers.last().expect("layer");
            let mut layer: Vec<(u64, u32, u32, bool)> = Vec::with_capacity(prev.len() * 2);
            index.clear();
            for (i, &(state, base, _, _)) in prev.iter().enumerate() {
                for x in [false, true] {
                    let e = if x { state ^ step.mask } else { state };
                    let cost = base + x as u32 + scale * ((e ^ target) & step.closing_mask).count_ones();
                    if cost >= bound {
                        continue;
                    }
                    let entry = (step.compact(e), cost, i as u32, x);
                    match index.entry(entry.0) {
                        Entry::Vacant(v) => {
                            v.insert(layer.len() as u32);
                            layer.push(entry);
                        }
                        Entry::Occupied(o) => {
                            let slot = &mut layer[*o.get() as usize];
                            if (entry.1, entry.3, entry.2) < (slot.1, slot.3, slot.2) {
                                *slot = entry;
                            }
                        }
                    }
                }
            }
            if layer.is_empty() {
                return Ok(self.finish(std::iter::empty(), before, before));
            }
            stored += layer.len();
            if budget.is_some_and(|b| stored > b) {
                let mut sol = self.finish(greedy.into_iter(), before, gw);
                sol.exact = false;
                return Ok(sol);
            }
            layers.push(layer);
        }

        let last = layers.last().expect("layer");
        debug_assert!(last.len() <= 1);
        let Some(&(_, best, mut pred, mut x)) = last.first() else {
            return Ok(self.finish(std::iter::empty(), before, before));
        };
        let mut chosen = Vec::new();
        for j in (0..self.steps.len()).rev() {
            if x {
                chosen.push(self.order[j]);
            }
            let entry = layers[j][pred as usize];
            pred = entry.2;
            x = entry.3;
        }
        Ok(self.finish(chosen.into_iter(), before, (best / scale) as usize))
    }

    /// Exact minimum by Gray-code enumeration of the span of the
    /// independent interior columns (taken in ascending qubit order).
    /// Keeps the first strictly better combination found.
    ///
    /// Returns `Err(rank)` when the rank exceeds `cap`.
    pub fn solve_gray(&self, syndrome: &Z2Vector, cap: usize) -> Result<LocalSolution, usize> {
        let n = self.rows.len();
        let mut basis: Vec<(usize, Z2Vector)> = Vec::new(); // (pivot, reduced)
        let mut generators: Vec<(usize, Z2Vector)> = Vec::new(); // (column, original)
        for (c, rows) in self.col_rows.iter().enumerate() {
            let col = Z2Vector::from_support(n, rows.iter().copied());
            let mut red = col.clone();
            for (p, b) in &basis {
                if red.get(*p) {
                    red.xor_assign(b);
                }
            }
            let pivot = red.support().next();
            if let Some(p) = pivot {
                basis.push((p, red));
                generators.push((c, col));
            }
        }
        let rank = generators.len();
        if rank > cap {
            return Err(rank);
        }
        let s = Z2Vector::from_bools(&self.local_syndrome(syndrome));
        let before = s.weight();
        let mut cur = s;
        let mut best = before;
        let mut best_code: u64 = 0;
        let mut gray: u64 = 0;
        for t in 1u64..(1u64 << rank) {
            let g = t.trailing_zeros() as usize;
            gray ^= 1 << g;
            cur.xor_assign(&generators[g].1);
            let w = cur.weight();
            if w < best {
                best = w;
                best_code = gray;
            }
        }
        let chosen = (0..rank).filter(|&g| best_code >> g & 1 == 1).map(|g| generators[g].0);
        Ok(self.finish(chosen, before, best))
    }
}
