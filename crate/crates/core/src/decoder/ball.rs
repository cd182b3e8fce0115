use crate::code::CssCode;

/// Incidence tables shared by every ball of one code.
#[derive(Clone, Debug)]
pub(crate) struct Incidence {
    /// Check cells touching each vertex.
    pub vertex_checks: Vec<Vec<usize>>,
    /// Qubits acted on by each check (rows of the Z-check matrix).
    pub check_qubits: Vec<Vec<usize>>,
}

impl Incidence {
    pub fn new(code: &CssCode) -> Self {
        let mut vertex_checks = vec![Vec::new(); code.complex().count(0)];
        for s in 0..code.n_checks() {
            for &v in code.check_vertices(s) {
                vertex_checks[v].push(s);
            }
        }
        Self {
            vertex_checks,
            check_qubits: code.z_checks().row_supports(),
        }
    }
}

/// A decoding ball around a vertex.
///
/// Vertex membership is graph distance `≤ radius`. A check cell is
/// *variable* when all of its vertices are in the ball and *fixed* when
/// only some are (it crosses the ball's boundary sphere). Interior qubits
/// are those all of whose checks are variable, so flipping them never
/// changes a fixed or exterior check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ball {
    pub center: usize,
    pub radius: u32,
    pub vertices: Vec<usize>,
    pub variable_checks: Vec<usize>,
    pub fixed_checks: Vec<usize>,
    pub interior_qubits: Vec<usize>,
}

impl Ball {
    pub fn new(code: &CssCode, center: usize, radius: u32) -> Self {
        Self::with_incidence(code, &Incidence::new(code), center, radius)
    }

    pub(crate) fn with_incidence(code: &CssCode, inc: &Incidence, center: usize, radius: u32) -> Self {
        let vertices = code.complex().metric_ball(center, radius);
        let n_vertices = code.complex().count(0);
        let mut inside = vec![false; n_vertices];
        for &v in &vertices {
            inside[v] = true;
        }

        let mut touched: Vec<usize> = vertices
            .iter()
            .flat_map(|&v| inc.vertex_checks[v].iter().copied())
            .collect();
        touched.sort_unstable();
        touched.dedup();

        let mut variable_checks = Vec::new();
        let mut fixed_checks = Vec::new();
        for s in touched {
            if code.check_vertices(s).iter().all(|&v| inside[v]) {
                variable_checks.push(s);
            } else {
                fixed_checks.push(s);
            }
        }

        let mut is_variable = std::collections::HashSet::with_capacity(variable_checks.len());
        is_variable.extend(variable_checks.iter().copied());
        let mut interior_qubits: Vec<usize> = variable_checks
            .iter()
            .flat_map(|&s| inc.check_qubits[s].iter().copied())
            .collect();
        interior_qubits.sort_unstable();
        interior_qubits.dedup();
        interior_qubits.retain(|&q| code.z_checks().column(q).iter().all(|s| is_variable.contains(s)));

        Self {
            center,
            radius,
            vertices,
            variable_checks,
            fixed_checks,
            interior_qubits,
        }
    }
}
