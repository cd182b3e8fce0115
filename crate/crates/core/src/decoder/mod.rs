//! Greedy ball-local decoding.
//!
//! Each round picks a set of balls whose centers are more than `2·r_dec`
//! apart (so their interiors are disjoint), and inside every ball replaces
//! the syndrome on the variable checks by a minimum-weight one using only
//! interior flips. The randomized scheme draws fresh thinned centers per
//! round; the deterministic scheme walks a fixed colored cover one color
//! per subround.

mod ball;
mod cover;
mod local;

pub use ball::Ball;
pub use cover::{covering_radius, default_density, deterministic_cover, sample_centers, Cover};
pub use local::{LocalProblem, LocalSolution};

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::code::CssCode;
use crate::z2::Z2Vector;
use ball::Incidence;

/// Hard ceiling on the local search dimension.
pub const MAX_KERNEL_CAP: usize = 24;

pub const DEFAULT_STATE_BUDGET: usize = 1 << 11;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Randomized,
    Deterministic,
}

impl Scheme {
    pub fn as_str(&self) -> &'static str {
        match self {
            Scheme::Randomized => "randomized",
            Scheme::Deterministic => "deterministic",
        }
    }
}

impl std::str::FromStr for Scheme {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "randomized" | "random" => Ok(Scheme::Randomized),
            "deterministic" | "det" => Ok(Scheme::Deterministic),
            other => Err(format!("unknown scheme `{other}` (expected randomized|deterministic)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LocalSolver {
    /// Frontier dynamic program (default).
    Frontier,
    /// Gray-code enumeration of the restricted column span.
    GrayCode,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecoderConfig {
    pub r_dec: u32,
    /// Sampling density of candidate centers; `None` means
    /// `1 / |ball(2·r_dec)|`.
    pub rho: Option<f64>,
    pub kernel_cap: usize,
    pub scheme: Scheme,
    pub solver: LocalSolver,
    /// Stored-state limit per frontier solve; past it the greedy descent
    /// is used. `None` keeps every solve exact.
    pub state_budget: Option<usize>,
}

impl Default for DecoderConfig {
    fn default() -> Self {
        Self {
            r_dec: 2,
            rho: None,
            kernel_cap: MAX_KERNEL_CAP,
            scheme: Scheme::Deterministic,
            solver: LocalSolver::Frontier,
            state_budget: Some(DEFAULT_STATE_BUDGET),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecodeError {
    #[error("local search around vertex {center} has dimension {dimension}, above the cap of {cap}; lower r_dec or raise the cap")]
    SizeExceeded {
        center: usize,
        dimension: usize,
        cap: usize,
    },
}

/// The decoder's view of a code: cumulative flips on the qubits and the
/// syndrome it is working from. With exact measurement `syndrome` equals
/// the syndrome of `frame`; with noisy measurement it does not.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeState {
    pub frame: Z2Vector,
    pub syndrome: Z2Vector,
}

impl DecodeState {
    /// Exact state for a given error.
    pub fn from_error(code: &CssCode, error: Z2Vector) -> Self {
        let syndrome = code.syndrome(&error).0;
        Self { frame: error, syndrome }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RoundReport {
    /// Net flips of the round (XOR of all ball corrections).
    pub flips: Vec<usize>,
    /// Sum of correction sizes over balls.
    pub flip_count: usize,
    pub balls_used: usize,
    pub subrounds: usize,
    /// Ball solves that hit the state budget.
    pub inexact: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Convergence {
    Converged {
        rounds: usize,
        flips: usize,
    },
    Timeout {
        rounds: usize,
        flips: usize,
        residual: Z2Vector,
    },
}

impl Convergence {
    pub fn rounds(&self) -> usize {
        match *self {
            Convergence::Converged { rounds, .. } | Convergence::Timeout { rounds, .. } => rounds,
        }
    }
}

pub struct Decoder<'c> {
    code: &'c CssCode,
    cfg: DecoderConfig,
    balls: Vec<Ball>,
    problems: Vec<LocalProblem>,
    cover: Option<Cover>,
    rho: f64,
}

impl<'c> Decoder<'c> {
    pub fn new(code: &'c CssCode, cfg: DecoderConfig) -> Self {
        assert!(cfg.r_dec >= 1, "r_dec must be at least 1");
        assert!(
            cfg.kernel_cap <= MAX_KERNEL_CAP,
            "kernel_cap {} above {MAX_KERNEL_CAP}",
            cfg.kernel_cap
        );
        let inc = Incidence::new(code);
        let n_vertices = code.complex().count(0);
        let balls: Vec<Ball> = (0..n_vertices)
            .map(|v| Ball::with_incidence(code, &inc, v, cfg.r_dec))
            .collect();
        let problems = balls
            .iter()
            .map(|b| {
                LocalProblem::new(
                    &b.interior_qubits,
                    |q| code.z_checks().column(q),
                    |s| code.faces_of_check(s),
                )
            })
            .collect();
        let cover = (cfg.scheme == Scheme::Deterministic).then(|| deterministic_cover(code.complex(), cfg.r_dec));
        let rho = cfg.rho.unwrap_or_else(|| default_density(code.complex(), cfg.r_dec));
        assert!(rho > 0.0 && rho <= 1.0, "rho must lie in (0, 1]");
        Self {
            code,
            cfg,
            balls,
            problems,
            cover,
            rho,
        }
    }

    pub fn code(&self) -> &CssCode {
        self.code
    }

    pub fn config(&self) -> &DecoderConfig {
        &self.cfg
    }

    pub fn ball(&self, center: usize) -> &Ball {
        &self.balls[center]
    }

    pub fn cover(&self) -> Option<&Cover> {
        self.cover.as_ref()
    }

    pub fn density(&self) -> f64 {
        self.rho
    }

    /// Centers for one randomized round.
    pub fn sample_balls<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<usize> {
        sample_centers(self.code.complex(), self.cfg.r_dec, self.rho, rng)
    }

    /// The groups of centers processed in sequence during one round.
    pub fn round_plan<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<Vec<usize>> {
        match &self.cover {
            Some(cover) => (0..cover.n_colors).map(|k| cover.color_class(k).collect()).collect(),
            None => vec![self.sample_balls(rng)],
        }
    }

    /// Minimum-weight correction inside the ball at `center`.
    pub fn local_correction(&self, center: usize, syndrome: &Z2Vector) -> Result<LocalSolution, DecodeError> {
        let problem = &self.problems[center];
        let result = match self.cfg.solver {
            LocalSolver::Frontier => problem.solve_frontier(syndrome, self.cfg.kernel_cap, self.cfg.state_budget),
            LocalSolver::GrayCode => problem.solve_gray(syndrome, self.cfg.kernel_cap),
        };
        result.map_err(|dimension| DecodeError::SizeExceeded {
            center,
            dimension,
            cap: self.cfg.kernel_cap,
        })
    }

    /// Corrects every ball of a group against the same syndrome, then
    /// applies all flips. Groups must have pairwise separated centers.
    pub fn run_group(&self, state: &mut DecodeState, centers: &[usize]) -> Result<RoundReport, DecodeError> {
        let solutions = centers
            .iter()
            .map(|&c| self.local_correction(c, &state.syndrome))
            .collect::<Result<Vec<_>, _>>()?;
        let mut report = RoundReport {
            balls_used: centers.len(),
            subrounds: 1,
            ..Default::default()
        };
        for sol in solutions {
            report.flip_count += sol.flips.len();
            report.inexact += usize::from(!sol.exact);
            for q in sol.flips {
                state.frame.flip(q);
                for &s in self.code.z_checks().column(q) {
                    state.syndrome.flip(s);
                }
                report.flips.push(q);
            }
        }
        Ok(report)
    }

    pub fn run_round<R: Rng + ?Sized>(&self, state: &mut DecodeState, rng: &mut R) -> Result<RoundReport, DecodeError> {
        let plan = self.round_plan(rng);
        self.run_planned_round(state, &plan)
    }

    pub fn run_planned_round(&self, state: &mut DecodeState, plan: &[Vec<usize>]) -> Result<RoundReport, DecodeError> {
        let mut net = Z2Vector::zeros(self.code.n_qubits());
        let mut report = RoundReport {
            subrounds: plan.len(),
            ..Default::default()
        };
        for group in plan {
            let g = self.run_group(state, group)?;
            report.balls_used += g.balls_used;
            report.flip_count += g.flip_count;
            report.inexact += g.inexact;
            for q in g.flips {
                net.flip(q);
            }
        }
        report.flips = net.support().collect();
        Ok(report)
    }

    /// Repeats exact-syndrome rounds until the syndrome vanishes or
    /// `max_rounds` is reached.
    pub fn decode_to_convergence<R: Rng + ?Sized>(
        &self,
        state: &mut DecodeState,
        max_rounds: usize,
        rng: &mut R,
    ) -> Result<Convergence, DecodeError> {
        let mut flips = 0;
        for rounds in 0..max_rounds {
            if state.syndrome.is_zero() {
                return Ok(Convergence::Converged { rounds, flips });
            }
            flips += self.run_round(state, rng)?.flip_count;
        }
        if state.syndrome.is_zero() {
            Ok(Convergence::Converged {
                rounds: max_rounds,
                flips,
            })
        } else {
            Ok(Convergence::Timeout {
                rounds: max_rounds,
                flips,
                residual: state.syndrome.clone(),
            })
        }
    }
}
