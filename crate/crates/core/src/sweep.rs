//! Parameter sweeps over memory trials, written as CSV.
//!
//! Rows come out in grid order (L, p, q, r_dec) whatever order the trials
//! finish in, and every trial draws from its own stream of one generator
//! keyed by the base seed, so a CSV depends only on the spec and seed.
//! Trial `t` uses stream `t` at every grid point, which pairs the points.

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::code::CssCode;
use crate::complex::build_hypercubic_torus;
use crate::decoder::{DecodeError, Decoder, DecoderConfig, Scheme, DEFAULT_STATE_BUDGET};
use crate::memory::{default_delta, run_trial, NoiseConfig, Outcome, TrialConfig, TrialResult, RNG_NAME};

pub const CSV_HEADER: &str =
    "L,p,q,r_dec,scheme,trials,successes,logical_failures,timeouts,mean_rounds,mean_max_component,wall_ms,seed";

fn default_dim() -> usize {
    4
}

fn default_r_dec() -> Vec<u32> {
    vec![2]
}

fn default_scheme() -> Scheme {
    Scheme::Deterministic
}

fn default_tau() -> usize {
    50
}

fn default_trials() -> usize {
    100
}

fn default_budget() -> usize {
    DEFAULT_STATE_BUDGET
}

/// A sweep over hypercubic tori.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    #[serde(default = "default_dim")]
    pub dim: usize,
    /// Qubit grade; `max(1, dim / 2)` when absent.
    #[serde(default)]
    pub grade: Option<usize>,
    #[serde(rename = "L")]
    pub l: Vec<usize>,
    pub p: Vec<f64>,
    /// Measurement error rates; when absent each point uses `q = p`.
    #[serde(default)]
    pub q: Option<Vec<f64>>,
    #[serde(default = "default_r_dec")]
    pub r_dec: Vec<u32>,
    #[serde(default = "default_scheme")]
    pub scheme: Scheme,
    #[serde(default = "default_tau")]
    pub tau: usize,
    /// Noise-free round budget; `⌈4·log2 N⌉` when absent.
    #[serde(default)]
    pub delta: Option<usize>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    /// Per-solve state budget; 0 keeps every solve exact.
    #[serde(default = "default_budget")]
    pub state_budget: usize,
    #[serde(default)]
    pub output: Option<std::path::PathBuf>,
    /// Fill `wall_ms` with measured time. Off by default so that output
    /// is reproducible byte for byte.
    #[serde(default)]
    pub wall_time: bool,
}

impl SweepSpec {
    pub fn new(l: Vec<usize>, p: Vec<f64>) -> Self {
        Self {
            dim: default_dim(),
            grade: None,
            l,
            p,
            q: None,
            r_dec: default_r_dec(),
            scheme: default_scheme(),
            tau: default_tau(),
            delta: None,
            trials: default_trials(),
            seed: 0,
            state_budget: default_budget(),
            output: None,
            wall_time: false,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.l.is_empty() || self.p.is_empty() || self.r_dec.is_empty() {
            return Err("L, p and r_dec must be non-empty".into());
        }
        if self.q.as_ref().is_some_and(Vec::is_empty) {
            return Err("q must be non-empty when given".into());
        }
        if self.trials == 0 {
            return Err("trials must be at least 1".into());
        }
        if !(2..=4).contains(&self.dim) {
            return Err(format!("dim must be 2, 3 or 4, not {}", self.dim));
        }
        let grade = self.grade();
        if grade == 0 || grade >= self.dim {
            return Err(format!("grade must lie in 1..{}", self.dim));
        }
        if let Some(&l) = self.l.iter().find(|&&l| l < 2) {
            return Err(format!("L must be at least 2, not {l}"));
        }
        if self.delta == Some(0) {
            return Err("delta must be at least 1".into());
        }
        let rates = self.p.iter().chain(self.q.iter().flatten());
        if let Some(x) = rates.into_iter().find(|x| !(0.0..=1.0).contains(*x)) {
            return Err(format!("rate {x} outside [0, 1]"));
        }
        if self.r_dec.contains(&0) {
            return Err("r_dec must be at least 1".into());
        }
        Ok(())
    }

    pub fn grade(&self) -> usize {
        self.grade.unwrap_or((self.dim / 2).max(1))
    }

    /// Grid points in output order.
    pub fn points(&self) -> Vec<GridPoint> {
        let mut out = Vec::new();
        for &l in &self.l {
            for &p in &self.p {
                let qs = self.q.clone().unwrap_or_else(|| vec![p]);
                for q in qs {
                    for &r_dec in &self.r_dec {
                        out.push(GridPoint { l, p, q, r_dec });
                    }
                }
            }
        }
        out
    }

    fn decoder_config(&self, r_dec: u32) -> DecoderConfig {
        DecoderConfig {
            r_dec,
            scheme: self.scheme,
            state_budget: (self.state_budget > 0).then_some(self.state_budget),
            ..Default::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridPoint {
    pub l: usize,
    pub p: f64,
    pub q: f64,
    pub r_dec: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResultRow {
    pub point: GridPoint,
    pub scheme: Scheme,
    pub trials: usize,
    pub successes: usize,
    pub logical_failures: usize,
    pub timeouts: usize,
    pub mean_rounds: f64,
    pub mean_max_component: f64,
    pub wall_ms: u64,
    pub seed: u64,
}

impl ResultRow {
    fn from_trials(point: GridPoint, scheme: Scheme, seed: u64, results: &[TrialResult], wall_ms: u64) -> Self {
        let count = |o: Outcome| results.iter().filter(|r| r.outcome == o).count();
        let n = results.len() as f64;
        Self {
            point,
            scheme,
            trials: results.len(),
            successes: count(Outcome::Success),
            logical_failures: count(Outcome::LogicalFailure),
            timeouts: count(Outcome::Timeout),
            mean_rounds: results.iter().map(|r| r.rounds_used).sum::<usize>() as f64 / n,
            mean_max_component: results.iter().map(|r| r.max_component_cells).sum::<usize>() as f64 / n,
            wall_ms,
            seed,
        }
    }

    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.point.l,
            sig6(self.point.p),
            sig6(self.point.q),
            self.point.r_dec,
            self.scheme.as_str(),
            self.trials,
            self.successes,
            self.logical_failures,
            self.timeouts,
            sig6(self.mean_rounds),
            sig6(self.mean_max_component),
            self.wall_ms,
            self.seed
        )
    }
}

/// Six significant digits, `%g` style: plain notation for exponents in
/// `-4..6`, scientific otherwise; trailing zeros dropped.
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if (-4..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        trim(&format!("{x:.decimals$}"))
    } else {
        format!("{}e{}{:02}", trim(mantissa), if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

/// Worker count from `HYPERDEC_THREADS` (unset or 0 means automatic).
pub fn thread_count() -> usize {
    std::env::var("HYPERDEC_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .unwrap_or(0)
}

/// Runs every grid point and returns the rows in grid order.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<ResultRow>, SweepError> {
    spec.validate().map_err(SweepError::Spec)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_count())
        .build()
        .map_err(|e| SweepError::Spec(e.to_string()))?;
    pool.install(|| {
        let mut rows = Vec::new();
        for &l in &spec.l {
            let code = CssCode::from_complex(build_hypercubic_torus(spec.dim, l), spec.grade());
            let delta = spec.delta.unwrap_or_else(|| default_delta(code.n_qubits()));
            for &r_dec in &spec.r_dec {
                let decoder = Decoder::new(&code, spec.decoder_config(r_dec));
                for point in spec.points().into_iter().filter(|g| g.l == l && g.r_dec == r_dec) {
                    let cfg = TrialConfig {
                        tau: spec.tau,
                        delta,
                        noise: NoiseConfig::iid(point.p, point.q),
                    };
                    let start = Instant::now();
                    let results = (0..spec.trials as u64)
                        .into_par_iter()
                        .map(|t| run_trial(&decoder, &cfg, spec.seed, t))
                        .collect::<Result<Vec<_>, _>>()?;
                    let wall_ms = if spec.wall_time {
                        start.elapsed().as_millis() as u64
                    } else {
                        0
                    };
                    rows.push(ResultRow::from_trials(point, spec.scheme, spec.seed, &results, wall_ms));
                }
            }
        }
        // Restore grid order (the loops above group by L and r_dec).
        let order = spec.points();
        rows.sort_by_key(|r| {
            order
                .iter()
                .position(|g| *g == r.point)
                .expect("row belongs to the grid")
        });
        Ok(rows)
    })
}

/// Full CSV text: comment lines, header, one line per row.
pub fn render_csv(spec: &SweepSpec, rows: &[ResultRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# hyperdec {} sweep", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(out, "# rng: {RNG_NAME}");
    let _ = writeln!(
        out,
        "# dim={} grade={} tau={} delta={} state_budget={}",
        spec.dim,
        spec.grade(),
        spec.tau,
        spec.delta.map_or("auto".to_string(), |d| d.to_string()),
        spec.state_budget
    );
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv_line());
        out.push('\n');
    }
    out
}

#[derive(Debug, thiserror::Error)]
pub enum SweepError {
    #[error("invalid sweep: {0}")]
    Spec(String),
    #[error(transparent)]
    Decode(#[from] DecodeError),
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_significant_digits() {
        assert_eq!(sig6(0.0), "0");
        assert_eq!(sig6(0.001), "0.001");
        assert_eq!(sig6(0.05), "0.05");
        assert_eq!(sig6(1.0), "1");
        assert_eq!(sig6(2.0 / 3.0), "0.666667");
        assert_eq!(sig6(123456.7), "123457");
        assert_eq!(sig6(1234567.0), "1.23457e+06");
        assert_eq!(sig6(0.0000123456789), "1.23457e-05");
        assert_eq!(sig6(12.5), "12.5");
    }

    #[test]
    fn grid_order_and_paired_q() {
        let mut spec = SweepSpec::new(vec![3, 2], vec![0.1, 0.2]);
        assert_eq!(
            spec.points().iter().map(|g| (g.l, g.p, g.q)).collect::<Vec<_>>(),
            vec![(3, 0.1, 0.1), (3, 0.2, 0.2), (2, 0.1, 0.1), (2, 0.2, 0.2)]
        );
        spec.q = Some(vec![0.0]);
        assert!(spec.points().iter().all(|g| g.q == 0.0));
    }

    #[test]
    fn validation() {
        let mut spec = SweepSpec::new(vec![3], vec![0.1]);
        assert!(spec.validate().is_ok());
        spec.trials = 0;
        assert!(spec.validate().is_err());
        let spec = SweepSpec::new(vec![], vec![0.1]);
        assert!(spec.validate().is_err());
        let spec = SweepSpec::new(vec![3], vec![1.5]);
        assert!(spec.validate().is_err());
    }

    #[test]
    fn noiseless_grid_all_succeeds() {
        let mut spec = SweepSpec::new(vec![2, 3], vec![0.0]);
        spec.dim = 2;
        spec.trials = 3;
        spec.tau = 5;
        let rows = run_sweep(&spec).unwrap();
        assert_eq!(rows.len(), 2);
        for r in &rows {
            assert_eq!(r.successes, 3);
            assert_eq!(r.successes + r.logical_failures + r.timeouts, r.trials);
        }
        let csv = render_csv(&spec, &rows);
        let lines: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines[1], "2,0,0,2,deterministic,3,3,0,0,0,0,0,0");
    }
}
