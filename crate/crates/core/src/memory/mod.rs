//! Noisy quantum-memory simulation.
//!
//! Each step applies data noise, places the decoding balls, measures the
//! checks in those balls with faulty readout and runs one decoder round
//! against what was read. Afterwards the noise is switched off and exact
//! rounds run until the syndrome vanishes or the budget runs out.
//!
//! Every step is recorded in a spacetime chain: the net flips of slice `i`
//! (noise plus correction) as cells `q × {i}`, and the true syndrome left
//! after slice `i − 1` as cells `s × [i]`. A single injected error, if any,
//! occupies slice 0.

mod components;
mod noise;

pub use components::{component_stats, components, footprint, ComponentStats};
pub use noise::{measure_syndrome, sample_noise, MeasuredSyndrome, NoiseConfig, NoiseMode};

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::code::{CssCode, Verdict};
use crate::complex::{spacetime_boundary, SpacetimeCell, SpacetimeFace};
use crate::decoder::{DecodeError, DecodeState, Decoder};
use crate::z2::Z2Vector;

/// Generator used for every trial: ChaCha with 8 rounds, keyed by the base
/// seed, one stream per trial.
pub const RNG_NAME: &str = "ChaCha8Rng/rand_chacha-0.3 seed_from_u64(seed) stream=trial";

/// `⌈4·log2 n⌉`, at least 1.
pub fn default_delta(n_qubits: usize) -> usize {
    ((4.0 * (n_qubits.max(2) as f64).log2()).ceil() as usize).max(1)
}

/// A recorded spacetime 2-chain over slices `0..=slices`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpacetimeChain {
    pub cells: Vec<SpacetimeCell>,
    pub slices: usize,
}

impl SpacetimeChain {
    pub fn new(cells: Vec<SpacetimeCell>, slices: usize) -> Self {
        Self { cells, slices }
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn boundary(&self, code: &CssCode) -> BTreeSet<SpacetimeFace> {
        spacetime_boundary(&self.cells, code.z_checks(), code.check_faces(), self.slices)
    }

    /// XOR of the spacelike cells at slices `≤ slice`.
    pub fn frame_through(&self, slice: usize, n_qubits: usize) -> Z2Vector {
        let mut out = Z2Vector::zeros(n_qubits);
        for c in &self.cells {
            if let SpacetimeCell::Spacelike { index, time } = *c {
                if time <= slice {
                    out.flip(index);
                }
            }
        }
        out
    }
}

/// True state of the memory.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MemoryState {
    /// Cumulative noise plus corrections.
    pub error: Z2Vector,
    /// Syndrome of `error`.
    pub syndrome: Z2Vector,
    /// Last completed slice.
    pub slice: usize,
}

impl MemoryState {
    pub fn new(code: &CssCode) -> Self {
        Self {
            error: Z2Vector::zeros(code.n_qubits()),
            syndrome: Z2Vector::zeros(code.n_checks()),
            slice: 0,
        }
    }

    /// Starts from `error`, recorded as slice 0.
    pub fn with_initial_error(code: &CssCode, error: Z2Vector, recorder: &mut SpacetimeChain) -> Self {
        for index in error.support() {
            recorder.cells.push(SpacetimeCell::Spacelike { index, time: 0 });
        }
        Self {
            syndrome: code.syndrome(&error).0,
            error,
            slice: 0,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StepReport {
    pub noise_weight: usize,
    pub correction_weight: usize,
    pub balls_used: usize,
    /// Ball solves that fell back to greedy descent.
    pub inexact: usize,
    /// True syndrome weight after the step.
    pub syndrome_weight: usize,
}

/// One time step: noise, ball placement, faulty measurement, one decoder
/// round, recording.
pub fn step<R: Rng + ?Sized>(
    decoder: &Decoder<'_>,
    state: &mut MemoryState,
    noise: &NoiseConfig,
    recorder: &mut SpacetimeChain,
    rng: &mut R,
) -> Result<StepReport, DecodeError> {
    let code = decoder.code();
    let slice = state.slice + 1;
    for index in state.syndrome.support() {
        recorder.cells.push(SpacetimeCell::Timelike { index, time: slice });
    }

    let mut flips = sample_noise(code, noise, rng);
    let noise_weight = flips.weight();
    state.error.xor_assign(&flips);
    let plan = decoder.round_plan(rng);
    let measured = measure_syndrome(
        code,
        &state.error,
        plan.iter().flatten().map(|&c| decoder.ball(c)),
        noise.q_meas,
        rng,
    );
    let mut working = DecodeState {
        frame: Z2Vector::zeros(code.n_qubits()),
        syndrome: measured.bits,
    };
    let round = decoder.run_planned_round(&mut working, &plan)?;
    state.error.xor_assign(&working.frame);
    flips.xor_assign(&working.frame);
    for index in flips.support() {
        recorder.cells.push(SpacetimeCell::Spacelike { index, time: slice });
    }
    state.syndrome = code.syndrome(&state.error).0;
    state.slice = slice;
    recorder.slices = slice;
    Ok(StepReport {
        noise_weight,
        correction_weight: working.frame.weight(),
        balls_used: round.balls_used,
        inexact: round.inexact,
        syndrome_weight: state.syndrome.weight(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialConfig {
    /// Noisy steps.
    pub tau: usize,
    /// Budget of noise-free rounds afterwards.
    pub delta: usize,
    pub noise: NoiseConfig,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Success,
    LogicalFailure,
    Timeout,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialResult {
    pub outcome: Outcome,
    /// Noise-free rounds run before the syndrome vanished (`delta` on timeout).
    pub rounds_used: usize,
    pub components: usize,
    pub max_component_cells: usize,
    pub max_component_diameter: u32,
    /// Every component passed the smallness test.
    pub all_small: bool,
    /// Ball solves over the trial that fell back to greedy descent.
    pub inexact_solves: usize,
    /// True syndrome weight after each step, noisy and noise-free.
    pub syndrome_weights: Vec<usize>,
    pub seed: u64,
    pub stream: u64,
}

/// Runs one trial from a fresh memory and returns its result and the
/// recorded chain.
pub fn simulate(
    decoder: &Decoder<'_>,
    cfg: &TrialConfig,
    seed: u64,
    stream: u64,
) -> Result<(TrialResult, SpacetimeChain), DecodeError> {
    assert!(cfg.delta >= 1, "delta must be at least 1");
    cfg.noise.validate();
    let code = decoder.code();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut state = MemoryState::new(code);
    let mut chain = SpacetimeChain::default();
    let mut syndrome_weights = Vec::with_capacity(cfg.tau + cfg.delta);
    let mut inexact_solves = 0;
    for _ in 0..cfg.tau {
        let r = step(decoder, &mut state, &cfg.noise, &mut chain, &mut rng)?;
        syndrome_weights.push(r.syndrome_weight);
        inexact_solves += r.inexact;
    }
    let quiet = NoiseConfig::noiseless();
    let mut rounds_used = 0;
    while !state.syndrome.is_zero() && rounds_used < cfg.delta {
        let r = step(decoder, &mut state, &quiet, &mut chain, &mut rng)?;
        syndrome_weights.push(r.syndrome_weight);
        inexact_solves += r.inexact;
        rounds_used += 1;
    }
    let outcome = if !state.syndrome.is_zero() {
        Outcome::Timeout
    } else {
        match code.residual_verdict(&state.error) {
            Verdict::Trivial => Outcome::Success,
            Verdict::Logical => Outcome::LogicalFailure,
            Verdict::Unresolved => unreachable!("zero syndrome"),
        }
    };

    let r_dec = decoder.config().r_dec;
    let comps = components(code, &chain, 2 * r_dec);
    let stats: Vec<ComponentStats> = comps.iter().map(|c| component_stats(code, c, r_dec)).collect();
    let result = TrialResult {
        outcome,
        rounds_used,
        components: stats.len(),
        max_component_cells: stats.iter().map(|s| s.cells).max().unwrap_or(0),
        max_component_diameter: stats.iter().map(|s| s.diameter).max().unwrap_or(0),
        all_small: stats.iter().all(|s| s.small),
        inexact_solves,
        syndrome_weights,
        seed,
        stream,
    };
    Ok((result, chain))
}

pub fn run_trial(decoder: &Decoder<'_>, cfg: &TrialConfig, seed: u64, stream: u64) -> Result<TrialResult, DecodeError> {
    simulate(decoder, cfg, seed, stream).map(|(r, _)| r)
}
