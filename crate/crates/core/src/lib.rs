//! Greedy ball-local decoding for homology CSS codes built on cell
//! complexes, with a noisy quantum-memory simulator and a reproducible
//! Monte Carlo sweep harness.

pub mod code;
pub mod complex;
pub mod decoder;
pub mod memory;
pub mod sweep;
pub mod z2;
