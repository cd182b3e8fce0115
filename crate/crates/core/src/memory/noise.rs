use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::code::CssCode;
use crate::decoder::Ball;
use crate::z2::Z2Vector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseMode {
    /// Every qubit flips independently with probability `p_flip`.
    Iid,
    /// A connected chain of exactly `weight` qubit cells, grown from a
    /// uniformly chosen seed cell. Ignores `p_flip`.
    AdversarialChain { weight: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseConfig {
    pub p_flip: f64,
    pub q_meas: f64,
    pub mode: NoiseMode,
}

impl NoiseConfig {
    pub fn iid(p_flip: f64, q_meas: f64) -> Self {
        let cfg = Self {
            p_flip,
            q_meas,
            mode: NoiseMode::Iid,
        };
        cfg.validate();
        cfg
    }

    pub fn noiseless() -> Self {
        Self::iid(0.0, 0.0)
    }

    pub fn validate(&self) {
        assert!((0.0..=1.0).contains(&self.p_flip), "p_flip must lie in [0, 1]");
        assert!((0.0..=1.0).contains(&self.q_meas), "q_meas must lie in [0, 1]");
    }
}

/// One round of data noise.
pub fn sample_noise<R: Rng + ?Sized>(code: &CssCode, cfg: &NoiseConfig, rng: &mut R) -> Z2Vector {
    let n = code.n_qubits();
    match cfg.mode {
        NoiseMode::Iid => {
            let mut out = Z2Vector::zeros(n);
            if cfg.p_flip > 0.0 {
                for q in 0..n {
                    if rng.gen_bool(cfg.p_flip) {
                        out.set(q, true);
                    }
                }
            }
            out
        }
        NoiseMode::AdversarialChain { weight } => connected_chain(code, weight, rng),
    }
}

/// Randomized growth: start from a uniform cell, then repeatedly add a
/// uniform cell sharing a check with the chain so far.
fn connected_chain<R: Rng + ?Sized>(code: &CssCode, weight: usize, rng: &mut R) -> Z2Vector {
    let n = code.n_qubits();
    assert!(weight <= n, "chain weight {weight} exceeds {n} cells");
    let mut out = Z2Vector::zeros(n);
    if weight == 0 {
        return out;
    }
    let rows = code.z_checks().row_supports();
    let mut queued = vec![false; n];
    let mut frontier = vec![rng.gen_range(0..n)];
    queued[frontier[0]] = true;
    for _ in 0..weight {
        assert!(
            !frontier.is_empty(),
            "complex too small for a connected chain of weight {weight}"
        );
        let i = rng.gen_range(0..frontier.len());
        let q = frontier.swap_remove(i);
        out.set(q, true);
        let mut next: Vec<usize> = code
            .z_checks()
            .column(q)
            .iter()
            .flat_map(|&s| rows[s].iter().copied())
            .filter(|&r| !queued[r])
            .collect();
        next.sort_unstable();
        next.dedup();
        // Shuffled so the frontier order does not favour low indices.
        next.shuffle(rng);
        for r in next {
            queued[r] = true;
            frontier.push(r);
        }
    }
    out
}

/// Syndrome bits as read out: `mask` marks the checks that were measured;
/// `bits` is meaningful only on `mask`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasuredSyndrome {
    pub bits: Z2Vector,
    pub mask: Z2Vector,
}

impl MeasuredSyndrome {
    pub fn get(&self, s: usize) -> Option<bool> {
        self.mask.get(s).then(|| self.bits.get(s))
    }
}

/// Measures every check touching one of `balls` (variable or fixed), each
/// bit misreported independently with probability `q_meas`. Draws happen
/// in ascending check order.
pub fn measure_syndrome<'b, R: Rng + ?Sized>(
    code: &CssCode,
    true_error: &Z2Vector,
    balls: impl IntoIterator<Item = &'b Ball>,
    q_meas: f64,
    rng: &mut R,
) -> MeasuredSyndrome {
    assert!((0.0..=1.0).contains(&q_meas), "q_meas must lie in [0, 1]");
    let mut mask = Z2Vector::zeros(code.n_checks());
    for b in balls {
        for &s in b.variable_checks.iter().chain(&b.fixed_checks) {
            mask.set(s, true);
        }
    }
    let mut bits = code.syndrome(true_error).0;
    bits.and_assign(&mask);
    if q_meas > 0.0 {
        for s in mask.support().collect::<Vec<_>>() {
            if rng.gen_bool(q_meas) {
                bits.flip(s);
            }
        }
    }
    MeasuredSyndrome { bits, mask }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::build_hypercubic_torus;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn code4(l: usize) -> CssCode {
        CssCode::from_complex(build_hypercubic_torus(4, l), 2)
    }

    #[test]
    fn iid_extremes() {
        let code = code4(2);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert!(sample_noise(&code, &NoiseConfig::iid(0.0, 0.0), &mut rng).is_zero());
        assert_eq!(
            sample_noise(&code, &NoiseConfig::iid(1.0, 0.0), &mut rng).weight(),
            code.n_qubits()
        );
    }

    /// Connectivity checked by a separate flood fill over shared checks.
    fn is_connected(code: &CssCode, chain: &Z2Vector) -> bool {
        let cells: Vec<usize> = chain.support().collect();
        let Some(&first) = cells.first() else {
            return true;
        };
        let mut seen = vec![first];
        let mut i = 0;
        while i < seen.len() {
            let a = seen[i];
            for &b in &cells {
                let shares = code
                    .z_checks()
                    .column(a)
                    .iter()
                    .any(|s| code.z_checks().column(b).contains(s));
                if shares && !seen.contains(&b) {
                    seen.push(b);
                }
            }
            i += 1;
        }
        seen.len() == cells.len()
    }

    #[test]
    fn adversarial_chain_is_connected() {
        let code = code4(4);
        let cfg = NoiseConfig {
            p_flip: 0.0,
            q_meas: 0.0,
            mode: NoiseMode::AdversarialChain { weight: 5 },
        };
        for seed in 0..20 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let chain = sample_noise(&code, &cfg, &mut rng);
            assert_eq!(chain.weight(), 5);
            assert!(is_connected(&code, &chain));
        }
    }

    #[test]
    #[should_panic(expected = "exceeds")]
    fn adversarial_chain_too_heavy() {
        let code = CssCode::from_complex(build_hypercubic_torus(2, 2), 1);
        let cfg = NoiseConfig {
            p_flip: 0.0,
            q_meas: 0.0,
            mode: NoiseMode::AdversarialChain { weight: 9 },
        };
        sample_noise(&code, &cfg, &mut ChaCha8Rng::seed_from_u64(0));
    }

    #[test]
    fn measurement_extremes() {
        let code = code4(3);
        let ball = Ball::new(&code, 0, 2);
        let err = Z2Vector::from_support(code.n_qubits(), [0, 7, 100]);
        let truth = code.syndrome(&err).0;
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let exact = measure_syndrome(&code, &err, [&ball], 0.0, &mut rng);
        let inverted = measure_syndrome(&code, &err, [&ball], 1.0, &mut rng);
        let measured: Vec<usize> = ball.variable_checks.iter().chain(&ball.fixed_checks).copied().collect();
        assert_eq!(exact.mask.weight(), measured.len());
        for s in 0..code.n_checks() {
            if measured.contains(&s) {
                assert_eq!(exact.get(s), Some(truth.get(s)));
                assert_eq!(inverted.get(s), Some(!truth.get(s)));
            } else {
                assert_eq!(exact.get(s), None);
                assert_eq!(inverted.get(s), None);
            }
        }
    }

    #[test]
    fn seeded_misreports_are_stable() {
        let code = code4(3);
        let ball = Ball::new(&code, 0, 2);
        let zero = Z2Vector::zeros(code.n_qubits());
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let m = measure_syndrome(&code, &zero, [&ball], 0.5, &mut rng);
        let flipped: Vec<usize> = m.bits.support().take(12).collect();
        let again = measure_syndrome(&code, &zero, [&ball], 0.5, &mut ChaCha8Rng::seed_from_u64(2024));
        assert_eq!(m, again);
        assert_eq!(flipped, GOLDEN);
    }

    const GOLDEN: [usize; 12] = [0, 5, 6, 7, 8, 13, 15, 17, 20, 25, 27, 28];
}
