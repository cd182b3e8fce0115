use hyperdec::code::CssCode;
use hyperdec::complex::{build_hypercubic_torus, SpacetimeCell};
use hyperdec::decoder::{Decoder, DecoderConfig, Scheme};
use hyperdec::memory::{components, simulate, step, MemoryState, NoiseConfig, Outcome, SpacetimeChain, TrialConfig};
use hyperdec::z2::Z2Vector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn code4(l: usize) -> CssCode {
    CssCode::from_complex(build_hypercubic_torus(4, l), 2)
}

#[test]
fn noiseless_step_records_nothing() {
    let code = code4(3);
    let dec = Decoder::new(&code, DecoderConfig::default());
    let mut state = MemoryState::new(&code);
    let mut chain = SpacetimeChain::default();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let report = step(&dec, &mut state, &NoiseConfig::noiseless(), &mut chain, &mut rng).unwrap();
    assert!(chain.is_empty());
    assert!(state.error.is_zero());
    assert_eq!(report.correction_weight, 0);
}

#[test]
fn single_injected_error_is_cleared_in_one_step() {
    let code = code4(3);
    let dec = Decoder::new(&code, DecoderConfig::default());
    let mut chain = SpacetimeChain::default();
    let err = Z2Vector::unit(code.n_qubits(), 200);
    let mut state = MemoryState::with_initial_error(&code, err, &mut chain);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    step(&dec, &mut state, &NoiseConfig::noiseless(), &mut chain, &mut rng).unwrap();
    assert!(state.syndrome.is_zero());
    assert_eq!(code.residual_verdict(&state.error), hyperdec::code::Verdict::Trivial);
    let spacelike: Vec<_> = chain.cells.iter().filter(|c| c.is_spacelike()).collect();
    let timelike: Vec<_> = chain.cells.iter().filter(|c| !c.is_spacelike()).collect();
    assert_eq!(spacelike.len(), 2);
    assert_eq!(timelike.len(), 4);
    assert!(timelike.iter().all(|c| c.time() == 1));
    assert!(chain.boundary(&code).is_empty());
}

#[test]
fn noiseless_trial_succeeds_without_flips() {
    let code = code4(3);
    let dec = Decoder::new(&code, DecoderConfig::default());
    let cfg = TrialConfig {
        tau: 10,
        delta: 5,
        noise: NoiseConfig::noiseless(),
    };
    let (result, chain) = simulate(&dec, &cfg, 0, 0).unwrap();
    assert_eq!(result.outcome, Outcome::Success);
    assert_eq!(result.rounds_used, 0);
    assert!(chain.is_empty());
}

#[test]
fn noisy_runs_close_and_keep_books() {
    let code = code4(3);
    for scheme in [Scheme::Deterministic, Scheme::Randomized] {
        let dec = Decoder::new(
            &code,
            DecoderConfig {
                scheme,
                ..Default::default()
            },
        );
        let noise = NoiseConfig::iid(0.01, 0.01);
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let mut state = MemoryState::new(&code);
        let mut chain = SpacetimeChain::default();
        for i in 1..=50 {
            step(&dec, &mut state, &noise, &mut chain, &mut rng).unwrap();
            assert_eq!(chain.frame_through(i, code.n_qubits()), state.error);
        }
        // With residual syndrome left open the boundary is that syndrome on the top slice.
        let open: Vec<usize> = chain
            .boundary(&code)
            .into_iter()
            .map(|f| match f {
                hyperdec::complex::SpacetimeFace::Slice { index, time } => {
                    assert_eq!(time, 50);
                    index
                }
                other => panic!("unexpected face {other:?}"),
            })
            .collect();
        assert_eq!(open, state.syndrome.support().collect::<Vec<_>>());

        let cfg = TrialConfig {
            tau: 50,
            delta: 20,
            noise,
        };
        for trial in 0..5 {
            let (result, chain) = simulate(&dec, &cfg, 5, trial).unwrap();
            if result.outcome != Outcome::Timeout {
                assert!(chain.boundary(&code).is_empty());
            }
        }
    }
}

#[test]
fn heavy_noise_defeats_decoding() {
    let code = code4(2);
    let dec = Decoder::new(&code, DecoderConfig::default());
    let cfg = TrialConfig {
        tau: 20,
        delta: 10,
        noise: NoiseConfig::iid(0.3, 0.3),
    };
    let failures = (0..40)
        .filter(|&t| simulate(&dec, &cfg, 3, t).unwrap().0.outcome != Outcome::Success)
        .count();
    assert!(failures > 20, "only {failures} of 40 failed");
}

/// Torus L1 distance from coordinates.
fn torus_distance(a: &[i64], b: &[i64], l: i64) -> u32 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = (x - y).rem_euclid(l);
            d.min(l - d) as u32
        })
        .sum()
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Union-find over every pair, with adjacency decided cell by cell.
fn oracle_components(code: &CssCode, chain: &SpacetimeChain, r_link: u32, l: i64) -> Vec<Vec<SpacetimeCell>> {
    let coords = code.complex().coords().unwrap();
    let qv = |q: usize| code.qubit_vertices(q);
    let attached = |a: SpacetimeCell, b: SpacetimeCell| -> bool {
        use SpacetimeCell::*;
        match (a, b) {
            (Spacelike { index: q, time: i }, Spacelike { index: r, time: j }) => {
                i == j
                    && qv(q).iter().any(|&x| {
                        qv(r)
                            .iter()
                            .any(|&y| torus_distance(&coords[x], &coords[y], l) <= r_link)
                    })
            }
            (Spacelike { index: q, time: i }, Timelike { index: s, time: j })
            | (Timelike { index: s, time: j }, Spacelike { index: q, time: i }) => {
                (j == i || j == i + 1) && code.z_checks().get(s, q)
            }
            (Timelike { index: s, time: i }, Timelike { index: t, time: j }) => {
                (s == t && i.abs_diff(j) == 1)
                    || (i == j
                        && code
                            .faces_of_check(s)
                            .iter()
                            .any(|f| code.faces_of_check(t).contains(f)))
            }
        }
    };
    let n = chain.cells.len();
    let mut parent: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in i + 1..n {
            if attached(chain.cells[i], chain.cells[j]) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<SpacetimeCell>> = Default::default();
    for i in 0..n {
        let root = find(&mut parent, i);
        groups.entry(root).or_default().push(chain.cells[i]);
    }
    let mut out: Vec<Vec<SpacetimeCell>> = groups
        .into_values()
        .map(|mut g| {
            g.sort_unstable();
            g
        })
        .collect();
    out.sort();
    out
}

#[test]
fn components_match_union_find() {
    let code = code4(3);
    let dec = Decoder::new(&code, DecoderConfig::default());
    let cfg = TrialConfig {
        tau: 50,
        delta: 20,
        noise: NoiseConfig::iid(0.002, 0.002),
    };
    for trial in 0..10 {
        let (result, chain) = simulate(&dec, &cfg, 11, trial).unwrap();
        let mut ours: Vec<Vec<SpacetimeCell>> = components(&code, &chain, 4).into_iter().map(|c| c.cells).collect();
        ours.sort();
        let theirs = oracle_components(&code, &chain, 4, 3);
        assert_eq!(ours, theirs);
        assert_eq!(result.components, theirs.len());
        let total: usize = theirs.iter().map(Vec::len).sum();
        assert_eq!(total, chain.len());
    }
}
