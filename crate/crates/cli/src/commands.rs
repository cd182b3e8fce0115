use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use hyperdec::code::{CssCode, Verdict};
use hyperdec::complex::{
    build_hypercubic_torus, load_complex, torus_cell_index, torus_vertex_index, write_complex, ChainComplex,
};
use hyperdec::decoder::{Convergence, DecodeError, DecodeState, Decoder, DecoderConfig, MAX_KERNEL_CAP};
use hyperdec::memory::{default_delta, simulate, NoiseConfig, Outcome, TrialConfig};
use hyperdec::sweep::{render_csv, run_sweep, SweepError, SweepSpec};
use hyperdec::z2::Z2Vector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{DecoderArgs, Source, SweepArgs};

pub const EXIT_INPUT: u8 = 2;
pub const EXIT_LOGICAL: u8 = 3;
pub const EXIT_TIMEOUT: u8 = 4;
pub const EXIT_CAP: u8 = 5;

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Io(String),
    Decode(DecodeError),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Io(_) => 1,
            CliError::Decode(DecodeError::SizeExceeded { .. }) => EXIT_CAP,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Io(m) => f.write_str(m),
            CliError::Decode(e) => write!(f, "{e}"),
        }
    }
}

impl From<DecodeError> for CliError {
    fn from(e: DecodeError) -> Self {
        CliError::Decode(e)
    }
}

fn input(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

/// A loaded complex plus, for tori, the builder parameters.
struct Loaded {
    complex: ChainComplex,
    torus: Option<(usize, usize)>,
}

fn parse_torus(tokens: &[String]) -> Result<(usize, usize), CliError> {
    let mut d = None;
    let mut l = None;
    for tok in tokens {
        let (key, value) = tok
            .split_once('=')
            .ok_or_else(|| input(format!("torus argument `{tok}` is not KEY=VALUE")))?;
        let value: usize = value
            .parse()
            .map_err(|_| input(format!("torus argument `{tok}` needs an integer value")))?;
        match key {
            "d" => d = Some(value),
            "L" | "l" => l = Some(value),
            _ => return Err(input(format!("unknown torus key `{key}` (expected d or L)"))),
        }
    }
    let d = d.ok_or_else(|| input("torus needs d=<dimension>"))?;
    let l = l.ok_or_else(|| input("torus needs L=<side>"))?;
    if !(2..=4).contains(&d) {
        return Err(input(format!("torus dimension must be 2, 3 or 4, not {d}")));
    }
    if l < 2 {
        return Err(input(format!("torus side must be at least 2, not {l}")));
    }
    Ok((d, l))
}

fn load(source: &Source) -> Result<Loaded, CliError> {
    match (&source.torus, &source.file) {
        (Some(tokens), None) => {
            let (d, l) = parse_torus(tokens)?;
            Ok(Loaded {
                complex: build_hypercubic_torus(d, l),
                torus: Some((d, l)),
            })
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
            let complex = load_complex(&text).map_err(|e| input(format!("{}: {e}", path.display())))?;
            Ok(Loaded { complex, torus: None })
        }
        _ => Err(input("give a complex with --torus d=.. L=.. or --file PATH")),
    }
}

fn build_code(source: &Source, complex: ChainComplex) -> Result<CssCode, CliError> {
    let d = complex.dim();
    let k = source.grade.unwrap_or((d / 2).max(1));
    if k == 0 || k >= d {
        return Err(input(format!(
            "qubit grade {k} must lie in 1..{d} for a {d}-dimensional complex"
        )));
    }
    Ok(if source.dual {
        CssCode::dual_from_complex(complex, k)
    } else {
        CssCode::from_complex(complex, k)
    })
}

fn decoder_config(args: &DecoderArgs) -> Result<DecoderConfig, CliError> {
    if args.r_dec == 0 {
        return Err(input("r_dec must be at least 1"));
    }
    if args.kernel_cap > MAX_KERNEL_CAP {
        return Err(input(format!(
            "kernel cap {} above the ceiling {MAX_KERNEL_CAP}",
            args.kernel_cap
        )));
    }
    if let Some(rho) = args.rho {
        if !(rho > 0.0 && rho <= 1.0) {
            return Err(input(format!("rho {rho} outside (0, 1]")));
        }
    }
    Ok(DecoderConfig {
        r_dec: args.r_dec,
        rho: args.rho,
        kernel_cap: args.kernel_cap,
        scheme: args.scheme,
        solver: args.solver.into(),
        state_budget: (args.state_budget > 0).then_some(args.state_budget),
    })
}

pub fn info(source: &Source, emit: Option<&Path>) -> Result<u8, CliError> {
    let loaded = load(source)?;
    if let Some(path) = emit {
        std::fs::write(path, write_complex(&loaded.complex))
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    let c = &loaded.complex;
    let counts: Vec<String> = c.counts().iter().map(ToString::to_string).collect();
    println!("dimension: {}", c.dim());
    println!("cells: {}", counts.join(" "));
    println!("euler characteristic: {}", c.euler_characteristic());
    match c.systole_hint() {
        Some(s) => println!("systole: {s}"),
        None => println!("systole: unknown"),
    }
    let code = build_code(source, loaded.complex)?;
    let ((zmin, zmax), (xmin, xmax)) = code.check_weights();
    println!("qubit grade: {}", code.qubit_grade());
    println!("orientation: {}", if source.dual { "dual" } else { "primal" });
    println!("qubits: {}", code.n_qubits());
    println!("z checks: {}", code.n_checks());
    println!("x checks: {}", code.x_checks().rows());
    println!("logical: {}", code.n_logical());
    println!("z check weight: {zmin}..{zmax}");
    println!("x check weight: {xmin}..{xmax}");
    Ok(0)
}

fn parse_error(
    spec: &str,
    code: &CssCode,
    torus: Option<(usize, usize)>,
    rng: &mut ChaCha8Rng,
) -> Result<Z2Vector, CliError> {
    let n = code.n_qubits();
    if spec == "none" {
        return Ok(Z2Vector::zeros(n));
    }
    let (kind, value) = spec.split_once('=').ok_or_else(|| {
        input(format!(
            "error spec `{spec}` should be none, cells=.., plane=.. or random=.."
        ))
    })?;
    match kind {
        "cells" => {
            let mut e = Z2Vector::zeros(n);
            for tok in value.split(',').filter(|t| !t.is_empty()) {
                let q: usize = tok
                    .trim()
                    .parse()
                    .map_err(|_| input(format!("bad cell index `{tok}`")))?;
                if q >= n {
                    return Err(input(format!("cell {q} out of range (code has {n} qubits)")));
                }
                e.flip(q);
            }
            Ok(e)
        }
        "plane" => {
            let (d, l) = torus.ok_or_else(|| input("plane errors need a --torus complex"))?;
            let k = code.qubit_grade();
            let mut axes = Vec::new();
            for ch in value.chars() {
                let a = ch
                    .to_digit(10)
                    .map(|a| a as usize)
                    .filter(|&a| a < d)
                    .ok_or_else(|| input(format!("plane axis `{ch}` must be a digit below {d}")))?;
                if axes.contains(&a) {
                    return Err(input(format!("plane axis {a} repeated")));
                }
                axes.push(a);
            }
            if axes.len() != k {
                return Err(input(format!("plane needs {k} axes for grade-{k} qubits")));
            }
            axes.sort_unstable();
            let mut e = Z2Vector::zeros(n);
            let mut coords = vec![0i64; d];
            for idx in 0..l.pow(k as u32) {
                let mut rest = idx;
                for &a in &axes {
                    coords[a] = (rest % l) as i64;
                    rest /= l;
                }
                e.flip(torus_cell_index(d, k, torus_vertex_index(l, &coords), &axes));
            }
            Ok(e)
        }
        "random" => {
            let p: f64 = value.parse().map_err(|_| input(format!("bad probability `{value}`")))?;
            if !(0.0..=1.0).contains(&p) {
                return Err(input(format!("probability {p} outside [0, 1]")));
            }
            Ok(Z2Vector::from_support(n, (0..n).filter(|_| rng.gen_bool(p))))
        }
        _ => Err(input(format!("unknown error kind `{kind}`"))),
    }
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Trivial => "trivial",
        Verdict::Logical => "logical",
        Verdict::Unresolved => "unresolved",
    }
}

pub fn decode(source: &Source, args: &DecoderArgs, error: &str, max_rounds: usize) -> Result<u8, CliError> {
    let loaded = load(source)?;
    let torus = loaded.torus;
    let code = build_code(source, loaded.complex)?;
    let cfg = decoder_config(args)?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let err = parse_error(error, &code, torus, &mut rng)?;
    let decoder = Decoder::new(&code, cfg);
    let mut state = DecodeState::from_error(&code, err.clone());
    println!("error weight: {}", err.weight());
    println!("syndrome weight: {}", state.syndrome.weight());
    let conv = decoder.decode_to_convergence(&mut state, max_rounds, &mut rng)?;
    let (rounds, flips) = match &conv {
        Convergence::Converged { rounds, flips } | Convergence::Timeout { rounds, flips, .. } => (*rounds, *flips),
    };
    println!("rounds: {rounds}");
    println!("flips: {flips}");
    println!("residual syndrome weight: {}", state.syndrome.weight());
    let verdict = code.residual_verdict(&state.frame);
    println!("verdict: {}", verdict_name(verdict));
    Ok(match verdict {
        Verdict::Trivial => 0,
        Verdict::Logical => EXIT_LOGICAL,
        Verdict::Unresolved => EXIT_TIMEOUT,
    })
}

pub struct MemoryArgs {
    pub p: f64,
    pub q: f64,
    pub tau: usize,
    pub delta: Option<usize>,
    pub trials: usize,
    pub weights: bool,
}

pub fn memory_sim(source: &Source, args: &DecoderArgs, mem: MemoryArgs) -> Result<u8, CliError> {
    for (name, x) in [("p", mem.p), ("q", mem.q)] {
        if !(0.0..=1.0).contains(&x) {
            return Err(input(format!("{name} = {x} outside [0, 1]")));
        }
    }
    if mem.trials == 0 {
        return Err(input("trials must be at least 1"));
    }
    if mem.delta == Some(0) {
        return Err(input("delta must be at least 1"));
    }
    let loaded = load(source)?;
    let code = build_code(source, loaded.complex)?;
    let decoder = Decoder::new(&code, decoder_config(args)?);
    let cfg = TrialConfig {
        tau: mem.tau,
        delta: mem.delta.unwrap_or_else(|| default_delta(code.n_qubits())),
        noise: NoiseConfig::iid(mem.p, mem.q),
    };
    let mut outcomes: BTreeMap<&str, usize> = BTreeMap::new();
    let mut rounds_hist: BTreeMap<usize, usize> = BTreeMap::new();
    let (mut max_cells, mut max_diam, mut inexact) = (0, 0, 0);
    for t in 0..mem.trials as u64 {
        let (r, _) = simulate(&decoder, &cfg, args.seed, t)?;
        let name = match r.outcome {
            Outcome::Success => "success",
            Outcome::LogicalFailure => "logical_failure",
            Outcome::Timeout => "timeout",
        };
        *outcomes.entry(name).or_default() += 1;
        if r.outcome != Outcome::Timeout {
            *rounds_hist.entry(r.rounds_used).or_default() += 1;
        }
        max_cells = max_cells.max(r.max_component_cells);
        max_diam = max_diam.max(r.max_component_diameter);
        inexact += r.inexact_solves;
        if mem.weights {
            let w: Vec<String> = r.syndrome_weights.iter().map(ToString::to_string).collect();
            println!("weights {t}: {}", w.join(","));
        }
    }
    println!("trials: {}", mem.trials);
    for name in ["success", "logical_failure", "timeout"] {
        println!("{name}: {}", outcomes.get(name).copied().unwrap_or(0));
    }
    let hist: Vec<String> = rounds_hist.iter().map(|(r, c)| format!("{r}:{c}")).collect();
    println!("rounds to zero syndrome: {}", hist.join(" "));
    println!("largest component: {max_cells} cells, footprint diameter {max_diam}");
    println!("inexact ball solves: {inexact}");
    Ok(0)
}

pub fn sweep(args: SweepArgs) -> Result<u8, CliError> {
    let mut spec = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
            toml::from_str::<SweepSpec>(&text).map_err(|e| input(format!("{}: {e}", path.display())))?
        }
        None => SweepSpec::new(Vec::new(), Vec::new()),
    };
    if let Some(v) = args.dim {
        spec.dim = v;
    }
    if args.grade.is_some() {
        spec.grade = args.grade;
    }
    if let Some(v) = args.l {
        spec.l = v;
    }
    if let Some(v) = args.p {
        spec.p = v;
    }
    if args.q.is_some() {
        spec.q = args.q;
    }
    if let Some(v) = args.r_dec {
        spec.r_dec = v;
    }
    if let Some(v) = args.scheme {
        spec.scheme = v;
    }
    if let Some(v) = args.tau {
        spec.tau = v;
    }
    if args.delta.is_some() {
        spec.delta = args.delta;
    }
    if let Some(v) = args.trials {
        spec.trials = v;
    }
    if let Some(v) = args.seed {
        spec.seed = v;
    }
    if let Some(v) = args.state_budget {
        spec.state_budget = v;
    }
    if args.output.is_some() {
        spec.output = args.output;
    }
    spec.wall_time |= args.wall_time;
    spec.validate().map_err(input)?;

    let rows = run_sweep(&spec).map_err(|e| match e {
        SweepError::Spec(m) => input(m),
        SweepError::Decode(d) => CliError::Decode(d),
    })?;
    let csv = render_csv(&spec, &rows);
    match &spec.output {
        Some(path) => std::fs::write(path, csv).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => print!("{csv}"),
    }
    Ok(0)
}
