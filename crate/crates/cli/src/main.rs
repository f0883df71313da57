use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use numphase::audit::{
    audit_atomic_excess, audit_entropy_sum, audit_mixed_qubits, audit_oscillator_excess,
    audit_theorem1,
};
use numphase::distributions::{number_distribution, phase_distribution};
use numphase::mu_search::search_mu_with;
use numphase::mu_search::MuSearchOptions;
use numphase::state::ExplicitMatrix;
use numphase::sweep::{
    evaluate, sweep_atomic, sweep_oscillator, write_atomic_csv, write_oscillator_csv,
    KernelChoice, SweepConfig, SweepFamily, DEFAULT_SWEEP_MU,
};
use numphase::{Audit, StateSpec};

#[derive(Parser, Debug)]
#[command(name = "numphase", version, about = "Number-phase entropy excess toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Random seed.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Phase grid size (even, >= 64; raised to 2*dim when needed).
    #[arg(long = "grid-k", global = true, default_value_t = numphase::DEFAULT_GRID_K)]
    grid_k: usize,
    /// Fock tail tolerance for coherent states.
    #[arg(long = "tail-tol", global = true, default_value_t = 1e-12)]
    tail_tol: f64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Atomic coherent-state sweep over alpha' (CSV).
    SweepAtomic(SweepAtomicArgs),
    /// Glauber coherent-state sweep over alpha (CSV).
    SweepOscillator(SweepOscillatorArgs),
    /// Search for the largest mu with H[m] - mu R[phi] >= 0 (JSON).
    MuSearch(MuSearchArgs),
    /// Run an inequality audit; exit 0 on pass, 2 on violation.
    Verify(VerifyArgs),
    /// Evaluate one state (JSON).
    Eval(EvalArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KernelArg {
    Canonical,
    Su2,
}

impl From<KernelArg> for KernelChoice {
    fn from(k: KernelArg) -> Self {
        match k {
            KernelArg::Canonical => KernelChoice::Canonical,
            KernelArg::Su2 => KernelChoice::Su2,
        }
    }
}

#[derive(Args, Debug)]
struct SweepAtomicArgs {
    #[arg(long, default_value_t = 2)]
    d: usize,
    #[arg(long = "beta-p", default_value_t = 0.0)]
    beta_p: f64,
    #[arg(long = "alpha-start", default_value_t = 0.0)]
    alpha_start: f64,
    #[arg(long = "alpha-stop", default_value_t = std::f64::consts::PI)]
    alpha_stop: f64,
    #[arg(long, default_value_t = 181)]
    steps: usize,
    #[arg(long, value_enum, default_value = "su2")]
    kernel: KernelArg,
    #[arg(long, default_value_t = DEFAULT_SWEEP_MU)]
    mu: f64,
    /// Output CSV (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SweepOscillatorArgs {
    #[arg(long = "alpha-start", default_value_t = 0.0)]
    alpha_start: f64,
    #[arg(long = "alpha-stop", default_value_t = 3.0)]
    alpha_stop: f64,
    #[arg(long, default_value_t = 61)]
    steps: usize,
    #[arg(long, value_enum, default_value = "canonical")]
    kernel: KernelArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct MuSearchArgs {
    #[arg(long)]
    d: usize,
    #[arg(long, default_value_t = 100_000)]
    budget: usize,
    #[arg(long, value_enum, default_value = "su2")]
    kernel: KernelArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum Suite {
    Theorem1,
    Eq7,
    Eq6,
    #[value(alias = "mixed_mu")]
    MixedMu,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Audit suite.
    #[arg(value_enum, required_unless_present = "suite_flag", conflicts_with = "suite_flag")]
    suite: Option<Suite>,
    #[arg(long = "suite", value_enum, id = "suite_flag", value_name = "SUITE")]
    suite_flag: Option<Suite>,
    /// Random samples (states, or mixtures for mixed-mu).
    #[arg(long, default_value_t = 1_000)]
    samples: usize,
    /// theorem1: single dimension (default 2..=5). eq7: audit random
    /// atomic states of this dimension instead of the oscillator set.
    #[arg(long)]
    d: Option<usize>,
    /// Default 1 for eq7, 4.035 for mixed-mu.
    #[arg(long)]
    mu: Option<f64>,
    /// Phase kernel for atomic eq7 audits.
    #[arg(long, value_enum)]
    kernel: Option<KernelArg>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EvalArgs {
    /// StateSpec JSON, or @path to a file holding it.
    #[arg(long)]
    spec: Option<String>,
    /// Explicit density matrix JSON file {"dim","re","im","kind"}.
    #[arg(long)]
    matrix: Option<PathBuf>,
    /// Fock state index (use with --d for the dimension).
    #[arg(long)]
    fock: Option<usize>,
    /// Glauber coherent amplitude (real part).
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long = "alpha-im", default_value_t = 0.0)]
    alpha_im: f64,
    /// Atomic coherent polar angle (use with --d and --beta-p).
    #[arg(long = "alpha-p")]
    alpha_p: Option<f64>,
    #[arg(long = "beta-p", default_value_t = 0.0)]
    beta_p: f64,
    /// Equatorial qubit phase.
    #[arg(long)]
    equatorial: Option<f64>,
    /// Haar-random pure state with this seed (use with --d).
    #[arg(long)]
    random: Option<u64>,
    #[arg(long)]
    d: Option<usize>,
    /// Default: su2 for atomic states, canonical for oscillator states.
    #[arg(long, value_enum)]
    kernel: Option<KernelArg>,
    #[arg(long, default_value_t = 1.0)]
    mu: f64,
    #[arg(long = "number-csv")]
    number_csv: Option<PathBuf>,
    #[arg(long = "phase-csv")]
    phase_csv: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Exit code 1 (configuration) vs 2 (inequality violated).
enum Outcome {
    Ok,
    Violation,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    // Usage errors are configuration errors (exit 1); clap's own code 2 is
    // reserved for inequality violations.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Violation) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    match &cli.command {
        Command::SweepAtomic(a) => sweep_atomic_cmd(cli, a),
        Command::SweepOscillator(a) => sweep_oscillator_cmd(cli, a),
        Command::MuSearch(a) => mu_search_cmd(cli, a),
        Command::Verify(a) => verify_cmd(cli, a),
        Command::Eval(a) => eval_cmd(cli, a),
    }
}

fn output(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json<T: Serialize>(path: Option<&Path>, value: &T) -> anyhow::Result<()> {
    let mut out = output(path)?;
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn sweep_atomic_cmd(cli: &Cli, a: &SweepAtomicArgs) -> anyhow::Result<Outcome> {
    let cfg = SweepConfig {
        family: SweepFamily::AtomicCoherent { d: a.d, beta_p: a.beta_p },
        start: a.alpha_start,
        stop: a.alpha_stop,
        steps: a.steps,
        kernel: a.kernel.into(),
        mu: a.mu,
        grid_k: cli.grid_k,
        tail_tol: cli.tail_tol,
    };
    let rows = sweep_atomic::<f64>(&cfg)?;
    let mut out = output(a.out.as_deref())?;
    write_atomic_csv(&mut out, &rows)?;
    out.flush()?;
    let min = rows.iter().map(|r| r.x_mu).fold(f64::INFINITY, f64::min);
    log::info!("min X_mu over sweep: {min:e}");
    Ok(Outcome::Ok)
}

fn sweep_oscillator_cmd(cli: &Cli, a: &SweepOscillatorArgs) -> anyhow::Result<Outcome> {
    let cfg = SweepConfig {
        family: SweepFamily::Glauber,
        start: a.alpha_start,
        stop: a.alpha_stop,
        steps: a.steps,
        kernel: a.kernel.into(),
        mu: 1.0,
        grid_k: cli.grid_k,
        tail_tol: cli.tail_tol,
    };
    let sweep = sweep_oscillator::<f64>(&cfg)?;
    let mut out = output(a.out.as_deref())?;
    write_oscillator_csv(&mut out, &sweep.rows)?;
    out.flush()?;
    eprintln!(
        "h_increasing={} r_increasing={} max_truncation_loss={:e}",
        sweep.h_increasing, sweep.r_increasing, sweep.max_truncation_loss
    );
    Ok(Outcome::Ok)
}

fn mu_search_cmd(cli: &Cli, a: &MuSearchArgs) -> anyhow::Result<Outcome> {
    let kernel = KernelChoice::from(a.kernel).build::<f64>(a.d)?;
    let mut opts = MuSearchOptions::new(a.d, a.budget, cli.seed);
    opts.grid_k = cli.grid_k;
    let report = search_mu_with(&kernel, &opts)?;
    write_json(a.out.as_deref(), &report)?;
    Ok(Outcome::Ok)
}

#[derive(Serialize)]
struct VerifySummary {
    suite: Suite,
    samples: usize,
    seed: u64,
    mu: Option<f64>,
    passed: bool,
    min_margin: f64,
    worst_case: String,
    audits: Vec<Audit>,
}

fn verify_cmd(cli: &Cli, a: &VerifyArgs) -> anyhow::Result<Outcome> {
    let suite = a.suite.or(a.suite_flag).context("missing suite")?;
    if a.samples < 1 {
        bail!("--samples must be at least 1");
    }
    let (mu, audits) = match suite {
        Suite::Theorem1 => {
            let dims: Vec<usize> = match a.d {
                Some(d) if d >= 2 => vec![d],
                Some(d) => bail!("--d must be at least 2 (got {d})"),
                None => (2..=5).collect(),
            };
            let audits = dims
                .into_iter()
                .map(|d| audit_theorem1::<f64>(d, a.samples, cli.seed))
                .collect::<Result<Vec<_>, _>>()?;
            (None, audits)
        }
        Suite::Eq6 => (None, vec![audit_entropy_sum::<f64>(a.samples, cli.seed, cli.tail_tol, cli.grid_k)?]),
        Suite::Eq7 => {
            let mu = a.mu.unwrap_or(1.0);
            let audit = match a.d {
                Some(d) => {
                    let kernel = KernelChoice::from(a.kernel.unwrap_or(KernelArg::Su2)).build(d)?;
                    audit_atomic_excess::<f64>(&kernel, mu, a.samples, cli.seed, cli.grid_k)?
                }
                None => {
                    if matches!(a.kernel, Some(KernelArg::Su2)) {
                        bail!("the oscillator audit uses the canonical kernel; pass --d for atomic states");
                    }
                    audit_oscillator_excess::<f64>(mu, a.samples, cli.seed, cli.tail_tol, cli.grid_k)?
                }
            };
            (Some(mu), vec![audit])
        }
        Suite::MixedMu => {
            let mu = a.mu.unwrap_or(4.035);
            (Some(mu), vec![audit_mixed_qubits::<f64>(mu, a.samples, cli.seed, cli.grid_k)?])
        }
    };
    let worst = audits
        .iter()
        .min_by(|x, y| x.min_margin.total_cmp(&y.min_margin))
        .expect("at least one audit");
    let summary = VerifySummary {
        suite,
        samples: a.samples,
        seed: cli.seed,
        mu,
        passed: audits.iter().all(|x| x.passed),
        min_margin: worst.min_margin,
        worst_case: worst.worst_case.clone(),
        audits: audits.clone(),
    };
    write_json(a.out.as_deref(), &summary)?;
    Ok(if summary.passed { Outcome::Ok } else { Outcome::Violation })
}

fn eval_spec(a: &EvalArgs) -> anyhow::Result<StateSpec> {
    let mut specs = Vec::new();
    if let Some(text) = &a.spec {
        let json = match text.strip_prefix('@') {
            Some(path) => std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?,
            None => text.clone(),
        };
        specs.push(serde_json::from_str(&json).context("parsing --spec")?);
    }
    if let Some(path) = &a.matrix {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        specs.push(StateSpec::ExplicitMatrix(ExplicitMatrix::from_json(&text)?));
    }
    let need_d = |what: &str| a.d.with_context(|| format!("{what} needs --d"));
    if let Some(m) = a.fock {
        specs.push(StateSpec::Fock { m, dim: need_d("--fock")? });
    }
    if let Some(re) = a.alpha {
        specs.push(StateSpec::GlauberCoherent { re, im: a.alpha_im, cutoff: None, tail_tol: None });
    }
    if let Some(alpha_p) = a.alpha_p {
        specs.push(StateSpec::AtomicCoherent { alpha_p, beta_p: a.beta_p, d: need_d("--alpha-p")? });
    }
    if let Some(phi0) = a.equatorial {
        specs.push(StateSpec::Equatorial { phi0 });
    }
    if let Some(seed) = a.random {
        specs.push(StateSpec::RandomPure { seed, d: need_d("--random")? });
    }
    match specs.len() {
        1 => Ok(specs.pop().expect("one spec")),
        0 => bail!("no state given (use --spec, --matrix, --fock, --alpha, --alpha-p, --equatorial or --random)"),
        _ => bail!("more than one state given"),
    }
}

fn eval_cmd(cli: &Cli, a: &EvalArgs) -> anyhow::Result<Outcome> {
    let mut spec = eval_spec(a)?;
    if let StateSpec::GlauberCoherent { tail_tol, cutoff: None, .. } = &mut spec {
        tail_tol.get_or_insert(cli.tail_tol);
    }
    let state = spec.build::<f64>()?;
    let kernel = a.kernel.map(KernelChoice::from).unwrap_or_else(|| KernelChoice::default_for(&state));
    let evaluation = evaluate(&state, kernel, a.mu, cli.grid_k)?;
    if let Some(path) = &a.number_csv {
        let mut out = output(Some(path))?;
        number_distribution(&state).write_csv(&mut out)?;
        out.flush()?;
    }
    if let Some(path) = &a.phase_csv {
        let g = kernel.build::<f64>(state.dim())?;
        let mut out = output(Some(path))?;
        phase_distribution(&state, &g, cli.grid_k)?.write_csv(&mut out)?;
        out.flush()?;
    }
    #[derive(Serialize)]
    struct EvalOutput<'a> {
        state: &'a StateSpec,
        evaluation: numphase::sweep::Evaluation<f64>,
    }
    write_json(a.out.as_deref(), &EvalOutput { state: &spec, evaluation })?;
    Ok(Outcome::Ok)
}
