//! `elocc`: command-line front end for the entanglement-conversion toolkit.
//!
//! Exit codes: 0 possible / success, 1 impossible / failed check,
//! 2 unknown, 64 malformed input or usage, 66 unreadable input,
//! 70 internal failure.

mod input;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use elocc_core::catalysis::{
    catalysis_free_radius, catalyst_search, close_mixed_catalysis_pair, elocc_with_catalyst_tol, CatalystSearchConfig,
};
use elocc_core::majorize::epsilon_order_radius;
use elocc_core::mixedcat::{
    class_from_spec, elocc_protocol_execute, epsilon_threshold, f_elocc_lower_bound, f_locc_upper_bound,
    family_spectrum, lemma1_check, product_vectors_in_span, separable_fidelity, separation_crossover,
};
use elocc_core::presets;
use elocc_core::purify::{lambda0_bisect, orthocomplement_state, random_separable_attack, KentClassState};
use elocc_core::qcore::io::{write_state, StateFile};
use elocc_core::qcore::trace_distance;
use elocc_core::repro::{paper_repro, ReproConfig};
use elocc_core::transform::locc_spectra;
use elocc_core::{is_majorized, Error, Spectrum, Tolerances, Verdict};

use input::{load_pure, load_spec, load_spectrum, InputError, CLASS_PRESET};

const EXIT_USAGE: u8 = 64;
const EXIT_NOINPUT: u8 = 66;
const EXIT_SOFTWARE: u8 = 70;

#[derive(Parser)]
#[command(name = "elocc", version, about = "Pure and mixed bipartite state conversion under LOCC and with catalysts")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Global {
    /// Slack on prefix-sum comparisons.
    #[arg(long, global = true, default_value_t = Tolerances::DEFAULT.majorization)]
    tol: f64,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Schmidt spectrum of a pure state (preset name, file, or - for stdin).
    Schmidt {
        state: String,
        /// Also write the state in canonical form to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Prefix-sum table of `alpha ≺ beta`; exit 0 if it holds, 1 otherwise.
    Majorize { alpha: String, beta: String },
    /// Decide `source → target` by LOCC, with a given catalyst, or by catalyst search.
    Decide {
        source: String,
        target: String,
        /// Catalyst spectrum as a JSON array or a pure-state argument.
        #[arg(long)]
        catalyst: Option<String>,
        /// Search catalysts up to this Schmidt rank when LOCC fails.
        #[arg(long)]
        search_dim: Option<usize>,
        /// Grid resolution of the catalyst search.
        #[arg(long, default_value_t = CatalystSearchConfig::default().grid_steps)]
        grid: usize,
    },
    /// Marginal test for a rank-two mixed-state conversion.
    Lemma1 {
        #[arg(long, default_value = CLASS_PRESET)]
        spec: String,
        /// Mixing weight for the class preset.
        #[arg(long, default_value_t = 0.5)]
        lambda: f64,
    },
    /// Run the measure-then-convert protocol and compare with the target.
    Protocol {
        #[arg(long, default_value = CLASS_PRESET)]
        spec: String,
        #[arg(long, default_value_t = 0.5)]
        lambda: f64,
        /// Catalyst spectrum (defaults to the two-qubit catalyst).
        #[arg(long)]
        catalyst: Option<String>,
        /// Write the output state to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fidelity bounds with and without a catalyst on the `ε` family.
    Bounds {
        /// Only this mixing weight (default 0.1, …, 0.9).
        #[arg(long)]
        lambda: Option<f64>,
        /// Only this `ε` (default an evenly spaced grid).
        #[arg(long)]
        epsilon: Option<f64>,
        /// Number of `ε` steps on [0, 1].
        #[arg(long, default_value_t = 10)]
        grid: usize,
    },
    /// Product-order radius and catalysis-free fidelity radius.
    Radius {
        #[arg(default_value = "[0.4,0.4,0.1,0.1]")]
        alpha: String,
        #[arg(default_value = "omega-catalyst")]
        gamma: String,
    },
    /// Mixed pair at fidelity above `1 − δ` that needs a catalyst.
    ClosePair {
        #[arg(long, default_value_t = 0.01)]
        delta: f64,
        /// Write sigma.json and rho.json here.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Random separable maps against a pure state mixed with its orthocomplement.
    Attack {
        /// Mixing weight (defaults to the PPT threshold).
        #[arg(long)]
        lambda: Option<f64>,
        /// Entangled component (preset or file).
        #[arg(long, default_value = "bell")]
        psi: String,
        /// Append a Bell-state catalyst.
        #[arg(long)]
        with_catalyst: bool,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
    },
    /// Rerun every reference check and print a pass/fail table.
    PaperRepro {
        /// Attack trials per run.
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        /// Steps of the `ε` grid for the bound comparison.
        #[arg(long, default_value_t = 100)]
        grid: usize,
    },
}

#[derive(Debug)]
enum Failure {
    Input(InputError),
    Write(String),
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Input(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(InputError::Lib(e))
    }
}

impl Failure {
    fn report(&self) -> u8 {
        match self {
            Failure::Input(InputError::Io(m)) => {
                eprintln!("error: {m}");
                EXIT_NOINPUT
            }
            Failure::Input(InputError::Lib(e)) => {
                eprintln!("error: {e}");
                match e {
                    Error::NonConvergence { .. } | Error::DimensionOverflow { .. } => EXIT_SOFTWARE,
                    _ => EXIT_USAGE,
                }
            }
            Failure::Write(m) => {
                eprintln!("error: {m}");
                EXIT_SOFTWARE
            }
        }
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let code = run(cli).unwrap_or_else(|f| f.report());
    ExitCode::from(code)
}

fn run(cli: Cli) -> Outcome {
    let g = cli.global;
    if !(g.tol >= 0.0 && g.tol.is_finite()) {
        return Err(Error::InvalidArgument(format!("--tol {} must be a finite nonnegative number", g.tol)).into());
    }
    match cli.command {
        Command::Schmidt { state, out } => schmidt(&g, &state, out),
        Command::Majorize { alpha, beta } => majorize(&g, &alpha, &beta),
        Command::Decide { source, target, catalyst, search_dim, grid } => {
            decide(&g, &source, &target, catalyst.as_deref(), search_dim, grid)
        }
        Command::Lemma1 { spec, lambda } => lemma1(&g, &spec, lambda),
        Command::Protocol { spec, lambda, catalyst, out } => protocol(&g, &spec, lambda, catalyst.as_deref(), out),
        Command::Bounds { lambda, epsilon, grid } => bounds(&g, lambda, epsilon, grid),
        Command::Radius { alpha, gamma } => radius(&g, &alpha, &gamma),
        Command::ClosePair { delta, out_dir } => close_pair(&g, delta, out_dir),
        Command::Attack { lambda, psi, with_catalyst, trials } => attack(&g, lambda, &psi, with_catalyst, trials),
        Command::PaperRepro { trials, grid } => repro(&g, trials, grid),
    }
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).unwrap_or_else(|_| v.to_string()));
}

fn write_file(path: &PathBuf, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Write(format!("{}: {e}", path.display())))
}

fn fmt_spectrum(s: &Spectrum) -> String {
    let parts: Vec<String> = s.values().iter().map(|v| format!("{v:.12}")).collect();
    format!("({})", parts.join(", "))
}

fn print_verdict(g: &Global, v: &Verdict, extra: Value) {
    if g.json {
        print_json(&json!({"verdict": v, "extra": extra, "tol": g.tol}));
    } else {
        println!("decision: {}", serde_json::to_value(v.decision).unwrap_or(Value::Null).as_str().unwrap_or("?"));
        println!("certificate: {}", serde_json::to_string(&v.certificate).unwrap_or_default());
        if !extra.is_null() {
            println!("{extra}");
        }
    }
}

fn schmidt(g: &Global, arg: &str, out: Option<PathBuf>) -> Outcome {
    let state = load_pure(arg)?;
    let spec = elocc_core::qcore::schmidt_spectrum(&state);
    if let Some(path) = out {
        write_file(&path, &write_state(&StateFile::Pure(state.clone())))?;
    }
    if g.json {
        print_json(&json!({"dimA": state.dim_a(), "dimB": state.dim_b(), "spectrum": spec}));
    } else {
        println!("{}", fmt_spectrum(&spec));
    }
    Ok(0)
}

fn majorize(g: &Global, a: &str, b: &str) -> Outcome {
    let alpha = load_spectrum(a)?;
    let beta = load_spectrum(b)?;
    let m = is_majorized(&alpha, &beta, g.tol);
    if g.json {
        print_json(&json!({"alpha": alpha, "beta": beta, "table": m}));
    } else {
        println!("{:>3} {:>18} {:>18}", "k", "sum alpha", "sum beta");
        for k in 0..m.prefix_alpha.len() {
            println!("{:>3} {:>18.15} {:>18.15}", k + 1, m.prefix_alpha[k], m.prefix_beta[k]);
        }
        match m.violation {
            None => println!("holds (tol {:e})", m.tol),
            Some(v) => println!("fails at k = {}: {} > {} (tol {:e})", v.k, v.lhs, v.rhs, m.tol),
        }
    }
    Ok(if m.holds { 0 } else { 1 })
}

fn decide(g: &Global, src: &str, tgt: &str, catalyst: Option<&str>, search_dim: Option<usize>, grid: usize) -> Outcome {
    let alpha = load_spectrum(src)?;
    let beta = load_spectrum(tgt)?;
    let verdict = match (catalyst, search_dim) {
        (Some(_), Some(_)) => {
            return Err(Error::InvalidArgument("--catalyst and --search-dim are exclusive".into()).into());
        }
        (Some(c), None) => elocc_with_catalyst_tol(&alpha, &beta, &load_spectrum(c)?, g.tol),
        (None, Some(d)) => {
            let direct = locc_spectra(&alpha, &beta, g.tol);
            if direct.is_possible() {
                direct
            } else {
                let cfg = CatalystSearchConfig { max_dim: d, grid_steps: grid, seed: g.seed, ..Default::default() };
                cfg.validate()?;
                catalyst_search(&alpha, &beta, &cfg)?
            }
        }
        (None, None) => locc_spectra(&alpha, &beta, g.tol),
    };
    print_verdict(g, &verdict, Value::Null);
    Ok(verdict.decision.exit_code() as u8)
}

fn lemma1(g: &Global, spec_arg: &str, lambda: f64) -> Outcome {
    let spec = load_spec(spec_arg, lambda)?;
    let products = product_vectors_in_span(&spec.phi, &spec.eta)?;
    let verdict = lemma1_check(&spec)?;
    print_verdict(g, &verdict, json!({"mu": spec.mu, "product_vectors_in_span": products.count}));
    Ok(verdict.decision.exit_code() as u8)
}

fn protocol(g: &Global, spec_arg: &str, lambda: f64, catalyst: Option<&str>, out: Option<PathBuf>) -> Outcome {
    let spec = load_spec(spec_arg, lambda)?;
    let omega = match catalyst {
        Some(c) => load_spectrum(c)?,
        None => presets::omega_spectrum(),
    };
    let target = class_from_spec(&spec)?.rho;
    let run = elocc_protocol_execute(&spec, &omega)?;
    let d = trace_distance(&run.rho_out, &target)?;
    if let Some(path) = out {
        write_file(&path, &write_state(&StateFile::Density(run.rho_out.clone())))?;
    }
    let ok = d <= 1e-10;
    if g.json {
        print_json(&json!({"transcript": run.transcript, "trace_distance": d, "pass": ok}));
    } else {
        let [p1, p2] = run.transcript.probabilities;
        println!("outcome probabilities: {p1:.12}, {p2:.12}");
        println!("projector rank: {}", run.transcript.projector_rank);
        println!("trace distance to target: {d:e}");
        println!("{}", if ok { "PASS" } else { "FAIL" });
    }
    Ok(if ok { 0 } else { 1 })
}

fn bounds(g: &Global, lambda: Option<f64>, epsilon: Option<f64>, grid: usize) -> Outcome {
    let core = presets::core_spectrum();
    let phi = presets::target_spectrum();
    let eps_t = epsilon_threshold(&core, &phi)?;
    let cross = separation_crossover(&phi, eps_t)?;
    let lambdas: Vec<f64> = match lambda {
        Some(l) => vec![l],
        None => (1..=9).map(|k| k as f64 / 10.0).collect(),
    };
    let eps: Vec<f64> = match epsilon {
        Some(e) => vec![e],
        None => {
            let n = grid.max(1);
            (0..=n).map(|j| j as f64 / n as f64).collect()
        }
    };
    let mut rows = Vec::new();
    for &e in &eps {
        for &l in &lambdas {
            let upper = f_locc_upper_bound(l, &family_spectrum(e)?, &phi)?;
            let lower = f_elocc_lower_bound(l, e)?.value;
            rows.push(json!({"epsilon": e, "lambda": l, "locc_upper": upper, "catalytic_lower": lower,
                             "separated": lower > upper}));
        }
    }
    if g.json {
        print_json(&json!({"separable_fidelity": separable_fidelity(&phi), "epsilon_threshold": eps_t,
                           "crossover": cross, "rows": rows}));
    } else {
        println!("separable fidelity: {}", separable_fidelity(&phi));
        println!("epsilon threshold: {eps_t:.12}");
        println!("separation crossover: {cross:.12}");
        println!("{:>8} {:>6} {:>14} {:>14} {:>9}", "epsilon", "lambda", "locc upper", "catalytic low", "separated");
        for r in &rows {
            println!(
                "{:>8.4} {:>6.2} {:>14.10} {:>14.10} {:>9}",
                r["epsilon"].as_f64().unwrap_or(f64::NAN),
                r["lambda"].as_f64().unwrap_or(f64::NAN),
                r["locc_upper"].as_f64().unwrap_or(f64::NAN),
                r["catalytic_lower"].as_f64().unwrap_or(f64::NAN),
                r["separated"]
            );
        }
    }
    Ok(0)
}

fn radius(g: &Global, a: &str, c: &str) -> Outcome {
    let alpha = load_spectrum(a)?;
    let gamma = load_spectrum(c)?;
    let eps = epsilon_order_radius(&alpha, &gamma);
    let delta = catalysis_free_radius(&alpha, &gamma);
    if g.json {
        print_json(&json!({"alpha": alpha, "gamma": gamma, "order_radius": eps, "fidelity_radius": delta}));
    } else {
        println!("order radius: {eps}");
        println!("fidelity radius: {delta}");
    }
    Ok(0)
}

fn close_pair(g: &Global, delta: f64, out_dir: Option<PathBuf>) -> Outcome {
    let pair = close_mixed_catalysis_pair(delta)?;
    if let Some(dir) = out_dir {
        fs::create_dir_all(&dir).map_err(|e| Failure::Write(format!("{}: {e}", dir.display())))?;
        write_file(&dir.join("sigma.json"), &write_state(&StateFile::Density(pair.sigma.clone())))?;
        write_file(&dir.join("rho.json"), &write_state(&StateFile::Density(pair.rho.clone())))?;
    }
    if g.json {
        print_json(&json!({"delta": delta, "lambda": pair.lambda, "fidelity": pair.fidelity,
                           "monotone": pair.monotone, "locc": pair.locc, "elocc": pair.elocc}));
    } else {
        println!("lambda: {:e}", pair.lambda);
        println!("fidelity: {:.15}", pair.fidelity);
        println!("without catalyst: {:?}", pair.locc.decision);
        println!("with catalyst: {:?}", pair.elocc.decision);
    }
    Ok(0)
}

fn attack(g: &Global, lambda: Option<f64>, psi_arg: &str, with_catalyst: bool, trials: u64) -> Outcome {
    let psi = load_pure(psi_arg)?;
    let zeta = orthocomplement_state(&psi)?;
    let lambda = match lambda {
        Some(l) => l,
        None => lambda0_bisect(&psi, &zeta)?.lambda0,
    };
    let state = KentClassState::new(lambda, psi, zeta)?;
    let bell = presets::bell().projector();
    let omega = with_catalyst.then_some(&bell);
    let report = random_separable_attack(&state, omega, trials, g.seed, false)?;
    if g.json {
        for r in &report.records {
            println!("{}", serde_json::to_string(r).unwrap_or_default());
        }
        println!("{}", serde_json::to_string(&report).unwrap_or_default());
    } else {
        println!("lambda: {lambda} (threshold {})", state.lambda0);
        println!("input fidelity: {:.15}", report.input_fidelity);
        println!("max output fidelity: {:.15}", report.max_fidelity);
        println!("outputs checked: {}, degenerate: {}", report.outputs_checked, report.degenerate_skipped);
        println!("violations: {}", report.violations);
    }
    Ok(if report.violations == 0 { 0 } else { 1 })
}

fn repro(g: &Global, trials: u64, grid: usize) -> Outcome {
    let cfg = ReproConfig {
        seed: g.seed,
        tolerances: Tolerances::DEFAULT.with_majorization(g.tol),
        attack_trials: trials,
        epsilon_steps: grid,
        ..ReproConfig::default()
    };
    let report = paper_repro(&cfg);
    if g.json {
        print_json(&serde_json::to_value(&report).unwrap_or(Value::Null));
    } else {
        print!("{}", report.table());
    }
    Ok(if report.pass { 0 } else { 1 })
}
