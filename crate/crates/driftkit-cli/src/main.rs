//! driftkit command line: compute drift-theorem bounds, query exact chain
//! oracles, run seeded simulations, and execute verification suites.
//!
//! Exit codes: 0 success, 1 usage error, 2 precondition/instance rejection
//! (with a witness in the message), 3 verification suite violation.
//!
//! Result payloads go to stdout and are byte-reproducible for a fixed seed
//! regardless of `--workers`; the timestamped run manifest goes to stderr
//! (or a `.manifest` sidecar next to `--out` files).

mod input;
mod verify;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use driftkit::error::Error as DkError;
use driftkit::montecarlo::{run_trials, with_workers};
use driftkit::oracle::{
    binomial_start, build_leadingones_chain, build_onemax_chain, exact_drift_profile,
    exact_expectation, exact_tail, uniform_bitstring_start, MarkovChain, MgfSign, Start,
};
use driftkit::potential::{build_potential, HSpec};
use driftkit::tails::{
    corollary_bounds, general_tail_lower, general_tail_upper, mgf_of_geometric_mix,
    simplified_tail, Beta, CorollaryItem, SimplifiedTailParams, TailParams, TailSide,
};
use driftkit::theorems::{
    additive_lower, additive_upper, fitness_levels_lower, fitness_levels_upper,
    multiplicative_lower, multiplicative_upper, nonmonotone_variable_upper, variable_lower,
    variable_upper, FitnessPartition, MonotoneEvidence,
};

use input::{
    parse_chain_file, parse_f64_list, parse_f64_rows, parse_hspec, parse_spec_file, RunManifest,
};

#[derive(Parser)]
#[command(
    name = "driftkit",
    version,
    about = "drift-analysis bounds, oracles and simulations"
)]
struct Cli {
    /// Worker threads for parallel sections (0 = library default).
    /// Falls back to DRIFTKIT_WORKERS, then to all cores. Does not change
    /// any output.
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
#[allow(clippy::large_enum_variant)]
enum Cmd {
    /// Evaluate one drift theorem and print its bound.
    Bound(BoundArgs),
    /// Exact expectations and tail tables on finite chains.
    Oracle(OracleArgs),
    /// Seeded Monte Carlo trials with CSV output.
    Simulate(SimulateArgs),
    /// Run a named verification suite.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct BoundArgs {
    /// One of: additive, variable, variable-lower, nonmonotone,
    /// multiplicative, multiplicative-lower, fitness-levels,
    /// fitness-levels-lower, tail-general, tail-corollary, tail-simplified,
    /// geometric-mix-mgf
    theorem: Option<String>,
    /// Key-value spec file supplying defaults for any flag
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Drift function: `const:d`, `mult:d`, `table:v1,v2,...` or an
    /// expression in x and n
    #[arg(long)]
    h: Option<String>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    xmin: Option<f64>,
    #[arg(long)]
    xmax: Option<f64>,
    #[arg(long)]
    x0: Option<f64>,
    /// Instance size substituted for `n` in expressions
    #[arg(long)]
    n: Option<f64>,
    /// Direction for the additive theorem: upper or lower
    #[arg(long)]
    direction: Option<String>,
    /// Level probabilities p_1,...,p_{m-1}
    #[arg(long)]
    p: Option<String>,
    /// Traversal bounds u_1,...,u_{m-1}
    #[arg(long)]
    u: Option<String>,
    /// Viscosity weights, rows separated by `;`: `0.6,0.4;1`
    #[arg(long)]
    gamma: Option<String>,
    #[arg(long)]
    chi: Option<f64>,
    /// Start mass over levels 1..m-1
    #[arg(long)]
    start: Option<String>,
    #[arg(long, default_value_t = 1)]
    start_level: usize,
    /// Progress cap map c(x) as an expression in x (variable lower bound)
    #[arg(long)]
    c: Option<String>,
    /// Constant c >= 1 of the non-monotone theorem
    #[arg(long)]
    c_factor: Option<f64>,
    /// Explicit chain file for exact precondition verification
    #[arg(long)]
    chain: Option<PathBuf>,
    /// Skip the sampled monotonicity check (caller supplies the proof)
    #[arg(long)]
    assert_monotone: bool,
    #[arg(long)]
    lambda: Option<f64>,
    /// Constant mgf bound beta
    #[arg(long)]
    beta_const: Option<f64>,
    /// Target threshold a of tail statements
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    tstar: Option<u64>,
    /// Horizon t of the corollary items
    #[arg(long)]
    t: Option<u64>,
    /// Corollary item: iii or iv-a
    #[arg(long)]
    item: Option<String>,
    /// Tail side: upper or lower
    #[arg(long)]
    side: Option<String>,
    /// Whether the target set is absorbing
    #[arg(long)]
    absorbing: bool,
    /// Dominating-variable mgf value D = E(e^{lambda Z})
    #[arg(long)]
    dmgf: Option<f64>,
    /// Slack delta of the simplified tail theorem
    #[arg(long)]
    slack: Option<f64>,
    /// Flip probability of the geometric mixture
    #[arg(long)]
    flip_prob: Option<f64>,
    /// Scale of the geometric mixture
    #[arg(long)]
    scale: Option<f64>,
}

#[derive(Args)]
struct OracleArgs {
    /// onemax | leadingones | chain
    #[arg(long)]
    process: Option<String>,
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    /// LeadingOnes target value (default n)
    #[arg(long)]
    a: Option<usize>,
    /// Explicit chain file
    #[arg(long)]
    file: Option<PathBuf>,
    /// Start: a state index, `binomial` (OneMax bitstring init) or `uniform`
    #[arg(long)]
    start: Option<String>,
    /// Also print the survival table P(T >= t) for t = 0..=TAIL as CSV
    #[arg(long)]
    tail: Option<usize>,
}

#[derive(Args)]
struct SimulateArgs {
    /// onemax | linear | leadingones | chain
    #[arg(long)]
    process: Option<String>,
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    /// LeadingOnes target value (default n)
    #[arg(long)]
    a: Option<usize>,
    /// Linear weights w_1,...,w_n
    #[arg(long)]
    weights: Option<String>,
    /// Explicit chain file
    #[arg(long)]
    file: Option<PathBuf>,
    /// Start state index for explicit chains (default: uniform random)
    #[arg(long)]
    start: Option<usize>,
    /// Hitting threshold on the distance (default 0)
    #[arg(long, default_value_t = 0.0)]
    threshold: f64,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Step cap per trial (default 100 e n ln n for bit-string benchmarks)
    #[arg(long)]
    cap: Option<u64>,
    /// Write the CSV here instead of stdout (manifest goes to a sidecar)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Histogram bucket width
    #[arg(long)]
    bucket_width: Option<u64>,
}

#[derive(Args)]
struct VerifyArgs {
    /// onemax-expectation | onemax-tails | leadingones-expectation |
    /// leadingones-tails | soundness-sweep
    #[arg(long)]
    suite: String,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    a: Option<usize>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    chains: Option<usize>,
}

enum Failure {
    Usage(String),
    Rejection(String),
    Violations(usize),
}

impl From<DkError> for Failure {
    fn from(e: DkError) -> Self {
        Failure::Rejection(e.to_string())
    }
}

impl From<String> for Failure {
    fn from(s: String) -> Self {
        Failure::Usage(s)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let workers = cli
        .workers
        .or_else(|| {
            std::env::var("DRIFTKIT_WORKERS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(0);
    let outcome = with_workers(workers, || match cli.cmd {
        Cmd::Bound(args) => cmd_bound(args),
        Cmd::Oracle(args) => cmd_oracle(args),
        Cmd::Simulate(args) => cmd_simulate(args),
        Cmd::Verify(args) => cmd_verify(args),
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Rejection(msg)) => {
            eprintln!("rejected: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Violations(k)) => {
            eprintln!("verification failed: {k} violation(s)");
            ExitCode::from(3)
        }
    }
}

fn apply_spec_defaults(args: &mut BoundArgs) -> Result<(), Failure> {
    let Some(path) = &args.spec else {
        return Ok(());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    for (key, value) in parse_spec_file(&text)? {
        let parse_f64 = || -> Result<f64, Failure> {
            value
                .parse()
                .map_err(|_| Failure::Usage(format!("spec key {key}: bad number `{value}`")))
        };
        match key.as_str() {
            "theorem" => args.theorem.get_or_insert(value.clone()),
            "h" | "drift" => args.h.get_or_insert(value.clone()),
            "delta" => {
                args.delta.get_or_insert(parse_f64()?);
                continue;
            }
            "beta" => {
                args.beta.get_or_insert(parse_f64()?);
                continue;
            }
            "xmin" => {
                args.xmin.get_or_insert(parse_f64()?);
                continue;
            }
            "xmax" => {
                args.xmax.get_or_insert(parse_f64()?);
                continue;
            }
            "x0" => {
                args.x0.get_or_insert(parse_f64()?);
                continue;
            }
            "n" => {
                args.n.get_or_insert(parse_f64()?);
                continue;
            }
            "lambda" => {
                args.lambda.get_or_insert(parse_f64()?);
                continue;
            }
            "p" => args.p.get_or_insert(value.clone()),
            "u" => args.u.get_or_insert(value.clone()),
            "gamma" => args.gamma.get_or_insert(value.clone()),
            "start" => args.start.get_or_insert(value.clone()),
            "c" => args.c.get_or_insert(value.clone()),
            other => {
                return Err(Failure::Usage(format!("unknown spec key `{other}`")));
            }
        };
    }
    Ok(())
}

fn require<T: Copy>(v: Option<T>, flag: &str) -> Result<T, Failure> {
    v.ok_or_else(|| Failure::Usage(format!("missing --{flag}")))
}

fn require_str<'a>(v: &'a Option<String>, flag: &str) -> Result<&'a str, Failure> {
    v.as_deref()
        .ok_or_else(|| Failure::Usage(format!("missing --{flag}")))
}

fn load_chain(path: &PathBuf, manifest: &mut RunManifest) -> Result<MarkovChain, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    manifest.add_input(path, text.as_bytes());
    parse_chain_file(&text).map_err(Failure::Rejection)
}

fn build_h(args: &BoundArgs) -> Result<HSpec, Failure> {
    let text = require_str(&args.h, "h")?;
    let x_min = args.xmin.unwrap_or(1.0);
    let x_max = args.xmax.or(args.x0);
    parse_hspec(text, x_min, x_max, args.n).map_err(Failure::Usage)
}

fn cmd_bound(mut args: BoundArgs) -> Result<(), Failure> {
    apply_spec_defaults(&mut args)?;
    let mut manifest = RunManifest::new(None);
    if let Some(path) = args.spec.clone() {
        if let Ok(text) = std::fs::read_to_string(&path) {
            manifest.add_input(&path, text.as_bytes());
        }
    }
    let theorem = args
        .theorem
        .clone()
        .ok_or_else(|| Failure::Usage("missing theorem name".into()))?;

    let chain = match &args.chain {
        Some(path) => Some(load_chain(path, &mut manifest)?),
        None => None,
    };

    let output = match theorem.as_str() {
        "additive" => {
            let delta = require(args.delta, "delta")?;
            let x0 = require(args.x0, "x0")?;
            let bound = match args.direction.as_deref().unwrap_or("upper") {
                "upper" => additive_upper(delta, x0)?,
                "lower" => additive_lower(delta, x0)?,
                other => return Err(Failure::Usage(format!("bad direction `{other}`"))),
            };
            bound.to_string()
        }
        "variable" => {
            let h = build_h(&args)?;
            let evidence = if args.assert_monotone {
                MonotoneEvidence::Asserted
            } else {
                MonotoneEvidence::SampledCheck
            };
            variable_upper(&h, require(args.x0, "x0")?, evidence)?.to_string()
        }
        "variable-lower" => {
            let h = build_h(&args)?;
            let c_text = require_str(&args.c, "c")?;
            let c_ast = driftkit::expr::ExprAst::parse(c_text)
                .map_err(|e| Failure::Usage(e.to_string()))?;
            let n = args.n.unwrap_or(0.0);
            let c_map = move |x: f64| c_ast.eval(x, n).unwrap_or(f64::NAN);
            variable_lower(&h, &c_map, require(args.x0, "x0")?, chain.as_ref())?.to_string()
        }
        "nonmonotone" => {
            let h = build_h(&args)?;
            nonmonotone_variable_upper(
                &h,
                require(args.c_factor, "c-factor")?,
                require(args.x0, "x0")?,
                chain.as_ref(),
            )?
            .to_string()
        }
        "multiplicative" => multiplicative_upper(
            require(args.delta, "delta")?,
            args.xmin.unwrap_or(1.0),
            require(args.x0, "x0")?,
        )?
        .to_string(),
        "multiplicative-lower" => multiplicative_lower(
            require(args.delta, "delta")?,
            require(args.beta, "beta")?,
            args.xmin.unwrap_or(1.0),
            require(args.x0, "x0")?,
            chain.as_ref(),
        )?
        .to_string(),
        "fitness-levels" => {
            let p = parse_f64_list(require_str(&args.p, "p")?)?;
            let partition = FitnessPartition::for_upper(p)?;
            fitness_levels_upper(&partition, args.start_level)?.to_string()
        }
        "fitness-levels-lower" => {
            let u = parse_f64_list(require_str(&args.u, "u")?)?;
            let gamma = parse_f64_rows(require_str(&args.gamma, "gamma")?)?;
            let start = parse_f64_list(require_str(&args.start, "start")?)?;
            let partition =
                FitnessPartition::for_lower(u, gamma, require(args.chi, "chi")?, start)?;
            fitness_levels_lower(&partition)?.to_string()
        }
        "tail-general" => {
            let h = build_h(&args)?;
            let g = build_potential(h)?;
            let side = parse_side(args.side.as_deref().unwrap_or("upper"))?;
            let x0 = require(args.x0, "x0")?;
            let lambda = require(args.lambda, "lambda")?;
            let beta = match (&chain, args.beta_const) {
                (Some(_), Some(_)) => {
                    return Err(Failure::Usage(
                        "--beta-const and --chain are mutually exclusive".into(),
                    ))
                }
                (None, Some(b)) => Beta::Const(b),
                (Some(chain), None) => {
                    // exact per-state mgf from the oracle; worst case over
                    // non-target states
                    let sign = match side {
                        TailSide::UpperTail => MgfSign::Neg,
                        TailSide::LowerTail => MgfSign::Pos,
                    };
                    let profile = exact_drift_profile(chain, &g, lambda, sign)?;
                    let sup = profile
                        .mgf
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| !chain.is_target(i))
                        .map(|(_, &v)| v)
                        .fold(0.0f64, f64::max);
                    let mgf = profile.mgf;
                    let labels: Vec<f64> = chain.labels().to_vec();
                    Beta::PerState {
                        f: Arc::new(move |x: f64| {
                            labels
                                .iter()
                                .position(|&l| l == x)
                                .map(|i| mgf[i])
                                .unwrap_or(sup)
                        }),
                        sup: Some(sup),
                    }
                }
                (None, None) => return Err(Failure::Usage("need --beta-const or --chain".into())),
            };
            let params = TailParams {
                lambda,
                beta,
                a: args.a.unwrap_or(0.0),
                t_star: require(args.tstar, "tstar")?,
                absorbing: args.absorbing,
            };
            match side {
                TailSide::UpperTail => general_tail_upper(&g, &params, x0, None)?.to_string(),
                TailSide::LowerTail => general_tail_lower(&g, &params, x0, None)?.to_string(),
            }
        }
        "tail-corollary" => {
            let h = build_h(&args)?;
            let item = match args.item.as_deref().unwrap_or("iii") {
                "iii" => CorollaryItem::Iii,
                "iv-a" | "iva" => CorollaryItem::IvA,
                other => return Err(Failure::Usage(format!("bad corollary item `{other}`"))),
            };
            corollary_bounds(
                &h,
                require(args.lambda, "lambda")?,
                require(args.x0, "x0")?,
                require(args.t, "t")?,
                item,
            )?
            .to_string()
        }
        "tail-simplified" => {
            let h = build_h(&args)?;
            let sp = SimplifiedTailParams::new(
                require(args.lambda, "lambda")?,
                require(args.dmgf, "dmgf")?,
                require(args.slack, "slack")?,
            )?;
            let side = parse_side(args.side.as_deref().unwrap_or("upper"))?;
            simplified_tail(
                &h,
                &sp,
                require(args.x0, "x0")?,
                require(args.tstar, "tstar")?,
                side,
                args.absorbing,
            )?
            .to_string()
        }
        "geometric-mix-mgf" => {
            let v = mgf_of_geometric_mix(
                require(args.flip_prob, "flip-prob")?,
                require(args.scale, "scale")?,
                require(args.lambda, "lambda")?,
            )?;
            format!("mgf: {v}")
        }
        other => {
            return Err(Failure::Usage(format!("unknown theorem `{other}`")));
        }
    };
    println!("{output}");
    eprint!("{}", manifest.render());
    Ok(())
}

fn parse_side(text: &str) -> Result<TailSide, Failure> {
    match text {
        "upper" => Ok(TailSide::UpperTail),
        "lower" => Ok(TailSide::LowerTail),
        other => Err(Failure::Usage(format!("bad tail side `{other}`"))),
    }
}

struct OracleTarget {
    chain: MarkovChain,
    start: Start,
}

fn resolve_oracle_target(
    process: &str,
    n: Option<usize>,
    a: Option<usize>,
    file: Option<&PathBuf>,
    start: Option<&str>,
    manifest: &mut RunManifest,
) -> Result<OracleTarget, Failure> {
    let (chain, default_start) = match process {
        "onemax" => {
            let n = require(n, "n")?;
            (build_onemax_chain(n)?, binomial_start(n))
        }
        "leadingones" => {
            let n = require(n, "n")?;
            let chain = build_leadingones_chain(n, a.unwrap_or(n))?;
            let start = uniform_bitstring_start(&chain);
            (chain, start)
        }
        "chain" => {
            let path = file.ok_or_else(|| Failure::Usage("missing --file".into()))?;
            let chain = load_chain(path, manifest)?;
            let start = Start::State(chain.n_states() - 1);
            (chain, start)
        }
        other => return Err(Failure::Usage(format!("unknown process `{other}`"))),
    };
    let start = match start {
        None => default_start,
        Some("binomial") | Some("uniform") => default_start,
        Some(index) => {
            let idx: usize = index
                .parse()
                .map_err(|_| Failure::Usage(format!("bad --start `{index}`")))?;
            Start::State(idx)
        }
    };
    Ok(OracleTarget { chain, start })
}

fn cmd_oracle(args: OracleArgs) -> Result<(), Failure> {
    let mut manifest = RunManifest::new(None);
    let mut process = args.process.clone();
    let mut n = args.n;
    let mut a = args.a;
    let mut start = args.start.clone();
    let mut tail = args.tail;
    if let Some(path) = &args.spec {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
        manifest.add_input(path, text.as_bytes());
        for (key, value) in parse_spec_file(&text)? {
            match key.as_str() {
                "process" => {
                    process.get_or_insert(value);
                }
                "n" => {
                    n = n.or_else(|| value.parse().ok());
                }
                "a" => {
                    a = a.or_else(|| value.parse().ok());
                }
                "start" => {
                    start.get_or_insert(value);
                }
                "tail" => {
                    tail = tail.or_else(|| value.parse().ok());
                }
                other => return Err(Failure::Usage(format!("unknown spec key `{other}`"))),
            }
        }
    }
    let process = process.ok_or_else(|| Failure::Usage("missing --process".into()))?;
    let target = resolve_oracle_target(
        &process,
        n,
        a,
        args.file.as_ref(),
        start.as_deref(),
        &mut manifest,
    )?;
    let expectation = exact_expectation(&target.chain, &target.start)?;
    let mut out = String::new();
    out.push_str(&format!("expectation: {expectation}\n"));
    if let Some(t_max) = tail {
        let table = exact_tail(&target.chain, &target.start, t_max)?;
        out.push_str("t,survival\n");
        for (t, v) in table.values.iter().enumerate() {
            out.push_str(&format!("{t},{v}\n"));
        }
        if table.truncated {
            out.push_str("# truncated: survival mass underflowed\n");
        }
    }
    print!("{out}");
    eprint!("{}", manifest.render());
    Ok(())
}

fn cmd_simulate(args: SimulateArgs) -> Result<(), Failure> {
    let mut process = args.process.clone();
    let mut n = args.n;
    let mut a = args.a;
    let mut trials = args.trials;
    let mut seed = args.seed;
    let mut cap = args.cap;
    let mut weights = args.weights.clone();
    let mut manifest_inputs: Vec<(PathBuf, String)> = Vec::new();
    if let Some(path) = &args.spec {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
        manifest_inputs.push((path.clone(), text.clone()));
        for (key, value) in parse_spec_file(&text)? {
            match key.as_str() {
                "process" => {
                    process.get_or_insert(value);
                }
                "n" => n = n.or_else(|| value.parse().ok()),
                "a" => a = a.or_else(|| value.parse().ok()),
                "trials" => trials = trials.or_else(|| value.parse().ok()),
                "seed" => seed = seed.or_else(|| value.parse().ok()),
                "cap" => cap = cap.or_else(|| value.parse().ok()),
                "weights" => {
                    weights.get_or_insert(value);
                }
                other => return Err(Failure::Usage(format!("unknown spec key `{other}`"))),
            }
        }
    }
    let process = process.ok_or_else(|| Failure::Usage("missing --process".into()))?;
    let trials = trials.ok_or_else(|| Failure::Usage("missing --trials".into()))?;
    let seed = seed.unwrap_or(0);
    let mut manifest = RunManifest::new(Some(seed));
    for (path, text) in &manifest_inputs {
        manifest.add_input(path, text.as_bytes());
    }

    use driftkit::processes::{Init, ProcessSpec};
    let (spec, default_cap, describe) = match process.as_str() {
        "onemax" => {
            let n = require(n, "n")?;
            let spec = ProcessSpec::onemax(n, Init::UniformRandom)?;
            (spec, ea_default_cap(n), format!("onemax n={n}"))
        }
        "linear" => {
            let w = parse_f64_list(require_str(&weights, "weights")?)?;
            let n = w.len();
            let spec = ProcessSpec::linear(w, Init::UniformRandom)?;
            (spec, ea_default_cap(n), format!("linear n={n}"))
        }
        "leadingones" => {
            let n = require(n, "n")?;
            let a = a.unwrap_or(n);
            let spec = ProcessSpec::leadingones(n, a, Init::UniformRandom)?;
            (
                spec,
                100 * ea_default_cap(n),
                format!("leadingones n={n} a={a}"),
            )
        }
        "chain" => {
            let path = args
                .file
                .as_ref()
                .ok_or_else(|| Failure::Usage("missing --file".into()))?;
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
            manifest.add_input(path, text.as_bytes());
            let chain = parse_chain_file(&text).map_err(Failure::Rejection)?;
            let init = match args.start {
                Some(idx) => Init::FixedState(idx),
                None => Init::UniformRandom,
            };
            let states = chain.n_states();
            let spec = ProcessSpec::explicit_chain(chain, init)?;
            (spec, 10_000_000, format!("chain states={states}"))
        }
        other => return Err(Failure::Usage(format!("unknown process `{other}`"))),
    };
    let cap = cap.unwrap_or(default_cap);
    let mut stats = run_trials(&spec, args.threshold, trials, seed, cap)?;
    if let Some(width) = args.bucket_width {
        stats.rebucket(width);
    }

    let mut out = Vec::new();
    let _ = writeln!(out, "# driftkit simulate v{}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(out, "# process: {describe}");
    let _ = writeln!(
        out,
        "# trials: {} seed: {} cap: {} threshold: {}",
        stats.trials, stats.master_seed, stats.step_cap, args.threshold
    );
    let _ = writeln!(out, "# generator: {}", stats.generator);
    let _ = writeln!(
        out,
        "# mean: {} variance: {} std_error: {} moments_valid: {}",
        stats.mean,
        stats.variance,
        stats.std_error,
        stats.moments_valid()
    );
    let quantiles: Vec<String> = stats
        .quantiles
        .iter()
        .map(|(q, v)| format!("p{q}={v}"))
        .collect();
    let _ = writeln!(out, "# quantiles: {}", quantiles.join(" "));
    let _ = writeln!(
        out,
        "# histogram: bucket_width={} buckets={}",
        stats.histogram.bucket_width,
        stats.histogram.counts.len()
    );
    let _ = writeln!(out, "# capped: {}", stats.capped);
    stats
        .write_trials_csv(&mut out)
        .map_err(|e| Failure::Rejection(format!("write failed: {e}")))?;

    match &args.out {
        Some(path) => {
            std::fs::write(path, &out)
                .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
            let sidecar = path.with_extension(
                path.extension()
                    .map(|e| format!("{}.manifest", e.to_string_lossy()))
                    .unwrap_or_else(|| "manifest".into()),
            );
            std::fs::write(&sidecar, manifest.render())
                .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", sidecar.display())))?;
        }
        None => {
            std::io::stdout()
                .write_all(&out)
                .map_err(|e| Failure::Rejection(format!("write failed: {e}")))?;
            eprint!("{}", manifest.render());
        }
    }
    Ok(())
}

fn ea_default_cap(n: usize) -> u64 {
    let nf = n as f64;
    (100.0 * std::f64::consts::E * nf * nf.ln().max(1.0)).ceil() as u64
}

fn cmd_verify(args: VerifyArgs) -> Result<(), Failure> {
    let manifest = RunManifest::new(Some(args.seed));
    let report = match args.suite.as_str() {
        "leadingones-expectation" => verify::leadingones_expectation(args.n.unwrap_or(8))?,
        "onemax-expectation" => verify::onemax_expectation(args.n.unwrap_or(1000))?,
        "onemax-tails" => verify::onemax_tails(
            args.n.unwrap_or(100),
            args.trials.unwrap_or(100_000),
            args.seed,
        )?,
        "leadingones-tails" => {
            let n = args.n.unwrap_or(100);
            verify::leadingones_tails(
                n,
                args.a.unwrap_or(n * 9 / 10),
                args.trials.unwrap_or(100_000),
                args.seed,
            )?
        }
        "soundness-sweep" => verify::sweep(args.chains.unwrap_or(50), args.seed)?,
        other => return Err(Failure::Usage(format!("unknown suite `{other}`"))),
    };
    for line in &report.lines {
        println!("{line}");
    }
    let status = if report.violations == 0 {
        "PASS"
    } else {
        "FAIL"
    };
    println!(
        "suite {}: {status} ({} claims, {} violations)",
        args.suite, report.claims, report.violations
    );
    eprint!("{}", manifest.render());
    if report.violations > 0 {
        return Err(Failure::Violations(report.violations));
    }
    Ok(())
}
