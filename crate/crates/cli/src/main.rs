use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use tempered::io::MatrixFile;
use tempered::linalg::{max_relative_entropy, BipartiteShape};
use tempered::monotones::{self, MonotoneResult};
use tempered::reproduce::{format_table, format_tsv, run_criteria};
use tempered::sdp::SolverConfig;
use tempered::states::{self, NamedOperator};
use tempered::Error;

const EXIT_INPUT: u8 = 1;
const EXIT_DEGRADED: u8 = 2;
const EXIT_REGRESSION: u8 = 3;

#[derive(Parser)]
#[command(name = "tempered-cli", version, about = "Tempered negativity, PPT robustness and related entanglement bounds")]
struct Cli {
    /// Solver tolerance; falls back to $TM_SOLVER_TOL, then 1e-8.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a quantity for a state given as a matrix file.
    Compute(ComputeArgs),
    /// Write a named state or operator as a matrix file.
    State(StateArgs),
    /// Run the regression table; exit status 3 if any row fails.
    ReproducePaper(ReproduceArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Quantity {
    LogNegativity,
    TemperedNegativity,
    TemperedLogNegativity,
    StdRobustnessPpt,
    GenRobustnessPpt,
    TemperedRobustnessPpt,
    CoherentInfo,
    ReeBound,
    Dmax,
    Phi,
    Tradeoff,
    CostLowerBound,
}

#[derive(clap::Args)]
struct ComputeArgs {
    quantity: Quantity,
    /// Matrix file of the state (not needed for `tradeoff`).
    state: Option<PathBuf>,
    /// Reference state ω for the tempered quantities; defaults to the state itself.
    #[arg(long)]
    omega: Option<PathBuf>,
    /// Free state used by `ree-bound`.
    #[arg(long)]
    ansatz: Option<PathBuf>,
    /// Second argument of `dmax`.
    #[arg(long)]
    sigma: Option<PathBuf>,
    /// Number of target e-bits for `phi`.
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    delta: Option<f64>,
    /// Write the optimiser to this path as a matrix file.
    #[arg(long)]
    witness: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StateName {
    Phi,
    PSubspace,
    Omega3,
    X3,
    X3Delta,
    SigmaPlus,
    SigmaMinus,
    Tau,
    Tau3,
    Isotropic,
    Antisymmetric,
    MaximallyMixed,
}

#[derive(clap::Args)]
struct StateArgs {
    name: StateName,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    f: Option<f64>,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    delta: Option<f64>,
    /// Output path; stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Tsv,
}

#[derive(clap::Args)]
struct ReproduceArgs {
    /// Run only criteria whose number, name or tags match.
    #[arg(long)]
    only: Option<String>,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
}

/// Failure with its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: EXIT_INPUT, message: e.to_string() }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_INPUT, message: message.into() }
}

fn solver_config(flag: Option<f64>) -> Result<SolverConfig, Failure> {
    let tol = match flag {
        Some(t) => t,
        None => match std::env::var("TM_SOLVER_TOL") {
            Ok(s) => s.trim().parse().map_err(|_| input_error(format!("TM_SOLVER_TOL='{s}' is not a number")))?,
            Err(_) => SolverConfig::default().tol,
        },
    };
    Ok(SolverConfig::with_tol(tol)?)
}

fn read_state(path: &PathBuf) -> Result<NamedOperator, Failure> {
    let label = path.display().to_string();
    Ok(MatrixFile::read(path)?.to_state(&label)?)
}

fn require<'a, T>(v: &'a Option<T>, flag: &str, quantity: &str) -> Result<&'a T, Failure> {
    v.as_ref().ok_or_else(|| input_error(format!("{quantity} requires {flag}")))
}

fn format_value(v: f64) -> String {
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let s = format!("{v:.12}");
    if s.starts_with('-') && s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        s[1..].to_string()
    } else {
        s
    }
}

/// Value and, for optimisation-defined quantities, the full result.
fn evaluate(args: &ComputeArgs, cfg: &SolverConfig) -> Result<(f64, Option<MonotoneResult>, Option<BipartiteShape>), Failure> {
    use Quantity::*;
    if args.quantity == Tradeoff {
        let delta = *require(&args.delta, "--delta", "tradeoff")?;
        return Ok((monotones::tradeoff_rate_lower_bound(delta)?, None, None));
    }
    let path = args.state.as_ref().ok_or_else(|| input_error("a state file is required"))?;
    let rho = read_state(path)?;
    let omega = match &args.omega {
        Some(p) => read_state(p)?,
        None => rho.clone(),
    };
    let full = |r: MonotoneResult| Ok((r.value, Some(r), Some(rho.shape)));
    match args.quantity {
        LogNegativity => Ok((monotones::log_negativity(&rho)?.value, None, None)),
        TemperedNegativity => full(monotones::tempered_negativity(&rho, &omega, cfg)?),
        TemperedLogNegativity => {
            let mut r = monotones::tempered_negativity(&rho, &omega, cfg)?;
            r.value = r.value.log2();
            full(r)
        }
        CostLowerBound => full(monotones::cost_lower_bound(&rho, cfg)?),
        StdRobustnessPpt => full(monotones::std_robustness_ppt(&rho, cfg)?),
        GenRobustnessPpt => full(monotones::gen_robustness_ppt(&rho, cfg)?),
        TemperedRobustnessPpt => full(monotones::tempered_robustness_ppt(&rho, &omega, cfg)?),
        CoherentInfo => Ok((monotones::coherent_information(&rho)?, None, None)),
        ReeBound => {
            let ansatz = read_state(require(&args.ansatz, "--ansatz", "ree-bound")?)?;
            let b = monotones::ree_upper_bound(&rho, &ansatz)?;
            if !b.ansatz_is_ppt {
                eprintln!("warning: the ansatz is not PPT; the value is not a bound on the relative entropy of entanglement");
            }
            Ok((b.value, None, None))
        }
        Dmax => {
            let sigma = read_state(require(&args.sigma, "--sigma", "dmax")?)?;
            if sigma.dim() != rho.dim() {
                return Err(input_error("dmax: the two states have different dimensions"));
            }
            Ok((max_relative_entropy(&rho.matrix, &sigma.matrix)?, None, None))
        }
        Phi => {
            let m = *require(&args.m, "--m", "phi")?;
            let delta = *require(&args.delta, "--delta", "phi")?;
            full(monotones::distillation_fidelity_phi(&rho, m, delta, cfg)?)
        }
        Tradeoff => unreachable!("handled above"),
    }
}

fn compute(args: &ComputeArgs, cfg: &SolverConfig) -> Result<u8, Failure> {
    let (value, result, shape) = evaluate(args, cfg)?;
    if let Some(path) = &args.witness {
        let (Some(r), Some(shape)) = (&result, shape) else {
            return Err(input_error("this quantity has no witness"));
        };
        let w = r.witness.as_ref().ok_or_else(|| input_error("the solver returned no witness"))?;
        MatrixFile::new(w, shape)?.write(path)?;
    }
    println!("{}", format_value(value));
    match result.and_then(|r| r.solver_status) {
        Some(s) if s != tempered::sdp::SolverStatus::Optimal => {
            eprintln!("solver status: {s}");
            Ok(EXIT_DEGRADED)
        }
        _ => Ok(0),
    }
}

fn named_state(args: &StateArgs) -> Result<NamedOperator, Failure> {
    use StateName::*;
    let d = || require(&args.d, "--d", "this state").copied();
    Ok(match args.name {
        Phi => states::phi(d()?)?,
        PSubspace => states::p_subspace(d()?)?,
        Omega3 => states::omega3(),
        X3 => states::x3(),
        X3Delta => states::x3_delta(*require(&args.delta, "--delta", "x3-delta")?)?,
        SigmaPlus => states::sigma_pm(d()?)?.0,
        SigmaMinus => states::sigma_pm(d()?)?.1,
        Tau => states::tau(*require(&args.m, "--m", "tau")?)?,
        Tau3 => states::tau3_diag(),
        Isotropic => states::isotropic(d()?, *require(&args.f, "--f", "isotropic")?)?,
        Antisymmetric => states::antisymmetric(d()?)?,
        MaximallyMixed => states::maximally_mixed(BipartiteShape::square(d()?)?)?,
    })
}

fn state(args: &StateArgs) -> Result<u8, Failure> {
    let op = named_state(args)?;
    let file = MatrixFile::from_operator(&op);
    match &args.out {
        Some(path) => file.write(path)?,
        None => println!("{}", file.to_json()),
    }
    Ok(0)
}

fn reproduce(args: &ReproduceArgs, cfg: &SolverConfig) -> Result<u8, Failure> {
    let outcomes = run_criteria(args.only.as_deref(), cfg);
    if outcomes.is_empty() {
        return Err(input_error(format!("no criterion matches '{}'", args.only.as_deref().unwrap_or(""))));
    }
    let rows: Vec<_> = outcomes.iter().flat_map(|o| o.rows.clone()).collect();
    let text = match args.format {
        Format::Table => format_table(&rows),
        Format::Tsv => format_tsv(&rows),
    };
    print!("{text}");
    Ok(if rows.iter().all(|r| r.pass) { 0 } else { EXIT_REGRESSION })
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    match &cli.command {
        Command::Compute(args) => compute(args, &solver_config(cli.tol)?),
        Command::State(args) => state(args),
        Command::ReproducePaper(args) => reproduce(args, &solver_config(cli.tol)?),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { 0 });
        }
    };
    let code = match run(&cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    };
    let _ = std::io::stdout().flush();
    ExitCode::from(code)
}
