#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use ladderlab_core::ladder::{Ladder, LadderSolverConfig};
use ladderlab_core::prime::PrimeStore;
use ladderlab_core::puzzles::{self, PuzzleVector};
use ladderlab_core::quadrature::{IntegralCache, QuadratureConfig};
use ladderlab_core::verification::{
    evaluate_formula, fermat_functional, write_csv, FermatRational, FormulaId, Lab, Params, RatioReport,
};
use ladderlab_core::zeta::{CriticalLineEvaluator, EvaluatorConfig};
use ladderlab_core::LabError;

use config::{OutputFormat, Overrides, RunConfig, CACHE_ENV};

/// Lowest height the command-line ladder accepts. The transformed formulas
/// evaluate the ladder at `tau/(a(1-c))`, about 26 for `tau = 1000`.
const LADDER_FLOOR: f64 = 10.0;

/// Exit-code carrying error.
#[derive(Debug)]
pub struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError { code: 2, message: message.into() }
    }
}

impl From<LabError> for CliError {
    fn from(e: LabError) -> Self {
        let code = match e {
            LabError::InvalidArgument(_) | LabError::OutOfRange { .. } => 2,
            LabError::Integrity(_) => 3,
            LabError::Capacity { .. } => 4,
            LabError::Numeric(_) | LabError::Io(_) => 1,
        };
        CliError { code, message: e.to_string() }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError { code: 1, message: e.to_string() }
    }
}

#[derive(Parser, Debug)]
#[command(name = "ladderlab", version, about = "Jacob's ladders and prime-counting remainder integrals")]
struct Cli {
    /// TOML file with run defaults
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Directory for the prime store and integral cache
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,

    /// Sieve limit (exponent notation allowed)
    #[arg(long, global = true)]
    sieve_limit: Option<f64>,

    /// Largest critical-line height
    #[arg(long, global = true)]
    zeta_range: Option<f64>,

    /// Quadrature relative tolerance
    #[arg(long, global = true)]
    rel_tol: Option<f64>,

    /// Worker threads, 0 for all cores
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,

    /// Write 0 in the elapsed_ms column so output is byte-reproducible
    #[arg(long, global = true)]
    no_timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build or verify the prime store and seed the integral cache
    Build {
        /// Extend the Hardy-Littlewood cache up to this height
        #[arg(long = "seed-J", alias = "seed-j", default_value_t = 0.0)]
        seed_j: f64,
    },
    /// Evaluate a formula over a grid of heights
    Verify(VerifyArgs),
    /// Trend of the functional at a Fermat rational
    Fermat(FermatArgs),
    /// Evaluate a multiplicative puzzle
    Puzzle(PuzzleArgs),
    /// Count (and optionally list) partitions of k
    Partitions {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        list: bool,
    },
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    formula: String,
    /// name=value, repeatable
    #[arg(long = "param")]
    params: Vec<String>,
    /// Comma-separated heights
    #[arg(long, value_delimiter = ',')]
    grid: Vec<f64>,
}

#[derive(Args, Debug)]
struct FermatArgs {
    #[arg(long)]
    x: u64,
    #[arg(long)]
    y: u64,
    #[arg(long)]
    z: u64,
    #[arg(long)]
    n: u32,
    #[arg(long, value_delimiter = ',', required = true)]
    grid: Vec<f64>,
}

#[derive(Args, Debug)]
struct PuzzleArgs {
    /// Built-in k = 4 vector, 1 to 5
    #[arg(long, conflicts_with = "exponents")]
    builtin: Option<usize>,
    /// Comma-separated exponents; "_" marks the free component
    #[arg(long)]
    exponents: Option<String>,
    /// Expected number of components
    #[arg(long)]
    k: Option<usize>,
    #[arg(long = "T", default_value_t = 1e5)]
    t: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let flags = Overrides {
        sieve_limit: cli.sieve_limit,
        zeta_range: cli.zeta_range,
        rel_tol: cli.rel_tol,
        cache_dir: cli.cache_dir.clone(),
        output_format: cli.format,
        thread_count: cli.threads,
        no_timing: cli.no_timing,
    };
    let env_cache = std::env::var_os(CACHE_ENV).map(PathBuf::from);
    let cfg = RunConfig::resolve(cli.config.as_deref(), env_cache, &flags)?;
    if cfg.thread_count > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.thread_count)
            .build_global()
            .map_err(|e| CliError { code: 1, message: e.to_string() })?;
    }

    match cli.command {
        Command::Partitions { k, list } => partitions(k, list),
        Command::Build { seed_j } => {
            eprintln!("# config: {cfg}");
            build(&cfg, seed_j)
        }
        Command::Verify(args) => {
            eprintln!("# config: {cfg}");
            let id: FormulaId = args.formula.parse()?;
            let mut base = Params::new();
            for p in &args.params {
                let (k, v) = Params::parse_pair(p)?;
                base.set(&k, v);
            }
            let grid = if args.grid.is_empty() { vec![base.require(id.height_param())?] } else { args.grid };
            let session = Session::open(&cfg)?;
            let mut reports = Vec::with_capacity(grid.len());
            for h in grid {
                let params = base.clone().with(id.height_param(), h);
                reports.push(evaluate_formula(&session.lab, id, &params)?);
            }
            session.persist()?;
            emit(&cfg, &reports)
        }
        Command::Fermat(args) => {
            eprintln!("# config: {cfg}");
            let q = FermatRational::new(args.x, args.y, args.z, args.n)?;
            let session = Session::open(&cfg)?;
            let trend = fermat_functional(&session.lab, &q, &args.grid)?;
            session.persist()?;
            emit(&cfg, &trend.rows)?;
            let verdict = trend.verdict();
            let target = if trend.targets_value { "yes" } else { "no" };
            let mut out = io::stdout().lock();
            match cfg.output_format {
                OutputFormat::Csv => writeln!(out, "# verdict: {verdict}; trend targets value: {target}")?,
                OutputFormat::Json => writeln!(
                    out,
                    "{}",
                    serde_json::json!({
                        "verdict": verdict,
                        "exactly_one": trend.exactly_one,
                        "targets_value": trend.targets_value,
                        "distance_from_one": trend.distance_from_one,
                    })
                )?,
            }
            Ok(())
        }
        Command::Puzzle(args) => {
            eprintln!("# config: {cfg}");
            let v = puzzle_vector(&args)?;
            let session = Session::open(&cfg)?;
            let report = puzzles::evaluate_puzzle(&session.lab, args.t, &v)?;
            session.persist()?;
            emit(&cfg, &[report])
        }
    }
}

fn puzzle_vector(args: &PuzzleArgs) -> Result<PuzzleVector, CliError> {
    let v = match (&args.builtin, &args.exponents) {
        (Some(s), _) => {
            let all = puzzles::builtin_vectors_k4();
            if !(1..=all.len()).contains(s) {
                return Err(CliError::usage(format!("--builtin must be 1..={}, got {s}", all.len())));
            }
            all[s - 1].clone()
        }
        (None, Some(text)) => {
            let slots = text
                .split(',')
                .map(|s| match s.trim() {
                    "_" => Ok(None),
                    t => t.parse::<f64>().map(Some).map_err(|_| CliError::usage(format!("bad exponent '{t}'"))),
                })
                .collect::<Result<Vec<_>, _>>()?;
            if slots.iter().any(Option::is_none) {
                PuzzleVector::complete(&slots)?
            } else {
                PuzzleVector::absorb_residual(slots.into_iter().flatten().collect(), 1e-9)?
            }
        }
        (None, None) => return Err(CliError::usage("give --builtin or --exponents")),
    };
    if let Some(k) = args.k {
        if k != v.k() {
            return Err(CliError::usage(format!("--k {k} does not match {} components", v.k())));
        }
    }
    Ok(v)
}

fn partitions(k: usize, list: bool) -> Result<(), CliError> {
    let mut out = io::stdout().lock();
    if list {
        for p in puzzles::partitions(k)? {
            writeln!(out, "{p}")?;
        }
    }
    if k == 200 {
        writeln!(out, "{}", puzzles::p200_note())?;
    } else {
        writeln!(out, "p({k}) = {}", puzzles::partition_count(k)?)?;
    }
    Ok(())
}

fn emit(cfg: &RunConfig, reports: &[RatioReport]) -> Result<(), CliError> {
    let mut out = io::stdout().lock();
    match cfg.output_format {
        OutputFormat::Csv => write_csv(&mut out, reports, cfg.timing)?,
        OutputFormat::Json => {
            for r in reports {
                writeln!(out, "{}", r.to_json(cfg.timing))?;
            }
        }
    }
    Ok(())
}

fn build(cfg: &RunConfig, seed_j: f64) -> Result<(), CliError> {
    let session = Session::open(cfg)?;
    let cache = session.lab.cache();
    if seed_j > 0.0 {
        cache.extend_to(seed_j)?;
    }
    session.persist()?;
    println!(
        "prime store: {} ({} primes up to {})",
        session.store_path.display(),
        session.lab.store().total_primes(),
        session.lab.store().limit()
    );
    println!(
        "integral cache: {} ({} checkpoints up to t = {})",
        session.cache_path.display(),
        cache.len(),
        cache.covered()
    );
    Ok(())
}

/// Loaded stores plus where they live, so extensions can be written back.
struct Session {
    lab: Lab,
    store_path: PathBuf,
    cache_path: PathBuf,
    initial_checkpoints: usize,
}

impl Session {
    fn open(cfg: &RunConfig) -> Result<Self, CliError> {
        std::fs::create_dir_all(&cfg.cache_dir)?;
        let store_path = cfg.cache_dir.join(format!("primes-{}.jlpk", cfg.sieve_limit));
        let store = if store_path.exists() {
            let s = PrimeStore::load(&store_path)?;
            eprintln!("# prime store loaded, checksum verified: {}", store_path.display());
            s
        } else {
            let s = PrimeStore::build(cfg.sieve_limit)?;
            s.save(&store_path)?;
            eprintln!("# prime store built: {}", store_path.display());
            s
        };

        let eval_cfg = EvaluatorConfig { max_height: cfg.zeta_range, ..Default::default() };
        let quad = QuadratureConfig { rel_tol: cfg.rel_tol, ..Default::default() };
        let evaluator = CriticalLineEvaluator::new(eval_cfg)?;
        let fp = ladderlab_core::quadrature::fingerprint(&quad, &eval_cfg);
        let cache_path = cfg.cache_dir.join(format!("hl-{fp:016x}.jljc"));
        let cache = IntegralCache::open(evaluator, quad, &cache_path)?;
        let initial_checkpoints = cache.len();
        let ladder = Ladder::new(
            Arc::new(cache),
            LadderSolverConfig { t_min: LADDER_FLOOR, ..Default::default() },
        )?;
        Ok(Session { lab: Lab::new(Arc::new(store), ladder), store_path, cache_path, initial_checkpoints })
    }

    /// Saves the integral cache if this run extended it.
    fn persist(&self) -> Result<(), CliError> {
        let cache = self.lab.cache();
        if cache.len() != self.initial_checkpoints || !self.cache_path.exists() {
            cache.save(&self.cache_path)?;
        }
        Ok(())
    }
}
