//! `necklace`: solvers, exact probabilities and seeded experiments from the shell.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 when a size guard refuses the input.
//! Data goes to `--out` or stdout; the resolved parameters are echoed on stderr.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use necklace_core::experiments::{self, ExperimentResult};
use necklace_core::heuristics::{
    incremental_two_thief, interval_hypergraph_partition, FairSolution,
};
use necklace_core::oracles;
use necklace_core::rng::cell_seed;
use necklace_core::solver::{min_cuts_exact, min_cuts_two};
use necklace_core::walks::{fold_min, fold_min_direct, NonReturnCurve};
use necklace_core::{generate_uniform, Error, Necklace, Real};
use serde_json::json;

#[derive(Parser, Debug)]
#[command(
    name = "necklace",
    version,
    about = "Fair necklace splitting: solvers, oracles and experiments"
)]
struct Cli {
    /// Seed for every random draw; required by commands that sample.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Monte Carlo trials per grid cell (each command has its own default).
    #[arg(long, global = true)]
    trials: Option<u64>,
    /// Write data here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads (0 = one per core). Output does not depend on this.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample uniform necklaces as JSON lines.
    Gen(GenArgs),
    /// Minimum-cut fair split of given necklaces.
    Solve(SolveArgs),
    /// Exact and asymptotic probabilities.
    Prob(ProbArgs),
    /// Distribution of the minimum cut count.
    Dist(DistArgs),
    /// P(X = s) along a grid of m, with a log-log slope.
    Sweep(SweepArgs),
    /// P(X <= (t+1)/2) times ln m along a grid of m.
    Loglaw(LoglawArgs),
    /// Moments of the number of fair s-cut partitions.
    Moments(MomentsArgs),
    /// Share of necklaces below the typical lower bound.
    Lower(LowerArgs),
    /// Spread of the incremental heuristic across t.
    Concentration(ConcentrationArgs),
    /// Run a splitting heuristic on given or sampled necklaces.
    Heuristic(HeuristicArgs),
    /// Cut fraction of the window heuristic across k.
    Trend(TrendArgs),
    /// Random-walk non-return probabilities.
    Walk(WalkArgs),
    /// Minimum number of foldings.
    Fold(FoldArgs),
}

#[derive(Args, Debug)]
struct NecklaceInput {
    /// Necklace as a JSON bead array (`[0,1,1,0]`) or a JSON object as printed by `gen`.
    #[arg(long, conflicts_with = "input")]
    necklace: Option<String>,
    /// JSON-lines file, one necklace per line.
    #[arg(long = "in")]
    input: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    t: usize,
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 1)]
    count: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Backend {
    Auto,
    Dfs,
    Exact,
}

#[derive(Args, Debug)]
struct SolveArgs {
    /// Number of thieves; taken from the necklace when it is a JSON object.
    #[arg(long)]
    k: Option<usize>,
    #[command(flatten)]
    input: NecklaceInput,
    #[arg(long, value_enum, default_value = "auto")]
    backend: Backend,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Quantity {
    /// Probability that the halves split is fair.
    Exact,
    /// Stirling approximation of `exact`.
    Asymptotic,
    /// Closed form for m = 1.
    M1,
    /// Number of s-cut partitions.
    Scount,
    /// Expected number of fair s-cut partitions.
    Expected,
    /// Probability that two partitions at distance q are both fair.
    Pair,
    /// Composition collision probability at distance q.
    Collision,
    /// 2 H^{-1}(1/2).
    Entropy,
}

#[derive(Args, Debug)]
struct ProbArgs {
    #[arg(value_enum)]
    quantity: Quantity,
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, default_value_t = 1)]
    t: usize,
    #[arg(long, default_value_t = 1)]
    m: usize,
    #[arg(long)]
    s: Option<usize>,
    #[arg(long)]
    q: Option<usize>,
    /// Significant digits of the decimal rendering.
    #[arg(long, default_value_t = 12)]
    digits: usize,
}

#[derive(Args, Debug)]
struct DistArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    t: usize,
    #[arg(long)]
    m: usize,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long)]
    t: usize,
    #[arg(long)]
    s: usize,
    #[arg(long, value_delimiter = ',', required = true)]
    m: Vec<usize>,
}

#[derive(Args, Debug)]
struct LoglawArgs {
    #[arg(long, default_value_t = 3)]
    t: usize,
    #[arg(long, value_delimiter = ',', required = true)]
    m: Vec<usize>,
}

#[derive(Args, Debug)]
struct MomentsArgs {
    #[arg(long)]
    t: usize,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    s: usize,
    /// Average over every necklace instead of sampling.
    #[arg(long)]
    exhaustive: bool,
}

#[derive(Args, Debug)]
struct LowerArgs {
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long)]
    t: usize,
    #[arg(long, value_delimiter = ',', required = true)]
    m: Vec<usize>,
}

#[derive(Args, Debug)]
struct ConcentrationArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    t: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Heuristic {
    Incremental,
    Interval,
}

#[derive(Args, Debug)]
struct HeuristicArgs {
    #[arg(value_enum)]
    algorithm: Heuristic,
    /// Thieves (2 for the incremental algorithm).
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Types of sampled necklaces; ignored with --necklace/--in.
    #[arg(long)]
    t: Option<usize>,
    /// Window length of the interval algorithm.
    #[arg(long = "c", default_value_t = 4)]
    c: usize,
    #[command(flatten)]
    input: NecklaceInput,
}

#[derive(Args, Debug)]
struct TrendArgs {
    #[arg(long)]
    t: usize,
    #[arg(long = "c")]
    c: usize,
    #[arg(long, value_delimiter = ',', required = true)]
    k: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum WalkKind {
    /// Sums of s two-sided walks over a grid of N.
    Nonreturn,
    /// One difference walk over a grid of step counts.
    Single,
}

#[derive(Args, Debug)]
struct WalkArgs {
    #[arg(value_enum)]
    kind: WalkKind,
    /// Number of summed walks (nonreturn).
    #[arg(long, default_value_t = 2)]
    s: usize,
    /// Types (single).
    #[arg(long, default_value_t = 3)]
    t: usize,
    /// Sample the conditioned necklace model with this m instead of the memoryless one
    /// (single).
    #[arg(long)]
    m: Option<usize>,
    /// Grid of N (nonreturn) or step counts (single).
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
}

#[derive(Args, Debug)]
struct FoldArgs {
    #[command(flatten)]
    input: NecklaceInput,
    /// Search fold sets directly instead of going through the cut solver.
    #[arg(long)]
    direct: bool,
}

enum Failure {
    Usage(String),
    TooLarge(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_too_large() {
            Failure::TooLarge(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(format!("i/o: {e}"))
    }
}

type Outcome<T = ()> = Result<T, Failure>;

struct Ctx {
    seed: Option<u64>,
    trials: Option<u64>,
    format: Option<Format>,
}

impl Ctx {
    fn seed(&self) -> Outcome<u64> {
        self.seed
            .ok_or_else(|| Failure::Usage("this command samples; pass --seed".into()))
    }

    fn trials(&self, default: u64) -> Outcome<u64> {
        match self.trials.unwrap_or(default) {
            0 => Err(Failure::Usage("--trials must be at least 1".into())),
            n => Ok(n),
        }
    }

    fn format(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp
                | clap::error::ErrorKind::DisplayVersion
                | clap::error::ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
    {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(1);
        }
    };
    let ctx = Ctx {
        seed: cli.seed,
        trials: cli.trials,
        format: cli.format,
    };
    let result = pool.install(|| run(&cli.command, &ctx));
    let data = match result {
        Ok(data) => data,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
        Err(Failure::TooLarge(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let written = match &cli.out {
        Some(path) => fs::write(path, data.as_bytes()),
        None => io::stdout().lock().write_all(data.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: writing output: {e}");
        return ExitCode::from(1);
    }
    ExitCode::SUCCESS
}

fn echo(spec: &serde_json::Value) {
    eprintln!("# spec: {spec}");
}

fn read_necklaces(input: &NecklaceInput, k: Option<usize>) -> Outcome<Vec<Necklace>> {
    let lines: Vec<String> = match (&input.necklace, &input.input) {
        (Some(text), None) => vec![text.clone()],
        (None, Some(path)) => fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("reading {}: {e}", path.display())))?
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(str::to_string)
            .collect(),
        _ => return Err(Failure::Usage("pass --necklace or --in".into())),
    };
    lines.iter().map(|l| parse_necklace(l, k)).collect()
}

fn parse_necklace(text: &str, k: Option<usize>) -> Outcome<Necklace> {
    let text = text.trim();
    if text.starts_with('[') {
        let beads: Vec<u32> = serde_json::from_str(text)
            .map_err(|e| Failure::Usage(format!("necklace array: {e}")))?;
        let k = k.ok_or_else(|| Failure::Usage("a bead array needs --k".into()))?;
        Ok(Necklace::from_beads(k, beads)?)
    } else {
        let n = Necklace::from_json(text)?;
        if let Some(k) = k {
            if k != n.k() {
                return Err(Failure::Usage(format!(
                    "--k {k} disagrees with the necklace's k = {}",
                    n.k()
                )));
            }
        }
        Ok(n)
    }
}

fn experiment_output(result: &ExperimentResult<Real>, format: Format) -> String {
    eprintln!("# spec: {}", result.spec.to_json());
    match format {
        Format::Csv => result.to_csv(),
        Format::Json => result.to_json(),
    }
}

fn run(command: &Command, ctx: &Ctx) -> Outcome<String> {
    match command {
        Command::Gen(a) => {
            let seed = ctx.seed()?;
            echo(
                &json!({"command": "gen", "k": a.k, "t": a.t, "m": a.m, "count": a.count, "seed": seed}),
            );
            let cell = cell_seed(seed, 0);
            let mut out = String::new();
            for i in 0..a.count {
                out.push_str(&generate_uniform(a.k, a.t, a.m, cell.trial(i))?.to_json());
                out.push('\n');
            }
            Ok(out)
        }
        Command::Solve(a) => {
            let necklaces = read_necklaces(&a.input, a.k)?;
            echo(
                &json!({"command": "solve", "backend": format!("{:?}", a.backend).to_lowercase(), "necklaces": necklaces.len()}),
            );
            let format = ctx.format(Format::Json);
            let mut out = String::new();
            if format == Format::Csv {
                out.push_str("k,t,m,s,cuts,owners\n");
            }
            for n in &necklaces {
                let w = match (a.backend, n.k()) {
                    (Backend::Exact, k) | (Backend::Auto, k @ (1 | 3..)) => min_cuts_exact(n, k)?,
                    (Backend::Dfs | Backend::Auto, 2) => min_cuts_two(n)?,
                    (Backend::Dfs, k) => {
                        return Err(Failure::Usage(format!(
                            "the dfs backend needs k = 2, got {k}"
                        )))
                    }
                    (Backend::Auto, _) => unreachable!("k >= 1"),
                };
                match format {
                    Format::Json => out.push_str(&w.to_json()),
                    Format::Csv => out.push_str(&format!(
                        "{},{},{},{},{},{}",
                        n.k(),
                        n.t(),
                        n.m(),
                        w.cut_count,
                        join(w.partition.cuts()),
                        join(w.partition.owners())
                    )),
                }
                out.push('\n');
            }
            Ok(out)
        }
        Command::Prob(a) => prob(a, ctx),
        Command::Dist(a) => {
            let r = experiments::estimate_distribution::<Real>(
                a.k,
                a.t,
                a.m,
                ctx.trials(10_000)?,
                ctx.seed()?,
            )?;
            Ok(experiment_output(&r, ctx.format(Format::Csv)))
        }
        Command::Sweep(a) => {
            let r = experiments::sweep_exponent::<Real>(
                a.t,
                a.s,
                &a.m,
                ctx.trials(100_000)?,
                ctx.seed()?,
            )?;
            Ok(experiment_output(&r, ctx.format(Format::Csv)))
        }
        Command::Loglaw(a) => {
            let r =
                experiments::check_log_law::<Real>(a.t, &a.m, ctx.trials(20_000)?, ctx.seed()?)?;
            Ok(experiment_output(&r, ctx.format(Format::Csv)))
        }
        Command::Moments(a) if a.exhaustive => {
            echo(&json!({"command": "moments", "t": a.t, "m": a.m, "s": a.s, "exhaustive": true}));
            let e = experiments::moment_check_exhaustive(a.t, a.m, a.s)?;
            Ok(match ctx.format(Format::Json) {
                Format::Json => format!("{}\n", serde_json::to_string(&e).expect("serializes")),
                Format::Csv => format!(
                    "t,m,s,necklaces,mean,second_moment,oracle_mean\n{},{},{},{},{},{},{}\n",
                    a.t, a.m, a.s, e.necklaces, e.mean, e.second_moment, e.oracle_mean
                ),
            })
        }
        Command::Moments(a) => {
            let r =
                experiments::moment_check::<Real>(a.t, a.m, a.s, ctx.trials(10_000)?, ctx.seed()?)?;
            Ok(experiment_output(&r, ctx.format(Format::Csv)))
        }
        Command::Lower(a) => {
            let r = experiments::lower_bound_check::<Real>(
                a.k,
                a.t,
                &a.m,
                ctx.trials(10_000)?,
                ctx.seed()?,
            )?;
            Ok(experiment_output(&r, ctx.format(Format::Csv)))
        }
        Command::Concentration(a) => {
            let r = experiments::concentration_check::<Real>(&a.t, ctx.trials(200)?, ctx.seed()?)?;
            Ok(experiment_output(&r, ctx.format(Format::Csv)))
        }
        Command::Trend(a) => {
            let r =
                experiments::interval_trend::<Real>(a.t, a.c, &a.k, ctx.trials(20)?, ctx.seed()?)?;
            Ok(experiment_output(&r, ctx.format(Format::Csv)))
        }
        Command::Heuristic(a) => heuristic(a, ctx),
        Command::Walk(a) => walk(a, ctx),
        Command::Fold(a) => {
            let necklaces = read_necklaces(&a.input, Some(2))?;
            echo(&json!({"command": "fold", "direct": a.direct, "necklaces": necklaces.len()}));
            let format = ctx.format(Format::Json);
            let mut out = String::new();
            if format == Format::Csv {
                out.push_str("folds\n");
            }
            for n in &necklaces {
                let folds = if a.direct {
                    fold_min_direct(n)?
                } else {
                    fold_min(n)?
                };
                match format {
                    Format::Json => out.push_str(&json!({ "folds": folds }).to_string()),
                    Format::Csv => out.push_str(&folds.to_string()),
                }
                out.push('\n');
            }
            Ok(out)
        }
    }
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(";")
}

fn need(v: Option<usize>, flag: &str) -> Outcome<usize> {
    v.ok_or_else(|| Failure::Usage(format!("this quantity needs --{flag}")))
}

fn prob(a: &ProbArgs, ctx: &Ctx) -> Outcome<String> {
    let name = format!("{:?}", a.quantity).to_lowercase();
    echo(
        &json!({"command": "prob", "quantity": name, "k": a.k, "t": a.t, "m": a.m, "s": a.s, "q": a.q}),
    );
    let exact = match a.quantity {
        Quantity::Exact => Some(oracles::fair_probability_exact(a.k, a.t, a.m)?),
        Quantity::M1 => Some(oracles::m1_fair_probability(a.t)?),
        Quantity::Scount => Some(oracles::s_cut_partition_count(a.t, a.m, need(a.s, "s")?)?),
        Quantity::Expected => Some(oracles::expected_fair_scut(a.t, a.m, need(a.s, "s")?)?),
        Quantity::Pair => Some(oracles::pair_fair_probability(a.t, a.m, need(a.q, "q")?)?),
        Quantity::Collision => Some(oracles::collision_probability(a.t, a.m, need(a.q, "q")?)?),
        Quantity::Asymptotic | Quantity::Entropy => None,
    };
    let (fraction, decimal) = match exact {
        Some(p) => (Some(p.to_fraction_string()), p.to_decimal_string(a.digits)),
        None => {
            let v: Real = match a.quantity {
                Quantity::Asymptotic => oracles::fair_probability_asymptotic(a.k, a.t, a.m)?,
                _ => 2.0 * oracles::entropy_threshold::<Real>(),
            };
            (None, format!("{:.*}", a.digits, v))
        }
    };
    Ok(match ctx.format(Format::Json) {
        Format::Json => format!(
            "{}\n",
            json!({"quantity": name, "k": a.k, "t": a.t, "m": a.m, "s": a.s, "q": a.q,
                   "fraction": fraction, "decimal": decimal})
        ),
        Format::Csv => {
            let opt = |v: Option<usize>| v.map(|x| x.to_string()).unwrap_or_default();
            format!(
                "quantity,k,t,m,s,q,fraction,decimal\n{name},{},{},{},{},{},{},{decimal}\n",
                a.k,
                a.t,
                a.m,
                opt(a.s),
                opt(a.q),
                fraction.unwrap_or_default()
            )
        }
    })
}

fn heuristic(a: &HeuristicArgs, ctx: &Ctx) -> Outcome<String> {
    let necklaces = if a.input.necklace.is_some() || a.input.input.is_some() {
        read_necklaces(&a.input, Some(a.k))?
    } else {
        let t = need(a.t, "t")?;
        let seed = ctx.seed()?;
        let cell = cell_seed(seed, 0);
        (0..ctx.trials(1)?)
            .map(|i| generate_uniform(a.k, t, 1, cell.trial(i)))
            .collect::<Result<_, _>>()?
    };
    let algorithm = format!("{:?}", a.algorithm).to_lowercase();
    echo(
        &json!({"command": "heuristic", "algorithm": algorithm, "k": a.k, "t": a.t, "c": a.c,
                 "seed": ctx.seed, "necklaces": necklaces.len()}),
    );
    let solutions: Vec<FairSolution> = necklaces
        .iter()
        .map(|n| match a.algorithm {
            Heuristic::Incremental => incremental_two_thief(n),
            Heuristic::Interval => interval_hypergraph_partition(n, a.k, a.c),
        })
        .collect::<Result<_, _>>()?;
    let mut out = String::new();
    match ctx.format(Format::Json) {
        Format::Json => {
            for s in &solutions {
                out.push_str(&s.to_json());
                out.push('\n');
            }
        }
        Format::Csv => {
            out.push_str("t,k,C,cuts_intervals,cuts_leftover,cut_count\n");
            let c = match a.algorithm {
                Heuristic::Incremental => String::new(),
                Heuristic::Interval => a.c.to_string(),
            };
            for (n, s) in necklaces.iter().zip(&solutions) {
                out.push_str(&format!(
                    "{},{},{c},{},{},{}\n",
                    n.t(),
                    n.k(),
                    s.stats.cuts_intervals,
                    s.stats.cuts_leftover,
                    s.cut_count
                ));
            }
        }
    }
    Ok(out)
}

fn walk(a: &WalkArgs, ctx: &Ctx) -> Outcome<String> {
    let seed = ctx.seed()?;
    let trials = ctx.trials(10_000)?;
    let (result, curve): (ExperimentResult<Real>, NonReturnCurve<Real>) = match a.kind {
        WalkKind::Nonreturn => experiments::walk_nonreturn(a.s, &a.n, trials, seed)?,
        WalkKind::Single => experiments::walk_single(a.t, a.m, &a.n, trials, seed)?,
    };
    let spec = result.spec.to_json();
    eprintln!("# spec: {spec}");
    Ok(match ctx.format(Format::Csv) {
        Format::Csv => {
            let mut out = format!("# spec: {spec}\nN_or_steps,trials,estimate,ci_low,ci_high\n");
            for p in &curve.points {
                let e = &p.estimate;
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    p.n, e.trials, e.estimate, e.ci_low, e.ci_high
                ));
            }
            out
        }
        Format::Json => {
            let points: Vec<_> = curve
                .points
                .iter()
                .map(|p| {
                    json!({"N_or_steps": p.n, "trials": p.estimate.trials, "estimate": p.estimate.estimate,
                           "ci_low": p.estimate.ci_low, "ci_high": p.estimate.ci_high})
                })
                .collect();
            let mut s =
                serde_json::to_string_pretty(&json!({"spec": result.spec, "points": points}))
                    .expect("serializes");
            s.push('\n');
            s
        }
    })
}
