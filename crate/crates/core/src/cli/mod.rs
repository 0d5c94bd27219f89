//! Command-line front end: file formats, generators, the experiment harness
//! and the `lasvcsp` subcommands.

pub mod formats;
pub mod generate;
pub mod harness;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

use crate::encode::{blp_value, maxcut_to_vcsp, to_ilp, ZeroOneLP};
use crate::error::{Error, Result};
use crate::exactlin::rational::{fmt_rational, parse_rational, to_f64};
use crate::exactlin::Rational;
use crate::lasserre::{lift_with_guard, SubsetIndex, DEFAULT_MAX_COORDINATES};
use crate::reductions::{brute_lin, brute_sat, threelin_to_threesat, threesat_to_maxcut, CnfFormula, BRUTE_CAP_VARS};
use crate::sdpsolve::SeparationStrategy;
use crate::vcsp::{brute_force_opt, VcspInstance, DEFAULT_BRUTE_FORCE_CAP};
use formats::GraphFile;
use harness::{LevelRun, LevelStatus, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "lasvcsp", version, about = "Lasserre hierarchy experiments on finite-valued CSPs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate an instance (.vcsp, .3lin, .cnf or .lp depending on the kind).
    Gen(GenArgs),
    /// Reduce 3LIN → 3SAT → MAXCUT, writing every intermediate file.
    Reduce(ReduceArgs),
    /// Write the 0–1 program of a VCSP instance.
    Encode(EncodeArgs),
    /// Write the level-t Lasserre pencil of a 0–1 program.
    Lift(LiftArgs),
    /// Solve the basic LP relaxation exactly.
    SolveBlp(InputArgs),
    /// Solve Lasserre levels with the ellipsoid method and round.
    SolveSdp(SolveArgs),
    /// Search for the smallest level whose rounded optimum is exact.
    MinLevel(MinLevelArgs),
    /// Re-check a solution file exactly.
    Certify(CertifyArgs),
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct GenKind {
    /// Unit-weight MAXCUT on the n-cycle.
    #[arg(long, value_name = "N")]
    pub maxcut_cycle: Option<usize>,
    /// Unit-weight MAXCUT on the complete graph K_n.
    #[arg(long, value_name = "N")]
    pub maxcut_complete: Option<usize>,
    /// Weighted MAXCUT on a random graph with n vertices.
    #[arg(long, value_name = "N")]
    pub random_maxcut: Option<usize>,
    /// Random 3LIN system: variables and equations.
    #[arg(long, num_args = 2, value_names = ["N", "M"])]
    pub random_3lin: Option<Vec<usize>>,
    /// Random 3SAT formula: variables and clauses.
    #[arg(long, num_args = 2, value_names = ["N", "M"])]
    pub random_3sat: Option<Vec<usize>>,
    /// Random feasible 0–1 program: variables and extra rows.
    #[arg(long, num_args = 2, value_names = ["N", "ROWS"])]
    pub random_lp: Option<Vec<usize>>,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(flatten)]
    pub kind: GenKind,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Largest edge weight of random graphs.
    #[arg(long, default_value_t = 1)]
    pub max_weight: u64,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Chain {
    #[value(name = "3lin")]
    ThreeLin,
    #[value(name = "3sat")]
    ThreeSat,
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    /// Format of the input: a .3lin system or a .cnf formula.
    #[arg(long, value_enum)]
    pub chain: Chain,
    pub input: PathBuf,
    /// Output path prefix (default: the input path without its extension).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EncodeArgs {
    pub input: PathBuf,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LiftArgs {
    /// A .vcsp instance or a .lp program.
    pub input: PathBuf,
    #[arg(long)]
    pub level: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_COORDINATES)]
    pub max_coordinates: usize,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// A .vcsp instance or a .lp program.
    pub input: PathBuf,
    #[arg(long, default_value_t = DEFAULT_BRUTE_FORCE_CAP)]
    pub brute_cap: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Ldl,
    Eigen,
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    /// Solver tolerance as p/q (default 1/(4·max{1,‖c‖})).
    #[arg(long, value_parser = parse_positive)]
    pub delta: Option<Rational>,
    /// Radius of the starting ball (default ⌊√N⌋ + 2).
    #[arg(long, value_parser = parse_positive)]
    pub radius: Option<Rational>,
    /// Solve in the folded space of an adaptively refined partition.
    #[arg(long)]
    pub fold: bool,
    #[arg(long, value_enum, default_value = "ldl")]
    pub strategy: StrategyArg,
    /// Iteration budget per solve (default from the volume bound).
    #[arg(long)]
    pub max_iterations: Option<u64>,
    #[arg(long, default_value_t = harness::DEFAULT_SOLVE_COORDINATES)]
    pub max_coordinates: usize,
    #[arg(long, default_value_t = DEFAULT_BRUTE_FORCE_CAP)]
    pub brute_cap: u64,
}

impl SolverArgs {
    fn config(&self, t_min: usize, t_max: usize) -> RunConfig {
        RunConfig {
            t_min,
            t_max,
            delta: self.delta.clone(),
            radius: self.radius.clone(),
            fold: self.fold,
            strategy: match self.strategy {
                StrategyArg::Ldl => SeparationStrategy::LdlWitness,
                StrategyArg::Eigen => SeparationStrategy::Eigen,
            },
            max_iterations: self.max_iterations,
            brute_cap: self.brute_cap,
            max_coordinates: self.max_coordinates,
            seed: 0,
        }
    }
}

fn parse_positive(s: &str) -> std::result::Result<Rational, String> {
    match parse_rational(s) {
        Some(q) if q > Rational::from_integer(0.into()) => Ok(q),
        Some(_) => Err("must be positive".into()),
        None => Err(format!("`{s}` is not a rational")),
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// A .vcsp instance, a .lp program or an .sdp pencil.
    pub input: PathBuf,
    /// Level, or an inclusive range `a..b`; ignored for .sdp input.
    #[arg(long, default_value = "1", value_parser = parse_levels)]
    pub level: (usize, usize),
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Solution file of the last solved level.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

fn parse_levels(s: &str) -> std::result::Result<(usize, usize), String> {
    let bad = |_| format!("`{s}` is not a level or a range a..b");
    match s.split_once("..") {
        Some((a, b)) => {
            let (a, b) = (a.parse().map_err(bad)?, b.parse().map_err(bad)?);
            if a > b {
                return Err(format!("empty range {s}"));
            }
            Ok((a, b))
        }
        None => {
            let t = s.parse().map_err(bad)?;
            Ok((t, t))
        }
    }
}

#[derive(Debug, Args)]
pub struct MinLevelArgs {
    /// One or more .vcsp instances; processed in parallel with LASVCSP_THREADS.
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    #[arg(long, default_value_t = 3)]
    pub t_max: usize,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Also write the table as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    /// The .vcsp instance or .lp program the solution belongs to.
    pub input: PathBuf,
    pub solution: PathBuf,
    #[arg(long, default_value_t = DEFAULT_MAX_COORDINATES)]
    pub max_coordinates: usize,
    #[arg(long, default_value_t = DEFAULT_BRUTE_FORCE_CAP)]
    pub brute_cap: u64,
}

/// Process exit code of an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } => 2,
        Error::BudgetExhausted { .. } => 3,
        Error::Contract(_) => 4,
        Error::TooLarge(_) | Error::Io(_) => 1,
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

/// Parse a file, naming it in diagnostics.
fn load<T>(path: &Path, parse: impl Fn(&str) -> Result<T>) -> Result<T> {
    parse(&read(path)?).map_err(|e| match e {
        Error::Parse { line, msg } => Error::Parse { line, msg: format!("{}: {msg}", path.display()) },
        other => other,
    })
}

fn extension(path: &Path) -> &str {
    path.extension().and_then(|e| e.to_str()).unwrap_or("")
}

fn unknown_type<T>(path: &Path, expected: &str) -> Result<T> {
    Err(Error::Parse { line: 0, msg: format!("{}: expected a {expected} file", path.display()) })
}

enum Program {
    Vcsp(VcspInstance),
    Lp(ZeroOneLP),
}

impl Program {
    fn load(path: &Path) -> Result<Self> {
        match extension(path) {
            "vcsp" => Ok(Program::Vcsp(load(path, formats::parse_vcsp)?)),
            "lp" => Ok(Program::Lp(load(path, formats::parse_lp)?)),
            _ => unknown_type(path, ".vcsp or .lp"),
        }
    }

    fn lp(&self) -> ZeroOneLP {
        match self {
            Program::Vcsp(inst) => to_ilp(inst),
            Program::Lp(lp) => lp.clone(),
        }
    }

    /// Exact integer optimum when the search space is small enough.
    fn integer_optimum(&self, cap: u64) -> Result<Option<BigInt>> {
        match self {
            Program::Vcsp(inst) => match brute_force_opt(inst, cap) {
                Ok((opt, _)) => Ok(Some(BigInt::from(opt))),
                Err(Error::TooLarge(_)) => Ok(None),
                Err(e) => Err(e),
            },
            Program::Lp(lp) => match lp.integer_optimum() {
                Ok(Some(v)) if v.is_integer() => Ok(Some(v.to_integer())),
                Ok(_) | Err(Error::TooLarge(_)) => Ok(None),
                Err(e) => Err(e),
            },
        }
    }
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Run one parsed command, writing reports to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Gen(a) => gen(a, out),
        Command::Reduce(a) => reduce(a, out),
        Command::Encode(a) => {
            let inst = match extension(&a.input) {
                "vcsp" => load(&a.input, formats::parse_vcsp)?,
                _ => return unknown_type(&a.input, ".vcsp"),
            };
            emit(out, a.output.as_deref(), &formats::write_lp(&to_ilp(&inst)))
        }
        Command::Lift(a) => {
            let lp = Program::load(&a.input)?.lp();
            let pencil = lift_with_guard(&lp, a.level, a.max_coordinates)?;
            let index = SubsetIndex::new(lp.num_vars(), 2 * a.level + 1);
            let names: Vec<String> = index.subsets()[1..]
                .iter()
                .map(|s| s.iter().map(|&v| lp.names()[v].as_str()).collect::<Vec<_>>().join(","))
                .map(|s| format!("{{{s}}}"))
                .collect();
            emit(out, a.output.as_deref(), &formats::write_sdp(pencil.sdp(), Some(&names)))
        }
        Command::SolveBlp(a) => solve_blp(a, out),
        Command::SolveSdp(a) => solve_sdp(a, out),
        Command::MinLevel(a) => min_level(a, out),
        Command::Certify(a) => certify(a, out),
    }
}

fn gen(a: GenArgs, out: &mut dyn Write) -> Result<()> {
    let mut rng = generate::seeded(a.seed);
    let k = &a.kind;
    let text = if let Some(n) = k.maxcut_cycle {
        formats::write_vcsp(&maxcut_to_vcsp(&crate::reductions::WeightedGraph::cycle(n)))
    } else if let Some(n) = k.maxcut_complete {
        formats::write_vcsp(&maxcut_to_vcsp(&generate::complete_graph(n)))
    } else if let Some(n) = k.random_maxcut {
        formats::write_vcsp(&maxcut_to_vcsp(&generate::random_graph(n, a.max_weight, &mut rng)?))
    } else if let Some(v) = &k.random_3lin {
        formats::write_3lin(&generate::random_3lin(v[0], v[1], &mut rng)?)
    } else if let Some(v) = &k.random_3sat {
        formats::write_cnf(&generate::random_3sat(v[0], v[1], &mut rng)?)
    } else if let Some(v) = &k.random_lp {
        formats::write_lp(&generate::random_lp(v[0], v[1], &mut rng)?)
    } else {
        unreachable!("clap requires one generator")
    };
    emit(out, a.output.as_deref(), &text)
}

fn flag(r: Result<bool>) -> Result<String> {
    match r {
        Ok(b) => Ok(b.to_string()),
        Err(Error::TooLarge(_)) => Ok("skipped (too large)".into()),
        Err(e) => Err(e),
    }
}

fn reduce(a: ReduceArgs, out: &mut dyn Write) -> Result<()> {
    let prefix = a.output.clone().unwrap_or_else(|| a.input.with_extension(""));
    let with_ext = |ext: &str| PathBuf::from(format!("{}.{ext}", prefix.display()));
    let cnf: CnfFormula = match a.chain {
        Chain::ThreeLin => {
            if extension(&a.input) != "3lin" {
                return unknown_type(&a.input, ".3lin");
            }
            let lin = load(&a.input, formats::parse_3lin)?;
            writeln!(out, "3lin    satisfiable={}", flag(brute_lin(&lin))?)?;
            let cnf = threelin_to_threesat(&lin)?;
            let path = with_ext("cnf");
            std::fs::write(&path, formats::write_cnf(&cnf))?;
            writeln!(out, "wrote   {}", path.display())?;
            cnf
        }
        Chain::ThreeSat => {
            if extension(&a.input) != "cnf" {
                return unknown_type(&a.input, ".cnf");
            }
            load(&a.input, formats::parse_cnf)?
        }
    };
    writeln!(out, "3sat    satisfiable={}", flag(brute_sat(&cnf))?)?;
    let (graph, threshold) = threesat_to_maxcut(&cnf);
    let reaches = if graph.num_vertices() <= BRUTE_CAP_VARS {
        let best = graph.brute_max_cut()?;
        format!("max-cut={best} reaches={}", best >= threshold)
    } else {
        "max-cut=skipped (too large)".into()
    };
    writeln!(out, "maxcut  threshold={threshold} {reaches}")?;
    let path = with_ext("graph");
    std::fs::write(&path, formats::write_graph(&GraphFile { graph, threshold: Some(threshold) }))?;
    writeln!(out, "wrote   {}", path.display())?;
    Ok(())
}

fn solve_blp(a: InputArgs, out: &mut dyn Write) -> Result<()> {
    let program = Program::load(&a.input)?;
    let value = match &program {
        Program::Vcsp(inst) => Some(blp_value(inst)?),
        Program::Lp(lp) => lp.lp_relaxation()?.value().cloned(),
    };
    match &value {
        Some(v) => writeln!(out, "blp  {} ({})", fmt_rational(v), to_f64(v))?,
        None => writeln!(out, "blp  infeasible")?,
    }
    match program.integer_optimum(a.brute_cap)? {
        Some(opt) => writeln!(out, "opt  {opt}")?,
        None => writeln!(out, "opt  skipped (too large)")?,
    }
    Ok(())
}

fn describe(run: &LevelRun, out: &mut dyn Write) -> Result<()> {
    let head = format!("level {}  coordinates {}  iterations {}", run.level, run.coordinates, run.iterations);
    match &run.status {
        LevelStatus::Solved(s) => {
            let rounded = s.rounded.as_ref().map(|r| r.to_string()).unwrap_or_else(|| "-".into());
            writeln!(out, "{head}  value {:.6}  rounded {rounded}", to_f64(&s.value))?;
        }
        LevelStatus::Empty => writeln!(out, "{head}  empty")?,
        LevelStatus::BudgetExhausted { .. } => writeln!(out, "{head}  budget exhausted")?,
        LevelStatus::TooLarge(msg) => writeln!(out, "{head}  too large: {msg}")?,
    }
    Ok(())
}

fn solve_sdp(a: SolveArgs, out: &mut dyn Write) -> Result<()> {
    let cfg = a.solver.config(a.level.0, a.level.1);
    cfg.validate()?;
    let runs = if extension(&a.input) == "sdp" {
        let (sdp, _) = load(&a.input, formats::parse_sdp)?;
        vec![harness::solve_pencil(&sdp, &cfg)?]
    } else {
        let lp = Program::load(&a.input)?.lp();
        (cfg.t_min..=cfg.t_max).map(|t| harness::solve_level(&lp, t, &cfg)).collect::<Result<Vec<_>>>()?
    };
    for run in &runs {
        describe(run, out)?;
    }
    let last = runs.last().expect("at least one level");
    if let Some(path) = &a.output {
        match last.solution() {
            Some(s) => std::fs::write(path, formats::write_solution(s))?,
            None => writeln!(out, "no solution written")?,
        }
    }
    match last.status {
        LevelStatus::BudgetExhausted { iterations } => Err(Error::BudgetExhausted { iterations }),
        _ => Ok(()),
    }
}

fn min_level(a: MinLevelArgs, out: &mut dyn Write) -> Result<()> {
    let cfg = a.solver.config(1, a.t_max);
    cfg.validate()?;
    let mut batch = Vec::with_capacity(a.inputs.len());
    for path in &a.inputs {
        if extension(path) != "vcsp" {
            return unknown_type(path, ".vcsp");
        }
        let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("instance").to_string();
        batch.push((name, load(path, formats::parse_vcsp)?));
    }
    let rows = harness::capture_batch(&batch, a.t_max, &cfg, harness::thread_count())
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    out.write_all(harness::capture_table(&rows).as_bytes())?;
    if let Some(path) = &a.csv {
        std::fs::write(path, harness::capture_csv(&rows))?;
    }
    Ok(())
}

fn certify(a: CertifyArgs, out: &mut dyn Write) -> Result<()> {
    let program = Program::load(&a.input)?;
    let sol = load(&a.solution, formats::parse_solution)?;
    let cfg = RunConfig { max_coordinates: a.max_coordinates, brute_cap: a.brute_cap, ..Default::default() };
    let opt = program.integer_optimum(a.brute_cap)?;
    let report = harness::certify(&program.lp(), &sol, opt.as_ref(), &cfg)?;
    let mark = |b: bool| if b { "ok" } else { "FAILED" };
    writeln!(out, "feasible          {}", mark(report.feasible))?;
    writeln!(out, "value             {}", mark(report.value_matches))?;
    writeln!(out, "rounding          {}", mark(report.rounding_consistent))?;
    match (report.within_quarter, &opt) {
        (Some(b), Some(opt)) => writeln!(out, "within 1/4 of {opt}  {}", mark(b))?,
        _ => writeln!(out, "within 1/4        skipped (no ground truth)")?,
    }
    if report.ok() {
        writeln!(out, "certified")?;
        Ok(())
    } else {
        Err(Error::Contract("solution rejected".into()))
    }
}
