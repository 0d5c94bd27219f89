//! The experiment pipeline: BLP, lift, ellipsoid solve, rounding, and the
//! search for the minimum capture level.

use std::fmt::Write as _;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::formats::Solution;
use crate::encode::{blp_value, to_ilp, ZeroOneLP};
use crate::error::{contract, Error, Result};
use crate::exactlin::rational::{fmt_rational, nearest_integer, to_f64};
use crate::exactlin::{psd_certificate, LpOutcome, Rational};
use crate::lasserre::lift_with_guard;
use crate::sdpsolve::{
    ellipsoid_optimize, folded_optimize, round_to_integer_optimum, rounding_tolerance, EllipsoidConfig, InequalitySDP,
    Outcome, SeparationStrategy,
};
use crate::vcsp::{brute_force_opt, VcspInstance, DEFAULT_BRUTE_FORCE_CAP};

/// Default solve guard. Ellipsoid time grows like `N⁴`; around 100
/// coordinates a level already takes minutes.
pub const DEFAULT_SOLVE_COORDINATES: usize = 128;

/// Everything that parameterises a run besides the input files.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub t_min: usize,
    pub t_max: usize,
    /// Solver tolerance; `None` selects `rounding_tolerance(c)`.
    pub delta: Option<Rational>,
    /// Radius of the starting ball; `None` selects `⌊√N⌋ + 2`.
    pub radius: Option<Rational>,
    pub fold: bool,
    pub strategy: SeparationStrategy,
    pub max_iterations: Option<u64>,
    /// Brute-force cap on the number of assignments.
    pub brute_cap: u64,
    /// Levels whose pencil has more coordinates are reported, not solved.
    pub max_coordinates: usize,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            t_min: 1,
            t_max: 1,
            delta: None,
            radius: None,
            fold: false,
            strategy: SeparationStrategy::default(),
            max_iterations: None,
            brute_cap: DEFAULT_BRUTE_FORCE_CAP,
            max_coordinates: DEFAULT_SOLVE_COORDINATES,
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.delta.as_ref().is_some_and(|d| !d.is_positive()) {
            return contract("delta must be positive");
        }
        if self.radius.as_ref().is_some_and(|r| !r.is_positive()) {
            return contract("radius must be positive");
        }
        if self.t_min > self.t_max {
            return contract("empty level range");
        }
        Ok(())
    }

    pub fn delta_for(&self, c: &[Rational]) -> Rational {
        self.delta.clone().unwrap_or_else(|| rounding_tolerance(c))
    }

    pub fn radius_for(&self, num_coordinates: usize) -> Rational {
        self.radius.clone().unwrap_or_else(|| default_radius(num_coordinates))
    }

    fn ellipsoid(&self) -> EllipsoidConfig {
        EllipsoidConfig { strategy: self.strategy, max_iterations: self.max_iterations, ..Default::default() }
    }
}

/// `⌊√N⌋ + 2`: the cube `[0,1]^N` and its enlargement fit strictly inside.
pub fn default_radius(num_coordinates: usize) -> Rational {
    Rational::from_integer(BigInt::from(num_coordinates).sqrt() + 2)
}

/// Result of one level of one instance.
#[derive(Debug, Clone, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum LevelStatus {
    Solved(Solution),
    Empty,
    BudgetExhausted { iterations: u64 },
    TooLarge(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelRun {
    pub level: usize,
    pub coordinates: usize,
    pub iterations: u64,
    pub status: LevelStatus,
}

impl LevelRun {
    pub fn solution(&self) -> Option<&Solution> {
        match &self.status {
            LevelStatus::Solved(s) => Some(s),
            _ => None,
        }
    }

    pub fn rounded(&self) -> Option<&BigInt> {
        self.solution().and_then(|s| s.rounded.as_ref())
    }

    fn status_name(&self) -> &'static str {
        match self.status {
            LevelStatus::Solved(_) => "solved",
            LevelStatus::Empty => "empty",
            LevelStatus::BudgetExhausted { .. } => "budget",
            LevelStatus::TooLarge(_) => "too-large",
        }
    }
}

fn rounded_value(value: &Rational, c: &[Rational]) -> Option<BigInt> {
    round_to_integer_optimum(value, c).ok()
}

/// Solve level `t` of a 0–1 program; level 0 is its LP relaxation.
///
/// Budget exhaustion and the lift guard are reported in the status; other
/// failures are errors.
pub fn solve_level(lp: &ZeroOneLP, t: usize, cfg: &RunConfig) -> Result<LevelRun> {
    if t == 0 {
        let status = match lp.lp_relaxation()? {
            LpOutcome::Optimal { x, value } => LevelStatus::Solved(Solution {
                level: 0,
                delta: Rational::zero(),
                eta: Rational::zero(),
                rounded: rounded_value(&value, lp.c()),
                value,
                point: x,
            }),
            LpOutcome::Infeasible => LevelStatus::Empty,
            LpOutcome::Unbounded => return contract("LP relaxation is unbounded; box rows are missing"),
        };
        return Ok(LevelRun { level: 0, coordinates: lp.num_vars(), iterations: 0, status });
    }
    let pencil = match lift_with_guard(lp, t, cfg.max_coordinates) {
        Ok(p) => p,
        Err(Error::TooLarge(msg)) => {
            return Ok(LevelRun { level: t, coordinates: 0, iterations: 0, status: LevelStatus::TooLarge(msg) })
        }
        Err(e) => return Err(e),
    };
    let sdp = pencil.into_sdp();
    let mut run = solve_pencil(&sdp, cfg)?;
    run.level = t;
    if let LevelStatus::Solved(s) = &mut run.status {
        s.level = t;
    }
    Ok(run)
}

/// One ellipsoid solve of an explicit pencil.
pub fn solve_pencil(sdp: &InequalitySDP, cfg: &RunConfig) -> Result<LevelRun> {
    cfg.validate()?;
    let n = sdp.num_vars();
    let delta = cfg.delta_for(sdp.c());
    let radius = cfg.radius_for(n);
    let ecfg = cfg.ellipsoid();
    let solved = if cfg.fold {
        folded_optimize(sdp, &delta, &radius, &ecfg)
    } else {
        ellipsoid_optimize(sdp, &delta, &radius, &ecfg)
    };
    let report = match solved {
        Ok(r) => r,
        Err(Error::BudgetExhausted { iterations }) => {
            return Ok(LevelRun {
                level: 0,
                coordinates: n,
                iterations,
                status: LevelStatus::BudgetExhausted { iterations },
            })
        }
        Err(e) => return Err(e),
    };
    let status = match report.outcome {
        Outcome::Optimal { value, point } => LevelStatus::Solved(Solution {
            level: 0,
            delta,
            eta: report.eta,
            rounded: rounded_value(&value, sdp.c()),
            value,
            point,
        }),
        Outcome::Empty => LevelStatus::Empty,
    };
    Ok(LevelRun { level: 0, coordinates: n, iterations: report.iterations, status })
}

/// One row of the capture table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaptureRow {
    pub name: String,
    pub opt: u64,
    pub blp: Rational,
    /// Level 0 first, then every level attempted.
    pub levels: Vec<LevelRun>,
    /// Smallest capturing level, `None` when not captured up to `t_max`.
    pub capture: Option<usize>,
}

impl CaptureRow {
    /// The capture level, `> t` when every level up to `t` was solved
    /// without capture, `unknown` when some level could not be solved.
    pub fn verdict(&self) -> String {
        match self.capture {
            Some(t) => t.to_string(),
            None if self.levels.iter().all(|l| l.solution().is_some() || l.status == LevelStatus::Empty) => {
                format!("> {}", self.levels.last().map_or(0, |l| l.level))
            }
            None => "unknown".into(),
        }
    }
}

/// The smallest `t ≤ t_max` whose rounded Lasserre optimum equals the
/// brute-force optimum; `t = 0` when the BLP value equals it exactly.
///
/// Levels are tried in increasing order and the search stops at the first
/// capture. A level that exhausts its budget is recorded and the search
/// continues; a level refused by the lift guard ends it.
pub fn min_capture_level(name: &str, inst: &VcspInstance, t_max: usize, cfg: &RunConfig) -> Result<CaptureRow> {
    cfg.validate()?;
    let (opt, _) = brute_force_opt(inst, cfg.brute_cap)?;
    let lp = to_ilp(inst);
    let blp = blp_value(inst)?;
    let target = BigInt::from(opt);
    let mut levels = vec![solve_level(&lp, 0, cfg)?];
    let mut capture = (blp == Rational::from_integer(target.clone())).then_some(0);
    for t in 1..=t_max {
        if capture.is_some() {
            break;
        }
        let run = solve_level(&lp, t, cfg)?;
        let stop = matches!(run.status, LevelStatus::TooLarge(_));
        if run.rounded() == Some(&target) {
            capture = Some(t);
        }
        levels.push(run);
        if stop {
            break;
        }
    }
    Ok(CaptureRow { name: name.to_string(), opt, blp, levels, capture })
}

/// Thread count for batches, from `LASVCSP_THREADS` (default 1).
pub fn thread_count() -> usize {
    std::env::var("LASVCSP_THREADS").ok().and_then(|s| s.parse().ok()).filter(|&k| k > 0).unwrap_or(1)
}

/// [`min_capture_level`] over a batch; results keep the input order.
pub fn capture_batch(
    batch: &[(String, VcspInstance)],
    t_max: usize,
    cfg: &RunConfig,
    threads: usize,
) -> Vec<Result<CaptureRow>> {
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<Result<CaptureRow>>>> = batch.iter().map(|_| Mutex::new(None)).collect();
    std::thread::scope(|s| {
        for _ in 0..threads.clamp(1, batch.len().max(1)) {
            s.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                let Some((name, inst)) = batch.get(k) else { break };
                let row = min_capture_level(name, inst, t_max, cfg);
                *slots[k].lock().expect("no poisoned slot") = Some(row);
            });
        }
    });
    slots.into_iter().map(|m| m.into_inner().expect("no poisoned slot").expect("every slot filled")).collect()
}

fn decimal(q: &Rational) -> String {
    format!("{:.4}", to_f64(q))
}

fn level_cell(run: &LevelRun) -> String {
    match &run.status {
        LevelStatus::Solved(s) => match &s.rounded {
            Some(r) => format!("{} ({r})", decimal(&s.value)),
            None => decimal(&s.value),
        },
        LevelStatus::Empty => "empty".into(),
        LevelStatus::BudgetExhausted { iterations } => format!("budget@{iterations}"),
        LevelStatus::TooLarge(_) => "too-large".into(),
    }
}

/// Human-readable table, one row per instance.
pub fn capture_table(rows: &[CaptureRow]) -> String {
    let width = rows.iter().map(|r| r.levels.len()).max().unwrap_or(1);
    let mut header: Vec<String> = vec!["instance".into(), "Opt".into(), "BLP".into()];
    header.extend((1..width).map(|t| format!("L{t}")));
    header.push("capture".into());
    let mut cells: Vec<Vec<String>> = vec![header];
    for r in rows {
        let mut line = vec![r.name.clone(), r.opt.to_string(), fmt_rational(&r.blp)];
        for t in 1..width {
            line.push(r.levels.get(t).map(level_cell).unwrap_or_else(|| "-".into()));
        }
        line.push(r.verdict());
        cells.push(line);
    }
    let cols = cells[0].len();
    let widths: Vec<usize> = (0..cols).map(|k| cells.iter().map(|l| l[k].chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for line in &cells {
        let padded: Vec<String> = line.iter().zip(&widths).map(|(s, w)| format!("{s:<w$}")).collect();
        writeln!(out, "{}", padded.join("  ").trim_end()).unwrap();
    }
    out
}

/// Machine-readable table, one line per instance and level.
pub fn capture_csv(rows: &[CaptureRow]) -> String {
    let mut out = String::from("instance,opt,blp,level,status,value,rounded,iterations,coordinates,capture\n");
    for r in rows {
        for run in &r.levels {
            let (value, rounded) = match run.solution() {
                Some(s) => (fmt_rational(&s.value), s.rounded.as_ref().map(|z| z.to_string()).unwrap_or_default()),
                None => (String::new(), String::new()),
            };
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                r.name,
                r.opt,
                fmt_rational(&r.blp),
                run.level,
                run.status_name(),
                value,
                rounded,
                run.iterations,
                run.coordinates,
                r.verdict()
            )
            .unwrap();
        }
    }
    out
}

/// Outcome of re-checking a solution file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertifyReport {
    pub feasible: bool,
    pub value_matches: bool,
    pub rounding_consistent: bool,
    /// `|value − Opt| ≤ 1/4`, when a ground truth was available.
    pub within_quarter: Option<bool>,
}

impl CertifyReport {
    pub fn ok(&self) -> bool {
        self.feasible && self.value_matches && self.rounding_consistent && self.within_quarter != Some(false)
    }
}

/// Exact re-check of a solution of `lp` at the recorded level.
///
/// Level 0 points must satisfy every row; higher levels must make every
/// block of the `η`-enlarged pencil PSD. The value must equal `⟨c, point⟩`,
/// the recorded rounding must be the nearest integer, and when `opt` is
/// given the value must lie within 1/4 of it.
pub fn certify(lp: &ZeroOneLP, sol: &Solution, opt: Option<&BigInt>, cfg: &RunConfig) -> Result<CertifyReport> {
    let (feasible, objective) = if sol.level == 0 {
        if sol.point.len() != lp.num_vars() {
            return contract(format!("point has {} coordinates, the LP has {}", sol.point.len(), lp.num_vars()));
        }
        (lp.satisfies_rows(&sol.point), lp.objective(&sol.point))
    } else {
        let sdp = lift_with_guard(lp, sol.level, cfg.max_coordinates)?.into_sdp();
        if sol.point.len() != sdp.num_vars() {
            return contract(format!("point has {} coordinates, the pencil has {}", sol.point.len(), sdp.num_vars()));
        }
        let enlarged = sdp.enlarged(&sol.eta);
        let mut feasible = true;
        for m in enlarged.eval(&sol.point) {
            if !psd_certificate(&m)?.is_psd() {
                feasible = false;
                break;
            }
        }
        let value: Rational = sdp.c().iter().zip(&sol.point).map(|(a, b)| a * b).sum();
        (feasible, value)
    };
    let rounding_consistent = match &sol.rounded {
        Some(r) => nearest_integer(&sol.value).as_ref() == Some(r),
        None => true,
    };
    let quarter = Rational::new(BigInt::one(), BigInt::from(4));
    let within_quarter = opt.map(|s| (&sol.value - Rational::from_integer(s.clone())).abs() <= quarter);
    Ok(CertifyReport { feasible, value_matches: objective == sol.value, rounding_consistent, within_quarter })
}
