//! Central-cut ellipsoid with a sliding objective over inequality-form SDPs.
//!
//! All iterates live on the dyadic grid `2^-p` and are stored as integer
//! numerators. After each update the shape matrix is inflated by
//! `1 + 3·2^{-p/2}` and shifted by `2N·2^{-p}·I`, which absorbs every
//! rounding error, so the new ellipsoid contains the exact
//! half-ellipsoid it replaces. Cuts returned by the pencil oracle are exact
//! (the query point violates them strictly), so emptiness and optimality
//! conclusions hold for the enlarged pencil `Z + ηI + Σ x_v Y_v ⪰ 0`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::fold::{almost_fold, fold_vector, unfold, IndexMap};
use super::pencil::InequalitySDP;
use crate::error::{contract, Error, Result};
use crate::exactlin::matrix::LuFactor;
use crate::exactlin::psd::psd_witness_int;
use crate::exactlin::rational::{floor_log2, int, norm_floor_one, pow2, sqrt_upper, to_f64};
use crate::exactlin::{approx_eigenvector, dot, min_eigenvalue_approx, RatMatrix, Rational};

/// How the pencil oracle picks a cut direction for a block that is not PSD.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SeparationStrategy {
    /// Approximate eigenvector of the minimum eigenvalue, falling back to the
    /// LDLᵀ witness if the eigenvector does not separate strictly.
    Eigen,
    /// The LDLᵀ witness vector directly.
    #[default]
    LdlWitness,
}

#[derive(Debug, Clone)]
pub struct EllipsoidConfig {
    pub strategy: SeparationStrategy,
    /// Overrides the default iteration budget.
    pub max_iterations: Option<u64>,
    /// Replace `Z` by `Z + ηI` so that lower-dimensional regions gain volume.
    pub enlarge: bool,
    /// Exact positive-definiteness check of the shape matrix after each step.
    pub check_shape: bool,
    /// Overrides the grid exponent `p`.
    pub precision_bits: Option<u32>,
}

impl Default for EllipsoidConfig {
    fn default() -> Self {
        EllipsoidConfig {
            strategy: SeparationStrategy::default(),
            max_iterations: None,
            enlarge: true,
            check_shape: false,
            precision_bits: None,
        }
    }
}

/// Answer of a separation oracle at the current center `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Separation {
    Accept,
    /// Every feasible `y` satisfies `⟨g, y⟩ < ⟨g, x⟩`.
    Cut(Vec<Rational>),
    /// The region is provably empty.
    Infeasible,
}

/// The ellipsoid `{y | (y − a)ᵀ P⁻¹ (y − a) ≤ 1}`, stored in fixed point:
/// `a = center / 2^p`, `P = shape / 2^p`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ellipsoid {
    center: Vec<BigInt>,
    shape: Vec<BigInt>,
    bits: u32,
    /// Natural log of `√det P`, tracked analytically.
    log_volume: f64,
}

/// `round(a / b)` for `b > 0`, ties upward.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    (a * 2u32 + b).div_floor(&(b * 2u32))
}

/// The integer vector `L·v` for the least common denominator `L`.
pub fn integer_direction(v: &[Rational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    v.iter().map(|q| q.numer() * (&l / q.denom())).collect()
}

impl Ellipsoid {
    pub fn ball(n: usize, radius: &Rational, bits: u32) -> Self {
        let bits = bits + bits % 2;
        let r2 = radius * radius * pow2(bits as i64);
        let r2 = r2.ceil().to_integer();
        let mut shape = vec![BigInt::zero(); n * n];
        for i in 0..n {
            shape[i * n + i] = r2.clone();
        }
        Ellipsoid { center: vec![BigInt::zero(); n], shape, bits, log_volume: n as f64 * to_f64(radius).ln() }
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn center(&self) -> Vec<Rational> {
        let scale = BigInt::one() << self.bits as usize;
        self.center.iter().map(|c| Rational::new(c.clone(), scale.clone())).collect()
    }

    /// Center numerators over `2^p`.
    pub fn center_scaled(&self) -> &[BigInt] {
        &self.center
    }

    pub fn shape(&self) -> RatMatrix {
        let n = self.dim();
        let scale = BigInt::one() << self.bits as usize;
        RatMatrix::from_rows(
            (0..n)
                .map(|i| (0..n).map(|j| Rational::new(self.shape[i * n + j].clone(), scale.clone())).collect())
                .collect(),
        )
        .expect("square")
    }

    pub fn log_volume(&self) -> f64 {
        self.log_volume
    }

    /// Exact membership test.
    pub fn contains(&self, y: &[Rational]) -> Result<bool> {
        let d: Vec<Rational> = y.iter().zip(self.center()).map(|(a, b)| a - b).collect();
        let z = LuFactor::new(&self.shape())?.solve(&d)?;
        Ok(dot(&d, &z) <= Rational::one())
    }

    /// `(⟨c, a⟩, cᵀPc)` for an integer `c`, both scaled by `2^p`.
    pub fn support_scaled(&self, c: &[BigInt]) -> (BigInt, BigInt) {
        let n = self.dim();
        let mid = c.iter().zip(&self.center).map(|(x, y)| x * y).sum();
        let pc = (0..n).map(|i| (0..n).map(|j| &self.shape[i * n + j] * &c[j]).sum::<BigInt>());
        let var = pc.zip(c).map(|(x, y)| x * y).sum();
        (mid, var)
    }

    /// `(⟨c, a⟩, cᵀPc)`: the maximum of `⟨c, ·⟩` is `⟨c, a⟩ + √(cᵀPc)`.
    pub fn support(&self, c: &[Rational]) -> (Rational, Rational) {
        let scale = Rational::from_integer(BigInt::one() << self.bits as usize);
        let l = c.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let (mid, var) = self.support_scaled(&integer_direction(c));
        let l = Rational::from_integer(l);
        (Rational::from_integer(mid) / (&scale * &l), Rational::from_integer(var) / (&scale * &l * &l))
    }

    /// Replaces the ellipsoid by one containing its intersection with
    /// `{y | ⟨g, y⟩ ≤ ⟨g, a⟩}`.
    pub fn cut(&mut self, g: &[Rational]) -> Result<()> {
        self.cut_scaled(&integer_direction(g))
    }

    /// As [`Ellipsoid::cut`] for an integer direction.
    ///
    /// With `π = Pg` and `γ = gᵀPg` the exact update is
    /// `a' = a − π / ((N+1)√γ)` and
    /// `P' = N²/(N²−1) · (P − 2ππᵀ / ((N+1)γ))`; `N = 1` halves the interval.
    /// Each entry is rounded once to the grid, then `P'` is inflated.
    pub fn cut_scaled(&mut self, g: &[BigInt]) -> Result<()> {
        let n = self.dim();
        if g.len() != n {
            return contract("cut direction has the wrong length");
        }
        let pi: Vec<BigInt> = (0..n).map(|i| (0..n).map(|j| &self.shape[i * n + j] * &g[j]).sum::<BigInt>()).collect();
        let gamma: BigInt = pi.iter().zip(g).map(|(x, y)| x * y).sum();
        if !gamma.is_positive() {
            return contract("cut direction must be nonzero");
        }
        let bits = self.bits as usize;
        // √(γ_real)·2^p·2^e with γ_real = γ / 2^p, using e extra bits so the root has ≥ p + 16 bits
        let e = (bits + 16).saturating_sub(gamma.bits() as usize / 2) + 1;
        let root = (&gamma << (bits + 2 * e)).sqrt();
        if root.is_zero() {
            return contract("cut direction is numerically degenerate");
        }
        let nn = BigInt::from(n);
        let denom_c = &root * (&nn + 1u32);
        for (a, p) in self.center.iter_mut().zip(&pi) {
            // π/√γ on the 2^p grid: (π / 2^p) / (root / 2^{p+e}) · 2^p
            *a -= div_round(&(p << (bits + e)), &denom_c);
        }
        let mut shape = vec![BigInt::zero(); n * n];
        if n == 1 {
            shape[0] = div_round(&self.shape[0], &BigInt::from(4));
        } else {
            let nsq = &nn * &nn;
            let scale_gamma = &gamma * (&nn + 1u32);
            let denom = (&nsq - 1u32) * &scale_gamma;
            for i in 0..n {
                for j in i..n {
                    let num = &nsq * (&scale_gamma * &self.shape[i * n + j] - ((&pi[i] * &pi[j]) << 1));
                    let v = div_round(&num, &denom);
                    shape[j * n + i] = v.clone();
                    shape[i * n + j] = v;
                }
            }
        }
        // (1 + 3·2^{-p/2}) inflation and a 2N·2^{-p} diagonal floor absorb the roundings
        let half = bits / 2;
        let floor = BigInt::from(2 * n);
        for i in 0..n {
            for j in i..n {
                let bump = div_round(&(&shape[i * n + j] * 3u32), &(BigInt::one() << half));
                let mut v = &shape[i * n + j] + bump;
                if i == j {
                    v += &floor;
                }
                shape[j * n + i] = v.clone();
                shape[i * n + j] = v;
            }
        }
        self.shape = shape;
        let nf = n as f64;
        let ratio = if n == 1 {
            0.5f64.ln()
        } else {
            0.5 * (nf * (nf * nf / (nf * nf - 1.0)).ln() + ((nf - 1.0) / (nf + 1.0)).ln())
        };
        self.log_volume += ratio + 0.5 * nf * (1.0 + 3.0 * 2f64.powi(-(half as i32))).ln();
        Ok(())
    }

    pub fn shape_is_positive_definite(&self) -> Result<bool> {
        crate::exactlin::psd::is_positive_definite(&self.shape())
    }
}

/// Integer form of an inequality SDP: every coefficient multiplied by the
/// common denominator `L`, so a block evaluated at `x = X / 2^p` becomes the
/// integer matrix `L·2^p·B(x)`.
#[derive(Debug, Clone)]
struct IntegerBlock {
    dim: usize,
    constant: Vec<BigInt>,
    terms: Vec<(usize, usize, usize, BigInt)>,
}

/// Cuts for `{x | every block of sdp is PSD}`; accepts exactly the feasible points.
pub struct PencilOracle<'a> {
    sdp: &'a InequalitySDP,
    blocks: Vec<IntegerBlock>,
    strategy: SeparationStrategy,
    /// Tolerance handed to the eigen routines.
    tolerance: Rational,
    pub calls: u64,
}

impl<'a> PencilOracle<'a> {
    pub fn new(sdp: &'a InequalitySDP, strategy: SeparationStrategy, tolerance: Rational) -> Self {
        let mut l = BigInt::one();
        for b in sdp.blocks() {
            for q in b.constant().entries() {
                l = l.lcm(q.denom());
            }
            for t in b.terms() {
                l = l.lcm(t.3.denom());
            }
        }
        let scale = |q: &Rational| q.numer() * (&l / q.denom());
        let blocks = sdp
            .blocks()
            .iter()
            .map(|b| IntegerBlock {
                dim: b.dim(),
                constant: b.constant().entries().iter().map(scale).collect(),
                terms: b.terms().iter().map(|(v, i, j, a)| (*v, *i, *j, scale(a))).collect(),
            })
            .collect();
        PencilOracle { sdp, blocks, strategy, tolerance, calls: 0 }
    }

    /// Separation at a rational point.
    pub fn separate(&mut self, x: &[Rational]) -> Result<Separation> {
        let bits = x.iter().map(|q| q.denom().bits()).max().unwrap_or(0).max(1);
        let scale = BigInt::one() << bits as usize;
        let mut scaled = Vec::with_capacity(x.len());
        for q in x {
            let s = q * Rational::from_integer(scale.clone());
            if !s.is_integer() {
                return contract("query point must be dyadic");
            }
            scaled.push(s.to_integer());
        }
        self.separate_scaled(&scaled, bits as u32)
    }

    /// Separation at `x = X / 2^bits`; cuts are integer directions.
    pub fn separate_scaled(&mut self, x: &[BigInt], bits: u32) -> Result<Separation> {
        self.calls += 1;
        let n = self.sdp.num_vars();
        for block in &self.blocks {
            let d = block.dim;
            let mut m: Vec<BigInt> = block.constant.iter().map(|c| c << bits as usize).collect();
            for (v, i, j, a) in &block.terms {
                if !x[*v].is_zero() {
                    m[i * d + j] += a * &x[*v];
                }
            }
            let Some(w) = psd_witness_int(&m, d) else {
                continue;
            };
            let v: Vec<Rational> = match self.strategy {
                SeparationStrategy::LdlWitness => w.into_iter().map(Rational::from_integer).collect(),
                SeparationStrategy::Eigen => {
                    let scale = Rational::from_integer(BigInt::one() << bits as usize);
                    let real = RatMatrix::from_rows(
                        (0..d)
                            .map(|i| (0..d).map(|j| Rational::from_integer(m[i * d + j].clone()) / &scale).collect())
                            .collect(),
                    )?;
                    match self.eigen_direction(&real)? {
                        Some(v) => v,
                        None => w.into_iter().map(Rational::from_integer).collect(),
                    }
                }
            };
            let v = integer_direction(&v);
            // g_q = ⟨−vvᵀ, Y_q⟩ up to the positive factor L
            let mut g = vec![BigInt::zero(); n];
            for (q, i, j, a) in &block.terms {
                g[*q] -= a * &v[*i] * &v[*j];
            }
            if g.iter().all(Zero::is_zero) {
                // vᵀ B(y) v = vᵀ Z v < 0 for every y
                return Ok(Separation::Infeasible);
            }
            return Ok(Separation::Cut(g.into_iter().map(Rational::from_integer).collect()));
        }
        Ok(Separation::Accept)
    }

    fn eigen_direction(&self, m: &RatMatrix) -> Result<Option<Vec<Rational>>> {
        let tol = &self.tolerance / int(8 * m.rows() as i64);
        let lambda = min_eigenvalue_approx(m, &(&tol / int(4)))?;
        match approx_eigenvector(m, &lambda, &tol) {
            Ok(v) if m.quad_form(&v)?.is_negative() => Ok(Some(v)),
            _ => Ok(None),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Optimal { value: Rational, point: Vec<Rational> },
    Empty,
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub outcome: Outcome,
    pub iterations: u64,
    pub oracle_calls: u64,
    /// Number of partition refinements (folded solves only).
    pub refinements: usize,
    /// Final number of classes (folded solves only; the dimension otherwise).
    pub classes: usize,
    pub eta: Rational,
}

impl SolveReport {
    pub fn value(&self) -> Option<&Rational> {
        match &self.outcome {
            Outcome::Optimal { value, .. } => Some(value),
            Outcome::Empty => None,
        }
    }
}

/// Tolerances derived from `δ`, `R` and the objective.
#[derive(Debug, Clone)]
struct Plan {
    /// Gap at which the sliding objective stops.
    gap: Rational,
    eta: Rational,
    /// Oracle tolerance `δ' = (δ/2) / (8·max{1,‖c‖}·(1+R))`.
    oracle_tol: Rational,
    bits: u32,
}

impl Plan {
    fn new(sdp: &InequalitySDP, delta: &Rational, radius: &Rational, cfg: &EllipsoidConfig) -> Self {
        let n = sdp.num_vars().max(1);
        let half = delta / int(2);
        let c_norm = norm_floor_one(sdp.c());
        let eta = if cfg.enlarge {
            let dim = sqrt_upper(&int(sdp.total_dim().max(1) as i64), 16);
            &half / (dim * &c_norm)
        } else {
            Rational::zero()
        };
        let oracle_tol = &half / (int(8) * &c_norm * (Rational::one() + radius));
        let ratio = int(n as i64) * radius / delta;
        let bits = cfg.precision_bits.unwrap_or_else(|| {
            let log = (floor_log2(&ratio) + 1).max(0) as u32;
            (8 * log).max(64)
        });
        Plan { gap: half, eta, oracle_tol, bits }
    }
}

fn default_budget(n: usize, radius: &Rational, delta: &Rational) -> u64 {
    let nf = n.max(1) as f64;
    let arg = 4.0 * to_f64(radius) * nf / to_f64(delta);
    (8.0 * nf * nf * arg.max(1.0).ln()).ceil() as u64 + 64
}

/// ln of the radius of a ball that the enlarged region contains around any
/// point of the original region.
fn log_inner_radius(sdp: &InequalitySDP, eta: &Rational) -> f64 {
    if !eta.is_positive() {
        return f64::NEG_INFINITY;
    }
    to_f64(eta).ln() - 0.5 * to_f64(&sdp.coefficient_frobenius_sq()).ln()
}

enum PhaseAnswer {
    Oracle(Separation),
    Refine(Vec<Rational>),
}

enum PhaseEnd {
    Done(Outcome),
    Refine(Vec<Rational>),
}

struct Phase<'a> {
    c: &'a [Rational],
    radius: &'a Rational,
    plan: &'a Plan,
    cfg: &'a EllipsoidConfig,
    log_inner: f64,
    budget: u64,
}

impl Phase<'_> {
    fn run(
        &self,
        start_best: Option<(Vec<Rational>, Rational)>,
        iterations: &mut u64,
        mut oracle: impl FnMut(&[BigInt], u32) -> Result<PhaseAnswer>,
    ) -> Result<PhaseEnd> {
        let n = self.c.len();
        let mut ell = Ellipsoid::ball(n, self.radius, self.plan.bits);
        let mut best = start_best;
        let c_den = Rational::from_integer(self.c.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom())));
        let c_int = integer_direction(self.c);
        let neg_c: Vec<BigInt> = c_int.iter().map(|x| -x).collect();
        let zero_objective = self.c.iter().all(Zero::is_zero);
        let empty_threshold = n as f64 * self.log_inner - 1.0;
        let grid = Rational::from_integer(BigInt::one() << ell.bits() as usize);
        for _ in 0..self.budget {
            if let Some((point, value)) = &best {
                if zero_objective {
                    return Ok(PhaseEnd::Done(Outcome::Optimal { value: value.clone(), point: point.clone() }));
                }
                // max over the ellipsoid is mid + √var; stop once it is within the gap of the best value
                let (mid, var) = ell.support_scaled(&c_int);
                let mid = Rational::from_integer(mid) / (&grid * &c_den);
                let var = Rational::from_integer(var) / (&grid * &c_den * &c_den);
                let room = value + &self.plan.gap - mid;
                if !room.is_negative() && var <= &room * &room {
                    return Ok(PhaseEnd::Done(Outcome::Optimal { value: value.clone(), point: point.clone() }));
                }
            } else if ell.log_volume() < empty_threshold {
                return Ok(PhaseEnd::Done(Outcome::Empty));
            }
            *iterations += 1;
            match oracle(ell.center_scaled(), ell.bits())? {
                PhaseAnswer::Refine(g) => return Ok(PhaseEnd::Refine(g)),
                PhaseAnswer::Oracle(Separation::Infeasible) => return Ok(PhaseEnd::Done(Outcome::Empty)),
                PhaseAnswer::Oracle(Separation::Cut(g)) => ell.cut(&g)?,
                PhaseAnswer::Oracle(Separation::Accept) => {
                    let x = ell.center();
                    let value = dot(self.c, &x);
                    if best.as_ref().is_none_or(|(_, b)| value > *b) {
                        best = Some((x, value));
                    }
                    if !zero_objective {
                        ell.cut_scaled(&neg_c)?;
                    }
                }
            }
            if self.cfg.check_shape && !ell.shape_is_positive_definite()? {
                return contract("ellipsoid shape lost positive definiteness");
            }
        }
        Err(Error::BudgetExhausted { iterations: *iterations })
    }
}

/// Weak maximisation of `⟨c, x⟩` over `{x | Z + Σ x_v Y_v ⪰ 0}` inside `B(0, R)`.
pub fn ellipsoid_optimize(
    sdp: &InequalitySDP,
    delta: &Rational,
    radius: &Rational,
    cfg: &EllipsoidConfig,
) -> Result<SolveReport> {
    check_inputs(delta, radius)?;
    let plan = Plan::new(sdp, delta, radius, cfg);
    let enlarged = sdp.enlarged(&plan.eta);
    let mut oracle = PencilOracle::new(&enlarged, cfg.strategy, plan.oracle_tol.clone());
    let n = sdp.num_vars();
    if n == 0 {
        return trivial_report(&mut oracle, plan.eta);
    }
    let phase = Phase {
        c: sdp.c(),
        radius,
        plan: &plan,
        cfg,
        log_inner: log_inner_radius(sdp, &plan.eta),
        budget: cfg.max_iterations.unwrap_or_else(|| default_budget(n, radius, delta)),
    };
    let mut iterations = 0;
    let end = phase.run(None, &mut iterations, |x, bits| oracle.separate_scaled(x, bits).map(PhaseAnswer::Oracle))?;
    let PhaseEnd::Done(outcome) = end else { unreachable!("no refinement without folding") };
    Ok(SolveReport { outcome, iterations, oracle_calls: oracle.calls, refinements: 0, classes: n, eta: plan.eta })
}

/// As [`ellipsoid_optimize`], run in the folded space of a partition of the
/// variables that starts trivial and is refined by every objective or
/// separator that does not agree with it.
pub fn folded_optimize(
    sdp: &InequalitySDP,
    delta: &Rational,
    radius: &Rational,
    cfg: &EllipsoidConfig,
) -> Result<SolveReport> {
    check_inputs(delta, radius)?;
    let plan = Plan::new(sdp, delta, radius, cfg);
    let enlarged = sdp.enlarged(&plan.eta);
    let mut oracle = PencilOracle::new(&enlarged, cfg.strategy, plan.oracle_tol.clone());
    let n = sdp.num_vars();
    if n == 0 {
        return trivial_report(&mut oracle, plan.eta);
    }
    let mut sigma = IndexMap::trivial(n);
    let mut refinements = 0;
    if let Some(r) = sigma.refine(sdp.c()) {
        sigma = r;
        refinements += 1;
    }
    let log_inner = log_inner_radius(sdp, &plan.eta);
    let mut best: Option<(Vec<Rational>, Rational)> = None;
    let mut iterations = 0;
    loop {
        let c_hat = almost_fold(sdp.c(), &sigma);
        let k = sigma.classes();
        let largest = *sigma.sizes().iter().max().expect("nonempty partition") as f64;
        let phase = Phase {
            c: &c_hat,
            radius,
            plan: &plan,
            cfg,
            log_inner: log_inner - 0.5 * largest.ln(),
            budget: cfg.max_iterations.unwrap_or_else(|| default_budget(k, radius, delta)),
        };
        let start = best.as_ref().map(|(x, v): &(Vec<Rational>, Rational)| (fold_vector(x, &sigma), v.clone()));
        let end = phase.run(start, &mut iterations, |x_hat, bits| {
            let x: Vec<BigInt> = (0..n).map(|v| x_hat[sigma.class_of(v)].clone()).collect();
            Ok(match oracle.separate_scaled(&x, bits)? {
                Separation::Cut(g) if !sigma.agrees(&g) => PhaseAnswer::Refine(g),
                Separation::Cut(g) => PhaseAnswer::Oracle(Separation::Cut(almost_fold(&g, &sigma))),
                other => PhaseAnswer::Oracle(other),
            })
        });
        let track_best = |outcome: &Outcome, best: &mut Option<(Vec<Rational>, Rational)>| {
            if let Outcome::Optimal { value, point } = outcome {
                *best = Some((point.clone(), value.clone()));
            }
        };
        match end? {
            PhaseEnd::Done(outcome) => {
                let outcome = match outcome {
                    Outcome::Optimal { value, point } => Outcome::Optimal { value, point: unfold(&point, &sigma) },
                    Outcome::Empty => Outcome::Empty,
                };
                track_best(&outcome, &mut best);
                return Ok(SolveReport {
                    outcome,
                    iterations,
                    oracle_calls: oracle.calls,
                    refinements,
                    classes: sigma.classes(),
                    eta: plan.eta,
                });
            }
            PhaseEnd::Refine(g) => {
                sigma = sigma.refine(&g).expect("disagreeing separator refines");
                refinements += 1;
            }
        }
    }
}

fn check_inputs(delta: &Rational, radius: &Rational) -> Result<()> {
    if !delta.is_positive() || !radius.is_positive() {
        return contract("delta and radius must be positive");
    }
    Ok(())
}

fn trivial_report(oracle: &mut PencilOracle<'_>, eta: Rational) -> Result<SolveReport> {
    let outcome = match oracle.separate(&[])? {
        Separation::Accept => Outcome::Optimal { value: Rational::zero(), point: vec![] },
        _ => Outcome::Empty,
    };
    Ok(SolveReport { outcome, iterations: 0, oracle_calls: oracle.calls, refinements: 0, classes: 0, eta })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::rational::rat;

    fn toy() -> InequalitySDP {
        InequalitySDP::from_dense(RatMatrix::identity(2), &[RatMatrix::from_i64(&[&[0, 1], &[1, 0]])], vec![int(1)])
            .unwrap()
    }

    #[test]
    fn toy_sdp_value() {
        let delta = rat(1, 100);
        for strategy in [SeparationStrategy::Eigen, SeparationStrategy::LdlWitness] {
            let cfg = EllipsoidConfig { strategy, check_shape: true, ..Default::default() };
            let report = ellipsoid_optimize(&toy(), &delta, &int(2), &cfg).unwrap();
            let v = report.value().unwrap().clone();
            assert!((&v - int(1)).abs() <= delta, "value {v}");
        }
    }

    #[test]
    fn zero_objective() {
        // X ⪰ 0 and x11 ≤ 1 in upper-triangle coordinates of a 2×2 matrix
        let sdp = super::super::conic::conic_to_inequality(
            &super::super::conic::ConicSDP::new(
                vec![RatMatrix::from_i64(&[&[1, 0], &[0, 0]])],
                vec![int(1)],
                RatMatrix::zeros(2, 2),
            )
            .unwrap(),
        );
        let report = ellipsoid_optimize(&sdp, &rat(1, 10), &int(4), &EllipsoidConfig::default()).unwrap();
        assert_eq!(report.value(), Some(&int(0)));
    }

    #[test]
    fn cut_keeps_half() {
        let mut e = Ellipsoid::ball(2, &int(1), 64);
        let inside = [vec![rat(-1, 2), rat(1, 2)], vec![rat(-9, 10), int(0)], vec![int(0), int(-1)]];
        e.cut(&[int(1), int(0)]).unwrap();
        for p in &inside {
            assert!(e.contains(p).unwrap());
        }
        assert!(!e.contains(&[rat(1, 2), int(0)]).unwrap());
        assert!(e.shape_is_positive_definite().unwrap());
    }

    #[test]
    fn infeasible_region_is_empty() {
        // x ≥ 1 and x ≤ 0 as two 1×1 blocks
        let blocks = vec![
            super::super::pencil::AffineBlock::from_dense(RatMatrix::diagonal(&[int(-1)]), &[RatMatrix::identity(1)]),
            super::super::pencil::AffineBlock::from_dense(
                RatMatrix::diagonal(&[int(0)]),
                &[RatMatrix::identity(1).scale(&int(-1))],
            ),
        ];
        let sdp = InequalitySDP::new(1, blocks, vec![int(1)]).unwrap();
        let report = ellipsoid_optimize(&sdp, &rat(1, 10), &int(2), &EllipsoidConfig::default()).unwrap();
        assert_eq!(report.outcome, Outcome::Empty);
    }

    #[test]
    fn budget_is_reported() {
        let cfg = EllipsoidConfig { max_iterations: Some(3), ..Default::default() };
        assert!(matches!(
            ellipsoid_optimize(&toy(), &rat(1, 100), &int(2), &cfg),
            Err(Error::BudgetExhausted { iterations: 3 })
        ));
    }
}
