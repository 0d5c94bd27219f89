//! Deterministic instance generators. Every random generator draws from a
//! ChaCha stream seeded by the caller, so a seed fixes the output.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::encode::{LpBuilder, ZeroOneLP};
use crate::error::{contract, Result};
use crate::exactlin::rational::int;
use crate::exactlin::Rational;
use crate::reductions::{CnfFormula, LinSystem, Literal, WeightedGraph};

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `K_n` with unit weights.
pub fn complete_graph(n: usize) -> WeightedGraph {
    let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v, 1))).collect();
    WeightedGraph::new(n, edges).expect("complete graph edges are valid")
}

/// `G(n, 1/2)` with weights drawn from `1..=max_weight`.
pub fn random_graph(n: usize, max_weight: u64, rng: &mut impl Rng) -> Result<WeightedGraph> {
    if max_weight == 0 {
        return contract("max weight must be positive");
    }
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(0.5) {
                edges.push((u, v, rng.gen_range(1..=max_weight)));
            }
        }
    }
    WeightedGraph::new(n, edges)
}

fn triple(n: usize, rng: &mut impl Rng) -> [usize; 3] {
    let mut t = [0; 3];
    for (slot, v) in t.iter_mut().zip(sample(rng, n, 3)) {
        *slot = v;
    }
    t
}

/// `m` equations on random triples of `n ≥ 3` variables, random parities.
pub fn random_3lin(n: usize, m: usize, rng: &mut impl Rng) -> Result<LinSystem> {
    if n < 3 {
        return contract("3LIN needs at least three variables");
    }
    let (mut e0, mut e1) = (Vec::new(), Vec::new());
    for _ in 0..m {
        let t = triple(n, rng);
        if rng.gen_bool(0.5) {
            e1.push(t);
        } else {
            e0.push(t);
        }
    }
    LinSystem::new(n, e0, e1)
}

/// `m` clauses on random triples of `n ≥ 3` variables, random signs.
pub fn random_3sat(n: usize, m: usize, rng: &mut impl Rng) -> Result<CnfFormula> {
    if n < 3 {
        return contract("3SAT needs at least three variables");
    }
    let clauses = (0..m)
        .map(|_| triple(n, rng).map(|v| if rng.gen_bool(0.5) { Literal::neg(v) } else { Literal::pos(v) }))
        .collect();
    CnfFormula::new(n, clauses)
}

/// Integer vector with entries in `-bound..=bound`.
pub fn random_objective(n: usize, bound: i64, rng: &mut impl Rng) -> Vec<Rational> {
    (0..n).map(|_| int(rng.gen_range(-bound..=bound))).collect()
}

/// Box rows plus `rows` random `≥` rows with coefficients in `-2..=2`; the
/// right-hand side is met by a random 0–1 point, so the program is feasible.
pub fn random_lp(n: usize, rows: usize, rng: &mut impl Rng) -> Result<ZeroOneLP> {
    let names = (0..n).map(|i| format!("x{}", i + 1)).collect();
    let mut b = LpBuilder::new(names);
    b.box_rows();
    let point: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=1)).collect();
    for _ in 0..rows {
        let coefs: Vec<i64> = (0..n).map(|_| rng.gen_range(-2..=2)).collect();
        let at_point: i64 = coefs.iter().zip(&point).map(|(a, x)| a * x).sum();
        let rhs = at_point - rng.gen_range(0..=1);
        b.geq(coefs.iter().enumerate().map(|(v, &a)| (v, int(a))).collect(), int(rhs));
    }
    b.objective(random_objective(n, 5, rng).into_iter().enumerate().collect());
    b.build()
}
