//! 3LIN → 3SAT → MAXCUT, with exhaustive oracles for every stage.

use crate::error::{contract, Error, Result};

/// Largest variable count accepted by the exhaustive oracles.
pub const BRUTE_CAP_VARS: usize = 24;

/// Undirected graph with nonnegative integer edge weights and no self-loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGraph {
    names: Vec<String>,
    edges: Vec<(usize, usize, u64)>,
}

impl WeightedGraph {
    /// Vertices are named `0..n`.
    pub fn new(n: usize, edges: Vec<(usize, usize, u64)>) -> Result<Self> {
        Self::with_names((0..n).map(|i| i.to_string()).collect(), edges)
    }

    pub fn with_names(names: Vec<String>, edges: Vec<(usize, usize, u64)>) -> Result<Self> {
        for &(u, v, _) in &edges {
            if u >= names.len() || v >= names.len() {
                return contract(format!("edge ({u},{v}) references a missing vertex"));
            }
            if u == v {
                return contract(format!("self-loop at vertex {u}"));
            }
        }
        Ok(WeightedGraph { names, edges })
    }

    /// The unit-weight cycle on `n ≥ 3` vertices (fewer vertices give a path).
    pub fn cycle(n: usize) -> Self {
        let edges = match n {
            0 | 1 => vec![],
            2 => vec![(0, 1, 1)],
            _ => (0..n).map(|i| (i, (i + 1) % n, 1)).collect(),
        };
        Self::new(n, edges).expect("cycle edges are valid")
    }

    pub fn num_vertices(&self) -> usize {
        self.names.len()
    }

    pub fn vertex_names(&self) -> Vec<String> {
        self.names.clone()
    }

    pub fn edges(&self) -> &[(usize, usize, u64)] {
        &self.edges
    }

    pub fn cut_value(&self, side: u64) -> u64 {
        self.edges.iter().filter(|&&(u, v, _)| (side >> u) & 1 != (side >> v) & 1).map(|e| e.2).sum()
    }

    /// Exhaustive maximum cut. Vertex 0 is pinned to side 0 by symmetry.
    pub fn brute_max_cut(&self) -> Result<u64> {
        let n = self.num_vertices();
        if n > BRUTE_CAP_VARS {
            return Err(Error::TooLarge(format!("{n} vertices for exhaustive max-cut")));
        }
        if n == 0 {
            return Ok(0);
        }
        Ok((0..1u64 << (n - 1)).map(|s| self.cut_value(s << 1)).max().unwrap_or(0))
    }

    /// Adds `w` to the edge `{u,v}`, creating it when absent.
    fn bump(&mut self, u: usize, v: usize, w: u64) {
        let (a, b) = (u.min(v), u.max(v));
        match self.edges.iter_mut().find(|e| e.0 == a && e.1 == b) {
            Some(e) => e.2 += w,
            None => self.edges.push((a, b, w)),
        }
    }
}

/// A system of parity equations on triples: `E₀` sum to 0, `E₁` to 1 (mod 2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinSystem {
    pub num_vars: usize,
    pub e0: Vec<[usize; 3]>,
    pub e1: Vec<[usize; 3]>,
}

impl LinSystem {
    pub fn new(num_vars: usize, e0: Vec<[usize; 3]>, e1: Vec<[usize; 3]>) -> Result<Self> {
        for t in e0.iter().chain(&e1) {
            if t.iter().any(|&v| v >= num_vars) {
                return contract(format!("equation {t:?} references a missing variable"));
            }
            if t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
                return contract(format!("equation {t:?} repeats a variable"));
            }
        }
        Ok(LinSystem { num_vars, e0, e1 })
    }

    pub fn num_equations(&self) -> usize {
        self.e0.len() + self.e1.len()
    }

    pub fn satisfied_by(&self, bits: u64) -> bool {
        let parity = |t: &[usize; 3]| t.iter().map(|&v| (bits >> v) & 1).sum::<u64>() & 1;
        self.e0.iter().all(|t| parity(t) == 0) && self.e1.iter().all(|t| parity(t) == 1)
    }
}

/// A literal: variable index and polarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Literal {
    pub var: usize,
    pub negated: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Literal { var, negated: false }
    }

    pub fn neg(var: usize) -> Self {
        Literal { var, negated: true }
    }

    pub fn holds(&self, bits: u64) -> bool {
        ((bits >> self.var) & 1 == 1) != self.negated
    }
}

/// 3-CNF with three distinct variables per clause.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    pub num_vars: usize,
    pub clauses: Vec<[Literal; 3]>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<[Literal; 3]>) -> Result<Self> {
        for c in &clauses {
            if c.iter().any(|l| l.var >= num_vars) {
                return contract(format!("clause {c:?} references a missing variable"));
            }
            if c[0].var == c[1].var || c[1].var == c[2].var || c[0].var == c[2].var {
                return contract(format!("clause {c:?} repeats a variable"));
            }
        }
        Ok(CnfFormula { num_vars, clauses })
    }

    pub fn satisfied_by(&self, bits: u64) -> bool {
        self.clauses.iter().all(|c| c.iter().any(|l| l.holds(bits)))
    }
}

fn brute_bits(n: usize, f: impl Fn(u64) -> bool) -> Result<bool> {
    if n > BRUTE_CAP_VARS {
        return Err(Error::TooLarge(format!("{n} variables for exhaustive search")));
    }
    Ok((0..1u64 << n).any(f))
}

pub fn brute_lin(l: &LinSystem) -> Result<bool> {
    brute_bits(l.num_vars, |b| l.satisfied_by(b))
}

pub fn brute_sat(f: &CnfFormula) -> Result<bool> {
    brute_bits(f.num_vars, |b| f.satisfied_by(b))
}

/// Each equation becomes the four clauses excluding exactly its four
/// violating assignments. A clause forbids the assignment falsifying all of
/// its literals, whose parity equals the clause's negation count; so
/// `a⊕b⊕c = 0` takes the odd-negation clauses and `= 1` the even ones.
pub fn threelin_to_threesat(l: &LinSystem) -> Result<CnfFormula> {
    let mut clauses = Vec::with_capacity(4 * l.num_equations());
    let mut emit = |t: &[usize; 3], negation_parity: u32| {
        for mask in 0u32..8 {
            if mask.count_ones() % 2 == negation_parity {
                clauses.push(std::array::from_fn(|i| Literal { var: t[i], negated: (mask >> (2 - i)) & 1 == 1 }));
            }
        }
    };
    for t in &l.e0 {
        emit(t, 1);
    }
    for t in &l.e1 {
        emit(t, 0);
    }
    CnfFormula::new(l.num_vars, clauses)
}

/// Graph-size bound: vertices plus edges of the gadget graph never exceed
/// `GADGET_SIZE_CONSTANT · |clauses|` for a nonempty formula.
pub const GADGET_SIZE_CONSTANT: usize = 19;

/// Standard NAE gadget reduction.
///
/// Every used variable `x` gets vertices `x`, `x̄` joined by a heavy edge, and
/// so do two global vertices `T`, `F`. A literal is true when it sits on the
/// side of `T`. Clause `(a ∨ b ∨ c)` adds a fresh vertex `z` and the unit
/// triangles `{a, b, z}` and `{z, ¬c, T}`: the first is not-all-equal iff
/// `a ∨ b ∨ z̄`, the second iff `z̄ ∨ c`. Both triangles cut two edges exactly
/// when the clause holds for some `z`, and a heavy weight of `4m + 1` makes
/// breaking any pair edge unprofitable.
pub fn threesat_to_maxcut(f: &CnfFormula) -> (WeightedGraph, u64) {
    let m = f.clauses.len();
    if m == 0 {
        return (WeightedGraph::new(0, vec![]).expect("empty graph"), 0);
    }
    let heavy = 4 * m as u64 + 1;
    let mut used: Vec<usize> = f.clauses.iter().flatten().map(|l| l.var).collect();
    used.sort_unstable();
    used.dedup();
    let mut names = vec!["T".to_string(), "F".to_string()];
    let mut slot = vec![usize::MAX; f.num_vars];
    for &v in &used {
        slot[v] = names.len();
        names.push(format!("x{}", v + 1));
        names.push(format!("~x{}", v + 1));
    }
    let lit = |l: &Literal| slot[l.var] + l.negated as usize;
    let mut g = WeightedGraph { names, edges: vec![(0, 1, heavy)] };
    for &v in &used {
        g.edges.push((slot[v], slot[v] + 1, heavy));
    }
    for (k, [a, b, c]) in f.clauses.iter().enumerate() {
        let z = g.names.len();
        g.names.push(format!("z{}", k + 1));
        let not_c = lit(&Literal { var: c.var, negated: !c.negated });
        for (u, v, w) in [(lit(a), lit(b), z), (z, not_c, 0)] {
            g.bump(u, v, 1);
            g.bump(v, w, 1);
            g.bump(u, w, 1);
        }
    }
    let threshold = heavy * (used.len() as u64 + 1) + 4 * m as u64;
    (g, threshold)
}
