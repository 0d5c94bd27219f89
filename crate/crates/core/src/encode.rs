//! 0–1 linear programs of VCSP instances, the basic LP relaxation, and the
//! MAXCUT / MAXCSP encodings into VCSP.

use num_traits::{One, Zero};

use crate::error::{contract, Error, Result};
use crate::exactlin::rational::int;
use crate::exactlin::{lp_optimize, LpOutcome, RatMatrix, Rational};
use crate::reductions::WeightedGraph;
use crate::vcsp::{Assignment, Constraint, Domain, TupleIter, ValuedFunction, VcspInstance};

/// A 0–1 program `max ⟨c, x⟩` over `{x ∈ {0,1}^V | Ax ≥ b}`.
///
/// Equalities are stored as pairs of opposite inequalities so every
/// consumer sees the single form `Ax ≥ b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroOneLP {
    names: Vec<String>,
    a: RatMatrix,
    b: Vec<Rational>,
    c: Vec<Rational>,
}

impl ZeroOneLP {
    pub fn new(names: Vec<String>, a: RatMatrix, b: Vec<Rational>, c: Vec<Rational>) -> Result<Self> {
        if a.cols() != names.len() || c.len() != names.len() || b.len() != a.rows() {
            return contract("ZeroOneLP dimension mismatch");
        }
        Ok(ZeroOneLP { names, a, b, c })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn a(&self) -> &RatMatrix {
        &self.a
    }

    pub fn b(&self) -> &[Rational] {
        &self.b
    }

    pub fn c(&self) -> &[Rational] {
        &self.c
    }

    pub fn num_vars(&self) -> usize {
        self.names.len()
    }

    pub fn num_rows(&self) -> usize {
        self.b.len()
    }

    pub fn with_objective(&self, c: Vec<Rational>) -> Result<Self> {
        Self::new(self.names.clone(), self.a.clone(), self.b.clone(), c)
    }

    /// True when, for every variable, the rows `x_v ≥ 0` and `−x_v ≥ −1` occur.
    pub fn has_box_rows(&self) -> bool {
        let n = self.num_vars();
        (0..n).all(|v| {
            let unit = |sign: i64, rhs: i64| {
                (0..self.num_rows()).any(|u| {
                    self.b[u] == int(rhs)
                        && (0..n).all(|j| self.a[(u, j)] == if j == v { int(sign) } else { Rational::zero() })
                })
            };
            unit(1, 0) && unit(-1, -1)
        })
    }

    pub fn objective(&self, x: &[Rational]) -> Rational {
        crate::exactlin::dot(&self.c, x)
    }

    pub fn satisfies_rows(&self, x: &[Rational]) -> bool {
        (0..self.num_rows()).all(|u| crate::exactlin::dot(self.a.row(u), x) >= self.b[u])
    }

    /// Every feasible 0–1 point, in lexicographic order.
    pub fn integer_points(&self) -> Result<Vec<Vec<Rational>>> {
        if self.num_vars() > 24 {
            return Err(Error::TooLarge(format!("{} variables for 0-1 enumeration", self.num_vars())));
        }
        Ok(TupleIter::new(self.num_vars(), 2)
            .map(|t| t.into_iter().map(|b| int(b as i64)).collect::<Vec<_>>())
            .filter(|x| self.satisfies_rows(x))
            .collect())
    }

    /// `max ⟨c, x⟩` over feasible 0–1 points; `None` when there are none.
    pub fn integer_optimum(&self) -> Result<Option<Rational>> {
        Ok(self.integer_points()?.iter().map(|x| self.objective(x)).max())
    }

    pub fn lp_relaxation(&self) -> Result<LpOutcome> {
        lp_optimize(&self.a, &self.b, &self.c)
    }
}

/// Incremental builder for `Ax ≥ b` rows over named variables.
#[derive(Debug, Default, Clone)]
pub struct LpBuilder {
    names: Vec<String>,
    rows: Vec<(Vec<(usize, Rational)>, Rational)>,
    objective: Vec<(usize, Rational)>,
}

impl LpBuilder {
    pub fn new(names: Vec<String>) -> Self {
        LpBuilder { names, ..Default::default() }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn geq(&mut self, terms: Vec<(usize, Rational)>, rhs: Rational) -> &mut Self {
        self.rows.push((terms, rhs));
        self
    }

    pub fn leq(&mut self, terms: Vec<(usize, Rational)>, rhs: Rational) -> &mut Self {
        let neg = terms.into_iter().map(|(v, a)| (v, -a)).collect();
        self.rows.push((neg, -rhs));
        self
    }

    pub fn eq(&mut self, terms: Vec<(usize, Rational)>, rhs: Rational) -> &mut Self {
        self.geq(terms.clone(), rhs.clone());
        self.leq(terms, rhs)
    }

    pub fn objective(&mut self, terms: Vec<(usize, Rational)>) -> &mut Self {
        self.objective = terms;
        self
    }

    pub fn box_rows(&mut self) -> &mut Self {
        for v in 0..self.names.len() {
            self.geq(vec![(v, Rational::one())], Rational::zero());
            self.leq(vec![(v, Rational::one())], Rational::one());
        }
        self
    }

    pub fn build(&self) -> Result<ZeroOneLP> {
        let n = self.names.len();
        let mut a = RatMatrix::zeros(self.rows.len(), n);
        let mut b = Vec::with_capacity(self.rows.len());
        for (u, (terms, rhs)) in self.rows.iter().enumerate() {
            for (v, coef) in terms {
                if *v >= n {
                    return contract("row references an unknown variable");
                }
                a[(u, *v)] += coef;
            }
            b.push(rhs.clone());
        }
        let mut c = vec![Rational::zero(); n];
        for (v, coef) in &self.objective {
            if *v >= n {
                return contract("objective references an unknown variable");
            }
            c[*v] += coef;
        }
        ZeroOneLP::new(self.names.clone(), a, b, c)
    }
}

/// Variable layout of `to_ilp`: the μ block first, then the λ block.
#[derive(Debug, Clone)]
pub struct IlpLayout {
    domain_size: usize,
    num_vars: usize,
    /// First λ index of each constraint.
    lambda_offsets: Vec<usize>,
}

impl IlpLayout {
    pub fn new(inst: &VcspInstance) -> Self {
        let d = inst.domain().size();
        let mut next = inst.variables().len() * d;
        let lambda_offsets = inst
            .constraints()
            .iter()
            .map(|c| {
                let off = next;
                next += inst.function_of(c).table().len();
                off
            })
            .collect();
        IlpLayout { domain_size: d, num_vars: next, lambda_offsets }
    }

    pub fn mu(&self, v: usize, a: usize) -> usize {
        v * self.domain_size + a
    }

    pub fn lambda(&self, constraint: usize, tuple_index: usize) -> usize {
        self.lambda_offsets[constraint] + tuple_index
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }
}

/// The 0–1 program of a VCSP instance, box rows included.
pub fn to_ilp(inst: &VcspInstance) -> ZeroOneLP {
    let layout = IlpLayout::new(inst);
    let d = inst.domain().size();
    let labels = inst.domain().labels();
    let mut names = Vec::with_capacity(layout.num_vars());
    for v in inst.variables() {
        for a in labels {
            names.push(format!("mu.{v}.{a}"));
        }
    }
    for (k, c) in inst.constraints().iter().enumerate() {
        let f = inst.function_of(c);
        for t in TupleIter::new(f.arity(), d) {
            let tuple: Vec<&str> = t.iter().map(|&x| labels[x].as_str()).collect();
            names.push(format!("lam.{k}.{}", tuple.join("_")));
        }
    }
    let mut lp = LpBuilder::new(names);
    let mut objective = Vec::new();
    for (k, c) in inst.constraints().iter().enumerate() {
        let f = inst.function_of(c);
        let tuples: Vec<Vec<usize>> = TupleIter::new(f.arity(), d).collect();
        for (ti, t) in tuples.iter().enumerate() {
            let w = c.weight * f.value(t);
            if w != 0 {
                objective.push((layout.lambda(k, ti), int(w as i64)));
            }
        }
        for (i, &var) in c.scope.iter().enumerate() {
            for a in 0..d {
                let mut terms: Vec<(usize, Rational)> = tuples
                    .iter()
                    .enumerate()
                    .filter(|(_, t)| t[i] == a)
                    .map(|(ti, _)| (layout.lambda(k, ti), Rational::one()))
                    .collect();
                terms.push((layout.mu(var, a), -Rational::one()));
                lp.eq(terms, Rational::zero());
            }
        }
    }
    for v in 0..inst.variables().len() {
        lp.eq((0..d).map(|a| (layout.mu(v, a), Rational::one())).collect(), Rational::one());
    }
    lp.objective(objective).box_rows();
    lp.build().expect("layout indices are in range")
}

/// The 0–1 point of `to_ilp(inst)` induced by an assignment.
pub fn induced_point(inst: &VcspInstance, h: &Assignment) -> Vec<Rational> {
    let layout = IlpLayout::new(inst);
    let mut x = vec![Rational::zero(); layout.num_vars()];
    for (v, &a) in h.0.iter().enumerate() {
        x[layout.mu(v, a)] = Rational::one();
    }
    for (k, c) in inst.constraints().iter().enumerate() {
        let tuple: Vec<usize> = c.scope.iter().map(|&v| h.0[v]).collect();
        x[layout.lambda(k, inst.function_of(c).tuple_index(&tuple))] = Rational::one();
    }
    x
}

/// Optimum of the basic LP relaxation `BLP(I)`.
pub fn blp_value(inst: &VcspInstance) -> Result<Rational> {
    match to_ilp(inst).lp_relaxation()? {
        LpOutcome::Optimal { value, .. } => Ok(value),
        other => contract(format!("BLP of a VCSP must be feasible and bounded, got {other:?}")),
    }
}

/// MAXCUT as `VCSP({0,1}, {cut})`, one constraint per edge.
pub fn maxcut_to_vcsp(g: &WeightedGraph) -> VcspInstance {
    let cut = ValuedFunction::from_fn("cut", 2, 2, |t| (t[0] != t[1]) as u64);
    let constraints =
        g.edges().iter().map(|&(u, v, w)| Constraint { scope: vec![u, v], function: 0, weight: w }).collect();
    VcspInstance::new(Domain::range(2), g.vertex_names(), vec![cut], constraints)
        .expect("graph edges reference existing vertices")
}

/// A relation `R ⊆ D^m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub name: String,
    pub arity: usize,
    pub tuples: Vec<Vec<usize>>,
}

/// A relational CSP instance: constraints `(scope, relation index)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CspInstance {
    pub domain: Domain,
    pub variables: Vec<String>,
    pub constraints: Vec<(Vec<usize>, usize)>,
}

/// MAXCSP as a VCSP: each relation becomes its 0/1 indicator, weights 1.
pub fn maxcsp_to_vcsp(relations: &[Relation], inst: &CspInstance) -> Result<VcspInstance> {
    let d = inst.domain.size();
    let functions = relations
        .iter()
        .map(|r| {
            if r.tuples.iter().any(|t| t.len() != r.arity || t.iter().any(|&x| x >= d)) {
                return contract(format!("relation {} has a malformed tuple", r.name));
            }
            Ok(ValuedFunction::from_fn(&r.name, r.arity, d, |t| r.tuples.iter().any(|s| s == t) as u64))
        })
        .collect::<Result<Vec<_>>>()?;
    let constraints = inst
        .constraints
        .iter()
        .map(|(scope, r)| Constraint { scope: scope.clone(), function: *r, weight: 1 })
        .collect();
    VcspInstance::new(inst.domain.clone(), inst.variables.clone(), functions, constraints)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::rational::rat;
    use crate::vcsp::{brute_force_opt, evaluate, DEFAULT_BRUTE_FORCE_CAP};

    fn triangle() -> VcspInstance {
        maxcut_to_vcsp(&WeightedGraph::cycle(3))
    }

    fn opt(i: &VcspInstance) -> u64 {
        brute_force_opt(i, DEFAULT_BRUTE_FORCE_CAP).unwrap().0
    }

    #[test]
    fn triangle_ilp_size() {
        let lp = to_ilp(&triangle());
        assert_eq!(lp.num_vars(), 18);
        assert!(lp.has_box_rows());
        assert!(lp.names()[..6].iter().all(|n| n.starts_with("mu.")));
    }

    #[test]
    fn lone_variable_ilp() {
        let inst = VcspInstance::new(Domain::range(2), vec!["v".into()], vec![], vec![]).unwrap();
        let lp = to_ilp(&inst);
        assert_eq!(lp.names(), &["mu.v.0".to_string(), "mu.v.1".to_string()]);
        // one normalisation equality (two rows) plus four box rows
        assert_eq!(lp.num_rows(), 6);
        assert!(lp.c().iter().all(Zero::is_zero));
    }

    #[test]
    fn unary_objective_transcribed() {
        let f = ValuedFunction::new("f", 1, 2, vec![3, 7]).unwrap();
        let inst = VcspInstance::new(
            Domain::range(2),
            vec!["v".into()],
            vec![f],
            vec![Constraint { scope: vec![0], function: 0, weight: 1 }],
        )
        .unwrap();
        let lp = to_ilp(&inst);
        assert_eq!(lp.c(), &[int(0), int(0), int(3), int(7)]);
    }

    #[test]
    fn blp_examples() {
        assert_eq!(blp_value(&triangle()).unwrap(), int(3));
        let edge = maxcut_to_vcsp(&WeightedGraph::new(2, vec![(0, 1, 1)]).unwrap());
        assert_eq!(blp_value(&edge).unwrap(), int(1));
        let empty = VcspInstance::new(Domain::range(2), vec![], vec![], vec![]).unwrap();
        assert_eq!(blp_value(&empty).unwrap(), int(0));
    }

    #[test]
    fn maxcut_optima() {
        assert_eq!(opt(&maxcut_to_vcsp(&WeightedGraph::new(2, vec![(0, 1, 5)]).unwrap())), 5);
        assert_eq!(opt(&triangle()), 2);
        assert_eq!(opt(&maxcut_to_vcsp(&WeightedGraph::new(4, vec![]).unwrap())), 0);
    }

    #[test]
    fn maxcsp_examples() {
        let full = Relation { name: "all".into(), arity: 2, tuples: TupleIter::new(2, 2).collect() };
        let inst = CspInstance {
            domain: Domain::range(2),
            variables: vec!["a".into(), "b".into()],
            constraints: vec![(vec![0, 1], 0)],
        };
        assert_eq!(opt(&maxcsp_to_vcsp(&[full], &inst).unwrap()), 1);

        let neq =
            Relation { name: "neq".into(), arity: 2, tuples: TupleIter::new(2, 3).filter(|t| t[0] != t[1]).collect() };
        let tri = CspInstance {
            domain: Domain::range(3),
            variables: vec!["a".into(), "b".into(), "c".into()],
            constraints: vec![(vec![0, 1], 0), (vec![1, 2], 0), (vec![0, 2], 0)],
        };
        assert_eq!(opt(&maxcsp_to_vcsp(&[neq], &tri).unwrap()), 3);

        let zero = Relation { name: "is0".into(), arity: 1, tuples: vec![vec![0]] };
        let one = Relation { name: "is1".into(), arity: 1, tuples: vec![vec![1]] };
        let clash = CspInstance {
            domain: Domain::range(2),
            variables: vec!["v".into()],
            constraints: vec![(vec![0], 0), (vec![0], 1)],
        };
        assert_eq!(opt(&maxcsp_to_vcsp(&[zero, one], &clash).unwrap()), 1);
    }

    #[test]
    fn induced_points_are_feasible_and_valued() {
        let inst = triangle();
        let lp = to_ilp(&inst);
        for t in TupleIter::new(3, 2) {
            let h = Assignment(t);
            let x = induced_point(&inst, &h);
            assert!(lp.satisfies_rows(&x));
            assert_eq!(lp.objective(&x), int(evaluate(&inst, &h).unwrap() as i64));
        }
        // a fractional point outside the integer hull still satisfies the relaxation
        let mut half = vec![rat(1, 2); 18];
        for (k, name) in lp.names().iter().enumerate() {
            if name.ends_with("0_0") || name.ends_with("1_1") {
                half[k] = int(0);
            }
        }
        assert!(lp.satisfies_rows(&half));
        assert_eq!(lp.objective(&half), int(3));
    }
}
