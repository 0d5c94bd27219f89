//! Finite-valued constraint satisfaction instances and the exhaustive
//! optimum oracle.

use crate::error::{contract, Error, Result};

/// Default oracle cap: at most 2^20 assignments are enumerated.
pub const DEFAULT_BRUTE_FORCE_CAP: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Domain {
    labels: Vec<String>,
}

impl Domain {
    pub fn new(labels: Vec<String>) -> Result<Self> {
        if labels.is_empty() {
            return contract("domain must be nonempty");
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return contract(format!("duplicate domain label {l}"));
            }
        }
        Ok(Domain { labels })
    }

    /// `{0, 1, ..., size-1}` labelled by their decimal representation.
    pub fn range(size: usize) -> Self {
        Domain { labels: (0..size).map(|i| i.to_string()).collect() }
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// `f: D^m → Z⁺`, stored as a table in lexicographic tuple order
/// (first coordinate most significant).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuedFunction {
    name: String,
    arity: usize,
    domain_size: usize,
    table: Vec<u64>,
}

impl ValuedFunction {
    pub fn new(name: impl Into<String>, arity: usize, domain_size: usize, table: Vec<u64>) -> Result<Self> {
        if arity == 0 {
            return contract("function arity must be at least 1");
        }
        let expected = domain_size.checked_pow(arity as u32);
        if expected != Some(table.len()) {
            return contract(format!(
                "function table has {} entries, expected |D|^{} = {:?}",
                table.len(),
                arity,
                expected
            ));
        }
        Ok(ValuedFunction { name: name.into(), arity, domain_size, table })
    }

    /// Tabulate `f` over all tuples.
    pub fn from_fn(name: impl Into<String>, arity: usize, domain_size: usize, f: impl Fn(&[usize]) -> u64) -> Self {
        let table = TupleIter::new(arity, domain_size).map(|t| f(&t)).collect();
        ValuedFunction { name: name.into(), arity, domain_size, table }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    pub fn table(&self) -> &[u64] {
        &self.table
    }

    pub fn tuple_index(&self, tuple: &[usize]) -> usize {
        tuple.iter().fold(0, |acc, &x| acc * self.domain_size + x)
    }

    pub fn value(&self, tuple: &[usize]) -> u64 {
        self.table[self.tuple_index(tuple)]
    }
}

/// All tuples of `D^arity` in lexicographic order.
#[derive(Debug, Clone)]
pub struct TupleIter {
    current: Option<Vec<usize>>,
    base: usize,
}

impl TupleIter {
    pub fn new(arity: usize, base: usize) -> Self {
        TupleIter { current: if base == 0 && arity > 0 { None } else { Some(vec![0; arity]) }, base }
    }
}

impl Iterator for TupleIter {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let mut next = out.clone();
        let mut i = next.len();
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            next[i] += 1;
            if next[i] < self.base {
                self.current = Some(next);
                break;
            }
            next[i] = 0;
        }
        Some(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub scope: Vec<usize>,
    /// Index into the instance's function list.
    pub function: usize,
    pub weight: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VcspInstance {
    domain: Domain,
    variables: Vec<String>,
    functions: Vec<ValuedFunction>,
    constraints: Vec<Constraint>,
}

/// A total map from variables to domain indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Assignment(pub Vec<usize>);

impl VcspInstance {
    pub fn new(
        domain: Domain,
        variables: Vec<String>,
        functions: Vec<ValuedFunction>,
        constraints: Vec<Constraint>,
    ) -> Result<Self> {
        for (i, v) in variables.iter().enumerate() {
            if variables[..i].contains(v) {
                return contract(format!("duplicate variable {v}"));
            }
        }
        for f in &functions {
            if f.domain_size != domain.size() {
                return contract(format!("function {} tabulated over the wrong domain", f.name));
            }
        }
        for (k, c) in constraints.iter().enumerate() {
            let Some(f) = functions.get(c.function) else {
                return contract(format!("constraint {k} names an unknown function"));
            };
            if c.scope.len() != f.arity {
                return contract(format!("constraint {k}: scope length {} != arity {}", c.scope.len(), f.arity));
            }
            if c.scope.iter().any(|&v| v >= variables.len()) {
                return contract(format!("constraint {k}: scope variable out of range"));
            }
        }
        Ok(VcspInstance { domain, variables, functions, constraints })
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn functions(&self) -> &[ValuedFunction] {
        &self.functions
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn function_of(&self, c: &Constraint) -> &ValuedFunction {
        &self.functions[c.function]
    }

    /// Same instance with every weight multiplied by `k`.
    pub fn scaled(&self, k: u64) -> Self {
        let mut out = self.clone();
        for c in &mut out.constraints {
            c.weight *= k;
        }
        out
    }

    pub fn total_weight(&self) -> u64 {
        self.constraints.iter().map(|c| c.weight).sum()
    }
}

/// `Val_I(h) = Σ w · f(h(s))`.
pub fn evaluate(inst: &VcspInstance, h: &Assignment) -> Result<u64> {
    if h.0.len() != inst.variables.len() {
        return contract("assignment must be total on the variable set");
    }
    if h.0.iter().any(|&a| a >= inst.domain.size()) {
        return contract("assignment value outside the domain");
    }
    Ok(value_unchecked(inst, &h.0))
}

fn value_unchecked(inst: &VcspInstance, h: &[usize]) -> u64 {
    let mut tuple = Vec::new();
    inst.constraints
        .iter()
        .map(|c| {
            tuple.clear();
            tuple.extend(c.scope.iter().map(|&v| h[v]));
            c.weight * inst.functions[c.function].value(&tuple)
        })
        .sum()
}

/// Exhaustive maximum; the first maximiser in lexicographic order wins.
pub fn brute_force_opt(inst: &VcspInstance, cap: u64) -> Result<(u64, Assignment)> {
    let d = inst.domain.size() as u64;
    let n = inst.variables.len();
    let states = (0..n).try_fold(1u64, |acc, _| acc.checked_mul(d).filter(|&s| s <= cap));
    if states.is_none() {
        return Err(Error::TooLarge(format!("{}^{} assignments exceed the oracle cap of {}", d, n, cap)));
    }
    let mut best: Option<(u64, Vec<usize>)> = None;
    for h in TupleIter::new(n, d as usize) {
        let v = value_unchecked(inst, &h);
        if best.as_ref().is_none_or(|(b, _)| v > *b) {
            best = Some((v, h));
        }
    }
    let (v, h) = best.unwrap_or((0, Vec::new()));
    Ok((v, Assignment(h)))
}
