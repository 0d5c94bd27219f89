//! Line-oriented text formats.
//!
//! Every format ignores blank lines and `#` comments, writes rationals as
//! `p` or `p/q`, and parses back what it writes to a structurally equal
//! object. Parse failures carry the 1-based line number and the offending
//! field.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::encode::ZeroOneLP;
use crate::error::{Error, Result};
use crate::exactlin::rational::{fmt_rational, parse_rational};
use crate::exactlin::{RatMatrix, Rational};
use crate::reductions::{CnfFormula, LinSystem, Literal, WeightedGraph};
use crate::sdpsolve::{AffineBlock, InequalitySDP};
use crate::vcsp::{Constraint, Domain, TupleIter, ValuedFunction, VcspInstance};

fn parse_err<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { line, msg: msg.into() })
}

/// Non-empty lines with comments stripped, as `(line number, fields)`.
fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let fields: Vec<&str> = body.split_whitespace().collect();
        (!fields.is_empty()).then_some((i + 1, fields))
    })
}

fn field<'a>(line: usize, fields: &[&'a str], k: usize, what: &str) -> Result<&'a str> {
    match fields.get(k) {
        Some(f) => Ok(f),
        None => parse_err(line, format!("missing field {} ({what})", k + 1)),
    }
}

fn num<T: std::str::FromStr>(line: usize, s: &str, what: &str) -> Result<T> {
    s.parse().or_else(|_| parse_err(line, format!("{what}: expected a nonnegative integer, got `{s}`")))
}

fn rational(line: usize, s: &str, what: &str) -> Result<Rational> {
    match parse_rational(s) {
        Some(q) => Ok(q),
        None => parse_err(line, format!("{what}: expected a rational, got `{s}`")),
    }
}

fn arity_check(line: usize, fields: &[&str], n: usize, what: &str) -> Result<()> {
    if fields.len() != n {
        return parse_err(line, format!("`{what}` takes {} fields, found {}", n - 1, fields.len() - 1));
    }
    Ok(())
}

fn lift_contract<T>(line: usize, r: Result<T>) -> Result<T> {
    r.or_else(|e| match e {
        Error::Contract(m) => parse_err(line, m),
        other => Err(other),
    })
}

// ---------------------------------------------------------------- .vcsp

pub fn write_vcsp(inst: &VcspInstance) -> String {
    let mut out = String::new();
    let labels = inst.domain().labels();
    writeln!(out, "domain {}", labels.join(" ")).unwrap();
    for v in inst.variables() {
        writeln!(out, "var {v}").unwrap();
    }
    for f in inst.functions() {
        writeln!(out, "fun {} {}", f.name(), f.arity()).unwrap();
        for tuple in TupleIter::new(f.arity(), f.domain_size()) {
            let names: Vec<&str> = tuple.iter().map(|&a| labels[a].as_str()).collect();
            writeln!(out, "{} {}", names.join(" "), f.value(&tuple)).unwrap();
        }
    }
    let vars = inst.variables();
    for c in inst.constraints() {
        let scope: Vec<&str> = c.scope.iter().map(|&v| vars[v].as_str()).collect();
        writeln!(out, "con {} {} {}", inst.function_of(c).name(), c.weight, scope.join(" ")).unwrap();
    }
    out
}

pub fn parse_vcsp(text: &str) -> Result<VcspInstance> {
    struct Fun {
        line: usize,
        name: String,
        arity: usize,
        table: Vec<u64>,
        seen: Vec<bool>,
    }
    let mut domain: Option<Domain> = None;
    let mut vars: Vec<String> = Vec::new();
    let mut var_index: HashMap<String, usize> = HashMap::new();
    let mut funs: Vec<Fun> = Vec::new();
    let mut cons: Vec<(usize, Vec<&str>)> = Vec::new();
    for (line, f) in records(text) {
        let label_of = |s: &str, d: &Domain| match d.index_of(s) {
            Some(a) => Ok(a),
            None => parse_err(line, format!("unknown domain label `{s}`")),
        };
        match f[0] {
            "domain" => {
                if domain.is_some() {
                    return parse_err(line, "second `domain` line");
                }
                let labels = f[1..].iter().map(|s| s.to_string()).collect();
                domain = Some(lift_contract(line, Domain::new(labels))?);
            }
            "var" => {
                arity_check(line, &f, 2, "var")?;
                if var_index.insert(f[1].to_string(), vars.len()).is_some() {
                    return parse_err(line, format!("duplicate variable `{}`", f[1]));
                }
                vars.push(f[1].to_string());
            }
            "fun" => {
                arity_check(line, &f, 3, "fun")?;
                let Some(d) = &domain else { return parse_err(line, "`fun` before `domain`") };
                if funs.iter().any(|g| g.name == f[1]) {
                    return parse_err(line, format!("duplicate function `{}`", f[1]));
                }
                let arity: usize = num(line, f[2], "arity")?;
                let size = d.size().checked_pow(arity as u32).filter(|&s| s <= 1 << 24);
                let Some(size) = size else { return parse_err(line, "function table too large") };
                funs.push(Fun { line, name: f[1].to_string(), arity, table: vec![0; size], seen: vec![false; size] });
            }
            "con" => cons.push((line, f)),
            _ => {
                let (Some(d), Some(fun)) = (&domain, funs.last_mut()) else {
                    return parse_err(line, format!("unknown directive `{}`", f[0]));
                };
                if f.len() != fun.arity + 1 {
                    return parse_err(
                        line,
                        format!("tuple line of `{}` needs {} labels and a value", fun.name, fun.arity),
                    );
                }
                let mut idx = 0;
                for s in &f[..fun.arity] {
                    idx = idx * d.size() + label_of(s, d)?;
                }
                if fun.seen[idx] {
                    return parse_err(line, "tuple listed twice");
                }
                fun.seen[idx] = true;
                fun.table[idx] = num(line, f[fun.arity], "value")?;
            }
        }
    }
    let Some(domain) = domain else { return parse_err(1, "missing `domain` line") };
    let mut functions = Vec::with_capacity(funs.len());
    for g in &funs {
        functions
            .push(lift_contract(g.line, ValuedFunction::new(g.name.clone(), g.arity, domain.size(), g.table.clone()))?);
    }
    let mut constraints = Vec::with_capacity(cons.len());
    for (line, f) in cons {
        let name = field(line, &f, 1, "function")?;
        let Some(function) = funs.iter().position(|g| g.name == name) else {
            return parse_err(line, format!("unknown function `{name}`"));
        };
        let weight = num(line, field(line, &f, 2, "weight")?, "weight")?;
        let mut scope = Vec::new();
        for s in &f[3..] {
            match var_index.get(*s) {
                Some(&v) => scope.push(v),
                None => return parse_err(line, format!("unknown variable `{s}`")),
            }
        }
        if scope.len() != funs[function].arity {
            return parse_err(line, format!("`{name}` has arity {}, scope has {}", funs[function].arity, scope.len()));
        }
        constraints.push(Constraint { scope, function, weight });
    }
    VcspInstance::new(domain, vars, functions, constraints)
}

// ---------------------------------------------------------------- .lp

fn write_terms(out: &mut String, names: &[String], coefs: &[Rational]) {
    for (name, a) in names.iter().zip(coefs) {
        if !a.is_zero() {
            write!(out, " {}*{}", fmt_rational(a), name).unwrap();
        }
    }
}

pub fn write_lp(lp: &ZeroOneLP) -> String {
    let mut out = String::new();
    for v in lp.names() {
        writeln!(out, "var {v}").unwrap();
    }
    for u in 0..lp.num_rows() {
        write!(out, "row >= {}", fmt_rational(&lp.b()[u])).unwrap();
        write_terms(&mut out, lp.names(), lp.a().row(u));
        out.push('\n');
    }
    out.push_str("obj");
    write_terms(&mut out, lp.names(), lp.c());
    out.push('\n');
    out
}

fn parse_terms(line: usize, fields: &[&str], index: &HashMap<String, usize>) -> Result<Vec<(usize, Rational)>> {
    let mut terms = Vec::new();
    for t in fields {
        let Some((coef, name)) = t.split_once('*') else {
            return parse_err(line, format!("term `{t}` is not of the form coef*var"));
        };
        let Some(&v) = index.get(name) else { return parse_err(line, format!("unknown variable `{name}`")) };
        terms.push((v, rational(line, coef, "coefficient")?));
    }
    Ok(terms)
}

pub fn parse_lp(text: &str) -> Result<ZeroOneLP> {
    let mut names: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut rows: Vec<(usize, Vec<&str>)> = Vec::new();
    let mut obj: Option<(usize, Vec<&str>)> = None;
    for (line, f) in records(text) {
        match f[0] {
            "var" => {
                arity_check(line, &f, 2, "var")?;
                if index.insert(f[1].to_string(), names.len()).is_some() {
                    return parse_err(line, format!("duplicate variable `{}`", f[1]));
                }
                names.push(f[1].to_string());
            }
            "row" => rows.push((line, f)),
            "obj" => {
                if obj.is_some() {
                    return parse_err(line, "second `obj` line");
                }
                obj = Some((line, f));
            }
            other => return parse_err(line, format!("unknown directive `{other}`")),
        }
    }
    let mut builder = crate::encode::LpBuilder::new(names);
    for (line, f) in rows {
        let rel = field(line, &f, 1, "relation")?;
        let rhs = rational(line, field(line, &f, 2, "rhs")?, "rhs")?;
        let terms = parse_terms(line, &f[3..], &index)?;
        match rel {
            ">=" => builder.geq(terms, rhs),
            "<=" => builder.leq(terms, rhs),
            "=" => builder.eq(terms, rhs),
            _ => return parse_err(line, format!("relation must be >=, <= or =, got `{rel}`")),
        };
    }
    if let Some((line, f)) = obj {
        builder.objective(parse_terms(line, &f[1..], &index)?);
    }
    builder.build()
}

// ---------------------------------------------------------------- .sdp

/// `Z + Σ y_q Y_q ⪰ 0` block by block; `names` label the variables.
pub fn write_sdp(sdp: &InequalitySDP, names: Option<&[String]>) -> String {
    let mut out = String::new();
    writeln!(out, "vars {}", sdp.num_vars()).unwrap();
    if let Some(names) = names {
        for (q, name) in names.iter().enumerate() {
            writeln!(out, "var {q} {name}").unwrap();
        }
    }
    out.push_str("obj");
    for (q, c) in sdp.c().iter().enumerate() {
        if !c.is_zero() {
            write!(out, " {q}:{}", fmt_rational(c)).unwrap();
        }
    }
    out.push('\n');
    for block in sdp.blocks() {
        let d = block.dim();
        writeln!(out, "block {d}").unwrap();
        for i in 0..d {
            for j in i..d {
                let z = &block.constant()[(i, j)];
                if !z.is_zero() {
                    writeln!(out, "const {i} {j} {}", fmt_rational(z)).unwrap();
                }
            }
        }
        for ((q, i, j), a) in block.merged_terms() {
            if i <= j && !a.is_zero() {
                writeln!(out, "entry {q} {i} {j} {}", fmt_rational(&a)).unwrap();
            }
        }
    }
    out
}

/// The pencil and the variable names (empty when the file has none).
pub fn parse_sdp(text: &str) -> Result<(InequalitySDP, Vec<String>)> {
    let mut n: Option<usize> = None;
    let mut names: Vec<Option<String>> = Vec::new();
    let mut c: Vec<Rational> = Vec::new();
    let mut blocks: Vec<AffineBlock> = Vec::new();
    for (line, f) in records(text) {
        let need_n = || match n {
            Some(n) => Ok(n),
            None => parse_err(line, format!("`{}` before `vars`", f[0])),
        };
        let index = |s: &str, bound: usize, what: &str| -> Result<usize> {
            let k: usize = num(line, s, what)?;
            if k >= bound {
                return parse_err(line, format!("{what} {k} out of range (< {bound})"));
            }
            Ok(k)
        };
        match f[0] {
            "vars" => {
                arity_check(line, &f, 2, "vars")?;
                if n.is_some() {
                    return parse_err(line, "second `vars` line");
                }
                let k = num(line, f[1], "variable count")?;
                n = Some(k);
                names = vec![None; k];
                c = vec![Rational::zero(); k];
            }
            "var" => {
                arity_check(line, &f, 3, "var")?;
                let q = index(f[1], need_n()?, "variable")?;
                names[q] = Some(f[2].to_string());
            }
            "obj" => {
                need_n()?;
                for t in &f[1..] {
                    let Some((q, v)) = t.split_once(':') else {
                        return parse_err(line, format!("objective term `{t}` is not of the form index:value"));
                    };
                    let q = index(q, c.len(), "variable")?;
                    c[q] += rational(line, v, "objective coefficient")?;
                }
            }
            "block" => {
                arity_check(line, &f, 2, "block")?;
                need_n()?;
                let d = num(line, f[1], "block dimension")?;
                blocks.push(AffineBlock::new(RatMatrix::zeros(d, d)));
            }
            "const" | "entry" => {
                let Some(block) = blocks.last_mut() else {
                    return parse_err(line, format!("`{}` before `block`", f[0]));
                };
                let d = block.dim();
                let (var, rest) = if f[0] == "entry" {
                    arity_check(line, &f, 5, "entry")?;
                    (Some(index(f[1], need_n()?, "variable")?), &f[2..])
                } else {
                    arity_check(line, &f, 4, "const")?;
                    (None, &f[1..])
                };
                let i = index(rest[0], d, "row")?;
                let j = index(rest[1], d, "column")?;
                let v = rational(line, rest[2], "value")?;
                match var {
                    Some(q) => block.add_sym(q, i, j, v),
                    None => block.add_constant_sym(i, j, &v),
                }
            }
            other => return parse_err(line, format!("unknown directive `{other}`")),
        }
    }
    let Some(n) = n else { return parse_err(1, "missing `vars` line") };
    let names = if names.iter().all(Option::is_none) {
        Vec::new()
    } else {
        names.into_iter().enumerate().map(|(q, s)| s.unwrap_or_else(|| format!("y{q}"))).collect()
    };
    Ok((InequalitySDP::new(n, blocks, c)?, names))
}

// ---------------------------------------------------------------- .3lin

/// `vars <n>` then one `a b c = r` line per equation, variables 1-based.
pub fn write_3lin(l: &LinSystem) -> String {
    let mut out = format!("vars {}\n", l.num_vars);
    for (rhs, eqs) in [(0, &l.e0), (1, &l.e1)] {
        for t in eqs {
            writeln!(out, "{} {} {} = {rhs}", t[0] + 1, t[1] + 1, t[2] + 1).unwrap();
        }
    }
    out
}

pub fn parse_3lin(text: &str) -> Result<LinSystem> {
    let mut n: Option<usize> = None;
    let (mut e0, mut e1) = (Vec::new(), Vec::new());
    for (line, f) in records(text) {
        if f[0] == "vars" {
            arity_check(line, &f, 2, "vars")?;
            n = Some(num(line, f[1], "variable count")?);
            continue;
        }
        let Some(n) = n else { return parse_err(line, "equation before `vars`") };
        if f.len() != 5 || f[3] != "=" {
            return parse_err(line, "equation must read `a b c = r`");
        }
        let mut t = [0usize; 3];
        for k in 0..3 {
            let v: usize = num(line, f[k], "variable")?;
            if v == 0 || v > n {
                return parse_err(line, format!("variable {v} out of range 1..={n}"));
            }
            t[k] = v - 1;
        }
        match f[4] {
            "0" => e0.push(t),
            "1" => e1.push(t),
            r => return parse_err(line, format!("right-hand side must be 0 or 1, got `{r}`")),
        }
    }
    let Some(n) = n else { return parse_err(1, "missing `vars` line") };
    LinSystem::new(n, e0, e1).or_else(|e| parse_err(0, e.to_string()))
}

// ---------------------------------------------------------------- .cnf

pub fn write_cnf(f: &CnfFormula) -> String {
    let mut out = format!("p cnf {} {}\n", f.num_vars, f.clauses.len());
    for c in &f.clauses {
        for l in c {
            let v = l.var as i64 + 1;
            write!(out, "{} ", if l.negated { -v } else { v }).unwrap();
        }
        out.push_str("0\n");
    }
    out
}

/// DIMACS CNF restricted to clauses of exactly three literals. `c` lines
/// are comments.
pub fn parse_cnf(text: &str) -> Result<CnfFormula> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut pending: Vec<Literal> = Vec::new();
    for (line, f) in records(text) {
        if f[0] == "c" {
            continue;
        }
        if f[0] == "p" {
            if f.len() != 4 || f[1] != "cnf" {
                return parse_err(line, "header must read `p cnf <vars> <clauses>`");
            }
            header = Some((num(line, f[2], "variable count")?, num(line, f[3], "clause count")?));
            continue;
        }
        let Some((n, _)) = header else { return parse_err(line, "clause before `p cnf` header") };
        for s in &f {
            let x: i64 = s.parse().or_else(|_| parse_err(line, format!("literal `{s}` is not an integer")))?;
            if x == 0 {
                let Ok(c) = <[Literal; 3]>::try_from(std::mem::take(&mut pending)) else {
                    return parse_err(line, "every clause needs exactly three literals");
                };
                clauses.push(c);
                continue;
            }
            let v = x.unsigned_abs() as usize;
            if v > n {
                return parse_err(line, format!("literal {x} exceeds the declared {n} variables"));
            }
            pending.push(if x < 0 { Literal::neg(v - 1) } else { Literal::pos(v - 1) });
        }
    }
    let Some((n, m)) = header else { return parse_err(1, "missing `p cnf` header") };
    if !pending.is_empty() {
        return parse_err(0, "last clause is not terminated by 0");
    }
    if clauses.len() != m {
        return parse_err(0, format!("header declares {m} clauses, found {}", clauses.len()));
    }
    CnfFormula::new(n, clauses).or_else(|e| parse_err(0, e.to_string()))
}

// ---------------------------------------------------------------- .graph

/// Weighted graph, plus the cut threshold when the file carries one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphFile {
    pub graph: WeightedGraph,
    pub threshold: Option<u64>,
}

pub fn write_graph(g: &GraphFile) -> String {
    let names = g.graph.vertex_names();
    let mut out = String::new();
    for v in &names {
        writeln!(out, "v {v}").unwrap();
    }
    for &(u, v, w) in g.graph.edges() {
        writeln!(out, "e {} {} {w}", names[u], names[v]).unwrap();
    }
    if let Some(k) = g.threshold {
        writeln!(out, "threshold {k}").unwrap();
    }
    out
}

pub fn parse_graph(text: &str) -> Result<GraphFile> {
    let mut names: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut edges = Vec::new();
    let mut threshold = None;
    for (line, f) in records(text) {
        match f[0] {
            "v" => {
                arity_check(line, &f, 2, "v")?;
                if index.insert(f[1].to_string(), names.len()).is_some() {
                    return parse_err(line, format!("duplicate vertex `{}`", f[1]));
                }
                names.push(f[1].to_string());
            }
            "e" => {
                arity_check(line, &f, 4, "e")?;
                let mut ends = [0; 2];
                for k in 0..2 {
                    match index.get(f[k + 1]) {
                        Some(&v) => ends[k] = v,
                        None => return parse_err(line, format!("unknown vertex `{}`", f[k + 1])),
                    }
                }
                edges.push((ends[0], ends[1], num(line, f[3], "weight")?));
            }
            "threshold" => {
                arity_check(line, &f, 2, "threshold")?;
                threshold = Some(num(line, f[1], "threshold")?);
            }
            other => return parse_err(line, format!("unknown directive `{other}`")),
        }
    }
    let graph = WeightedGraph::with_names(names, edges).or_else(|e| parse_err(0, e.to_string()))?;
    Ok(GraphFile { graph, threshold })
}

// ---------------------------------------------------------------- .sol

/// A solved level: the point found, its value and the rounded optimum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub level: usize,
    pub delta: Rational,
    /// Enlargement `η` of the pencil the point is feasible for (0 for LPs).
    pub eta: Rational,
    pub value: Rational,
    pub rounded: Option<BigInt>,
    pub point: Vec<Rational>,
}

pub fn write_solution(s: &Solution) -> String {
    let mut out = String::new();
    writeln!(out, "level {}", s.level).unwrap();
    writeln!(out, "delta {}", fmt_rational(&s.delta)).unwrap();
    writeln!(out, "eta {}", fmt_rational(&s.eta)).unwrap();
    writeln!(out, "value {}", fmt_rational(&s.value)).unwrap();
    if let Some(r) = &s.rounded {
        writeln!(out, "rounded {r}").unwrap();
    }
    out.push_str("point");
    for x in &s.point {
        write!(out, " {}", fmt_rational(x)).unwrap();
    }
    out.push('\n');
    out
}

pub fn parse_solution(text: &str) -> Result<Solution> {
    let (mut level, mut delta, mut eta, mut value, mut rounded, mut point) = (None, None, None, None, None, None);
    for (line, f) in records(text) {
        let one = |what: &str| -> Result<&str> {
            arity_check(line, &f, 2, what)?;
            Ok(f[1])
        };
        match f[0] {
            "level" => level = Some(num(line, one("level")?, "level")?),
            "delta" => delta = Some(rational(line, one("delta")?, "delta")?),
            "eta" => eta = Some(rational(line, one("eta")?, "eta")?),
            "value" => value = Some(rational(line, one("value")?, "value")?),
            "rounded" => {
                let s = one("rounded")?;
                rounded = Some(
                    s.parse::<BigInt>().or_else(|_| parse_err(line, format!("rounded: `{s}` is not an integer")))?,
                );
            }
            "point" => {
                point = Some(f[1..].iter().map(|s| rational(line, s, "coordinate")).collect::<Result<Vec<_>>>()?);
            }
            other => return parse_err(line, format!("unknown directive `{other}`")),
        }
    }
    let missing = |what: &str| Error::Parse { line: 0, msg: format!("missing `{what}` line") };
    Ok(Solution {
        level: level.ok_or_else(|| missing("level"))?,
        delta: delta.ok_or_else(|| missing("delta"))?,
        eta: eta.ok_or_else(|| missing("eta"))?,
        value: value.ok_or_else(|| missing("value"))?,
        rounded,
        point: point.ok_or_else(|| missing("point"))?,
    })
}
