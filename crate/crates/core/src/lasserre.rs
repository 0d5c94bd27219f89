//! The level-`t` Lasserre lift of a 0–1 program.
//!
//! Coordinates are indexed by subsets of the program's variables in
//! canonical order (by size, then lexicographically). The pencil variables
//! are the nonempty subsets of size at most `2t + 1`; `y_∅ = 1` is folded
//! into the constant matrices. Level 0 uses the index set `{∅}` for every
//! block, so `Las_0` is the LP relaxation.

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::encode::ZeroOneLP;
use crate::error::{contract, Error, Result};
use crate::exactlin::{RatMatrix, Rational};
use crate::sdpsolve::{AffineBlock, InequalitySDP};

/// Default refusal threshold on `|℘_{2t+1}(V)|`.
pub const DEFAULT_MAX_COORDINATES: usize = 50_000;

/// `℘_k(V)` over `V = {0, …, n-1}` in canonical order.
#[derive(Debug, Clone)]
pub struct SubsetIndex {
    n: usize,
    k: usize,
    subsets: Vec<Vec<usize>>,
    lookup: HashMap<Vec<usize>, usize>,
}

/// `Σ_{i ≤ k} C(n, i)`, saturating.
pub fn subset_count(n: usize, k: usize) -> usize {
    let mut total: usize = 0;
    let mut binom: u128 = 1;
    for i in 0..=k.min(n) {
        if i > 0 {
            binom = binom * (n - i + 1) as u128 / i as u128;
        }
        total = total.saturating_add(usize::try_from(binom).unwrap_or(usize::MAX));
    }
    total
}

impl SubsetIndex {
    pub fn new(n: usize, k: usize) -> Self {
        let mut subsets = vec![vec![]];
        let mut layer: Vec<Vec<usize>> = vec![vec![]];
        for _ in 0..k.min(n) {
            let mut next = Vec::new();
            for s in &layer {
                let start = s.last().map_or(0, |&x| x + 1);
                for v in start..n {
                    let mut t = s.clone();
                    t.push(v);
                    next.push(t);
                }
            }
            subsets.extend(next.iter().cloned());
            layer = next;
        }
        let lookup = subsets.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        SubsetIndex { n, k, subsets, lookup }
    }

    pub fn base_size(&self) -> usize {
        self.n
    }

    pub fn bound(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    pub fn subsets(&self) -> &[Vec<usize>] {
        &self.subsets
    }

    pub fn get(&self, i: usize) -> &[usize] {
        &self.subsets[i]
    }

    /// Position of a sorted, duplicate-free subset.
    pub fn lookup(&self, subset: &[usize]) -> Option<usize> {
        self.lookup.get(subset).copied()
    }

    /// Position of the union of the given subsets, if it is indexed.
    pub fn union_of(&self, parts: &[&[usize]]) -> Option<usize> {
        let mut u: Vec<usize> = parts.iter().flat_map(|p| p.iter().copied()).collect();
        u.sort_unstable();
        u.dedup();
        self.lookup(&u)
    }
}

/// A point `y ∈ Q^{℘_{2t+1}(V)}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentVector {
    n: usize,
    level: usize,
    values: Vec<Rational>,
}

impl MomentVector {
    /// `values` are aligned with `SubsetIndex::new(n, 2t + 1)`.
    pub fn new(n: usize, level: usize, values: Vec<Rational>) -> Result<Self> {
        let expected = subset_count(n, 2 * level + 1);
        if values.len() != expected {
            return contract(format!("moment vector needs {expected} entries, got {}", values.len()));
        }
        Ok(MomentVector { n, level, values })
    }

    /// Builds `y` from pencil coordinates, prepending `y_∅ = 1`.
    pub fn from_coordinates(n: usize, level: usize, coords: &[Rational]) -> Result<Self> {
        let mut values = Vec::with_capacity(coords.len() + 1);
        values.push(Rational::one());
        values.extend_from_slice(coords);
        Self::new(n, level, values)
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn base_size(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// The pencil coordinates: every entry except `y_∅`.
    pub fn coordinates(&self) -> &[Rational] {
        &self.values[1..]
    }

    pub fn index(&self) -> SubsetIndex {
        SubsetIndex::new(self.n, 2 * self.level + 1)
    }
}

/// `y_S = Π_{v ∈ S} x_v`.
pub fn rank_one_lift(x: &[Rational], t: usize) -> Result<MomentVector> {
    if x.iter().any(|v| !v.is_zero() && !v.is_one()) {
        return contract("rank-one lift needs a 0-1 vector");
    }
    let index = SubsetIndex::new(x.len(), 2 * t + 1);
    let values = index
        .subsets()
        .iter()
        .map(|s| if s.iter().all(|&v| x[v].is_one()) { Rational::one() } else { Rational::zero() })
        .collect();
    MomentVector::new(x.len(), t, values)
}

/// `(y_{v})_{v ∈ V}`.
pub fn project(y: &MomentVector) -> Vec<Rational> {
    y.values[1..=y.n].to_vec()
}

fn entry<'a>(y: &'a MomentVector, big: &SubsetIndex, parts: &[&[usize]]) -> Result<&'a Rational> {
    match big.union_of(parts) {
        Some(i) => Ok(&y.values[i]),
        None => contract("moment vector lacks a required subset"),
    }
}

/// `M_t(y)_{I,J} = y_{I∪J}` over `℘_t(V)`.
pub fn moment_matrix(y: &MomentVector, t: usize) -> Result<RatMatrix> {
    if t > y.level {
        return contract(format!("level {t} exceeds the moment vector's level {}", y.level));
    }
    let small = SubsetIndex::new(y.n, t);
    let big = y.index();
    let d = small.len();
    let mut m = RatMatrix::zeros(d, d);
    for i in 0..d {
        for j in i..d {
            let v = entry(y, &big, &[small.get(i), small.get(j)])?.clone();
            m[(j, i)] = v.clone();
            m[(i, j)] = v;
        }
    }
    Ok(m)
}

/// `S_t^u(y)_{I,J} = Σ_v A_{u,v} y_{I∪J∪{v}} − b_u y_{I∪J}`.
pub fn slack_matrix(y: &MomentVector, a: &RatMatrix, b: &[Rational], u: usize, t: usize) -> Result<RatMatrix> {
    if t > y.level {
        return contract(format!("level {t} exceeds the moment vector's level {}", y.level));
    }
    if a.cols() != y.n || u >= a.rows() || b.len() != a.rows() {
        return contract("slack row does not match the moment vector");
    }
    let small = SubsetIndex::new(y.n, t);
    let big = y.index();
    let d = small.len();
    let mut m = RatMatrix::zeros(d, d);
    for i in 0..d {
        for j in i..d {
            let (si, sj) = (small.get(i), small.get(j));
            let mut val = -&b[u] * entry(y, &big, &[si, sj])?;
            for v in 0..y.n {
                if !a[(u, v)].is_zero() {
                    val += &a[(u, v)] * entry(y, &big, &[si, sj, &[v]])?;
                }
            }
            m[(j, i)] = val.clone();
            m[(i, j)] = val;
        }
    }
    Ok(m)
}

/// The level-`t` pencil of a 0–1 program together with its index sets.
#[derive(Debug, Clone)]
pub struct SdpPencil {
    level: usize,
    base: usize,
    sdp: InequalitySDP,
}

impl SdpPencil {
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn base_size(&self) -> usize {
        self.base
    }

    pub fn sdp(&self) -> &InequalitySDP {
        &self.sdp
    }

    pub fn into_sdp(self) -> InequalitySDP {
        self.sdp
    }

    pub fn num_coordinates(&self) -> usize {
        self.sdp.num_vars()
    }

    /// Moment vector of pencil coordinates.
    pub fn moment_vector(&self, coords: &[Rational]) -> Result<MomentVector> {
        MomentVector::from_coordinates(self.base, self.level, coords)
    }
}

pub fn lift(lp: &ZeroOneLP, t: usize) -> Result<SdpPencil> {
    lift_with_guard(lp, t, DEFAULT_MAX_COORDINATES)
}

pub fn lift_with_guard(lp: &ZeroOneLP, t: usize, max_coordinates: usize) -> Result<SdpPencil> {
    if !lp.has_box_rows() {
        return contract("lift needs explicit box rows");
    }
    let n = lp.num_vars();
    let count = subset_count(n, 2 * t + 1);
    if count > max_coordinates {
        return Err(Error::TooLarge(format!("level {t} over {n} variables needs {count} coordinates")));
    }
    let big = SubsetIndex::new(n, 2 * t + 1);
    let small = SubsetIndex::new(n, t);
    let d = small.len();
    let pairs: Vec<(usize, usize)> = (0..d).flat_map(|i| (i..d).map(move |j| (i, j))).collect();
    let union = |parts: &[&[usize]]| big.union_of(parts).expect("unions of small subsets are indexed");

    // coordinate of subset position q is q - 1; position 0 is the constant y_∅
    let place = |block: &mut AffineBlock, q: usize, i: usize, j: usize, coef: &Rational| {
        if q == 0 {
            block.add_constant_sym(i, j, coef);
        } else {
            block.add_sym(q - 1, i, j, coef.clone());
        }
    };

    let mut blocks = Vec::with_capacity(lp.num_rows() + 1);
    let mut moment = AffineBlock::new(RatMatrix::zeros(d, d));
    for &(i, j) in &pairs {
        place(&mut moment, union(&[small.get(i), small.get(j)]), i, j, &Rational::one());
    }
    blocks.push(moment);
    for u in 0..lp.num_rows() {
        let mut slack = AffineBlock::new(RatMatrix::zeros(d, d));
        let row = lp.a().row(u);
        for &(i, j) in &pairs {
            let (si, sj) = (small.get(i), small.get(j));
            if !lp.b()[u].is_zero() {
                place(&mut slack, union(&[si, sj]), i, j, &-&lp.b()[u]);
            }
            for (v, coef) in row.iter().enumerate() {
                if !coef.is_zero() {
                    place(&mut slack, union(&[si, sj, &[v]]), i, j, coef);
                }
            }
        }
        blocks.push(slack);
    }
    let mut c = vec![Rational::zero(); count - 1];
    for (v, cv) in lp.c().iter().enumerate() {
        c[big.lookup(&[v]).expect("singletons are indexed") - 1] = cv.clone();
    }
    let sdp = InequalitySDP::new(count - 1, blocks, c)?;
    Ok(SdpPencil { level: t, base: n, sdp })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encode::LpBuilder;
    use crate::exactlin::psd_certificate;
    use crate::exactlin::rational::{int, rat};

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn boxed(n: usize) -> ZeroOneLP {
        let mut b = LpBuilder::new((0..n).map(|i| format!("x{i}")).collect());
        b.box_rows();
        b.build().unwrap()
    }

    #[test]
    fn subset_index_examples() {
        let s = SubsetIndex::new(2, 1);
        assert_eq!(s.subsets(), &[vec![], vec![0], vec![1]]);
        assert_eq!(SubsetIndex::new(2, 2).len(), 4);
        assert_eq!(SubsetIndex::new(4, 2).len(), 11);
        assert_eq!(subset_count(4, 2), 11);
        assert_eq!(SubsetIndex::new(3, 7).len(), 8);
        assert_eq!(s.union_of(&[&[0], &[1]]), None);
        assert_eq!(SubsetIndex::new(2, 2).union_of(&[&[1], &[0]]), Some(3));
    }

    #[test]
    fn moment_matrix_examples() {
        let alpha = rat(1, 3);
        let y = MomentVector::new(1, 1, vec![int(1), alpha.clone()]).unwrap();
        let m = moment_matrix(&y, 1).unwrap();
        assert_eq!(m, RatMatrix::from_rows(vec![vec![int(1), alpha.clone()], vec![alpha.clone(), alpha]]).unwrap());
        let zeros = rank_one_lift(&ints(&[0, 0, 0]), 1).unwrap();
        let m = moment_matrix(&zeros, 1).unwrap();
        assert!((0..4).all(|i| (0..4).all(|j| m[(i, j)] == int((i == 0 && j == 0) as i64))));
        let ones = moment_matrix(&rank_one_lift(&ints(&[1, 1]), 1).unwrap(), 1).unwrap();
        assert!(ones.entries().iter().all(|e| *e == int(1)));
    }

    #[test]
    fn slack_matrix_examples() {
        let a = RatMatrix::from_i64(&[&[1], &[-1]]);
        let b = ints(&[0, -1]);
        let y = MomentVector::new(1, 0, vec![int(1), rat(2, 5)]).unwrap();
        assert_eq!(slack_matrix(&y, &a, &b, 0, 0).unwrap(), RatMatrix::diagonal(&[rat(2, 5)]));
        let y1 = rank_one_lift(&ints(&[1]), 0).unwrap();
        assert_eq!(slack_matrix(&y1, &a, &b, 1, 0).unwrap(), RatMatrix::diagonal(&[int(0)]));
        let a2 = RatMatrix::from_i64(&[&[1, 1]]);
        let y2 = rank_one_lift(&ints(&[1, 0]), 0).unwrap();
        assert_eq!(slack_matrix(&y2, &a2, &ints(&[1]), 0, 0).unwrap(), RatMatrix::diagonal(&[int(0)]));
    }

    #[test]
    fn rank_one_lift_examples() {
        let y = rank_one_lift(&ints(&[1, 0]), 1).unwrap();
        assert_eq!(y.values(), &ints(&[1, 1, 0, 0])[..]);
        assert!(rank_one_lift(&ints(&[1, 1, 1]), 1).unwrap().values().iter().all(|v| *v == int(1)));
        assert!(rank_one_lift(&[rat(1, 2)], 0).is_err());
        assert_eq!(project(&y), ints(&[1, 0]));
    }

    #[test]
    fn pencil_reproduces_blocks() {
        let lp = boxed(2);
        for t in 0..=2 {
            let pencil = lift(&lp, t).unwrap();
            let coords: Vec<Rational> = (0..pencil.num_coordinates()).map(|i| rat(i as i64 + 1, 7)).collect();
            let y = pencil.moment_vector(&coords).unwrap();
            let blocks = pencil.sdp().eval(&coords);
            assert_eq!(blocks[0], moment_matrix(&y, t).unwrap());
            for u in 0..lp.num_rows() {
                assert_eq!(blocks[u + 1], slack_matrix(&y, lp.a(), lp.b(), u, t).unwrap());
            }
            let obj = crate::exactlin::dot(pencil.sdp().c(), &coords);
            assert_eq!(obj, crate::exactlin::dot(lp.c(), &project(&y)));
        }
    }

    #[test]
    fn rank_one_points_are_feasible() {
        let lp = boxed(2);
        for t in 0..=2 {
            let pencil = lift(&lp, t).unwrap();
            for x in lp.integer_points().unwrap() {
                let y = rank_one_lift(&x, t).unwrap();
                for block in pencil.sdp().eval(y.coordinates()) {
                    assert!(psd_certificate(&block).unwrap().is_psd());
                }
            }
        }
    }

    #[test]
    fn guards() {
        let mut b = LpBuilder::new(vec!["x".into()]);
        b.geq(vec![(0, int(1))], int(0));
        assert!(lift(&b.build().unwrap(), 1).is_err());
        assert!(matches!(lift_with_guard(&boxed(3), 1, 5), Err(Error::TooLarge(_))));
    }
}
