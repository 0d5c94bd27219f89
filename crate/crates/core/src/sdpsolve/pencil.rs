//! Inequality-form SDPs `{x | Z + Σ x_v Y_v ⪰ 0}` stored block-diagonally.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{contract, Result};
use crate::exactlin::{RatMatrix, Rational};

/// One diagonal block `Z_k + Σ_v x_v Y_{k,v}` with sparse coefficient matrices.
#[derive(Debug, Clone)]
pub struct AffineBlock {
    constant: RatMatrix,
    /// `(variable, row, col, coefficient)`; both `(i,j)` and `(j,i)` are listed.
    terms: Vec<(usize, usize, usize, Rational)>,
}

impl AffineBlock {
    pub fn new(constant: RatMatrix) -> Self {
        AffineBlock { constant, terms: Vec::new() }
    }

    pub fn from_dense(constant: RatMatrix, coefficients: &[RatMatrix]) -> Self {
        let mut block = AffineBlock::new(constant);
        for (v, y) in coefficients.iter().enumerate() {
            for i in 0..y.rows() {
                for j in 0..y.cols() {
                    if !y[(i, j)].is_zero() {
                        block.terms.push((v, i, j, y[(i, j)].clone()));
                    }
                }
            }
        }
        block
    }

    pub fn dim(&self) -> usize {
        self.constant.rows()
    }

    pub fn constant(&self) -> &RatMatrix {
        &self.constant
    }

    pub fn terms(&self) -> &[(usize, usize, usize, Rational)] {
        &self.terms
    }

    /// Adds `coef` to entry `(i,j)` and, off the diagonal, to `(j,i)` of `Y_v`.
    pub fn add_sym(&mut self, v: usize, i: usize, j: usize, coef: Rational) {
        if i != j {
            self.terms.push((v, j, i, coef.clone()));
        }
        self.terms.push((v, i, j, coef));
    }

    pub fn add_constant_sym(&mut self, i: usize, j: usize, value: &Rational) {
        self.constant[(i, j)] += value;
        if i != j {
            self.constant[(j, i)] += value;
        }
    }

    pub fn coefficient(&self, v: usize) -> RatMatrix {
        let mut y = RatMatrix::zeros(self.dim(), self.dim());
        for (w, i, j, a) in &self.terms {
            if *w == v {
                y[(*i, *j)] += a;
            }
        }
        y
    }

    /// Terms with duplicate positions summed and zeros dropped.
    pub fn merged_terms(&self) -> BTreeMap<(usize, usize, usize), Rational> {
        let mut map = BTreeMap::new();
        for (v, i, j, a) in &self.terms {
            *map.entry((*v, *i, *j)).or_insert_with(Rational::zero) += a;
        }
        map.retain(|_, a| !a.is_zero());
        map
    }

    pub fn eval(&self, x: &[Rational]) -> RatMatrix {
        let mut m = self.constant.clone();
        for (v, i, j, a) in &self.terms {
            if !x[*v].is_zero() {
                m[(*i, *j)] += a * &x[*v];
            }
        }
        m
    }

    /// `(⟨S, Y_v⟩)_v` for a matrix `S` of the block's size.
    pub fn pullback(&self, s: &RatMatrix, num_vars: usize) -> Vec<Rational> {
        let mut g = vec![Rational::zero(); num_vars];
        for (v, i, j, a) in &self.terms {
            g[*v] += a * &s[(*i, *j)];
        }
        g
    }
}

/// Equal when the constants and the merged coefficients agree, whatever
/// order the terms were added in.
impl PartialEq for AffineBlock {
    fn eq(&self, other: &Self) -> bool {
        self.constant == other.constant && self.merged_terms() == other.merged_terms()
    }
}

impl Eq for AffineBlock {}

/// `max ⟨c, x⟩` subject to every block being PSD.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InequalitySDP {
    num_vars: usize,
    blocks: Vec<AffineBlock>,
    c: Vec<Rational>,
}

impl InequalitySDP {
    pub fn new(num_vars: usize, blocks: Vec<AffineBlock>, c: Vec<Rational>) -> Result<Self> {
        if c.len() != num_vars {
            return contract("objective length differs from the variable count");
        }
        for b in &blocks {
            if !b.constant.is_square() || !b.constant.is_symmetric() {
                return contract("block constant must be square and symmetric");
            }
            if b.terms.iter().any(|t| t.0 >= num_vars || t.1 >= b.dim() || t.2 >= b.dim()) {
                return contract("block term out of range");
            }
            let merged = b.merged_terms();
            if merged.iter().any(|((v, i, j), a)| merged.get(&(*v, *j, *i)) != Some(a)) {
                return contract("coefficient matrices must be symmetric");
            }
        }
        Ok(InequalitySDP { num_vars, blocks, c })
    }

    /// A single-block SDP from dense `Z` and `Y_v`.
    pub fn from_dense(z: RatMatrix, ys: &[RatMatrix], c: Vec<Rational>) -> Result<Self> {
        if ys.iter().any(|y| y.rows() != z.rows() || y.cols() != z.cols()) {
            return contract("coefficient matrices must match Z in size");
        }
        Self::new(ys.len(), vec![AffineBlock::from_dense(z, ys)], c)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn blocks(&self) -> &[AffineBlock] {
        &self.blocks
    }

    pub fn c(&self) -> &[Rational] {
        &self.c
    }

    pub fn with_objective(&self, c: Vec<Rational>) -> Result<Self> {
        Self::new(self.num_vars, self.blocks.clone(), c)
    }

    pub fn total_dim(&self) -> usize {
        self.blocks.iter().map(AffineBlock::dim).sum()
    }

    pub fn eval(&self, x: &[Rational]) -> Vec<RatMatrix> {
        self.blocks.iter().map(|b| b.eval(x)).collect()
    }

    /// The assembled block-diagonal `Z` and `(Y_v)_v`.
    pub fn to_dense(&self) -> (RatMatrix, Vec<RatMatrix>) {
        let n = self.total_dim();
        let mut z = RatMatrix::zeros(n, n);
        let mut ys = vec![RatMatrix::zeros(n, n); self.num_vars];
        let mut off = 0;
        for b in &self.blocks {
            for i in 0..b.dim() {
                for j in 0..b.dim() {
                    z[(off + i, off + j)] = b.constant[(i, j)].clone();
                }
            }
            for (v, i, j, a) in &b.terms {
                ys[*v][(off + i, off + j)] += a;
            }
            off += b.dim();
        }
        (z, ys)
    }

    /// Replaces every `Z_k` by `Z_k + ηI`.
    pub fn enlarged(&self, eta: &Rational) -> Self {
        let mut out = self.clone();
        for b in &mut out.blocks {
            b.constant = b.constant.shifted(eta);
        }
        out
    }

    /// A rational upper bound on `Σ_v ‖Y_v‖_F²`, used for inner-ball radii.
    pub fn coefficient_frobenius_sq(&self) -> Rational {
        let total: Rational = self.blocks.iter().flat_map(|b| b.merged_terms().into_values()).map(|a| &a * &a).sum();
        total.max(Rational::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::rational::int;

    #[test]
    fn dense_round_trip_and_pullback() {
        let z = RatMatrix::from_i64(&[&[1, 0], &[0, 1]]);
        let y = RatMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        let sdp = InequalitySDP::from_dense(z.clone(), std::slice::from_ref(&y), vec![int(1)]).unwrap();
        assert_eq!(sdp.eval(&[int(3)])[0], RatMatrix::from_i64(&[&[1, 3], &[3, 1]]));
        let (z2, ys) = sdp.to_dense();
        assert_eq!((z2, ys), (z, vec![y]));
        let s = RatMatrix::from_i64(&[&[1, -1], &[-1, 1]]);
        assert_eq!(sdp.blocks()[0].pullback(&s, 1), vec![int(-2)]);
    }

    #[test]
    fn asymmetric_coefficients_rejected() {
        let z = RatMatrix::zeros(2, 2);
        let y = RatMatrix::from_i64(&[&[0, 1], &[0, 0]]);
        assert!(InequalitySDP::from_dense(z, &[y], vec![int(0)]).is_err());
    }
}
