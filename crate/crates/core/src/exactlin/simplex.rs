//! Exact two-phase primal simplex with Bland's rule.
//!
//! Solves `max ⟨c, x⟩` over `{x | Ax ≥ b}` with free `x`. Internally the
//! problem is put into equality form `A x⁺ − A x⁻ − s = b` with all
//! variables nonnegative; entering and leaving choices use the smallest
//! column index, which guarantees termination.

use num_traits::{Signed, Zero};

use super::matrix::RatMatrix;
use super::rational::Rational;
use crate::error::{contract, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { x: Vec<Rational>, value: Rational },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

struct Tableau {
    rows: Vec<Vec<Rational>>, // constraint rows; last entry is the right-hand side
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize, obj: &mut [Rational]) {
        let pv = self.rows[r][c].clone();
        for x in self.rows[r].iter_mut() {
            if !x.is_zero() {
                *x /= &pv;
            }
        }
        let pr = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pr) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        if !obj[c].is_zero() {
            let f = obj[c].clone();
            for (x, p) in obj.iter_mut().zip(&pr) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Reduced-cost row for `cost`, with `-value` in the last slot.
    fn reduced_costs(&self, cost: &[Rational]) -> Vec<Rational> {
        let mut d: Vec<Rational> = cost.to_vec();
        d.push(Rational::zero());
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (x, t) in d.iter_mut().zip(row) {
                if !t.is_zero() {
                    *x -= cb * t;
                }
            }
        }
        d
    }

    /// Maximise over the first `active` columns. `false` means unbounded.
    fn run(&mut self, obj: &mut [Rational], active: usize) -> bool {
        loop {
            let Some(c) = (0..active).find(|&j| obj[j].is_positive()) else {
                return true;
            };
            let mut best: Option<(Rational, usize, usize)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[c].is_positive() {
                    continue;
                }
                let ratio = &row[self.cols] / &row[c];
                let better = match &best {
                    None => true,
                    Some((br, bb, _)) => ratio < *br || (ratio == *br && self.basis[i] < *bb),
                };
                if better {
                    best = Some((ratio, self.basis[i], i));
                }
            }
            let Some((_, _, r)) = best else { return false };
            self.pivot(r, c, obj);
        }
    }
}

pub fn lp_optimize(a: &RatMatrix, b: &[Rational], c: &[Rational]) -> Result<LpOutcome> {
    let (m, n) = (a.rows(), a.cols());
    if b.len() != m || c.len() != n {
        return contract("lp_optimize dimension mismatch");
    }
    // columns: x+ (n), x- (n), surplus (m), artificial (m)
    let real = 2 * n + m;
    let cols = real + m;
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = vec![Rational::zero(); cols + 1];
        let flip = b[i].is_negative();
        let sgn = |x: Rational| if flip { -x } else { x };
        for j in 0..n {
            row[j] = sgn(a[(i, j)].clone());
            row[n + j] = sgn(-a[(i, j)].clone());
        }
        row[2 * n + i] = sgn(-Rational::from_integer((1).into()));
        row[real + i] = Rational::from_integer(1.into());
        row[cols] = sgn(b[i].clone());
        rows.push(row);
    }
    let mut t = Tableau { rows, basis: (real..cols).collect(), cols };

    let mut phase1 = vec![Rational::zero(); cols];
    for x in phase1.iter_mut().skip(real) {
        *x = -Rational::from_integer(1.into());
    }
    let mut obj = t.reduced_costs(&phase1);
    t.run(&mut obj, cols);
    let infeas: Rational =
        t.rows.iter().zip(&t.basis).filter(|(_, &bv)| bv >= real).map(|(row, _)| row[cols].clone()).sum();
    if infeas.is_positive() {
        return Ok(LpOutcome::Infeasible);
    }
    // drive zero-level artificials out of the basis, dropping redundant rows
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= real {
            match (0..real).find(|&j| !t.rows[i][j].is_zero()) {
                Some(j) => {
                    let mut dummy = vec![Rational::zero(); cols + 1];
                    t.pivot(i, j, &mut dummy);
                }
                None => {
                    t.rows.remove(i);
                    t.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }

    let mut cost = vec![Rational::zero(); cols];
    for j in 0..n {
        cost[j] = c[j].clone();
        cost[n + j] = -c[j].clone();
    }
    let mut obj = t.reduced_costs(&cost);
    if !t.run(&mut obj, real) {
        return Ok(LpOutcome::Unbounded);
    }
    let mut z = vec![Rational::zero(); cols];
    for (row, &bv) in t.rows.iter().zip(&t.basis) {
        z[bv] = row[cols].clone();
    }
    let x: Vec<Rational> = (0..n).map(|j| &z[j] - &z[n + j]).collect();
    let value = c.iter().zip(&x).map(|(ci, xi)| ci * xi).sum();
    Ok(LpOutcome::Optimal { x, value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::rational::int;

    #[test]
    fn box_maximum() {
        // x <= 1  ->  -x >= -1 ; x >= 0
        let a = RatMatrix::from_i64(&[&[-1], &[1]]);
        let out = lp_optimize(&a, &[int(-1), int(0)], &[int(1)]).unwrap();
        assert_eq!(out, LpOutcome::Optimal { x: vec![int(1)], value: int(1) });
    }

    #[test]
    fn infeasible_box() {
        let a = RatMatrix::from_i64(&[&[-1], &[1]]);
        assert_eq!(lp_optimize(&a, &[int(1), int(0)], &[int(1)]).unwrap(), LpOutcome::Infeasible);
    }

    #[test]
    fn unbounded_ray() {
        let a = RatMatrix::from_i64(&[&[1]]);
        assert_eq!(lp_optimize(&a, &[int(0)], &[int(1)]).unwrap(), LpOutcome::Unbounded);
    }

    #[test]
    fn degenerate_redundant_rows() {
        // x + y = 1 written twice as inequality pairs, x, y >= 0, max x + 2y
        let a = RatMatrix::from_i64(&[&[1, 1], &[-1, -1], &[1, 1], &[-1, -1], &[1, 0], &[0, 1]]);
        let b = [int(1), int(-1), int(1), int(-1), int(0), int(0)];
        let out = lp_optimize(&a, &b, &[int(1), int(2)]).unwrap();
        assert_eq!(out.value(), Some(&int(2)));
    }
}
