//! Guaranteed-precision eigenvalue isolation and approximate eigenvectors.

use num_traits::{One, Signed, Zero};

use super::matrix::{norm_sq, null_vector, LuFactor, RatMatrix};
use super::poly::{char_poly, SturmChain};
use super::rational::{floor_log2, pow2, rat, round_dyadic, Rational};
use crate::error::{contract, Result};

/// `λ̃` with `|λ̃ − λ_min(M)| ≤ prec`.
///
/// Bisection on the Sturm chain of `det(xI − M)` inside the Gershgorin-style
/// interval `(−‖M‖∞ − 1, ‖M‖∞ + 1]`. Every bisection point is dyadic.
pub fn min_eigenvalue_approx(m: &RatMatrix, prec: &Rational) -> Result<Rational> {
    if !m.is_symmetric() {
        return contract("min_eigenvalue_approx needs a symmetric matrix");
    }
    if m.rows() == 0 {
        return contract("min_eigenvalue_approx of an empty matrix");
    }
    if !prec.is_positive() {
        return contract("precision must be positive");
    }
    let chain = SturmChain::new(&char_poly(m)?);
    let bound = Rational::from_integer(m.row_sum_norm().ceil().to_integer()) + Rational::one();
    let mut lo = -bound.clone();
    let mut hi = bound;
    let two = Rational::from_integer(2.into());
    while &hi - &lo > *prec {
        let mut mid = (&lo + &hi) / &two;
        let step = (&hi - &lo) / Rational::from_integer(8.into());
        while chain.square_free().eval(&mid).is_zero() {
            mid += &step;
        }
        if chain.count_roots(&lo, &mid) > 0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((lo + hi) / two)
}

/// Rational `v` with `‖(M − λ̃I)v‖ < δ/2` and `‖v‖² ∈ [1/4, 4]`.
///
/// An exact kernel vector is used when `M − λ̃I` is singular; otherwise
/// inverse iteration with dyadic rounding between steps. Fails only when
/// no start vector reaches the residual bound, which happens when `λ̃` is
/// not within `δ/4` of an eigenvalue.
pub fn approx_eigenvector(m: &RatMatrix, lambda: &Rational, delta: &Rational) -> Result<Vec<Rational>> {
    if !m.is_symmetric() {
        return contract("approx_eigenvector needs a symmetric matrix");
    }
    if !delta.is_positive() {
        return contract("delta must be positive");
    }
    let n = m.rows();
    let shifted = m.shifted(&-lambda.clone());
    let target = (delta * delta) / Rational::from_integer(4.into());
    let accept = |v: &[Rational]| -> bool {
        let ns = norm_sq(v);
        if ns < rat(1, 4) || ns > rat(4, 1) {
            return false;
        }
        let r = shifted.mul_vec(v).expect("square");
        norm_sq(&r) < target
    };

    let lu = LuFactor::new(&shifted)?;
    if lu.is_singular() {
        let v = normalize_pow2(null_vector(&shifted).expect("singular matrix has a kernel"));
        debug_assert!(accept(&v));
        return Ok(v);
    }

    let scale = shifted.row_sum_norm() + Rational::one();
    let bits = (floor_log2(&(scale * Rational::from_integer((8 * (n as i64 + 1)).into()) / delta)) + 6).max(16) as u32;

    for start in start_vectors(n) {
        let mut v = start;
        for _ in 0..64 {
            let w = lu.solve(&v)?;
            if w.iter().all(Zero::is_zero) {
                break;
            }
            v = normalize_pow2(w).iter().map(|x| round_dyadic(x, bits)).collect();
            if accept(&v) {
                return Ok(v);
            }
        }
    }
    contract("no eigenvector within tolerance; eigenvalue estimate is off")
}

/// Scale by a power of two so that `‖v‖² ∈ [1, 4)`.
fn normalize_pow2(v: Vec<Rational>) -> Vec<Rational> {
    let ns = norm_sq(&v);
    if ns.is_zero() {
        return v;
    }
    let e = floor_log2(&ns);
    let k = e.div_euclid(2);
    let f = pow2(-k);
    v.into_iter().map(|x| x * &f).collect()
}

fn start_vectors(n: usize) -> Vec<Vec<Rational>> {
    let mut starts = Vec::with_capacity(n + 2);
    starts.push(vec![Rational::one(); n]);
    // a fixed non-symmetric start breaks ties inside symmetric eigenspaces
    starts.push((0..n).map(|i| Rational::new(((i * 7 + 3) % 11 + 1).into(), 8.into())).collect());
    for i in 0..n {
        let mut e = vec![Rational::zero(); n];
        e[i] = Rational::one();
        starts.push(e);
    }
    starts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::rational::int;

    fn residual_sq(m: &RatMatrix, l: &Rational, v: &[Rational]) -> Rational {
        norm_sq(&m.shifted(&-l.clone()).mul_vec(v).unwrap())
    }

    #[test]
    fn eigenvalue_examples() {
        let swap = RatMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        let l = min_eigenvalue_approx(&swap, &rat(1, 4)).unwrap();
        assert!(l >= rat(-5, 4) && l <= rat(-3, 4));
        let l = min_eigenvalue_approx(&RatMatrix::identity(2), &rat(1, 10)).unwrap();
        assert!(l >= rat(9, 10) && l <= rat(11, 10));
        let d = RatMatrix::diagonal(&[int(2), int(5)]);
        let l = min_eigenvalue_approx(&d, &rat(1, 10)).unwrap();
        assert!(l >= rat(19, 10) && l <= rat(21, 10));
    }

    #[test]
    fn eigenvector_examples() {
        let v = approx_eigenvector(&RatMatrix::identity(2), &int(1), &rat(1, 2)).unwrap();
        assert!(residual_sq(&RatMatrix::identity(2), &int(1), &v).is_zero());

        let swap = RatMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        let v = approx_eigenvector(&swap, &int(-1), &rat(1, 2)).unwrap();
        assert!(residual_sq(&swap, &int(-1), &v).is_zero());
        assert_eq!(v[0], -v[1].clone());

        let d = RatMatrix::diagonal(&[int(3), int(5)]);
        let l = int(3) + rat(1, 100);
        let v = approx_eigenvector(&d, &l, &rat(1, 2)).unwrap();
        assert!(residual_sq(&d, &l, &v) < rat(1, 16));
        assert!(v[1].abs() < v[0].abs());
    }

    #[test]
    fn bad_estimate_is_reported() {
        let d = RatMatrix::diagonal(&[int(0), int(10)]);
        assert!(approx_eigenvector(&d, &int(5), &rat(1, 2)).is_err());
    }
}
