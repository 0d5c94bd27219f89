//! Exact positive-semidefiniteness decisions.
//!
//! Symmetric pivoted LDLᵀ elimination, run fraction-free on the integer
//! matrix `L·M` (`L` the common denominator). Every eliminated pivot is
//! strictly positive; the transformation rows are tracked so a failure
//! (negative diagonal, or a zero diagonal with a nonzero coupling) is turned
//! into an explicit vector `v` with `vᵀMv < 0`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::RatMatrix;
use super::rational::Rational;
use crate::error::{contract, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PsdCertificate {
    Psd,
    /// `vᵀMv < 0`, checked exactly before being returned.
    Witness(Vec<Rational>),
}

impl PsdCertificate {
    pub fn is_psd(&self) -> bool {
        matches!(self, PsdCertificate::Psd)
    }
}

pub fn psd_certificate(m: &RatMatrix) -> Result<PsdCertificate> {
    if !m.is_symmetric() {
        return contract("psd_certificate needs a symmetric matrix");
    }
    let n = m.rows();
    let a = integer_scaled(m);
    Ok(match psd_witness_int(&a, n) {
        None => PsdCertificate::Psd,
        Some(v) => {
            let v: Vec<Rational> = v.into_iter().map(Rational::from_integer).collect();
            debug_assert!(m.quad_form(&v).expect("square").is_negative());
            PsdCertificate::Witness(v)
        }
    })
}

/// Row-major entries of `L·M` for the least common denominator `L`.
pub fn integer_scaled(m: &RatMatrix) -> Vec<BigInt> {
    let l = m.entries().iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    m.entries().iter().map(|q| q.numer() * (&l / q.denom())).collect()
}

/// Fraction-free symmetric elimination on an integer matrix (row-major,
/// `n × n`). Returns `None` when the matrix is PSD and otherwise an integer
/// `v` with `vᵀAv < 0`.
///
/// Pivots are the largest positive remaining diagonal (lowest index on
/// ties). With Bareiss updates every intermediate entry is a minor of the
/// augmented matrix `[A | I]`, so all divisions are exact. The augmented
/// part tracks, for each remaining index, the combination of original
/// coordinates that realises its Schur-complement row.
pub fn psd_witness_int(a: &[BigInt], n: usize) -> Option<Vec<BigInt>> {
    assert_eq!(a.len(), n * n, "matrix must be n x n");
    let mut a = a.to_vec();
    let mut basis: Vec<Vec<BigInt>> = (0..n).map(|j| (0..n).map(|i| BigInt::from((i == j) as u8)).collect()).collect();
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut prev = BigInt::one();
    let witness = |v: Vec<BigInt>, a0: &[BigInt]| {
        debug_assert!(quad_form_int(a0, n, &v).is_negative());
        Some(v)
    };
    let original = a.clone();
    while !remaining.is_empty() {
        if let Some(&i) = remaining.iter().find(|&&i| a[i * n + i].is_negative()) {
            return witness(basis[i].clone(), &original);
        }
        let mut pivot: Option<usize> = None;
        for &i in &remaining {
            if a[i * n + i].is_positive() && pivot.is_none_or(|p| a[i * n + i] > a[p * n + p]) {
                pivot = Some(i);
            }
        }
        let Some(p) = pivot else {
            // every remaining diagonal is zero: any coupling is indefinite
            for (x, &i) in remaining.iter().enumerate() {
                for &j in &remaining[x + 1..] {
                    if !a[i * n + j].is_zero() {
                        let v = if a[i * n + j].is_positive() {
                            basis[i].iter().zip(&basis[j]).map(|(u, w)| u - w).collect()
                        } else {
                            basis[i].iter().zip(&basis[j]).map(|(u, w)| u + w).collect()
                        };
                        return witness(v, &original);
                    }
                }
            }
            return None;
        };
        remaining.retain(|&i| i != p);
        let app = a[p * n + p].clone();
        let bp = basis[p].clone();
        for &i in &remaining {
            let aip = a[i * n + p].clone();
            for (b, q) in basis[i].iter_mut().zip(&bp) {
                *b = (&app * &*b - &aip * q) / &prev;
            }
        }
        for (x, &i) in remaining.iter().enumerate() {
            for &j in &remaining[x..] {
                let v = (&app * &a[i * n + j] - &a[i * n + p] * &a[p * n + j]) / &prev;
                a[j * n + i] = v.clone();
                a[i * n + j] = v;
            }
        }
        for &i in &remaining {
            a[i * n + p] = BigInt::zero();
            a[p * n + i] = BigInt::zero();
        }
        prev = app;
    }
    None
}

fn quad_form_int(a: &[BigInt], n: usize, v: &[BigInt]) -> BigInt {
    let mut total = BigInt::zero();
    for i in 0..n {
        if v[i].is_zero() {
            continue;
        }
        let row: BigInt = (0..n).map(|j| &a[i * n + j] * &v[j]).sum();
        total += &v[i] * row;
    }
    total
}

/// `true` iff `M` is positive definite (every leading pivot strictly positive).
pub fn is_positive_definite(m: &RatMatrix) -> Result<bool> {
    if !m.is_symmetric() {
        return contract("is_positive_definite needs a symmetric matrix");
    }
    let n = m.rows();
    let mut a = integer_scaled(m);
    let mut prev = BigInt::one();
    for k in 0..n {
        let akk = a[k * n + k].clone();
        if !akk.is_positive() {
            return Ok(false);
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i * n + j] = (&akk * &a[i * n + j] - &a[i * n + k] * &a[k * n + j]) / &prev;
            }
        }
        prev = akk;
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::rational::rat;

    #[test]
    fn identity_is_psd() {
        assert_eq!(psd_certificate(&RatMatrix::identity(2)).unwrap(), PsdCertificate::Psd);
    }

    #[test]
    fn swap_matrix_has_witness() {
        let m = RatMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        match psd_certificate(&m).unwrap() {
            PsdCertificate::Witness(v) => {
                assert_eq!(v, vec![rat(1, 1), rat(-1, 1)]);
                assert_eq!(m.quad_form(&v).unwrap(), rat(-2, 1));
            }
            PsdCertificate::Psd => panic!("indefinite"),
        }
    }

    #[test]
    fn half_matrix_is_psd() {
        // leading minors 1 and 1/4
        let m = RatMatrix::from_rows(vec![vec![rat(1, 1), rat(1, 2)], vec![rat(1, 2), rat(1, 2)]]).unwrap();
        assert!(psd_certificate(&m).unwrap().is_psd());
    }

    #[test]
    fn singular_psd_and_hidden_negative() {
        let m = RatMatrix::from_i64(&[&[1, 1, 1], &[1, 1, 1], &[1, 1, 1]]);
        assert!(psd_certificate(&m).unwrap().is_psd());
        let bad = RatMatrix::from_i64(&[&[1, 2, 0], &[2, 1, 0], &[0, 0, 5]]);
        assert!(!psd_certificate(&bad).unwrap().is_psd());
    }

    #[test]
    fn asymmetric_rejected() {
        let m = RatMatrix::from_i64(&[&[1, 2], &[0, 1]]);
        assert!(psd_certificate(&m).is_err());
    }

    #[test]
    fn definiteness() {
        assert!(is_positive_definite(&RatMatrix::identity(3)).unwrap());
        assert!(!is_positive_definite(&RatMatrix::from_i64(&[&[1, 1], &[1, 1]])).unwrap());
    }
}
