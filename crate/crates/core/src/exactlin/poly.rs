//! Univariate polynomials over the rationals, the characteristic polynomial
//! of a square matrix, and Sturm root counting.

use num_traits::{One, Signed, Zero};

use super::matrix::RatMatrix;
use super::rational::Rational;
use crate::error::{contract, Result};

/// Coefficients in ascending degree; the leading coefficient is nonzero and
/// the zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Polynomial { coeffs: vec![Rational::one()] }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from_integer((k as i64).into()))
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = Rational::zero();
        Self::new((0..n).map(|k| self.coeffs.get(k).unwrap_or(&z) + other.coeffs.get(k).unwrap_or(&z)).collect())
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// `self · (x − a)`.
    pub fn mul_linear(&self, a: &Rational) -> Self {
        let mut out = vec![Rational::zero(); self.coeffs.len() + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            out[k + 1] += c;
            out[k] -= c * a;
        }
        Self::new(out)
    }

    /// Remainder of Euclidean division by a nonzero divisor.
    pub fn rem(&self, divisor: &Self) -> Self {
        let d = divisor.degree().expect("division by zero polynomial");
        let lead = divisor.leading().unwrap().clone();
        let mut r = self.coeffs.clone();
        while r.len() > d && !r.is_empty() {
            let top = r.len() - 1;
            let f = &r[top] / &lead;
            let shift = top - d;
            for (k, c) in divisor.coeffs.iter().enumerate() {
                r[shift + k] -= &f * c;
            }
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        Self::new(r)
    }

    pub fn div_exact(&self, divisor: &Self) -> Self {
        let d = divisor.degree().expect("division by zero polynomial");
        let lead = divisor.leading().unwrap().clone();
        let mut r = self.coeffs.clone();
        if r.len() <= d {
            return Self::zero();
        }
        let mut q = vec![Rational::zero(); r.len() - d];
        while r.len() > d {
            let top = r.len() - 1;
            let f = &r[top] / &lead;
            let shift = top - d;
            for (k, c) in divisor.coeffs.iter().enumerate() {
                r[shift + k] -= &f * c;
            }
            q[shift] = f;
            r.pop();
        }
        Self::new(q)
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => self.scale(&(Rational::one() / l)),
            None => Self::zero(),
        }
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }
}

/// `det(xI − M)`, computed exactly through a similarity reduction to upper
/// Hessenberg form followed by the Hessenberg determinant recurrence.
pub fn char_poly(m: &RatMatrix) -> Result<Polynomial> {
    if !m.is_square() {
        return contract("char_poly of a non-square matrix");
    }
    let n = m.rows();
    let mut h = m.clone();
    for col in 0..n.saturating_sub(2) {
        let piv_row = col + 1;
        let Some(i) = (piv_row..n).find(|&i| !h[(i, col)].is_zero()) else { continue };
        if i != piv_row {
            h.swap_rows(i, piv_row);
            for r in 0..n {
                let (a, b) = (h[(r, i)].clone(), h[(r, piv_row)].clone());
                h[(r, i)] = b;
                h[(r, piv_row)] = a;
            }
        }
        let pv = h[(piv_row, col)].clone();
        for i in piv_row + 1..n {
            if h[(i, col)].is_zero() {
                continue;
            }
            let u = &h[(i, col)] / &pv;
            for j in 0..n {
                let t = &u * &h[(piv_row, j)];
                h[(i, j)] -= t;
            }
            for r in 0..n {
                let t = &u * &h[(r, i)];
                h[(r, piv_row)] += t;
            }
        }
    }
    // p[k] = char poly of the leading k×k block
    let mut p: Vec<Polynomial> = vec![Polynomial::one()];
    for k in 0..n {
        let mut next = p[k].mul_linear(&h[(k, k)]);
        let mut prod = Rational::one();
        for i in (0..k).rev() {
            prod *= &h[(i + 1, i)];
            if prod.is_zero() {
                break;
            }
            let coef = &h[(i, k)] * &prod;
            if !coef.is_zero() {
                next = next.add(&p[i].scale(&-coef));
            }
        }
        p.push(next);
    }
    Ok(p.pop().unwrap())
}

/// Sturm chain of the square-free part of a polynomial.
#[derive(Debug, Clone)]
pub struct SturmChain {
    chain: Vec<Polynomial>,
}

impl SturmChain {
    pub fn new(p: &Polynomial) -> Self {
        assert!(!p.is_zero(), "Sturm chain of zero polynomial");
        let g = p.gcd(&p.derivative());
        let sf = if g.degree().unwrap_or(0) > 0 { p.div_exact(&g) } else { p.clone() };
        let mut chain = vec![sf.clone(), sf.derivative()];
        while !chain.last().unwrap().is_zero() {
            let k = chain.len();
            let r = chain[k - 2].rem(&chain[k - 1]);
            // positive rescaling keeps the sign pattern and tames coefficient growth
            let r = match r.leading() {
                Some(l) => r.scale(&(Rational::one() / l.abs())),
                None => r,
            };
            chain.push(r.scale(&-Rational::one()));
        }
        chain.pop();
        SturmChain { chain }
    }

    pub fn square_free(&self) -> &Polynomial {
        &self.chain[0]
    }

    /// Sign changes of the chain evaluated at `x` (zeros skipped).
    pub fn variations(&self, x: &Rational) -> usize {
        let mut count = 0;
        let mut last = 0i8;
        for p in &self.chain {
            let v = p.eval(x);
            let s = if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            };
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }

    /// Distinct roots in `(a, b]`; `a` must not be a root.
    pub fn count_roots(&self, a: &Rational, b: &Rational) -> usize {
        self.variations(a) - self.variations(b)
    }
}
