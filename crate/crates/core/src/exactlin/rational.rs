//! Scalar helpers over exact rationals.
//!
//! `Rational` is `num_rational::BigRational`, which is always kept in lowest
//! terms with a positive denominator. The helpers below add the few
//! operations the solvers need on top of field arithmetic: dyadic rounding,
//! rational square-root brackets and nearest-integer rounding.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

/// `n / d` as an exact rational. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `2^exp` for any sign of `exp`.
pub fn pow2(exp: i64) -> Rational {
    if exp >= 0 {
        Rational::from_integer(BigInt::one() << (exp as usize))
    } else {
        Rational::new(BigInt::one(), BigInt::one() << ((-exp) as usize))
    }
}

/// Nearest multiple of `2^-bits` (ties rounded up).
pub fn round_dyadic(q: &Rational, bits: u32) -> Rational {
    let scale = BigInt::one() << bits as usize;
    let scaled = q * Rational::from_integer(scale.clone());
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let n = (scaled + half).floor().to_integer();
    Rational::new(n, scale)
}

/// Floor of `log2 |q|` for nonzero `q`.
pub fn floor_log2(q: &Rational) -> i64 {
    assert!(!q.is_zero(), "log2 of zero");
    let n = q.numer().abs();
    let d = q.denom().clone();
    let mut e = n.bits() as i64 - d.bits() as i64;
    // n/d in [2^(e-1), 2^(e+1)); settle by exact comparison
    let a = Rational::new(n, d);
    while pow2(e) > a {
        e -= 1;
    }
    while pow2(e + 1) <= a {
        e += 1;
    }
    e
}

/// Rational bracket `lo <= sqrt(q) <= hi` with `hi - lo <= 2^-bits`.
pub fn sqrt_bracket(q: &Rational, bits: u32) -> (Rational, Rational) {
    assert!(!q.is_negative(), "sqrt of negative rational");
    if q.is_zero() {
        return (Rational::zero(), Rational::zero());
    }
    // sqrt(q) = sqrt(q * 4^bits) / 2^bits, and floor(sqrt(floor(x))) = floor(sqrt(x))
    let scale = BigInt::one() << (2 * bits as usize);
    let scaled = (q * Rational::from_integer(scale)).floor().to_integer();
    let root = scaled.sqrt();
    let denom = BigInt::one() << bits as usize;
    let lo = Rational::new(root.clone(), denom.clone());
    let hi = if &lo * &lo == *q { lo.clone() } else { Rational::new(root + 1, denom) };
    (lo, hi)
}

/// A rational upper bound on `sqrt(q)`, within `2^-bits` of the true value.
pub fn sqrt_upper(q: &Rational, bits: u32) -> Rational {
    sqrt_bracket(q, bits).1
}

/// Euclidean norm of `v`, bounded from above by a rational.
pub fn norm_upper(v: &[Rational]) -> Rational {
    let sq: Rational = v.iter().map(|x| x * x).sum();
    sqrt_upper(&sq, 32)
}

/// `max{1, ||c||}` with `||c||` replaced by a rational upper bound.
pub fn norm_floor_one(c: &[Rational]) -> Rational {
    let n = norm_upper(c);
    if n < Rational::one() {
        Rational::one()
    } else {
        n
    }
}

/// Nearest integer; `None` when `q` is exactly half-integral.
pub fn nearest_integer(q: &Rational) -> Option<BigInt> {
    let two = BigInt::from(2);
    let doubled = q * Rational::from_integer(two.clone());
    if doubled.is_integer() && doubled.to_integer().is_odd() {
        return None;
    }
    let half = Rational::new(BigInt::one(), two);
    Some((q + half).floor().to_integer())
}

/// Lossy conversion for display and logging only.
pub fn to_f64(q: &Rational) -> f64 {
    let (n, d) = (q.numer(), q.denom());
    let shift = (n.bits().max(d.bits()) as i64 - 60).max(0) as usize;
    let nf = big_to_f64(&(n >> shift));
    let df = big_to_f64(&(d >> shift));
    if df == 0.0 {
        return if n.sign() == Sign::Minus { f64::NEG_INFINITY } else { f64::INFINITY };
    }
    nf / df
}

fn big_to_f64(n: &BigInt) -> f64 {
    let (sign, digits) = n.to_u64_digits();
    let mut acc = 0.0f64;
    for d in digits.iter().rev() {
        acc = acc * 18446744073709551616.0 + *d as f64;
    }
    if sign == Sign::Minus {
        -acc
    } else {
        acc
    }
}

/// Parse `p`, `p/q` or a finite decimal like `-1.25`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(Rational::new(p, q));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let neg = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), frac);
        let n: BigInt = digits.parse().ok()?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let q = Rational::new(n, d);
        return Some(if neg { -q } else { q });
    }
    let n: BigInt = s.parse().ok()?;
    Some(Rational::from_integer(n))
}

/// Canonical text form: `p` for integers, `p/q` otherwise.
pub fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn abs(q: &Rational) -> Rational {
    q.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dyadic_rounding_hits_grid() {
        let q = rat(1, 3);
        let r = round_dyadic(&q, 10);
        assert!((&r * pow2(10)).is_integer());
        assert!((r - q).abs() <= pow2(-11));
    }

    #[test]
    fn sqrt_bracket_contains_root() {
        for (n, d) in [(2, 1), (1, 3), (49, 100), (9, 4), (0, 1)] {
            let q = rat(n, d);
            let (lo, hi) = sqrt_bracket(&q, 20);
            assert!(&lo * &lo <= q && q <= &hi * &hi, "{n}/{d}");
            assert!(&hi - &lo <= pow2(-20));
        }
        let (lo, hi) = sqrt_bracket(&rat(9, 4), 5);
        assert_eq!(lo, rat(3, 2));
        assert_eq!(hi, rat(3, 2));
    }

    #[test]
    fn nearest_integer_rejects_half() {
        assert_eq!(nearest_integer(&rat(9, 5)), Some(BigInt::from(2)));
        assert_eq!(nearest_integer(&rat(-1, 5)), Some(BigInt::from(0)));
        assert_eq!(nearest_integer(&rat(5, 2)), None);
        assert_eq!(nearest_integer(&rat(-7, 3)), Some(BigInt::from(-2)));
    }

    #[test]
    fn floor_log2_exact() {
        assert_eq!(floor_log2(&rat(1, 1)), 0);
        assert_eq!(floor_log2(&rat(3, 1)), 1);
        assert_eq!(floor_log2(&rat(1, 3)), -2);
        assert_eq!(floor_log2(&rat(-8, 1)), 3);
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3/6"), Some(rat(1, 2)));
        assert_eq!(parse_rational("-1.25"), Some(rat(-5, 4)));
        assert_eq!(parse_rational("7"), Some(rat(7, 1)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(fmt_rational(&rat(-2, 4)), "-1/2");
    }
}
