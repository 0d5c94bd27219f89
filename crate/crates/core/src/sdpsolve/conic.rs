//! Conic-form SDPs, conversion to inequality form, weak separation and the
//! full-dimensional enlargement.

use num_traits::{One, Signed, Zero};

use super::pencil::{AffineBlock, InequalitySDP};
use crate::error::{contract, Result};
use crate::exactlin::rational::{int, norm_floor_one, sqrt_upper};
use crate::exactlin::{approx_eigenvector, min_eigenvalue_approx, psd_certificate, RatMatrix, Rational};

/// `max ⟨C, X⟩` over `{X ⪰ 0 | ⟨A_i, X⟩ ≤ b_i}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConicSDP {
    a: Vec<RatMatrix>,
    b: Vec<Rational>,
    c: RatMatrix,
}

impl ConicSDP {
    pub fn new(a: Vec<RatMatrix>, b: Vec<Rational>, c: RatMatrix) -> Result<Self> {
        if a.len() != b.len() {
            return contract("one right-hand side per constraint matrix");
        }
        let n = c.rows();
        if !c.is_square() || !c.is_symmetric() {
            return contract("objective matrix must be square and symmetric");
        }
        if a.iter().any(|m| m.rows() != n || m.cols() != n || !m.is_symmetric()) {
            return contract("constraint matrices must be symmetric and match the objective");
        }
        Ok(ConicSDP { a, b, c })
    }

    pub fn dim(&self) -> usize {
        self.c.rows()
    }

    pub fn a(&self) -> &[RatMatrix] {
        &self.a
    }

    pub fn b(&self) -> &[Rational] {
        &self.b
    }

    pub fn c(&self) -> &RatMatrix {
        &self.c
    }

    /// Exact membership test.
    pub fn contains(&self, x: &RatMatrix) -> Result<bool> {
        for (a, b) in self.a.iter().zip(&self.b) {
            if a.inner(x)? > *b {
                return Ok(false);
            }
        }
        Ok(psd_certificate(x)?.is_psd())
    }
}

/// Upper-triangle coordinates `(i, j)`, `i ≤ j`, in row-major order.
pub fn triangle_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect()
}

pub fn matrix_to_vector(x: &RatMatrix) -> Vec<Rational> {
    triangle_pairs(x.rows()).into_iter().map(|(i, j)| x[(i, j)].clone()).collect()
}

pub fn vector_to_matrix(n: usize, v: &[Rational]) -> RatMatrix {
    let mut x = RatMatrix::zeros(n, n);
    for (k, (i, j)) in triangle_pairs(n).into_iter().enumerate() {
        x[(i, j)] = v[k].clone();
        x[(j, i)] = v[k].clone();
    }
    x
}

/// Variables are the upper-triangle entries of `X`; the pencil is
/// `diag(X, b_1 − ⟨A_1, X⟩, …)`.
pub fn conic_to_inequality(sdp: &ConicSDP) -> InequalitySDP {
    let n = sdp.dim();
    let pairs = triangle_pairs(n);
    // ⟨M, X⟩ = Σ_i M_ii x_ii + Σ_{i<j} 2 M_ij x_ij
    let weight = |m: &RatMatrix, (i, j): (usize, usize)| {
        if i == j {
            m[(i, i)].clone()
        } else {
            &m[(i, j)] * int(2)
        }
    };
    let mut blocks = Vec::with_capacity(sdp.a.len() + 1);
    let mut x_block = AffineBlock::new(RatMatrix::zeros(n, n));
    for (k, &(i, j)) in pairs.iter().enumerate() {
        x_block.add_sym(k, i, j, Rational::one());
    }
    blocks.push(x_block);
    for (a, b) in sdp.a.iter().zip(&sdp.b) {
        let mut row = AffineBlock::new(RatMatrix::diagonal(std::slice::from_ref(b)));
        for (k, &p) in pairs.iter().enumerate() {
            let w = weight(a, p);
            if !w.is_zero() {
                row.add_sym(k, 0, 0, -w);
            }
        }
        blocks.push(row);
    }
    let c = pairs.iter().map(|&p| weight(&sdp.c, p)).collect();
    InequalitySDP::new(pairs.len(), blocks, c).expect("conic data is symmetric")
}

/// A conic SDP whose optimum plus `offset` equals the inequality SDP's
/// optimum, valid when the inequality region lies in `[−R, R]^m`.
///
/// The conic variable is `blockdiag(W, diag(p))` with `W = Z + Σ (p_v − R) Y_v`
/// enforced entrywise, `p = x + R` and `p_v ≤ 2R`; all other entries are zero.
#[derive(Debug, Clone)]
pub struct ConicForm {
    pub sdp: ConicSDP,
    pub offset: Rational,
    pub radius: Rational,
}

impl ConicForm {
    /// Recovers `x` from a conic point.
    pub fn extract(&self, x: &RatMatrix, num_vars: usize) -> Vec<Rational> {
        let d = x.rows() - num_vars;
        (0..num_vars).map(|v| &x[(d + v, d + v)] - &self.radius).collect()
    }
}

pub fn inequality_to_conic(sdp: &InequalitySDP, radius: &Rational) -> ConicForm {
    let (z, ys) = sdp.to_dense();
    let m = sdp.num_vars();
    let d = z.rows();
    let n = d + m;
    let unit = |i: usize, j: usize| {
        let mut e = RatMatrix::zeros(n, n);
        if i == j {
            e[(i, i)] = Rational::one();
        } else {
            e[(i, j)] = Rational::one() / int(2);
            e[(j, i)] = Rational::one() / int(2);
        }
        e
    };
    let mut a = Vec::new();
    let mut b = Vec::new();
    let mut equal = |mat: RatMatrix, rhs: Rational| {
        a.push(mat.scale(&-Rational::one()));
        b.push(-rhs.clone());
        a.push(mat);
        b.push(rhs);
    };
    // W_ij − Σ_v Y_v,ij p_v = Z_ij − R Σ_v Y_v,ij
    for (i, j) in triangle_pairs(d) {
        let mut mat = unit(i, j);
        let mut rhs = z[(i, j)].clone();
        for (v, y) in ys.iter().enumerate() {
            if !y[(i, j)].is_zero() {
                let coupling = unit(d + v, d + v).scale(&-y[(i, j)].clone());
                mat = mat.add(&coupling).expect("same size");
                rhs -= radius * &y[(i, j)];
            }
        }
        equal(mat, rhs);
    }
    for (i, j) in triangle_pairs(n) {
        let crosses = i < d && j >= d;
        let p_block_off = i >= d && i != j;
        if crosses || p_block_off {
            equal(unit(i, j), Rational::zero());
        }
    }
    for v in 0..m {
        a.push(unit(d + v, d + v));
        b.push(radius * int(2));
    }
    let mut c = RatMatrix::zeros(n, n);
    let mut offset = Rational::zero();
    for (v, cv) in sdp.c().iter().enumerate() {
        c[(d + v, d + v)] = cv.clone();
        offset -= cv * radius;
    }
    ConicForm { sdp: ConicSDP::new(a, b, c).expect("constructed symmetric"), offset, radius: radius.clone() }
}

/// Outcome of a weak separation query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeakSeparation {
    Accept,
    /// `⟨S, Y⟩ + δ > ⟨S, X⟩` for every feasible `X`, and `‖S‖_∞ = 1`.
    Separator(RatMatrix),
}

fn normalise_inf(s: RatMatrix) -> RatMatrix {
    let m = s.max_abs();
    if m.is_zero() {
        let mut e = RatMatrix::zeros(s.rows(), s.cols());
        if s.rows() > 0 {
            e[(0, 0)] = Rational::one();
        }
        return e;
    }
    s.scale(&m.recip())
}

/// Rows violated by more than `δ` are summed into one separator. Otherwise
/// the minimum eigenvalue is estimated at an internal tolerance
/// `δ_i = δ / (8n)`; a negative direction `v` yields `S = −vvᵀ / max v_i²`.
pub fn weak_separation(sdp: &ConicSDP, y: &RatMatrix, delta: &Rational) -> Result<WeakSeparation> {
    if !delta.is_positive() {
        return contract("delta must be positive");
    }
    let n = sdp.dim();
    if y.rows() != n || !y.is_symmetric() {
        return contract("query matrix must be symmetric and match the SDP");
    }
    let mut aggregate: Option<RatMatrix> = None;
    for (a, b) in sdp.a.iter().zip(&sdp.b) {
        if a.inner(y)? > b + delta {
            aggregate = Some(match aggregate {
                None => a.clone(),
                Some(s) => s.add(a)?,
            });
        }
    }
    if let Some(s) = aggregate {
        return Ok(WeakSeparation::Separator(normalise_inf(s)));
    }
    if n == 0 {
        return Ok(WeakSeparation::Accept);
    }
    let inner_delta = delta / int(8 * n as i64);
    let lambda = min_eigenvalue_approx(y, &(&inner_delta / int(4)))?;
    if lambda >= &inner_delta / int(2) {
        return Ok(WeakSeparation::Accept);
    }
    let v = approx_eigenvector(y, &lambda, &inner_delta)?;
    let scale = v.iter().map(|x| x * x).max().expect("nonempty");
    Ok(WeakSeparation::Separator(RatMatrix::outer(&v).scale(&-scale.recip())))
}

/// An enlarged conic SDP in the shifted variable `X' = X + shift·I`.
#[derive(Debug, Clone)]
pub struct FullDimensional {
    pub sdp: ConicSDP,
    pub shift: Rational,
    /// Per-row relaxation added to `b_i`.
    pub relax: Vec<Rational>,
}

impl FullDimensional {
    pub fn to_original(&self, x_shifted: &RatMatrix) -> RatMatrix {
        x_shifted.shifted(&-self.shift.clone())
    }

    pub fn from_original(&self, x: &RatMatrix) -> RatMatrix {
        x.shifted(&self.shift)
    }

    /// `⟨C, X⟩ = ⟨C, X'⟩ − shift·tr(C)`.
    pub fn objective_offset(&self) -> Rational {
        -(&self.shift * self.sdp.c.trace())
    }
}

/// Relaxes `X ⪰ 0` to `X + ε/(√n·max{1,‖C‖})·I ⪰ 0` and each row to
/// `b_i + ε/(‖A_i‖·max{1,‖C‖})`. Norm square roots are rounded up, so the
/// rational relaxation never exceeds the nominal one.
pub fn make_full_dimensional(sdp: &ConicSDP, eps: &Rational) -> Result<FullDimensional> {
    if !eps.is_positive() {
        return contract("epsilon must be positive");
    }
    let n = sdp.dim();
    let c_norm = norm_floor_one(sdp.c.entries());
    let shift = eps / (sqrt_upper(&int(n.max(1) as i64), 32) * &c_norm);
    let mut a = Vec::with_capacity(sdp.a.len());
    let mut b = Vec::with_capacity(sdp.b.len());
    let mut relax = Vec::with_capacity(sdp.b.len());
    for (ai, bi) in sdp.a.iter().zip(&sdp.b) {
        let a_norm = sqrt_upper(&ai.frobenius_sq(), 32);
        let r = if a_norm.is_zero() { Rational::zero() } else { eps / (a_norm * &c_norm) };
        // ⟨A, X' − shift·I⟩ ≤ b + r
        b.push(bi + &r + &shift * ai.trace());
        a.push(ai.clone());
        relax.push(r);
    }
    Ok(FullDimensional { sdp: ConicSDP::new(a, b, sdp.c.clone())?, shift, relax })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::rational::rat;

    #[test]
    fn aggregated_row_separator() {
        let sdp = ConicSDP::new(vec![RatMatrix::identity(2)], vec![int(1)], RatMatrix::zeros(2, 2)).unwrap();
        let y = RatMatrix::identity(2).scale(&int(2));
        match weak_separation(&sdp, &y, &rat(1, 10)).unwrap() {
            WeakSeparation::Separator(s) => {
                assert_eq!(s, RatMatrix::identity(2));
                assert_eq!(s.inner(&y).unwrap(), int(4));
            }
            other => panic!("expected a separator, got {other:?}"),
        }
    }

    #[test]
    fn identity_accepted() {
        let sdp = ConicSDP::new(vec![], vec![], RatMatrix::zeros(2, 2)).unwrap();
        for d in [rat(1, 2), rat(1, 1000)] {
            assert_eq!(weak_separation(&sdp, &RatMatrix::identity(2), &d).unwrap(), WeakSeparation::Accept);
        }
    }

    #[test]
    fn swap_matrix_separated() {
        let sdp = ConicSDP::new(vec![], vec![], RatMatrix::zeros(2, 2)).unwrap();
        let y = RatMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        let delta = rat(1, 2);
        let WeakSeparation::Separator(s) = weak_separation(&sdp, &y, &delta).unwrap() else {
            panic!("swap matrix is indefinite");
        };
        assert_eq!(s.max_abs(), int(1));
        // S ≈ −(1,−1)(1,−1)ᵀ, so ⟨S, Y⟩ ≈ 2 while ⟨S, X⟩ ≤ 0 on the PSD cone
        assert!(s[(0, 1)].is_positive() && s[(0, 0)].is_negative());
        let sy = s.inner(&y).unwrap();
        assert!(sy > int(1));
        for x in [
            RatMatrix::identity(2),
            RatMatrix::from_i64(&[&[1, 1], &[1, 1]]),
            RatMatrix::from_i64(&[&[1, -1], &[-1, 1]]),
        ] {
            assert!(&sy + &delta > s.inner(&x).unwrap());
        }
    }

    #[test]
    fn scalar_row_becomes_slack_block() {
        let sdp = ConicSDP::new(vec![RatMatrix::identity(1)], vec![int(1)], RatMatrix::zeros(1, 1)).unwrap();
        let ineq = conic_to_inequality(&sdp);
        assert_eq!(ineq.num_vars(), 1);
        assert_eq!(ineq.eval(&[rat(1, 4)])[1], RatMatrix::diagonal(&[rat(3, 4)]));
        let empty = ConicSDP::new(vec![], vec![], RatMatrix::zeros(2, 2)).unwrap();
        let ineq = conic_to_inequality(&empty);
        assert_eq!(ineq.blocks().len(), 1);
        assert!(ineq.blocks()[0].constant().entries().iter().all(Zero::is_zero));
    }

    #[test]
    fn inverse_conversion_preserves_points() {
        // [[1, x], [x, 1]] ⪰ 0 inside [−2, 2]
        let sdp = InequalitySDP::from_dense(
            RatMatrix::identity(2),
            &[RatMatrix::from_i64(&[&[0, 1], &[1, 0]])],
            vec![int(1)],
        )
        .unwrap();
        let form = inequality_to_conic(&sdp, &int(2));
        for (x, inside) in [(rat(1, 2), true), (int(1), true), (rat(-3, 4), true), (rat(3, 2), false)] {
            let w = &sdp.eval(std::slice::from_ref(&x))[0];
            let mut big = RatMatrix::zeros(3, 3);
            for i in 0..2 {
                for j in 0..2 {
                    big[(i, j)] = w[(i, j)].clone();
                }
            }
            big[(2, 2)] = &x + int(2);
            assert_eq!(form.sdp.contains(&big).unwrap(), inside, "x = {x}");
            assert_eq!(form.extract(&big, 1), vec![x.clone()]);
            assert_eq!(form.sdp.c().inner(&big).unwrap() + &form.offset, x);
        }
    }

    #[test]
    fn full_dimensional_examples() {
        let open = ConicSDP::new(vec![], vec![], RatMatrix::zeros(1, 1)).unwrap();
        let fd = make_full_dimensional(&open, &int(1)).unwrap();
        assert_eq!(fd.shift, int(1));
        assert!(fd.sdp.contains(&fd.from_original(&RatMatrix::diagonal(&[int(-1)]))).unwrap());
        assert!(!fd.sdp.contains(&fd.from_original(&RatMatrix::diagonal(&[rat(-11, 10)]))).unwrap());

        let sdp = ConicSDP::new(vec![RatMatrix::identity(2)], vec![int(1)], RatMatrix::identity(2)).unwrap();
        let fd = make_full_dimensional(&sdp, &rat(1, 10)).unwrap();
        let x = RatMatrix::diagonal(&[rat(1, 2), rat(1, 2)]);
        assert!(sdp.contains(&x).unwrap());
        assert!(fd.sdp.contains(&fd.from_original(&x)).unwrap());

        // {x ⪰ 0, x ≤ −1}: empty, and nonempty once shift + relaxation ≥ 1
        let empty = ConicSDP::new(vec![RatMatrix::identity(1)], vec![int(-1)], RatMatrix::identity(1)).unwrap();
        let zero = RatMatrix::zeros(1, 1);
        assert!(!empty.contains(&zero).unwrap());
        let small = make_full_dimensional(&empty, &rat(1, 4)).unwrap();
        assert!(!small.sdp.contains(&small.from_original(&zero)).unwrap());
        let big = make_full_dimensional(&empty, &int(1)).unwrap();
        assert_eq!(&big.shift + &big.relax[0], int(2));
        assert!(big.sdp.contains(&big.from_original(&RatMatrix::diagonal(&[int(-1)]))).unwrap());
    }
}
