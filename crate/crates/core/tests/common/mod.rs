//! Shared fixtures: the small 0–1 corpus and independent oracles.

#![allow(dead_code)]

use lasserre_vcsp::encode::{maxcut_to_vcsp, to_ilp, LpBuilder, ZeroOneLP};
use lasserre_vcsp::exactlin::rational::int;
use lasserre_vcsp::exactlin::{psd_certificate, RatMatrix, Rational};
use lasserre_vcsp::reductions::WeightedGraph;
use lasserre_vcsp::vcsp::{Constraint, Domain, ValuedFunction, VcspInstance};

pub fn lp(names: usize, rows: &[(&[i64], i64)], objective: &[i64]) -> ZeroOneLP {
    let mut b = LpBuilder::new((0..names).map(|i| format!("x{}", i + 1)).collect());
    b.box_rows();
    for (coefs, rhs) in rows {
        b.geq(coefs.iter().enumerate().map(|(v, &a)| (v, int(a))).collect(), int(*rhs));
    }
    b.objective(objective.iter().enumerate().map(|(v, &a)| (v, int(a))).collect());
    b.build().unwrap()
}

pub fn single_edge() -> VcspInstance {
    maxcut_to_vcsp(&WeightedGraph::new(2, vec![(0, 1, 1)]).unwrap())
}

pub fn triangle() -> VcspInstance {
    maxcut_to_vcsp(&WeightedGraph::cycle(3))
}

/// One ternary-domain variable with a unary payoff.
pub fn unary_choice() -> VcspInstance {
    let f = ValuedFunction::new("pick", 1, 3, vec![0, 2, 1]).unwrap();
    VcspInstance::new(
        Domain::range(3),
        vec!["x".into()],
        vec![f],
        vec![Constraint { scope: vec![0], function: 0, weight: 1 }],
    )
    .unwrap()
}

/// Two Boolean variables: an equality payoff against a unary bias on each.
pub fn agree_with_bias() -> VcspInstance {
    let eq = ValuedFunction::from_fn("eq", 2, 2, |t| 2 * (t[0] == t[1]) as u64);
    let one = ValuedFunction::from_fn("one", 1, 2, |t| t[0] as u64);
    let zero = ValuedFunction::from_fn("zero", 1, 2, |t| 1 - t[0] as u64);
    VcspInstance::new(
        Domain::range(2),
        vec!["x".into(), "y".into()],
        vec![eq, one, zero],
        vec![
            Constraint { scope: vec![0, 1], function: 0, weight: 1 },
            Constraint { scope: vec![0], function: 1, weight: 1 },
            Constraint { scope: vec![1], function: 2, weight: 3 },
        ],
    )
    .unwrap()
}

/// The fixed corpus of 0–1 programs with at most 12 variables.
pub fn corpus() -> Vec<(&'static str, ZeroOneLP)> {
    let out = vec![
        ("box1", lp(1, &[], &[1])),
        ("cover2", lp(2, &[(&[1, 1], 1)], &[-1, -2])),
        ("pack3", lp(3, &[(&[-1, -1, -1], -1)], &[2, 3, 4])),
        ("knap3", lp(3, &[(&[-2, -3, -1], -4)], &[3, 4, 2])),
        ("exact4", lp(4, &[(&[1, 1, 1, 1], 2), (&[-1, -1, -1, -1], -2)], &[1, -1, 2, 1])),
        ("unary_choice", to_ilp(&unary_choice())),
        ("single_edge", to_ilp(&single_edge())),
        ("agree_with_bias", to_ilp(&agree_with_bias())),
    ];
    for (name, p) in &out {
        assert!(p.num_vars() <= 12, "{name} exceeds the corpus bound");
    }
    out
}

/// Independent PSD oracle: `M ⪰ 0` iff every principal minor is `≥ 0`.
pub fn psd_by_minors(m: &RatMatrix) -> bool {
    let n = m.rows();
    assert!(n <= 12, "minor enumeration is exponential");
    (1u32..1 << n).all(|mask| {
        let idx: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        m.principal(&idx).determinant().unwrap() >= Rational::from_integer(0.into())
    })
}

pub fn is_psd(m: &RatMatrix) -> bool {
    psd_certificate(m).unwrap().is_psd()
}
