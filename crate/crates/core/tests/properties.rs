//! Property tests for the invariants of every module.

mod common;

use lasserre_vcsp::cli::formats;
use lasserre_vcsp::encode::{blp_value, induced_point, to_ilp, LpBuilder};
use lasserre_vcsp::exactlin::rational::{int, rat};
use lasserre_vcsp::exactlin::{dot, norm_sq, psd_certificate, LpOutcome, PsdCertificate, RatMatrix, Rational};
use lasserre_vcsp::lasserre::{lift, rank_one_lift};
use lasserre_vcsp::reductions::{
    brute_lin, brute_sat, threelin_to_threesat, threesat_to_maxcut, LinSystem, WeightedGraph,
};
use lasserre_vcsp::sdpsolve::{almost_fold, fold_psd_check, fold_vector, unfold, Ellipsoid, IndexMap, MatrixIndexMap};
use lasserre_vcsp::vcsp::{
    brute_force_opt, evaluate, Assignment, Constraint, Domain, TupleIter, ValuedFunction, VcspInstance,
};
use proptest::prelude::*;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn symmetric(n: usize, range: i64) -> impl Strategy<Value = RatMatrix> {
    proptest::collection::vec(-range..=range, n * (n + 1) / 2).prop_map(move |v| {
        let mut m = RatMatrix::zeros(n, n);
        let mut k = 0;
        for i in 0..n {
            for j in i..n {
                m[(i, j)] = int(v[k]);
                m[(j, i)] = int(v[k]);
                k += 1;
            }
        }
        m
    })
}

/// `GᵀG` for a random integer `G`: always PSD, often singular.
fn gram(n: usize) -> impl Strategy<Value = RatMatrix> {
    (1..=n, proptest::collection::vec(-2i64..=2, n * n)).prop_map(move |(rank, g)| {
        let g: Vec<&[i64]> = g.chunks(n).take(rank).collect();
        let g = RatMatrix::from_i64(&g);
        g.transpose().mul(&g).unwrap()
    })
}

fn vcsp() -> impl Strategy<Value = VcspInstance> {
    (1usize..=3, 2usize..=3, 0usize..=3).prop_flat_map(|(vars, d, cons)| {
        let tables = proptest::collection::vec(proptest::collection::vec(0u64..=3, d * d), 1..=2);
        let scopes = proptest::collection::vec((0..vars, 0..vars, 0usize..2, 1u64..=3), cons);
        (Just(vars), Just(d), tables, scopes).prop_map(|(vars, d, tables, scopes)| {
            let functions: Vec<ValuedFunction> = tables
                .into_iter()
                .enumerate()
                .map(|(k, t)| ValuedFunction::new(format!("f{k}"), 2, d, t).unwrap())
                .collect();
            let k = functions.len();
            let constraints = scopes
                .into_iter()
                .map(|(u, v, f, w)| Constraint { scope: vec![u, v], function: f % k, weight: w })
                .collect();
            VcspInstance::new(Domain::range(d), (0..vars).map(|i| format!("v{i}")).collect(), functions, constraints)
                .unwrap()
        })
    })
}

/// Relabel classes in order of first appearance, giving a surjection onto `0..k`.
fn surjection(raw: &[usize]) -> Vec<usize> {
    let mut seen: Vec<usize> = vec![];
    raw.iter()
        .map(|s| match seen.iter().position(|t| t == s) {
            Some(i) => i,
            None => {
                seen.push(*s);
                seen.len() - 1
            }
        })
        .collect()
}

fn lin_system() -> impl Strategy<Value = LinSystem> {
    (3usize..=5).prop_flat_map(|n| {
        let eq = (proptest::sample::subsequence((0..n).collect::<Vec<_>>(), 3), any::<bool>());
        proptest::collection::vec(eq, 0..=3).prop_map(move |eqs| {
            let (mut e0, mut e1) = (vec![], vec![]);
            for (t, odd) in eqs {
                let t = [t[0], t[1], t[2]];
                if odd {
                    e1.push(t)
                } else {
                    e0.push(t)
                }
            }
            LinSystem::new(n, e0, e1).unwrap()
        })
    })
}

/// Vertex enumeration: the LP maximum over `{Ax ≥ b}` (bounded by box rows)
/// is attained at a basic solution of some `n` tight rows.
fn vertex_enumeration(a: &RatMatrix, b: &[Rational], c: &[Rational]) -> Option<Rational> {
    let (m, n) = (a.rows(), a.cols());
    let mut best: Option<Rational> = None;
    let mut chosen = vec![];
    fn choose(start: usize, m: usize, n: usize, chosen: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if chosen.len() == n {
            f(chosen);
            return;
        }
        for u in start..m {
            chosen.push(u);
            choose(u + 1, m, n, chosen, f);
            chosen.pop();
        }
    }
    choose(0, m, n, &mut chosen, &mut |rows| {
        let sub = RatMatrix::from_rows(rows.iter().map(|&u| a.row(u).to_vec()).collect()).unwrap();
        let det = sub.determinant().unwrap();
        if det == int(0) {
            return;
        }
        // Cramer's rule
        let x: Vec<Rational> = (0..n)
            .map(|j| {
                let mut s = sub.clone();
                for (k, &u) in rows.iter().enumerate() {
                    s[(k, j)] = b[u].clone();
                }
                s.determinant().unwrap() / &det
            })
            .collect();
        if (0..m).all(|u| dot(a.row(u), &x) >= b[u]) {
            let v = dot(c, &x);
            if best.as_ref().is_none_or(|bv| v > *bv) {
                best = Some(v);
            }
        }
    });
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn psd_certificate_matches_minors(m in (1usize..=4).prop_flat_map(|n| symmetric(n, 3))) {
        let cert = psd_certificate(&m).unwrap();
        prop_assert_eq!(cert.is_psd(), common::psd_by_minors(&m));
        if let PsdCertificate::Witness(v) = cert {
            prop_assert!(m.quad_form(&v).unwrap() < int(0));
        }
    }

    #[test]
    fn gram_matrices_are_psd(m in (1usize..=5).prop_flat_map(gram)) {
        prop_assert!(psd_certificate(&m).unwrap().is_psd());
    }

    #[test]
    fn simplex_matches_vertex_enumeration(
        n in 1usize..=3,
        rows in proptest::collection::vec((proptest::collection::vec(-3i64..=3, 3), -3i64..=3), 0..=3),
        c in proptest::collection::vec(-4i64..=4, 3),
    ) {
        let mut b = LpBuilder::new((0..n).map(|i| format!("x{i}")).collect());
        b.box_rows();
        for (coefs, rhs) in &rows {
            b.geq(coefs[..n].iter().enumerate().map(|(v, &a)| (v, int(a))).collect(), int(*rhs));
        }
        b.objective(c[..n].iter().enumerate().map(|(v, &a)| (v, int(a))).collect());
        let lp = b.build().unwrap();
        let expected = vertex_enumeration(lp.a(), lp.b(), lp.c());
        match lp.lp_relaxation().unwrap() {
            LpOutcome::Optimal { x, value } => {
                prop_assert!(lp.satisfies_rows(&x));
                prop_assert_eq!(Some(value), expected);
            }
            LpOutcome::Infeasible => prop_assert_eq!(expected, None),
            LpOutcome::Unbounded => prop_assert!(false, "box rows bound every LP"),
        }
    }

    #[test]
    fn induced_points_are_feasible_and_exact(inst in vcsp()) {
        let lp = to_ilp(&inst);
        let d = inst.domain().size();
        for h in TupleIter::new(inst.variables().len(), d) {
            let h = Assignment(h);
            let x = induced_point(&inst, &h);
            prop_assert!(lp.satisfies_rows(&x));
            prop_assert_eq!(lp.objective(&x), int(evaluate(&inst, &h).unwrap() as i64));
        }
        let (opt, _) = brute_force_opt(&inst, 1 << 12).unwrap();
        prop_assert!(blp_value(&inst).unwrap() >= int(opt as i64));
    }

    #[test]
    fn scaling_weights_scales_values(inst in vcsp(), k in 1u64..=4) {
        let scaled = inst.scaled(k);
        prop_assert_eq!(blp_value(&scaled).unwrap(), blp_value(&inst).unwrap() * int(k as i64));
        let (a, _) = brute_force_opt(&inst, 1 << 12).unwrap();
        let (b, _) = brute_force_opt(&scaled, 1 << 12).unwrap();
        prop_assert_eq!(b, k * a);
    }

    #[test]
    fn folding_invariants(
        sigma in proptest::collection::vec(0usize..3, 1..=6),
        x in proptest::collection::vec(small_rational(), 6),
        weights in proptest::collection::vec(small_rational(), 3),
    ) {
        let sigma = surjection(&sigma);
        let n = sigma.len();
        let map = IndexMap::new(sigma.clone()).unwrap();
        let x = &x[..n];
        let folded = fold_vector(x, &map);
        prop_assert!(norm_sq(&folded) <= norm_sq(x));
        let back = unfold(&folded, &map);
        prop_assert_eq!(fold_vector(&back, &map), folded.clone());
        // c constant on classes agrees with sigma
        let c: Vec<Rational> = sigma.iter().map(|&k| weights[k].clone()).collect();
        prop_assert!(map.agrees(&c));
        prop_assert_eq!(dot(&c, &back), dot(&c, x));
        prop_assert_eq!(dot(&almost_fold(&c, &map), &folded), dot(&c, x));
    }

    #[test]
    fn folded_gram_matrices_stay_psd(
        m in (2usize..=4).prop_flat_map(gram),
        tau in proptest::collection::vec(0usize..2, 4),
    ) {
        let tau = surjection(&tau[..m.rows()]);
        let map = MatrixIndexMap::from_tau(IndexMap::new(tau).unwrap());
        let folded = fold_psd_check(&m, &map).unwrap();
        prop_assert!(psd_certificate(&folded).unwrap().is_psd());
    }

    #[test]
    fn pencil_is_affine(
        x in proptest::collection::vec(small_rational(), 7),
        y in proptest::collection::vec(small_rational(), 7),
    ) {
        let lp = common::lp(3, &[(&[-1, -1, -1], -1)], &[2, 3, 4]);
        let sdp = lift(&lp, 1).unwrap().into_sdp();
        prop_assert_eq!(sdp.num_vars(), 7);
        let zero = vec![int(0); 7];
        let sum: Vec<Rational> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
        let (bz, bx, by, bs) = (sdp.eval(&zero), sdp.eval(&x), sdp.eval(&y), sdp.eval(&sum));
        for k in 0..bz.len() {
            let lhs = bs[k].add(&bz[k]).unwrap();
            let rhs = bx[k].add(&by[k]).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn rank_one_lifts_are_feasible(
        rows in proptest::collection::vec((proptest::collection::vec(-2i64..=2, 3), -2i64..=1), 0..=2),
        t in 1usize..=2,
    ) {
        let rows: Vec<(&[i64], i64)> = rows.iter().map(|(a, b)| (a.as_slice(), *b)).collect();
        let lp = common::lp(3, &rows, &[1, 1, 1]);
        let pencil = lift(&lp, t).unwrap();
        for x in lp.integer_points().unwrap() {
            let y = rank_one_lift(&x, t).unwrap();
            for block in pencil.sdp().eval(y.coordinates()) {
                prop_assert!(psd_certificate(&block).unwrap().is_psd());
            }
        }
    }

    #[test]
    fn ellipsoid_keeps_feasible_points(
        cuts in proptest::collection::vec(proptest::collection::vec(-3i64..=3, 3), 1..=12),
        witness in proptest::collection::vec(-4i64..=4, 3),
    ) {
        // the witness lies in every kept half-space by construction
        let w: Vec<Rational> = witness.iter().map(|&a| rat(a, 8)).collect();
        let mut e = Ellipsoid::ball(3, &int(2), 64);
        prop_assert!(e.contains(&w).unwrap());
        for g in cuts {
            let mut g: Vec<Rational> = g.iter().map(|&a| int(a)).collect();
            if g.iter().all(|a| *a == int(0)) {
                continue;
            }
            let center = e.center();
            if dot(&g, &w) > dot(&g, &center) {
                g = g.iter().map(|a| -a).collect();
            }
            e.cut(&g).unwrap();
            prop_assert!(e.contains(&w).unwrap());
            prop_assert!(e.shape_is_positive_definite().unwrap());
        }
        prop_assert!(e.log_volume() < 3.0 * 2f64.ln() + 1e-9);
    }

    #[test]
    fn reduction_chain_preserves_satisfiability(l in lin_system()) {
        let sat = brute_lin(&l).unwrap();
        let f = threelin_to_threesat(&l).unwrap();
        prop_assert_eq!(brute_sat(&f).unwrap(), sat);
        let (g, k) = threesat_to_maxcut(&f);
        if g.num_vertices() <= 20 {
            prop_assert_eq!(g.brute_max_cut().unwrap() >= k, sat);
        }
    }

    #[test]
    fn files_round_trip(inst in vcsp(), l in lin_system(), edges in proptest::collection::vec((0usize..5, 0usize..5, 1u64..9), 0..6)) {
        prop_assert_eq!(formats::parse_vcsp(&formats::write_vcsp(&inst)).unwrap(), inst.clone());
        let lp = to_ilp(&inst);
        prop_assert_eq!(formats::parse_lp(&formats::write_lp(&lp)).unwrap(), lp);
        prop_assert_eq!(formats::parse_3lin(&formats::write_3lin(&l)).unwrap(), l.clone());
        let f = threelin_to_threesat(&l).unwrap();
        prop_assert_eq!(formats::parse_cnf(&formats::write_cnf(&f)).unwrap(), f);
        let edges: Vec<_> = edges.into_iter().filter(|(u, v, _)| u != v).collect();
        let g = formats::GraphFile { graph: WeightedGraph::new(5, edges).unwrap(), threshold: None };
        prop_assert_eq!(formats::parse_graph(&formats::write_graph(&g)).unwrap(), g);
    }
}
