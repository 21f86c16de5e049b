mod common;

use common::{del_iter, dist, tri_iter, Dense};
use isosym::classify::{minimal_order, pareto_frontier, OrderKind};
use isosym::drazin::{core_nilpotent, drazin_inverse};
use isosym::elementary::{compose_mn, compose_scale, delta_power, delta_scale, triangle_power, triangle_scale, ComposeOrder, Pair};
use isosym::generators::{jordan_block, random_selfadjoint, random_unitary, theorem3_instance, Family, GenSpec, Theorem3Options};
use isosym::harness::{Suite, SuiteConfig};
use isosym::rng::Rng;
use isosym::{c, json, CMatrix, ToleranceContext};
use num_complex::Complex64;
use proptest::prelude::*;

const TOL: ToleranceContext = ToleranceContext { atol: 1e-12, rtol: 1e-9 };
const AGREE: f64 = 1e-10;

fn matrix(dim: usize) -> impl Strategy<Value = CMatrix> {
    prop::collection::vec((-1.5f64..1.5, -1.5f64..1.5), dim * dim)
        .prop_map(move |v| CMatrix::from_vec(dim, v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect()).unwrap())
}

fn matrices<const N: usize>() -> impl Strategy<Value = [CMatrix; N]> {
    (1usize..=5).prop_flat_map(|d| prop::array::uniform(matrix(d)).prop_map(|a: [CMatrix; N]| a))
}

/// `c₀I + c₁P + c₂P²`.
fn poly(p: &CMatrix, coeffs: (f64, f64, f64)) -> CMatrix {
    let id = CMatrix::identity(p.dim());
    &(&id.scale_real(coeffs.0) + &p.scale_real(coeffs.1)) + &(p * p).scale_real(coeffs.2)
}

fn coeffs() -> impl Strategy<Value = (f64, f64, f64)> {
    (-1.0f64..1.0, -1.0f64..1.0, -0.5f64..0.5)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn floats_round_trip_bit_exact(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
        let s = json::to_string(&x).unwrap();
        let back: f64 = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(back.to_bits(), x.to_bits());
    }

    #[test]
    fn matrices_round_trip_bit_exact([a] in matrices::<1>()) {
        let back = CMatrix::from_json_str(&json::to_string(&a).unwrap()).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn transforms_match_iterated_steps([b, a, x] in matrices::<3>(), k in 0usize..5) {
        let (db, da, dx) = (Dense::from_cm(&b), Dense::from_cm(&a), Dense::from_cm(&x));
        let p = Pair::new(&b, &a);
        let t = triangle_power(&b, &a, &x, k).unwrap();
        prop_assert!(dist(&t, &tri_iter(&db, &da, &dx, k)) <= AGREE * triangle_scale(p, &x, k).unwrap().max(1.0));
        let d = delta_power(&b, &a, &x, k).unwrap();
        prop_assert!(dist(&d, &del_iter(&db, &da, &dx, k)) <= AGREE * delta_scale(p, &x, k).unwrap().max(1.0));
    }

    #[test]
    fn one_more_order_is_one_more_step([b, a, x] in matrices::<3>(), k in 0usize..4) {
        let p = Pair::new(&b, &a);
        let step = triangle_power(&b, &a, &triangle_power(&b, &a, &x, k).unwrap(), 1).unwrap();
        let next = triangle_power(&b, &a, &x, k + 1).unwrap();
        prop_assert!((&step - &next).fro_norm() <= AGREE * triangle_scale(p, &x, k + 1).unwrap().max(1.0));
        let step = delta_power(&b, &a, &delta_power(&b, &a, &x, k).unwrap(), 1).unwrap();
        let next = delta_power(&b, &a, &x, k + 1).unwrap();
        prop_assert!((&step - &next).fro_norm() <= AGREE * delta_scale(p, &x, k + 1).unwrap().max(1.0));
    }

    #[test]
    fn transforms_are_linear_in_x([b, a, x, y] in matrices::<4>(), k in 1usize..4, s in -2.0f64..2.0) {
        let p = Pair::new(&b, &a);
        let lhs = triangle_power(&b, &a, &(&x + &y.scale_real(s)), k).unwrap();
        let rhs = &triangle_power(&b, &a, &x, k).unwrap() + &triangle_power(&b, &a, &y, k).unwrap().scale_real(s);
        let scale = triangle_scale(p, &x, k).unwrap() + s.abs() * triangle_scale(p, &y, k).unwrap();
        prop_assert!((&lhs - &rhs).fro_norm() <= AGREE * scale.max(1.0));
    }

    #[test]
    fn adjoint_swaps_the_pair([b, a, x] in matrices::<3>(), k in 0usize..4) {
        // Δ^k_{B,A}(X)* = Δ^k_{A*,B*}(X*),  δ^k_{B,A}(X)* = (−1)^k δ^k_{A*,B*}(X*)
        let (aa, ba, xa) = (a.adjoint(), b.adjoint(), x.adjoint());
        let p = Pair::new(&b, &a);
        let lhs = triangle_power(&b, &a, &x, k).unwrap().adjoint();
        let rhs = triangle_power(&aa, &ba, &xa, k).unwrap();
        prop_assert!((&lhs - &rhs).fro_norm() <= AGREE * triangle_scale(p, &x, k).unwrap().max(1.0));
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let lhs = delta_power(&b, &a, &x, k).unwrap().adjoint();
        let rhs = delta_power(&aa, &ba, &xa, k).unwrap().scale_real(sign);
        prop_assert!((&lhs - &rhs).fro_norm() <= AGREE * delta_scale(p, &x, k).unwrap().max(1.0));
    }

    #[test]
    fn compose_orders_agree_on_commuting_pairs(
        [p, q, x] in matrices::<3>(),
        cs in prop::array::uniform4(coeffs()),
        m in 0usize..4,
        n in 0usize..4,
    ) {
        // B1, B2 polynomials in P and A1, A2 polynomials in Q: every step commutes
        let (b1, b2, a1, a2) = (poly(&p, cs[0]), poly(&p, cs[1]), poly(&q, cs[2]), poly(&q, cs[3]));
        let (o, i) = (Pair::new(&b1, &a1), Pair::new(&b2, &a2));
        let scale = compose_scale(o, i, &x, m, n).unwrap().max(1.0);
        let base = compose_mn(o, i, &x, m, n, ComposeOrder::TriangleFirstOutside).unwrap();
        for order in [ComposeOrder::DeltaFirstOutside, ComposeOrder::DoubleSum] {
            let v = compose_mn(o, i, &x, m, n, order).unwrap();
            prop_assert!((&v - &base).fro_norm() <= AGREE * scale);
        }
    }

    #[test]
    fn unitaries_are_isometries_and_hermitians_symmetries(seed in any::<u64>(), dim in 1usize..7) {
        let mut rng = Rng::new(seed);
        let u = random_unitary(&mut rng, dim);
        let h = random_selfadjoint(&mut rng, dim);
        let i = CMatrix::identity(dim);
        prop_assert_eq!(minimal_order(OrderKind::Triangle, &u.adjoint(), &u, &i, 3, &TOL).unwrap().order, Some(1));
        prop_assert_eq!(minimal_order(OrderKind::Delta, &h.adjoint(), &h, &i, 3, &TOL).unwrap().order, Some(1));
    }

    #[test]
    fn drazin_axioms_on_generated_instances(seed in any::<u64>(), dim in 2usize..9, strict in any::<bool>()) {
        let o = Theorem3Options { strict: strict && dim >= 3, ..Theorem3Options::default() };
        let inst = theorem3_instance(seed, dim, &o).unwrap();
        let dd = core_nilpotent(&inst.a, &TOL).unwrap();
        prop_assert_eq!(dd.p, inst.p);
        prop_assert_eq!(dd.core_dim, inst.core_dim);
        prop_assert!(dd.diagnostics.all_pass(), "{:?}", dd.diagnostics);
        let (a, ad) = (&inst.a, &dd.td);
        let scale = a.spectral_norm().max(1.0).powi(inst.p as i32 + 1) * ad.spectral_norm().max(1.0).powi(2);
        prop_assert!((&(ad * a) - &(a * ad)).fro_norm() <= TOL.threshold(scale));
        prop_assert!((&(&(ad * a) * ad) - ad).fro_norm() <= TOL.threshold(scale));
        let ap = a.pow(inst.p);
        prop_assert!((&(&(&ap * a) * ad) - &ap).fro_norm() <= TOL.threshold(scale));
    }

    #[test]
    fn drazin_of_invertible_is_inverse([a] in matrices::<1>(), shift in 2.0f64..4.0) {
        let a = &a + &CMatrix::identity(a.dim()).scale_real(shift * a.dim() as f64);
        let inv = a.inverse().unwrap();
        let ad = drazin_inverse(&a, &TOL).unwrap();
        prop_assert!((&ad - &inv).fro_norm() <= 1e-9 * inv.fro_norm());
    }

    #[test]
    fn jordan_blocks_have_odd_minimal_orders(k in 1usize..5, lambda in -2.0f64..2.0, theta in 0.0f64..6.28) {
        let i = CMatrix::identity(k);
        let j = jordan_block(c(lambda, 0.0), k);
        let found = minimal_order(OrderKind::Delta, &j.adjoint(), &j, &i, 10, &TOL).unwrap().order;
        prop_assert_eq!(found, Some(2 * k - 1));
        let u = jordan_block(c(theta.cos(), theta.sin()), k);
        let found = minimal_order(OrderKind::Triangle, &u.adjoint(), &u, &i, 10, &TOL).unwrap().order;
        prop_assert_eq!(found, Some(2 * k - 1));
    }

    #[test]
    fn pareto_frontier_is_the_minimal_set(cells in prop::collection::vec((1usize..8, 1usize..8), 0..20)) {
        let front = pareto_frontier(&cells);
        for &[m, n] in &front {
            prop_assert!(cells.contains(&(m, n)));
            prop_assert!(!cells.iter().any(|&(a, b)| (a, b) != (m, n) && a <= m && b <= n));
        }
        for &(m, n) in &cells {
            prop_assert!(front.iter().any(|&[a, b]| a <= m && b <= n));
        }
    }

    #[test]
    fn configs_round_trip(seed in any::<u64>(), dim in 1usize..9, n in 1u32..5, seeds in 1u64..50, orders in 1usize..63) {
        let spec = GenSpec::new(Family::Mr, seed, dim).with_param("n", n as f64);
        let back: GenSpec = serde_json::from_str(&json::to_string(&spec).unwrap()).unwrap();
        prop_assert_eq!(back, spec);
        let cfg = SuiteConfig { suites: vec![Suite::Thm2, Suite::Lemmas], seeds, dims: vec![dim], orders, tol: TOL };
        let back: SuiteConfig = serde_json::from_str(&json::to_string(&cfg).unwrap()).unwrap();
        prop_assert_eq!(back, cfg);
    }
}
