mod common;

use common::*;
use polyquad::geometry::{divergence_volume, validate, CLOSURE_TOL, PLANARITY_TOL};
use polyquad::oracle::convex_tet_oracle;
use polyquad::{build_rule, shapes, RuleCache, Vec3};
use proptest::prelude::*;

#[test]
fn builtins_are_closed_and_partitioned() {
    for p in shapes::builtins()
        .iter()
        .chain([&shapes::hull760(), &shapes::u_prism()])
    {
        closure_identity(p).unwrap();
        triangulation_partition(p).unwrap();
        assert!(
            validate(p, PLANARITY_TOL, CLOSURE_TOL).passed,
            "{}",
            p.label
        );
    }
}

#[test]
fn affine_round_trip_on_builtins() {
    for (i, p) in shapes::builtins().iter().enumerate() {
        affine_round_trip(p, i as u64).unwrap();
    }
}

#[test]
fn reversal_flips_volume() {
    for p in shapes::builtins() {
        let v = polyquad::geometry::signed_divergence_volume(&p).unwrap();
        let r = polyquad::geometry::signed_divergence_volume(&p.reversed()).unwrap();
        assert!((v + r).abs() <= 1e-14 * v.abs(), "{}: {v} {r}", p.label);
    }
}

#[test]
fn basis_identities() {
    for n in 0..=20 {
        recurrence_vs_cosine(n, n as u64).unwrap();
        nodes_inside(n).unwrap();
        index_bijection(n).unwrap();
    }
    for n in 0..=10 {
        primitive_derivative(n, 100 + n as u64).unwrap();
    }
}

#[test]
fn triangle_rules_are_exact() {
    for k in 1..=8 {
        for seed in 0..5 {
            triangle_monomials(k, 10 * k as u64 + seed).unwrap();
        }
    }
}

#[test]
fn moment_identities() {
    for n in [0, 3, 8, 14, 20] {
        l_prism_additivity(n).unwrap();
    }
    for p in shapes::builtins() {
        primitive_constant_shift(&p, 7.5).unwrap();
    }
}

#[test]
fn covariance_and_cache() {
    affine_covariance(&shapes::l_prism(), 8, 2.5, Vec3::new(-1.0, 3.0, 0.5)).unwrap();
    affine_covariance(&shapes::hull20(), 6, 0.3, Vec3::new(4.0, -2.0, 1.0)).unwrap();
    cache_transparency(&shapes::l_prism(), &shapes::hull20(), 10).unwrap();
}

#[test]
fn shifted_shapes_keep_their_integrals() {
    // volume is translation invariant and scales with s^3
    let cache = RuleCache::new();
    let p = shapes::holed_prism().scaled_translated(0.5, Vec3::new(10.0, -3.0, 2.0));
    let rule = build_rule(&p, 6, &cache).unwrap();
    assert!((rule.volume_estimate - 3.0).abs() <= 1e-12 * 3.0);
    assert!((divergence_volume(&p).unwrap() - 3.0).abs() <= 1e-12 * 3.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn box_moments_match_products_of_1d_integrals(seed in any::<u64>(), n in 0usize..=12) {
        let (lo, hi) = random_box(&mut rng(seed));
        let r = box_moment_oracle(lo, hi, ([-3.0; 3], [3.0; 3]), n);
        prop_assert!(r.is_ok(), "{:?}", r);
    }

    #[test]
    fn box_rules_match_analytic_monomials(seed in any::<u64>(), n in 1usize..=10) {
        let (lo, hi) = random_box(&mut rng(seed));
        let p = shapes::axis_box(lo, hi);
        let rule = build_rule(&p, n, &RuleCache::new()).unwrap();
        let vol: f64 = (0..3).map(|d| hi[d] - lo[d]).product();
        let b = polyquad::geometry::bounding_box(&p).unwrap();
        for &e in polyquad::chebyshev::MultiIndexSet::new(n).iter() {
            let q = rule.integrate(|x| monomial(x, e));
            let exact = box_integral(lo, hi, e);
            prop_assert!((q - exact).abs() <= 1e-11 * vol * max_on_box(&b, e), "{:?}: {} vs {}", e, q, exact);
        }
    }

    #[test]
    fn affine_round_trip_random_boxes(seed in any::<u64>()) {
        let (lo, hi) = random_box(&mut rng(seed));
        let r = affine_round_trip(&shapes::axis_box(lo, hi), seed);
        prop_assert!(r.is_ok(), "{:?}", r);
    }

    #[test]
    fn random_triangles(seed in any::<u64>(), k in 1usize..=10) {
        let r = triangle_monomials(k, seed);
        prop_assert!(r.is_ok(), "{:?}", r);
    }

    #[test]
    fn scaled_tetrahedra_keep_covariance(s in 0.1f64..10.0, cx in -5.0f64..5.0, cy in -5.0f64..5.0, cz in -5.0f64..5.0) {
        let r = affine_covariance(&shapes::tetrahedron(), 5, s, Vec3::new(cx, cy, cz));
        prop_assert!(r.is_ok(), "{:?}", r);
    }

    #[test]
    fn tet_oracle_scales(s in 0.2f64..5.0, a in 0usize..4, b in 0usize..4, c in 0usize..4) {
        let t = shapes::tetrahedron().scaled_translated(s, Vec3::zeros());
        let base = convex_tet_oracle(&shapes::tetrahedron(), a, b, c).unwrap();
        let scaled = convex_tet_oracle(&t, a, b, c).unwrap();
        let factor = s.powi((a + b + c + 3) as i32);
        prop_assert!((scaled - factor * base).abs() <= 1e-12 * factor * base);
    }
}
