//! Checks shared by the property tests and the acceptance suite.
//!
//! Each check returns the worst residual it saw, or an error message naming
//! the first offending case.

#![allow(dead_code)]

use polyquad::chebyshev::{
    box_rule, cheb_values, normalization, primitive_basis_eval, primitive_eval, MultiIndexSet,
};
use polyquad::geometry::{
    affine_map, bounding_box, divergence_volume, triangulate_face, BoundingBox,
};
use polyquad::moments::polyhedron_moments;
use polyquad::oracle::{box_monomial_integral, convex_tet_oracle, union_monomial_integral};
use polyquad::{build_rule, shapes, Polyhedron, QuadratureRule, RuleCache, Vec3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Check = Result<f64, String>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn monomial(p: &[f64; 3], e: [usize; 3]) -> f64 {
    p[0].powi(e[0] as i32) * p[1].powi(e[1] as i32) * p[2].powi(e[2] as i32)
}

/// Exact `int x^a y^b z^c` over a built-in shape: box union when there is one,
/// centroid tetrahedra otherwise.
pub fn monomial_reference(name: &str, p: &Polyhedron, e: [usize; 3]) -> f64 {
    match shapes::box_union(name) {
        Some(u) => union_monomial_integral(&u, e[0], e[1], e[2]),
        None => convex_tet_oracle(p, e[0], e[1], e[2]).expect("convex built-in"),
    }
}

/// Largest `|monomial|` over the box.
pub fn max_on_box(b: &BoundingBox, e: [usize; 3]) -> f64 {
    (0..3)
        .map(|d| b.lo[d].abs().max(b.hi[d].abs()).powi(e[d] as i32))
        .product()
}

/// Worst monomial error of `rule`, scaled by `vol * max_B |monomial|`.
pub fn monomial_error(name: &str, p: &Polyhedron, rule: &QuadratureRule) -> f64 {
    let b = bounding_box(p).unwrap();
    let vol = divergence_volume(p).unwrap();
    MultiIndexSet::new(rule.degree)
        .iter()
        .map(|&e| {
            let q = rule.integrate(|x| monomial(x, e));
            let exact = monomial_reference(name, p, e);
            (q - exact).abs() / (vol * max_on_box(&b, e))
        })
        .fold(0.0, f64::max)
}

pub fn named_builtins() -> Vec<(&'static str, Polyhedron)> {
    shapes::SHAPE_NAMES
        .iter()
        .map(|&n| (n, shapes::by_name(n).unwrap()))
        .collect()
}

fn fail(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Err(msg())
    } else {
        Ok(())
    }
}

pub fn closure_identity(p: &Polyhedron) -> Check {
    let sum: Vec3 = p.faces.iter().map(|f| f.vector_area()).sum();
    let r = sum.norm() / p.surface_area();
    fail(r > 1e-12, || format!("{}: closure residual {r:e}", p.label))?;
    Ok(r)
}

pub fn triangulation_partition(p: &Polyhedron) -> Check {
    let mut worst: f64 = 0.0;
    for (f, face) in p.faces.iter().enumerate() {
        let tri = triangulate_face(p, f).map_err(|e| format!("{}: {e}", p.label))?;
        let mut total = 0.0;
        for t in &tri.triangles {
            let [a, b, c] = t.map(|i| p.vertices[i]);
            let n = (b - a).cross(&(c - a));
            fail(n.dot(&face.unit_normal) <= 0.0, || {
                format!(
                    "{} face {f}: triangle against the face orientation",
                    p.label
                )
            })?;
            total += 0.5 * n.norm();
        }
        let r = (total - face.area).abs() / face.area;
        fail(r > 1e-12, || {
            format!("{} face {f}: area residual {r:e}", p.label)
        })?;
        worst = worst.max(r);
    }
    Ok(worst)
}

pub fn affine_round_trip(p: &Polyhedron, seed: u64) -> Check {
    let b = bounding_box(p).unwrap();
    let map = affine_map(&b);
    let mut rng = rng(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let q = Vec3::new(
            rng.gen_range(b.lo[0]..=b.hi[0]),
            rng.gen_range(b.lo[1]..=b.hi[1]),
            rng.gen_range(b.lo[2]..=b.hi[2]),
        );
        let r = (map.inverse(&map.forward(&q)) - q).norm() / b.diameter();
        fail(r > 1e-14, || {
            format!("{}: round trip {r:e} at {q:?}", p.label)
        })?;
        worst = worst.max(r);
    }
    Ok(worst)
}

pub fn recurrence_vs_cosine(n: usize, seed: u64) -> Check {
    let mut rng = rng(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let theta: f64 = rng.gen_range(0.0..=std::f64::consts::PI);
        let t = cheb_values(2 * n + 2, theta.cos()).map_err(|e| e.to_string())?;
        for (k, v) in t.iter().enumerate() {
            let r = (v - (k as f64 * theta).cos()).abs();
            fail(r > 1e-12, || format!("T_{k} at theta {theta}: {r:e}"))?;
            worst = worst.max(r);
        }
    }
    Ok(worst)
}

/// Central differences of the x-primitive against the basis function.
pub fn primitive_derivative(n: usize, seed: u64) -> Check {
    let h = 1e-6;
    let mut rng = rng(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let p: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-0.99..=0.99));
        for &t in MultiIndexSet::new(n).iter() {
            let c = normalization(t);
            let up = primitive_basis_eval(t, c, [p[0] + h, p[1], p[2]]).unwrap();
            let down = primitive_basis_eval(t, c, [p[0] - h, p[1], p[2]]).unwrap();
            let exact = polyquad::chebyshev::basis_eval(t, p).unwrap();
            let r = ((up - down) / (2.0 * h) - exact).abs();
            fail(r > 1e-5, || format!("{t:?} at {p:?}: {r:e}"))?;
            worst = worst.max(r);
        }
    }
    Ok(worst)
}

pub fn nodes_inside(n: usize) -> Check {
    let rule = box_rule(n);
    let inside = rule.nodes.iter().all(|q| q.iter().all(|c| c.abs() < 1.0));
    fail(!inside, || format!("n = {n}: node on or outside the cube"))?;
    Ok(0.0)
}

pub fn index_bijection(n: usize) -> Check {
    let set = MultiIndexSet::new(n);
    for (j, &t) in set.iter().enumerate() {
        fail(set.index_of(t) != Some(j), || {
            format!("{t:?} does not map back to {j}")
        })?;
    }
    Ok(0.0)
}

/// Moments of a box inside a larger reference box against products of 1D integrals.
pub fn box_moment_oracle(
    lo: [f64; 3],
    hi: [f64; 3],
    frame: ([f64; 3], [f64; 3]),
    n: usize,
) -> Check {
    let p = shapes::axis_box(lo, hi);
    let map = affine_map(&BoundingBox {
        lo: frame.0,
        hi: frame.1,
    });
    let m = polyhedron_moments(&p, &map, n).map_err(|e| e.to_string())?;
    let (rlo, rhi) = (map.forward(&Vec3::from(lo)), map.forward(&Vec3::from(hi)));
    let mut worst: f64 = 0.0;
    for (&t, v) in MultiIndexSet::new(n).iter().zip(&m.values) {
        let mut expected = normalization(t);
        for d in 0..3 {
            expected *=
                primitive_eval(t[d], rhi[d]).unwrap() - primitive_eval(t[d], rlo[d]).unwrap();
        }
        let r = (v - expected).abs();
        fail(r > 1e-13, || format!("{t:?}: {v} vs {expected}"))?;
        worst = worst.max(r);
    }
    Ok(worst)
}

/// L-prism moments against the sum of its two boxes, in the L-prism frame.
pub fn l_prism_additivity(n: usize) -> Check {
    let l = shapes::l_prism();
    let map = affine_map(&bounding_box(&l).unwrap());
    let whole = polyhedron_moments(&l, &map, n).unwrap();
    let mut parts = vec![0.0; whole.values.len()];
    for b in shapes::l_prism_boxes().boxes {
        let m = polyhedron_moments(&shapes::axis_box(b.lo, b.hi), &map, n).unwrap();
        for (s, v) in parts.iter_mut().zip(&m.values) {
            *s += b.sign * v;
        }
    }
    let r = whole
        .values
        .iter()
        .zip(&parts)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    fail(r > 1e-12, || format!("n = {n}: additivity residual {r:e}"))?;
    Ok(r)
}

/// Adding a constant to the primitive changes a moment by
/// `constant * sum_f n1_f area_f`, which vanishes on a closed surface.
pub fn primitive_constant_shift(p: &Polyhedron, constant: f64) -> Check {
    let map = affine_map(&bounding_box(p).unwrap());
    let reference = p.map_vertices(|v| map.forward(v));
    let shift: f64 = reference
        .faces
        .iter()
        .map(|f| constant * f.unit_normal.x * f.area)
        .sum();
    let worst = MultiIndexSet::new(6)
        .iter()
        .map(|&t| (normalization(t) * shift).abs())
        .fold(0.0, f64::max);
    fail(worst > 1e-13, || {
        format!("{}: shift changes a moment by {worst:e}", p.label)
    })?;
    Ok(worst)
}

/// Scaling by `s` and shifting by `c` multiplies integrals as the change of
/// variables predicts.
pub fn affine_covariance(p: &Polyhedron, n: usize, s: f64, c: Vec3) -> Check {
    let cache = RuleCache::new();
    let original = build_rule(p, n, &cache).map_err(|e| e.to_string())?;
    let moved = build_rule(&p.scaled_translated(s, c), n, &cache).map_err(|e| e.to_string())?;
    let b = bounding_box(p).unwrap();
    let vol = divergence_volume(p).unwrap();
    let mut worst: f64 = 0.0;
    for &e in MultiIndexSet::new(n).iter() {
        // int_{sP + c} f(y) dy = s^3 int_P f(s x + c) dx
        let direct = moved.integrate(|y| monomial(y, e));
        let pulled = s.powi(3)
            * original
                .integrate(|x| monomial(&[s * x[0] + c.x, s * x[1] + c.y, s * x[2] + c.z], e));
        let scale: f64 = s.powi(3)
            * vol
            * (0..3)
                .map(|d| {
                    (s * b.lo[d] + c[d])
                        .abs()
                        .max((s * b.hi[d] + c[d]).abs())
                        .powi(e[d] as i32)
                })
                .product::<f64>();
        let r = (direct - pulled).abs() / scale;
        fail(r > 1e-11, || format!("{} {e:?}: {r:e}", p.label))?;
        worst = worst.max(r);
    }
    Ok(worst)
}

/// Rules built through a shared cache equal rules built with fresh caches, bit for bit.
pub fn cache_transparency(a: &Polyhedron, b: &Polyhedron, n: usize) -> Check {
    let shared = RuleCache::new();
    let ra = build_rule(a, n, &shared).unwrap();
    let rb = build_rule(b, n, &shared).unwrap();
    let fa = build_rule(a, n, &RuleCache::new()).unwrap();
    let fb = build_rule(b, n, &RuleCache::new()).unwrap();
    fail(ra != fa || rb != fb, || {
        format!("n = {n}: shared cache changed a rule")
    })?;
    Ok(0.0)
}

/// Collapsed triangle rule of order `k` on a random triangle in the positive
/// quadrant, all monomials of degree up to `2k - 2`, against the barycentric
/// expansion (all of its terms are positive there, so it has no cancellation).
pub fn triangle_monomials(k: usize, seed: u64) -> Check {
    let mut rng = rng(seed);
    let tri: [[f64; 2]; 3] =
        std::array::from_fn(|_| [rng.gen_range(0.1..2.0), rng.gen_range(0.1..2.0)]);
    let rule = polyquad::quadrature::triangle_rule(k, tri).map_err(|e| e.to_string())?;
    let [a, b, c] = tri;
    let area = 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])).abs();
    let mut worst: f64 = 0.0;
    for deg in 0..=2 * k - 2 {
        for p in 0..=deg {
            let q = deg - p;
            let numeric = rule.integrate(|x, y| x.powi(p as i32) * y.powi(q as i32));
            let exact = area * barycentric_monomial(tri, p, q);
            let r = (numeric - exact).abs() / exact;
            fail(r > 1e-13, || format!("k = {k}, x^{p} y^{q}: {r:e}"))?;
            worst = worst.max(r);
        }
    }
    Ok(worst)
}

/// Mean of `x^p y^q` over a triangle, from
/// `int l0^i l1^j l2^k = 2 area i! j! k! / (i + j + k + 2)!`.
fn barycentric_monomial(v: [[f64; 2]; 3], p: usize, q: usize) -> f64 {
    let fact = |n: usize| (1..=n).map(|k| k as f64).product::<f64>();
    // coefficients of x^p and y^q as polynomials in the barycentric coordinates
    let expand = |d: usize, e: usize| {
        let mut terms = Vec::new();
        for i in 0..=e {
            for j in 0..=e - i {
                let k = e - i - j;
                let c = fact(e) / (fact(i) * fact(j) * fact(k))
                    * v[0][d].powi(i as i32)
                    * v[1][d].powi(j as i32)
                    * v[2][d].powi(k as i32);
                terms.push((c, [i, j, k]));
            }
        }
        terms
    };
    let (xs, ys) = (expand(0, p), expand(1, q));
    let mut total = 0.0;
    for (cx, ex) in &xs {
        for (cy, ey) in &ys {
            let e: [usize; 3] = std::array::from_fn(|m| ex[m] + ey[m]);
            total += cx * cy * 2.0 * fact(e[0]) * fact(e[1]) * fact(e[2]) / fact(p + q + 2);
        }
    }
    total
}

/// Holds a box with `lo < hi` inside the frame `[-3, 3]^3`.
pub fn random_box(rng: &mut ChaCha8Rng) -> ([f64; 3], [f64; 3]) {
    let mut lo = [0.0; 3];
    let mut hi = [0.0; 3];
    for d in 0..3 {
        let a: f64 = rng.gen_range(-3.0..2.5);
        lo[d] = a;
        hi[d] = rng.gen_range(a + 0.1..=3.0);
    }
    (lo, hi)
}

pub fn box_integral(lo: [f64; 3], hi: [f64; 3], e: [usize; 3]) -> f64 {
    box_monomial_integral(lo, hi, e[0], e[1], e[2])
}
