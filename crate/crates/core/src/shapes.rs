//! Built-in test solids.
//!
//! `cube`, `tet`, `lprism` (nonconvex), `holedprism` (through-hole, every face
//! still a simple polygon) and `hull20` (convex, 20 triangles). `hull760` is a
//! convex many-facet solid used for timing comparisons.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{Polyhedron, Vec3};
use crate::oracle::{BoxUnion, SignedBox};

pub const SHAPE_NAMES: [&str; 5] = ["cube", "tet", "lprism", "holedprism", "hull20"];
/// Seed of the point sets behind the convex hulls.
pub const HULL_SEED: u64 = 42;

pub fn by_name(name: &str) -> Result<Polyhedron> {
    match name {
        "cube" => Ok(cube()),
        "tet" => Ok(tetrahedron()),
        "lprism" => Ok(l_prism()),
        "holedprism" => Ok(holed_prism()),
        "hull20" => Ok(hull20()),
        "hull760" => Ok(hull760()),
        other => Err(Error::UnknownShape(other.to_owned())),
    }
}

/// The five built-in shapes, in [`SHAPE_NAMES`] order.
pub fn builtins() -> Vec<Polyhedron> {
    SHAPE_NAMES
        .iter()
        .map(|n| by_name(n).expect("built-in"))
        .collect()
}

/// Analytic description of a built-in shape, when it is a union of boxes.
pub fn box_union(name: &str) -> Option<BoxUnion> {
    match name {
        "cube" => Some(BoxUnion {
            boxes: vec![SignedBox {
                lo: [-1.0; 3],
                hi: [1.0; 3],
                sign: 1.0,
            }],
        }),
        "lprism" => Some(l_prism_boxes()),
        "holedprism" => Some(holed_prism_boxes()),
        _ => None,
    }
}

/// Box `[lo, hi]` with outward counter-clockwise quads.
pub fn axis_box(lo: [f64; 3], hi: [f64; 3]) -> Polyhedron {
    let rect = [
        [lo[0], lo[1]],
        [hi[0], lo[1]],
        [hi[0], hi[1]],
        [lo[0], hi[1]],
    ];
    prism(&rect, lo[2], hi[2], "box")
}

/// `[-1, 1]^3`.
pub fn cube() -> Polyhedron {
    let mut p = axis_box([-1.0; 3], [1.0; 3]);
    p.label = "cube".into();
    p
}

/// Simplex with vertices at the origin and the three unit points.
pub fn tetrahedron() -> Polyhedron {
    let v = vec![
        Vec3::new(0.0, 0.0, 0.0),
        Vec3::new(1.0, 0.0, 0.0),
        Vec3::new(0.0, 1.0, 0.0),
        Vec3::new(0.0, 0.0, 1.0),
    ];
    let f = vec![vec![0, 2, 1], vec![0, 1, 3], vec![0, 3, 2], vec![1, 2, 3]];
    Polyhedron::new(v, f, "tet").expect("static shape")
}

/// Extrudes a counter-clockwise simple polygon between `z0` and `z1`.
pub fn prism(polygon: &[[f64; 2]], z0: f64, z1: f64, label: &str) -> Polyhedron {
    let k = polygon.len();
    let mut vertices: Vec<Vec3> = polygon.iter().map(|q| Vec3::new(q[0], q[1], z0)).collect();
    vertices.extend(polygon.iter().map(|q| Vec3::new(q[0], q[1], z1)));
    let mut faces = Vec::with_capacity(k + 2);
    // bottom seen from below
    let mut bottom: Vec<usize> = (0..k).collect();
    bottom[1..].reverse();
    faces.push(bottom);
    faces.push((k..2 * k).collect());
    for i in 0..k {
        let j = (i + 1) % k;
        faces.push(vec![i, j, k + j, k + i]);
    }
    Polyhedron::new(vertices, faces, label).expect("prism indices are valid")
}

/// `([0,2] x [0,1] U [0,1] x [1,2]) x [0,1]`, volume 3.
pub fn l_prism() -> Polyhedron {
    let l = [
        [0.0, 0.0],
        [2.0, 0.0],
        [2.0, 1.0],
        [1.0, 1.0],
        [1.0, 2.0],
        [0.0, 2.0],
    ];
    prism(&l, 0.0, 1.0, "lprism")
}

pub fn l_prism_boxes() -> BoxUnion {
    BoxUnion {
        boxes: vec![
            SignedBox {
                lo: [0.0, 0.0, 0.0],
                hi: [2.0, 1.0, 1.0],
                sign: 1.0,
            },
            SignedBox {
                lo: [0.0, 1.0, 0.0],
                hi: [1.0, 2.0, 1.0],
                sign: 1.0,
            },
        ],
    }
}

/// U-shaped prism whose vertex centroid falls in the notch.
pub fn u_prism() -> Polyhedron {
    let u = [
        [0.0, 0.0],
        [3.0, 0.0],
        [3.0, 3.0],
        [2.0, 3.0],
        [2.0, 1.0],
        [1.0, 1.0],
        [1.0, 3.0],
        [0.0, 3.0],
    ];
    prism(&u, 0.0, 1.0, "uprism")
}

/// `[0,3]^3` minus the square channel `[1,2]^2 x [0,3]`, volume 24.
///
/// Top and bottom annuli are split into four trapezoids so every face is a
/// simple polygon.
pub fn holed_prism() -> Polyhedron {
    let outer = [[0.0, 0.0], [3.0, 0.0], [3.0, 3.0], [0.0, 3.0]];
    let inner = [[1.0, 1.0], [2.0, 1.0], [2.0, 2.0], [1.0, 2.0]];
    let (z0, z1) = (0.0, 3.0);
    let mut vertices = Vec::with_capacity(16);
    // outer bottom 0..4, outer top 4..8, inner bottom 8..12, inner top 12..16
    for (ring, z) in [(&outer, z0), (&outer, z1), (&inner, z0), (&inner, z1)] {
        vertices.extend(ring.iter().map(|q| Vec3::new(q[0], q[1], z)));
    }
    let (ob, ot, ib, it) = (0, 4, 8, 12);
    let mut faces = Vec::with_capacity(16);
    for i in 0..4 {
        let j = (i + 1) % 4;
        faces.push(vec![ob + i, ob + j, ot + j, ot + i]);
        // channel walls face into the hole
        faces.push(vec![ib + j, ib + i, it + i, it + j]);
        faces.push(vec![ot + i, ot + j, it + j, it + i]);
        faces.push(vec![ob + i, ib + i, ib + j, ob + j]);
    }
    Polyhedron::new(vertices, faces, "holedprism").expect("static shape")
}

pub fn holed_prism_boxes() -> BoxUnion {
    BoxUnion {
        boxes: vec![
            SignedBox {
                lo: [0.0; 3],
                hi: [3.0; 3],
                sign: 1.0,
            },
            SignedBox {
                lo: [1.0, 1.0, 0.0],
                hi: [2.0, 2.0, 3.0],
                sign: -1.0,
            },
        ],
    }
}

/// Convex hull of 12 jittered icosahedron vertices on an ellipsoid: 20 triangles.
pub fn hull20() -> Polyhedron {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let mut base = Vec::with_capacity(12);
    for s1 in [-1.0, 1.0] {
        for s2 in [-1.0, 1.0] {
            base.push(Vec3::new(0.0, s1, s2 * phi));
            base.push(Vec3::new(s1, s2 * phi, 0.0));
            base.push(Vec3::new(s2 * phi, 0.0, s1));
        }
    }
    let points = jitter_onto_ellipsoid(base, 0.15);
    let p = convex_hull(&points, "hull20");
    assert_eq!(p.faces.len(), 20, "hull20 must have 20 facets");
    p
}

/// Convex hull of 382 points on an ellipsoid: 760 triangles.
pub fn hull760() -> Polyhedron {
    let count = 382;
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    let base = (0..count)
        .map(|i| {
            let z = 1.0 - 2.0 * (i as f64 + 0.5) / count as f64;
            let r = (1.0 - z * z).sqrt();
            let t = golden * i as f64;
            Vec3::new(r * t.cos(), r * t.sin(), z)
        })
        .collect();
    let points = jitter_onto_ellipsoid(base, 0.02);
    let p = convex_hull(&points, "hull760");
    assert_eq!(p.faces.len(), 760, "hull760 must have 760 facets");
    p
}

fn jitter_onto_ellipsoid(base: Vec<Vec3>, amplitude: f64) -> Vec<Vec3> {
    let mut rng = ChaCha8Rng::seed_from_u64(HULL_SEED);
    let axes = Vec3::new(1.0, 0.8, 0.65);
    let shift = Vec3::new(0.3, -0.2, 0.1);
    base.into_iter()
        .map(|v| {
            let u = v.normalize();
            let d = Vec3::new(
                rng.gen_range(-amplitude..amplitude),
                rng.gen_range(-amplitude..amplitude),
                rng.gen_range(-amplitude..amplitude),
            );
            let s = (u + d).normalize();
            s.component_mul(&axes) + shift
        })
        .collect()
}

fn orient(a: &Vec3, b: &Vec3, c: &Vec3, p: &Vec3) -> f64 {
    (b - a).cross(&(c - a)).dot(&(p - a))
}

/// Incremental convex hull of points in general position; faces are outward triangles.
fn convex_hull(points: &[Vec3], label: &str) -> Polyhedron {
    let scale = points.iter().map(|p| p.norm()).fold(0.0, f64::max);
    let eps = 1e-12 * scale * scale * scale;

    // initial tetrahedron from the first four non-coplanar points
    let mut seed = vec![0, 1];
    let mut k = 2;
    while (points[seed[1]] - points[seed[0]])
        .cross(&(points[k] - points[seed[0]]))
        .norm()
        <= eps
    {
        k += 1;
    }
    seed.push(k);
    k = 3;
    while seed.contains(&k)
        || orient(
            &points[seed[0]],
            &points[seed[1]],
            &points[seed[2]],
            &points[k],
        )
        .abs()
            <= eps
    {
        k += 1;
    }
    seed.push(k);

    let mut faces: Vec<[usize; 3]> = Vec::new();
    for omit in 0..4 {
        let mut f: Vec<usize> = (0..4).filter(|&i| i != omit).map(|i| seed[i]).collect();
        if orient(
            &points[f[0]],
            &points[f[1]],
            &points[f[2]],
            &points[seed[omit]],
        ) > 0.0
        {
            f.swap(1, 2);
        }
        faces.push([f[0], f[1], f[2]]);
    }

    for (i, p) in points.iter().enumerate() {
        if seed.contains(&i) {
            continue;
        }
        let visible: Vec<bool> = faces
            .iter()
            .map(|f| orient(&points[f[0]], &points[f[1]], &points[f[2]], p) > eps)
            .collect();
        if !visible.iter().any(|&v| v) {
            continue;
        }
        let mut visible_edges = HashSet::new();
        for (f, _) in faces.iter().zip(&visible).filter(|(_, &v)| v) {
            for e in 0..3 {
                visible_edges.insert((f[e], f[(e + 1) % 3]));
            }
        }
        let mut next = Vec::with_capacity(faces.len() + 2);
        let mut horizon = Vec::new();
        for (f, &v) in faces.iter().zip(&visible) {
            if v {
                for e in 0..3 {
                    let (a, b) = (f[e], f[(e + 1) % 3]);
                    if !visible_edges.contains(&(b, a)) {
                        horizon.push((a, b));
                    }
                }
            } else {
                next.push(*f);
            }
        }
        for (a, b) in horizon {
            next.push([a, b, i]);
        }
        faces = next;
    }

    // drop interior points and renumber
    let mut used: Vec<usize> = faces.iter().flatten().copied().collect();
    used.sort_unstable();
    used.dedup();
    let mut remap = vec![usize::MAX; points.len()];
    for (new, &old) in used.iter().enumerate() {
        remap[old] = new;
    }
    let vertices = used.iter().map(|&i| points[i]).collect();
    let faces = faces
        .iter()
        .map(|f| f.iter().map(|&i| remap[i]).collect())
        .collect();
    Polyhedron::new(vertices, faces, label).expect("hull indices are valid")
}
