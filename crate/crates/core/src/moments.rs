//! Chebyshev moments `m_j = int_Omega phi_j dP` by the divergence theorem.
//!
//! With `Phi_j` a primitive of `phi_j` in one coordinate direction,
//! `m_j = sum_faces n_axis(face) int_face Phi_j dS`. Faces are triangulated
//! and each triangle gets a collapsed Gauss-Legendre rule of high enough order
//! for the degree `n + 1` integrand. Everything happens in reference
//! coordinates of the bounding box.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chebyshev::{
    check_domain, fill_chebyshev, fill_primitives, normalization, MultiIndexSet,
};
use crate::error::{Error, Result};
use crate::geometry::{newell_vector_area, triangulate_face, AffineMap, Polyhedron, Vec3};
use crate::quadrature::{triangle_rule_3d, UnitTriangleRule};

/// Faces whose normal component along the primitive axis is at most this are skipped.
pub const NORMAL_SKIP_TOL: f64 = 1e-14;

/// Direction of the antiderivative used in the surface integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrimitiveAxis {
    X,
    Y,
}

impl PrimitiveAxis {
    fn index(self) -> usize {
        match self {
            PrimitiveAxis::X => 0,
            PrimitiveAxis::Y => 1,
        }
    }
}

/// Moments of the orthonormal basis over a polyhedron mapped into `[-1,1]^3`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentVector {
    pub degree: usize,
    /// Ordered like [`MultiIndexSet::new`]`(degree)`.
    pub values: Vec<f64>,
    pub reference_frame: AffineMap,
}

#[derive(Serialize, Deserialize)]
struct MomentJson {
    degree: usize,
    triples: Vec<[usize; 3]>,
    values: Vec<f64>,
}

impl MomentVector {
    pub fn to_json(&self) -> String {
        let doc = MomentJson {
            degree: self.degree,
            triples: MultiIndexSet::new(self.degree).triples,
            values: self.values.clone(),
        };
        serde_json::to_string_pretty(&doc).expect("moments are always serializable")
    }
}

/// Triangle-rule order for degree-`n` moments: `ceil((n + 3) / 2) + 1`.
pub fn face_rule_order(n: usize) -> usize {
    (n + 3).div_ceil(2) + 1
}

/// Moments with the x-primitive.
pub fn polyhedron_moments(p: &Polyhedron, map: &AffineMap, n: usize) -> Result<MomentVector> {
    moments_along(p, map, n, PrimitiveAxis::X)
}

/// Moments with the primitive taken along `axis`.
///
/// Per-face partial sums are combined in face order, so the result does not
/// depend on how many threads evaluated the faces.
pub fn moments_along(
    p: &Polyhedron,
    map: &AffineMap,
    n: usize,
    axis: PrimitiveAxis,
) -> Result<MomentVector> {
    let index = MultiIndexSet::new(n);
    let rule = UnitTriangleRule::new(face_rule_order(n))?;
    let reference: Vec<Vec3> = p.vertices.iter().map(|v| map.forward(v)).collect();

    let partials: Vec<Option<Vec<f64>>> = (0..p.faces.len())
        .into_par_iter()
        .map(|f| face_partial(p, f, &reference, &index, &rule, axis))
        .collect::<Result<_>>()?;

    let mut values = vec![0.0; index.len()];
    for partial in partials.iter().flatten() {
        for (v, q) in values.iter_mut().zip(partial) {
            *v += q;
        }
    }
    for (j, (v, &t)) in values.iter_mut().zip(index.iter()).enumerate() {
        *v *= normalization(t);
        if !v.is_finite() {
            return Err(Error::NonFiniteMoment { index: j });
        }
    }
    Ok(MomentVector {
        degree: n,
        values,
        reference_frame: *map,
    })
}

/// `n_axis * int_face Phi_j dS` for all `j` (without the `c_j` factor), or
/// `None` when the face is parallel to the primitive axis.
fn face_partial(
    p: &Polyhedron,
    f: usize,
    reference: &[Vec3],
    index: &MultiIndexSet,
    rule: &UnitTriangleRule,
    axis: PrimitiveAxis,
) -> Result<Option<Vec<f64>>> {
    let face = &p.faces[f];
    let vector_area = newell_vector_area(&face.vertex_indices, reference);
    let area = vector_area.norm();
    if area == 0.0 {
        return Err(Error::DegenerateFace { face: f, area });
    }
    let a = axis.index();
    let normal_component = vector_area[a] / area;
    if normal_component.abs() <= NORMAL_SKIP_TOL {
        return Ok(None);
    }

    let n = index.degree;
    let tri = triangulate_face(p, f)?;
    let mut acc = vec![0.0; index.len()];
    // T_k along the primitive axis up to n + 1, the other two up to n
    let mut t_axis = vec![0.0; n + 2];
    let mut prim = vec![0.0; n + 1];
    let mut t_u = vec![0.0; n + 1];
    let mut t_v = vec![0.0; n + 1];
    let (u, v) = match axis {
        PrimitiveAxis::X => (1, 2),
        PrimitiveAxis::Y => (0, 2),
    };

    for t in &tri.triangles {
        let [p0, p1, p2] = t.map(|i| reference[i]);
        for (point, w) in triangle_rule_3d(rule, &p0, &p1, &p2) {
            let s = check_domain(point[a])?;
            fill_chebyshev(s, &mut t_axis);
            fill_primitives(s, &t_axis, &mut prim);
            fill_chebyshev(check_domain(point[u])?, &mut t_u);
            fill_chebyshev(check_domain(point[v])?, &mut t_v);
            match axis {
                PrimitiveAxis::X => {
                    for (acc, tr) in acc.iter_mut().zip(index.iter()) {
                        *acc += w * prim[tr[0]] * t_u[tr[1]] * t_v[tr[2]];
                    }
                }
                PrimitiveAxis::Y => {
                    for (acc, tr) in acc.iter_mut().zip(index.iter()) {
                        *acc += w * t_u[tr[0]] * prim[tr[1]] * t_v[tr[2]];
                    }
                }
            }
        }
    }
    for v in &mut acc {
        *v *= normal_component;
    }
    Ok(Some(acc))
}

/// Largest difference between x-primitive and y-primitive moments.
pub fn moments_crosscheck(p: &Polyhedron, map: &AffineMap, n: usize) -> Result<f64> {
    let mx = moments_along(p, map, n, PrimitiveAxis::X)?;
    let my = moments_along(p, map, n, PrimitiveAxis::Y)?;
    Ok(mx
        .values
        .iter()
        .zip(&my.values)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}
