use super::{Polyhedron, Vec3};
use crate::error::{Error, Result};

/// Area below which (relative to the squared bounding-box diameter) a face is
/// considered degenerate.
const DEGENERATE_FACE_TOL: f64 = 1e-14;
/// Vertices closer than this (relative to the face diameter) to the segment
/// joining their neighbours are dropped before triangulating.
const COLLINEAR_TOL: f64 = 1e-12;

/// A face split into triangles that keep the face orientation.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangulatedFace {
    pub face_index: usize,
    /// Vertex-index triples into the polyhedron's vertex list.
    pub triangles: Vec<[usize; 3]>,
    pub origin: Vec3,
    /// Orthonormal in-plane axes; `axes[0] x axes[1]` is the outward normal.
    pub axes: [Vec3; 2],
}

impl TriangulatedFace {
    pub fn local_coordinates(&self, p: &Vec3) -> [f64; 2] {
        let d = p - self.origin;
        [d.dot(&self.axes[0]), d.dot(&self.axes[1])]
    }
}

/// Triangulates one face: fan from the first vertex when convex, ear clipping
/// in the face plane otherwise.
pub fn triangulate_face(p: &Polyhedron, face_index: usize) -> Result<TriangulatedFace> {
    let face = &p.faces[face_index];
    let diameter = p.diameter();
    if !(face.area >= DEGENERATE_FACE_TOL * diameter * diameter) || face.area == 0.0 {
        return Err(Error::DegenerateFace {
            face: face_index,
            area: face.area,
        });
    }

    let normal = face.unit_normal;
    let origin = p.vertices[face.vertex_indices[0]];
    let axes = plane_axes(&normal, p, &face.vertex_indices);
    let frame = |v: &Vec3| {
        let d = v - origin;
        [d.dot(&axes[0]), d.dot(&axes[1])]
    };

    let ring: Vec<usize> = face.vertex_indices.clone();
    let coords: Vec<[f64; 2]> = ring.iter().map(|&i| frame(&p.vertices[i])).collect();
    let face_diameter = polygon_diameter(&coords);
    let (ring, coords) = prune_collinear(ring, coords, COLLINEAR_TOL * face_diameter);

    let triangles = if is_convex(&coords) {
        (1..ring.len() - 1)
            .map(|i| [ring[0], ring[i], ring[i + 1]])
            .collect()
    } else {
        ear_clip(
            &ring,
            &coords,
            COLLINEAR_TOL * face_diameter * face_diameter,
        )
        .ok_or(Error::EarClippingFailure { face: face_index })?
    };

    // a self-intersecting ring can still be clipped; its pieces then fail to
    // tile the polygon
    let shoelace: f64 = (0..coords.len())
        .map(|i| cross2(&[0.0, 0.0], &coords[i], &coords[(i + 1) % coords.len()]))
        .sum::<f64>()
        * 0.5;
    let pieces: f64 = triangles
        .iter()
        .map(|t| {
            let [a, b, c] = t.map(|i| frame(&p.vertices[i]));
            0.5 * cross2(&a, &b, &c).abs()
        })
        .sum();
    if (pieces - shoelace).abs() > 1e-9 * pieces {
        return Err(Error::EarClippingFailure { face: face_index });
    }

    Ok(TriangulatedFace {
        face_index,
        triangles,
        origin,
        axes,
    })
}

fn plane_axes(normal: &Vec3, p: &Polyhedron, ring: &[usize]) -> [Vec3; 2] {
    // first axis along the longest edge out of vertex 0
    let v0 = p.vertices[ring[0]];
    let mut best = Vec3::zeros();
    for &i in &ring[1..] {
        let e = p.vertices[i] - v0;
        let e = e - normal * normal.dot(&e);
        if e.norm_squared() > best.norm_squared() {
            best = e;
        }
    }
    let u = best.normalize();
    let v = normal.cross(&u);
    [u, v]
}

fn polygon_diameter(c: &[[f64; 2]]) -> f64 {
    let mut d: f64 = 0.0;
    for a in c {
        for b in c {
            d = d.max(((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt());
        }
    }
    d
}

fn cross2(o: &[f64; 2], a: &[f64; 2], b: &[f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn distance_to_segment(p: &[f64; 2], a: &[f64; 2], b: &[f64; 2]) -> f64 {
    let ab = [b[0] - a[0], b[1] - a[1]];
    let ap = [p[0] - a[0], p[1] - a[1]];
    let len2 = ab[0] * ab[0] + ab[1] * ab[1];
    let t = if len2 > 0.0 {
        ((ap[0] * ab[0] + ap[1] * ab[1]) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let d = [ap[0] - t * ab[0], ap[1] - t * ab[1]];
    (d[0] * d[0] + d[1] * d[1]).sqrt()
}

fn prune_collinear(
    mut ring: Vec<usize>,
    mut coords: Vec<[f64; 2]>,
    tol: f64,
) -> (Vec<usize>, Vec<[f64; 2]>) {
    let mut i = 0;
    while ring.len() > 3 && i < ring.len() {
        let n = ring.len();
        let prev = coords[(i + n - 1) % n];
        let next = coords[(i + 1) % n];
        if distance_to_segment(&coords[i], &prev, &next) <= tol {
            ring.remove(i);
            coords.remove(i);
            // the previous vertex may have become collinear
            i = i.saturating_sub(1);
        } else {
            i += 1;
        }
    }
    (ring, coords)
}

fn is_convex(c: &[[f64; 2]]) -> bool {
    let n = c.len();
    (0..n).all(|i| cross2(&c[(i + n - 1) % n], &c[i], &c[(i + 1) % n]) > 0.0)
}

/// Inside or within `tol` (in cross-product units) of the boundary.
fn point_in_triangle(p: &[f64; 2], a: &[f64; 2], b: &[f64; 2], c: &[f64; 2], tol: f64) -> bool {
    cross2(a, b, p) >= -tol && cross2(b, c, p) >= -tol && cross2(c, a, p) >= -tol
}

/// O(n^2) ear clipping of a counter-clockwise simple polygon. Ears must have
/// doubled area above `tol`, and a vertex touching an ear blocks it.
fn ear_clip(ring: &[usize], coords: &[[f64; 2]], tol: f64) -> Option<Vec<[usize; 3]>> {
    let mut live: Vec<usize> = (0..ring.len()).collect();
    let mut triangles = Vec::with_capacity(ring.len() - 2);
    while live.len() > 3 {
        let n = live.len();
        let mut clipped = false;
        for k in 0..n {
            let (ip, ic, inx) = (live[(k + n - 1) % n], live[k], live[(k + 1) % n]);
            let (a, b, c) = (&coords[ip], &coords[ic], &coords[inx]);
            if cross2(a, b, c) <= tol {
                continue;
            }
            let blocked = live.iter().any(|&m| {
                m != ip
                    && m != ic
                    && m != inx
                    && coords[m] != *a
                    && coords[m] != *b
                    && coords[m] != *c
                    && point_in_triangle(&coords[m], a, b, c, tol)
            });
            if !blocked {
                triangles.push([ring[ip], ring[ic], ring[inx]]);
                live.remove(k);
                clipped = true;
                break;
            }
        }
        if !clipped {
            return None;
        }
    }
    let (a, b, c) = (&coords[live[0]], &coords[live[1]], &coords[live[2]]);
    if cross2(a, b, c) <= 0.0 {
        return None;
    }
    triangles.push([ring[live[0]], ring[live[1]], ring[live[2]]]);
    Some(triangles)
}
