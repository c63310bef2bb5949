//! Polyhedral domains: data model, bounding box and reference-cube map.
//!
//! A [`Polyhedron`] is a vertex list plus planar polygonal faces whose vertices
//! are listed counter-clockwise when seen from outside. Volume integrals over
//! the solid are turned into face integrals by the divergence theorem, so the
//! orientation of every face matters.

mod off;
mod triangulate;
mod validate;

pub use off::{read_off, read_off_file, write_off, write_off_file};
pub use triangulate::{triangulate_face, TriangulatedFace};
pub use validate::{validate, ValidationReport, CLOSURE_TOL, PLANARITY_TOL};

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::triangle_rule_3d;

pub type Vec3 = Vector3<f64>;

/// Relative extent below which the bounding box is treated as flat.
pub const DEGENERATE_BOX_TOL: f64 = 1e-12;

/// A planar polygonal face.
#[derive(Debug, Clone, PartialEq)]
pub struct Face {
    pub vertex_indices: Vec<usize>,
    /// Outward unit normal (zero for a degenerate face).
    pub unit_normal: Vec3,
    pub area: f64,
}

impl Face {
    fn from_indices(vertex_indices: Vec<usize>, vertices: &[Vec3]) -> Self {
        let vector_area = newell_vector_area(&vertex_indices, vertices);
        let area = vector_area.norm();
        let unit_normal = if area > 0.0 {
            vector_area / area
        } else {
            Vec3::zeros()
        };
        Face {
            vertex_indices,
            unit_normal,
            area,
        }
    }

    /// Area-weighted normal, `area * unit_normal`.
    pub fn vector_area(&self) -> Vec3 {
        self.unit_normal * self.area
    }

    pub fn len(&self) -> usize {
        self.vertex_indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertex_indices.is_empty()
    }
}

/// Half the Newell normal: a vector whose norm is the polygon area and whose
/// direction follows the right-hand rule over the vertex order.
pub(crate) fn newell_vector_area(indices: &[usize], vertices: &[Vec3]) -> Vec3 {
    let k = indices.len();
    let mut acc = Vec3::zeros();
    if k < 3 {
        return acc;
    }
    // shift to the first vertex to limit cancellation
    let origin = vertices[indices[0]];
    for i in 0..k {
        let a = vertices[indices[i]] - origin;
        let b = vertices[indices[(i + 1) % k]] - origin;
        acc += a.cross(&b);
    }
    acc * 0.5
}

/// A closed polyhedral solid bounded by oriented planar faces.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyhedron {
    pub vertices: Vec<Vec3>,
    pub faces: Vec<Face>,
    pub label: String,
}

impl Polyhedron {
    /// Builds a polyhedron, checking only that face indices are in range and
    /// that every face has at least three vertices. Geometric validity is the
    /// job of [`validate`].
    pub fn new(
        vertices: Vec<Vec3>,
        faces: Vec<Vec<usize>>,
        label: impl Into<String>,
    ) -> Result<Self> {
        for (f, face) in faces.iter().enumerate() {
            if face.len() < 3 {
                return Err(Error::Invalid(format!(
                    "face {f} has {} vertices, at least 3 are required",
                    face.len()
                )));
            }
            if let Some(&index) = face.iter().find(|&&i| i >= vertices.len()) {
                return Err(Error::IndexOutOfRange {
                    face: f,
                    index,
                    count: vertices.len(),
                });
            }
        }
        let faces = faces
            .into_iter()
            .map(|idx| Face::from_indices(idx, &vertices))
            .collect();
        Ok(Polyhedron {
            vertices,
            faces,
            label: label.into(),
        })
    }

    pub fn face_vertices(&self, face: usize) -> impl Iterator<Item = Vec3> + '_ {
        self.faces[face]
            .vertex_indices
            .iter()
            .map(move |&i| self.vertices[i])
    }

    pub fn surface_area(&self) -> f64 {
        self.faces.iter().map(|f| f.area).sum()
    }

    /// Same solid with every face traversed in the opposite direction.
    pub fn reversed(&self) -> Self {
        let faces = self
            .faces
            .iter()
            .map(|f| {
                let mut idx = f.vertex_indices.clone();
                idx[1..].reverse();
                idx
            })
            .collect();
        Polyhedron::new(self.vertices.clone(), faces, self.label.clone())
            .expect("reversing faces keeps indices valid")
    }

    /// Applies `P -> scale * P + shift` to every vertex.
    pub fn scaled_translated(&self, scale: f64, shift: Vec3) -> Self {
        let vertices = self.vertices.iter().map(|v| v * scale + shift).collect();
        let faces = self
            .faces
            .iter()
            .map(|f| f.vertex_indices.clone())
            .collect();
        Polyhedron::new(vertices, faces, self.label.clone()).expect("indices unchanged")
    }

    /// Same combinatorics with vertices passed through `map`.
    pub fn map_vertices(&self, map: impl Fn(&Vec3) -> Vec3) -> Self {
        let vertices = self.vertices.iter().map(map).collect();
        let faces = self
            .faces
            .iter()
            .map(|f| f.vertex_indices.clone())
            .collect();
        Polyhedron::new(vertices, faces, self.label.clone()).expect("indices unchanged")
    }

    pub fn diameter(&self) -> f64 {
        match BoundingBox::of_points(&self.vertices) {
            Some(b) => b.diameter(),
            None => 0.0,
        }
    }
}

/// Tight axis-aligned box around a polyhedron.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundingBox {
    pub lo: [f64; 3],
    pub hi: [f64; 3],
}

impl BoundingBox {
    fn of_points(points: &[Vec3]) -> Option<Self> {
        let first = points.first()?;
        let mut lo = [first.x, first.y, first.z];
        let mut hi = lo;
        for p in points {
            for d in 0..3 {
                lo[d] = lo[d].min(p[d]);
                hi[d] = hi[d].max(p[d]);
            }
        }
        Some(BoundingBox { lo, hi })
    }

    pub fn extent(&self) -> [f64; 3] {
        [
            self.hi[0] - self.lo[0],
            self.hi[1] - self.lo[1],
            self.hi[2] - self.lo[2],
        ]
    }

    pub fn diameter(&self) -> f64 {
        let e = self.extent();
        (e[0] * e[0] + e[1] * e[1] + e[2] * e[2]).sqrt()
    }

    pub fn volume(&self) -> f64 {
        self.extent().iter().product()
    }

    pub fn contains(&self, p: &Vec3, tol: f64) -> bool {
        (0..3).all(|d| p[d] >= self.lo[d] - tol && p[d] <= self.hi[d] + tol)
    }
}

/// Componentwise min/max of the vertices.
pub fn bounding_box(p: &Polyhedron) -> Result<BoundingBox> {
    let b = BoundingBox::of_points(&p.vertices).ok_or(Error::EmptyPolyhedron)?;
    let diameter = b.diameter();
    for (axis, &extent) in b.extent().iter().enumerate() {
        if !(extent >= DEGENERATE_BOX_TOL * diameter) || extent <= 0.0 {
            return Err(Error::DegenerateBox {
                axis,
                extent,
                diameter,
            });
        }
    }
    Ok(b)
}

/// Translation plus axis scaling sending a bounding box onto `[-1, 1]^3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineMap {
    pub center: [f64; 3],
    pub half_extent: [f64; 3],
    /// Product of the half extents, `vol(B) / 8`.
    pub jacobian: f64,
}

impl AffineMap {
    pub fn new(b: &BoundingBox) -> Self {
        let mut center = [0.0; 3];
        let mut half_extent = [0.0; 3];
        for d in 0..3 {
            center[d] = 0.5 * (b.lo[d] + b.hi[d]);
            half_extent[d] = 0.5 * (b.hi[d] - b.lo[d]);
        }
        AffineMap {
            center,
            half_extent,
            jacobian: half_extent.iter().product(),
        }
    }

    /// Physical to reference coordinates.
    pub fn forward(&self, p: &Vec3) -> Vec3 {
        Vec3::new(
            (p.x - self.center[0]) / self.half_extent[0],
            (p.y - self.center[1]) / self.half_extent[1],
            (p.z - self.center[2]) / self.half_extent[2],
        )
    }

    /// Reference to physical coordinates.
    pub fn inverse(&self, q: &Vec3) -> Vec3 {
        Vec3::new(
            self.center[0] + self.half_extent[0] * q.x,
            self.center[1] + self.half_extent[1] * q.y,
            self.center[2] + self.half_extent[2] * q.z,
        )
    }
}

pub fn affine_map(b: &BoundingBox) -> AffineMap {
    AffineMap::new(b)
}

/// Signed enclosed volume, `sum_f n1_f * int_f x dS`.
///
/// Positive for outward orientation; reversing every face flips the sign.
pub fn signed_divergence_volume(p: &Polyhedron) -> Result<f64> {
    let rule = triangle_rule_3d_unit();
    let mut volume = 0.0;
    for (f, face) in p.faces.iter().enumerate() {
        let n1 = face.unit_normal.x;
        if n1 == 0.0 {
            continue;
        }
        let tri = triangulate_face(p, f)?;
        let mut integral = 0.0;
        for t in &tri.triangles {
            let [a, b, c] = t.map(|i| p.vertices[i]);
            for (point, w) in triangle_rule_3d(&rule, &a, &b, &c) {
                integral += w * point.x;
            }
        }
        volume += n1 * integral;
    }
    Ok(volume)
}

fn triangle_rule_3d_unit() -> crate::quadrature::UnitTriangleRule {
    // order 2 integrates linear functions exactly
    crate::quadrature::UnitTriangleRule::new(2).expect("order 2 is always available")
}

/// Enclosed volume; fails with [`Error::NegativeVolume`] for inward-facing surfaces.
pub fn divergence_volume(p: &Polyhedron) -> Result<f64> {
    let v = signed_divergence_volume(p)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(Error::NegativeVolume(v))
    }
}
