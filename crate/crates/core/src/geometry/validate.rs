use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{signed_divergence_volume, triangulate_face, Polyhedron, Vec3};

/// Default planarity tolerance, relative to the bounding-box diameter.
pub const PLANARITY_TOL: f64 = 1e-9;
/// Default vector-area closure tolerance, relative to the surface area.
pub const CLOSURE_TOL: f64 = 1e-12;

/// Outcome of [`validate`]. Serializes to JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    /// Max vertex distance to the face plane, per face.
    pub face_planarity: Vec<f64>,
    pub edge_pairing_ok: bool,
    /// `|sum_f area_f n_f| / sum_f area_f`.
    pub vector_area_residual: f64,
    /// Signed divergence-theorem volume (NaN when a face cannot be triangulated).
    pub volume: f64,
    pub passed: bool,
    pub problems: Vec<String>,
}

impl ValidationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is always serializable")
    }
}

/// Checks closedness, orientation, planarity and simplicity of faces.
///
/// Never fails; the report carries every problem found.
pub fn validate(p: &Polyhedron, tol_planarity: f64, tol_closure: f64) -> ValidationReport {
    let mut problems = Vec::new();
    let diameter = p.diameter();

    if p.vertices.is_empty() || p.faces.is_empty() {
        problems.push("polyhedron has no vertices or no faces".to_owned());
    }

    let face_planarity: Vec<f64> = p.faces.iter().map(|f| planarity(p, f)).collect();
    for (f, dev) in face_planarity.iter().enumerate() {
        if !(*dev <= tol_planarity * diameter) {
            problems.push(format!(
                "face {f} is not planar: deviation {dev:e} > {:e}",
                tol_planarity * diameter
            ));
        }
    }

    let edge_pairing_ok = check_edges(p, &mut problems);

    let total_area = p.surface_area();
    let closure: Vec3 = p.faces.iter().map(|f| f.vector_area()).sum();
    let vector_area_residual = if total_area > 0.0 {
        closure.norm() / total_area
    } else {
        f64::NAN
    };
    if !(vector_area_residual <= tol_closure) {
        problems.push(format!(
            "vector-area residual {vector_area_residual:e} exceeds {tol_closure:e}"
        ));
    }

    let mut triangulated = true;
    for f in 0..p.faces.len() {
        if let Err(e) = triangulate_face(p, f) {
            problems.push(e.to_string());
            triangulated = false;
        }
    }
    let volume = if triangulated {
        signed_divergence_volume(p).unwrap_or(f64::NAN)
    } else {
        f64::NAN
    };
    if triangulated && !(volume > 0.0) {
        problems.push(format!(
            "divergence volume {volume:e} is not positive (inward orientation?)"
        ));
    }

    ValidationReport {
        face_planarity,
        edge_pairing_ok,
        vector_area_residual,
        volume,
        passed: problems.is_empty(),
        problems,
    }
}

fn planarity(p: &Polyhedron, face: &super::Face) -> f64 {
    if face.area == 0.0 {
        return f64::INFINITY;
    }
    let k = face.len() as f64;
    let centroid: Vec3 = face
        .vertex_indices
        .iter()
        .map(|&i| p.vertices[i])
        .sum::<Vec3>()
        / k;
    face.vertex_indices
        .iter()
        .map(|&i| (p.vertices[i] - centroid).dot(&face.unit_normal).abs())
        .fold(0.0, f64::max)
}

fn check_edges(p: &Polyhedron, problems: &mut Vec<String>) -> bool {
    let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
    for f in &p.faces {
        let k = f.len();
        for i in 0..k {
            let a = f.vertex_indices[i];
            let b = f.vertex_indices[(i + 1) % k];
            *directed.entry((a, b)).or_default() += 1;
        }
    }
    let mut ok = true;
    let mut edges: Vec<_> = directed.iter().collect();
    edges.sort();
    for (&(a, b), &count) in edges {
        if count > 1 {
            ok = false;
            problems.push(format!(
                "edge ({a}, {b}) is traversed {count} times in the same direction"
            ));
        }
        if !directed.contains_key(&(b, a)) {
            ok = false;
            problems.push(format!("edge ({a}, {b}) has no opposite half-edge"));
        }
    }
    ok
}
