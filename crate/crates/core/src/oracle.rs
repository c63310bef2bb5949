//! Reference integrators used to check the quadrature rules.
//!
//! Nothing here goes through the main pipeline: box unions are integrated
//! analytically or with tensor Gauss-Legendre rules, and convex solids are cut
//! into tetrahedra around the vertex centroid. The Gauss-Legendre nodes come
//! from the Golub-Welsch eigenvalue problem rather than Newton iteration.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::geometry::{Polyhedron, Vec3};

/// Gauss-Legendre rule on `[0, 1]` from the eigen-decomposition of the Jacobi matrix.
fn golub_welsch(k: usize) -> (Vec<f64>, Vec<f64>) {
    let mut jacobi = DMatrix::<f64>::zeros(k, k);
    for i in 1..k {
        let i = i as f64;
        let beta = i / (4.0 * i * i - 1.0).sqrt();
        let (r, c) = (i as usize - 1, i as usize);
        jacobi[(r, c)] = beta;
        jacobi[(c, r)] = beta;
    }
    let eig = SymmetricEigen::new(jacobi);
    let mut pairs: Vec<(f64, f64)> = (0..k)
        .map(|i| {
            let x = eig.eigenvalues[i];
            let v0 = eig.eigenvectors[(0, i)];
            (0.5 * (x + 1.0), v0 * v0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

fn points_for_degree(d: usize) -> usize {
    (d + 4).div_ceil(2)
}

/// Axis-aligned box with a sign: +1 adds its integral, -1 removes it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedBox {
    pub lo: [f64; 3],
    pub hi: [f64; 3],
    pub sign: f64,
}

/// Solid described as a signed sum of axis-aligned boxes.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxUnion {
    pub boxes: Vec<SignedBox>,
}

impl BoxUnion {
    pub fn volume(&self) -> f64 {
        self.boxes
            .iter()
            .map(|b| b.sign * (0..3).map(|d| b.hi[d] - b.lo[d]).product::<f64>())
            .sum()
    }

    /// Integrates `f` with a tensor Gauss-Legendre rule exact for degree `degree` on each box.
    pub fn integrate(&self, degree: usize, f: impl Fn(f64, f64, f64) -> f64) -> f64 {
        let k = (degree / 2 + 1).max(1);
        let (x, w) = golub_welsch(k);
        let mut total = 0.0;
        for b in &self.boxes {
            let h = [b.hi[0] - b.lo[0], b.hi[1] - b.lo[1], b.hi[2] - b.lo[2]];
            let mut s = 0.0;
            for (zi, wz) in x.iter().zip(&w) {
                let z = b.lo[2] + h[2] * zi;
                for (yi, wy) in x.iter().zip(&w) {
                    let y = b.lo[1] + h[1] * yi;
                    for (xi, wx) in x.iter().zip(&w) {
                        s += wx * wy * wz * f(b.lo[0] + h[0] * xi, y, z);
                    }
                }
            }
            total += b.sign * s * h[0] * h[1] * h[2];
        }
        total
    }
}

fn interval_power_integral(lo: f64, hi: f64, k: usize) -> f64 {
    let e = k as i32 + 1;
    (hi.powi(e) - lo.powi(e)) / e as f64
}

/// `int_box x^a y^b z^c`, as a product of one-dimensional integrals.
pub fn box_monomial_integral(lo: [f64; 3], hi: [f64; 3], a: usize, b: usize, c: usize) -> f64 {
    interval_power_integral(lo[0], hi[0], a)
        * interval_power_integral(lo[1], hi[1], b)
        * interval_power_integral(lo[2], hi[2], c)
}

pub fn union_monomial_integral(u: &BoxUnion, a: usize, b: usize, c: usize) -> f64 {
    u.boxes
        .iter()
        .map(|bx| bx.sign * box_monomial_integral(bx.lo, bx.hi, a, b, c))
        .sum()
}

/// Tetrahedra fanned from the vertex centroid of a convex polyhedron.
#[derive(Debug, Clone)]
pub struct TetFan {
    /// Apex followed by one face triangle, outward ordered.
    tets: Vec<[Vec3; 4]>,
}

impl TetFan {
    /// Fails with [`Error::NonConvex`] if some tetrahedron is inverted
    /// beyond `-1e-12 * vol`.
    pub fn new(p: &Polyhedron) -> Result<Self> {
        let apex: Vec3 = p.vertices.iter().sum::<Vec3>() / p.vertices.len() as f64;
        let mut tets = Vec::new();
        for face in &p.faces {
            let ring: Vec<Vec3> = face.vertex_indices.iter().map(|&i| p.vertices[i]).collect();
            for i in 1..ring.len() - 1 {
                tets.push([apex, ring[0], ring[i], ring[i + 1]]);
            }
        }
        let fan = TetFan { tets };
        let volumes: Vec<f64> = fan.tets.iter().map(signed_tet_volume).collect();
        let total: f64 = volumes.iter().sum();
        if let Some(&v) = volumes.iter().find(|&&v| v < -1e-12 * total.abs()) {
            return Err(Error::NonConvex { volume: v });
        }
        Ok(fan)
    }

    pub fn volume(&self) -> f64 {
        self.tets.iter().map(signed_tet_volume).sum()
    }

    /// Integrates `f`, exact for polynomials of degree `degree`.
    pub fn integrate(&self, degree: usize, f: impl Fn(f64, f64, f64) -> f64) -> f64 {
        let q = points_for_degree(degree);
        let (x, w) = golub_welsch(q);
        let mut total = 0.0;
        for t in &self.tets {
            let [a, b, c, d] = *t;
            let (e1, e2, e3) = (b - a, c - a, d - a);
            let det = e1.dot(&e2.cross(&e3));
            let mut s = 0.0;
            for (xi, wx) in x.iter().zip(&w) {
                for (eta, wy) in x.iter().zip(&w) {
                    for (zeta, wz) in x.iter().zip(&w) {
                        // collapsed coordinates of the unit tetrahedron
                        let r = *xi;
                        let u = (1.0 - xi) * eta;
                        let v = (1.0 - xi) * (1.0 - eta) * zeta;
                        let jac = (1.0 - xi) * (1.0 - xi) * (1.0 - eta);
                        let p = a + e1 * r + e2 * u + e3 * v;
                        s += wx * wy * wz * jac * f(p.x, p.y, p.z);
                    }
                }
            }
            total += det * s;
        }
        total
    }
}

fn signed_tet_volume(t: &[Vec3; 4]) -> f64 {
    let [a, b, c, d] = *t;
    (b - a).dot(&(c - a).cross(&(d - a))) / 6.0
}

/// `int_p x^a y^b z^c` for a convex polyhedron, via the centroid tetrahedra.
pub fn convex_tet_oracle(p: &Polyhedron, a: usize, b: usize, c: usize) -> Result<f64> {
    let fan = TetFan::new(p)?;
    let (ea, eb, ec) = (a as i32, b as i32, c as i32);
    Ok(fan.integrate(a + b + c, |x, y, z| x.powi(ea) * y.powi(eb) * z.powi(ec)))
}
