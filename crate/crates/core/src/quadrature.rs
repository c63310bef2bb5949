//! One-dimensional Gauss-Legendre rules and collapsed (Duffy) triangle rules.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::Vec3;

const NEWTON_TOL: f64 = 1e-15;
const NEWTON_MAX_ITER: usize = 100;
pub const MAX_GAUSS_ORDER: usize = 64;

/// k-point Gauss-Legendre rule on `[0, 1]`, exact for degree `2k - 1`.
///
/// Roots of `P_k` are found by Newton iteration from Chebyshev-angle guesses
/// and symmetrized, so nodes come back in ascending order.
pub fn gauss_legendre_1d(k: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if k == 0 || k > MAX_GAUSS_ORDER {
        return Err(Error::UnsupportedOrder(k));
    }
    let mut nodes = vec![0.0; k];
    let mut weights = vec![0.0; k];
    let half = k.div_ceil(2);
    for i in 0..half {
        // root in (-1, 1), descending with i
        let mut x = (PI * (i as f64 + 0.75) / (k as f64 + 0.5)).cos();
        let mut converged = false;
        let mut dp = 0.0;
        for _ in 0..NEWTON_MAX_ITER {
            let (p, d) = legendre_with_derivative(k, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= NEWTON_TOL {
                converged = true;
                dp = legendre_with_derivative(k, x).1;
                break;
            }
        }
        if !converged {
            return Err(Error::ConvergenceFailure { k });
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // map [-1,1] -> [0,1]
        nodes[i] = 0.5 * (1.0 - x);
        nodes[k - 1 - i] = 0.5 * (1.0 + x);
        weights[i] = 0.5 * w;
        weights[k - 1 - i] = 0.5 * w;
    }
    if k % 2 == 1 {
        nodes[k / 2] = 0.5;
    }
    Ok((nodes, weights))
}

fn legendre_with_derivative(k: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for j in 2..=k {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let d = k as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Collapsed product rule on the unit triangle `{s, t >= 0, s + t <= 1}`.
///
/// `(xi, eta)` in the unit square maps to `s = xi`, `t = (1 - xi) eta`; the
/// Jacobian `1 - xi` is folded into the weights, which sum to 1/2. Exact for
/// total degree `2k - 2`.
#[derive(Debug, Clone)]
pub struct UnitTriangleRule {
    pub order: usize,
    pub points: Vec<[f64; 2]>,
    pub weights: Vec<f64>,
}

impl UnitTriangleRule {
    pub fn new(k: usize) -> Result<Self> {
        let (x, w) = gauss_legendre_1d(k)?;
        let mut points = Vec::with_capacity(k * k);
        let mut weights = Vec::with_capacity(k * k);
        for (xi, wi) in x.iter().zip(&w) {
            for (eta, wj) in x.iter().zip(&w) {
                points.push([*xi, (1.0 - xi) * eta]);
                weights.push(wi * wj * (1.0 - xi));
            }
        }
        Ok(UnitTriangleRule {
            order: k,
            points,
            weights,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Nodes and weights on one triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct FaceQuadrature {
    pub points: Vec<[f64; 2]>,
    pub weights: Vec<f64>,
}

impl FaceQuadrature {
    pub fn integrate(&self, f: impl Fn(f64, f64) -> f64) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(p, w)| w * f(p[0], p[1]))
            .sum()
    }
}

/// k x k collapsed Gauss-Legendre rule on a planar triangle.
pub fn triangle_rule(k: usize, triangle: [[f64; 2]; 3]) -> Result<FaceQuadrature> {
    let [a, b, c] = triangle;
    let e1 = [b[0] - a[0], b[1] - a[1]];
    let e2 = [c[0] - a[0], c[1] - a[1]];
    let twice_area = (e1[0] * e2[1] - e1[1] * e2[0]).abs();
    let scale = e1[0]
        .abs()
        .max(e1[1].abs())
        .max(e2[0].abs())
        .max(e2[1].abs());
    if !(twice_area > 1e-14 * scale * scale) {
        return Err(Error::DegenerateTriangle(0.5 * twice_area));
    }
    let unit = UnitTriangleRule::new(k)?;
    let points = unit
        .points
        .iter()
        .map(|[s, t]| [a[0] + s * e1[0] + t * e2[0], a[1] + s * e1[1] + t * e2[1]])
        .collect();
    let weights = unit.weights.iter().map(|w| w * twice_area).collect();
    Ok(FaceQuadrature { points, weights })
}

/// Unit-triangle rule mapped onto a triangle in space; weights carry the
/// triangle area (twice the area times the unit weights).
pub fn triangle_rule_3d<'a>(
    rule: &'a UnitTriangleRule,
    a: &Vec3,
    b: &Vec3,
    c: &Vec3,
) -> impl Iterator<Item = (Vec3, f64)> + 'a {
    let e1 = b - a;
    let e2 = c - a;
    let twice_area = e1.cross(&e2).norm();
    let a = *a;
    rule.points
        .iter()
        .zip(&rule.weights)
        .map(move |([s, t], w)| (a + e1 * *s + e2 * *t, w * twice_area))
}

/// Order that makes the collapsed rule exact for total degree `degree`.
pub fn triangle_order_for_degree(degree: usize) -> usize {
    (degree + 2).div_ceil(2).max(1)
}
