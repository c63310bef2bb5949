//! Total-degree product Chebyshev basis on `[-1, 1]^3`.
//!
//! `phi_j(x, y, z) = c_j T_a(x) T_b(y) T_c(z)` with `a + b + c <= n` is
//! orthonormal for the product Chebyshev measure
//! `dmu = dP / sqrt((1 - x^2)(1 - y^2)(1 - z^2))`. The tensor Gauss-Chebyshev
//! rule with `n + 1` points per axis integrates degree `2n` exactly for that
//! measure, which is what makes the Vandermonde-like matrix `V` satisfy
//! `V^T diag(u) V = I`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Inputs this far outside `[-1, 1]` are clamped; anything further is an error.
pub const DOMAIN_TOL: f64 = 1e-14;

/// `(n + 1)(n + 2)(n + 3) / 6`, the dimension of trivariate polynomials of degree `n`.
pub fn basis_dimension(n: usize) -> usize {
    (n + 1) * (n + 2) * (n + 3) / 6
}

/// Multi-indices `(a, b, c)` with `a + b + c <= n`, graded by total degree.
///
/// Inside one degree block the first index runs downward, then the second,
/// so degree 2 reads `(2,0,0) (1,1,0) (1,0,1) (0,2,0) (0,1,1) (0,0,2)`. The
/// first `basis_dimension(d)` entries are exactly the degree-`d` set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiIndexSet {
    pub degree: usize,
    pub triples: Vec<[usize; 3]>,
}

impl MultiIndexSet {
    pub fn new(n: usize) -> Self {
        let mut triples = Vec::with_capacity(basis_dimension(n));
        for d in 0..=n {
            for a in (0..=d).rev() {
                for b in (0..=d - a).rev() {
                    triples.push([a, b, d - a - b]);
                }
            }
        }
        MultiIndexSet { degree: n, triples }
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    /// Position of a triple in the ordering, or `None` if its degree exceeds `n`.
    pub fn index_of(&self, t: [usize; 3]) -> Option<usize> {
        let d = t[0] + t[1] + t[2];
        if d > self.degree {
            return None;
        }
        let offset = d * (d + 1) * (d + 2) / 6;
        let k = d - t[0];
        Some(offset + k * (k + 1) / 2 + (k - t[1]))
    }

    pub fn iter(&self) -> impl Iterator<Item = &[usize; 3]> {
        self.triples.iter()
    }
}

pub fn index_triples(n: usize) -> MultiIndexSet {
    MultiIndexSet::new(n)
}

/// One-dimensional normalization: `1/sqrt(pi)` for `k = 0`, `sqrt(2/pi)` otherwise.
pub fn normalization_1d(k: usize) -> f64 {
    if k == 0 {
        1.0 / PI.sqrt()
    } else {
        (2.0 / PI).sqrt()
    }
}

pub fn normalization(t: [usize; 3]) -> f64 {
    normalization_1d(t[0]) * normalization_1d(t[1]) * normalization_1d(t[2])
}

pub(crate) fn check_domain(x: f64) -> Result<f64> {
    if x.abs() <= 1.0 {
        Ok(x)
    } else if x.abs() <= 1.0 + DOMAIN_TOL {
        Ok(x.clamp(-1.0, 1.0))
    } else {
        Err(Error::Domain { value: x })
    }
}

/// Fills `out[k] = T_k(x)` by the three-term recurrence. `x` must already be
/// in `[-1, 1]`.
pub(crate) fn fill_chebyshev(x: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    out[0] = 1.0;
    if out.len() > 1 {
        out[1] = x;
    }
    for k in 2..out.len() {
        out[k] = 2.0 * x * out[k - 1] - out[k - 2];
    }
}

/// `T_0(x) ... T_kmax(x)`.
pub fn cheb_values(k_max: usize, x: f64) -> Result<Vec<f64>> {
    let x = check_domain(x)?;
    let mut out = vec![0.0; k_max + 1];
    fill_chebyshev(x, &mut out);
    Ok(out)
}

/// Primitive of `T_a` in the normalization `x`, `x^2/2`,
/// `T_{a+1}/(2(a+1)) - T_{a-1}/(2(a-1))`.
///
/// For odd `a >= 3` this differs from the integral from 0 by a constant, which
/// is harmless on a closed surface.
pub fn primitive_eval(a: usize, x: f64) -> Result<f64> {
    let x = check_domain(x)?;
    let mut t = vec![0.0; a + 2];
    fill_chebyshev(x, &mut t);
    Ok(primitive_from_values(a, x, &t))
}

/// Same as [`primitive_eval`] with `t[k] = T_k(x)` for `k <= a + 1` given.
#[inline]
pub(crate) fn primitive_from_values(a: usize, x: f64, t: &[f64]) -> f64 {
    match a {
        0 => x,
        1 => 0.5 * x * x,
        _ => t[a + 1] / (2.0 * (a as f64 + 1.0)) - t[a - 1] / (2.0 * (a as f64 - 1.0)),
    }
}

/// Fills `out[a]` with the primitive of `T_a` at `x` for `a < out.len()`,
/// given `t[k] = T_k(x)` for `k <= out.len()`.
pub(crate) fn fill_primitives(x: f64, t: &[f64], out: &mut [f64]) {
    for (a, o) in out.iter_mut().enumerate() {
        *o = primitive_from_values(a, x, t);
    }
}

/// `c * prim_a(x) T_b(y) T_c(z)`, an x-primitive of the basis function of `triple`.
pub fn primitive_basis_eval(triple: [usize; 3], c: f64, p: [f64; 3]) -> Result<f64> {
    let px = primitive_eval(triple[0], p[0])?;
    let ty = cheb_values(triple[1], p[1])?[triple[1]];
    let tz = cheb_values(triple[2], p[2])?[triple[2]];
    Ok(c * px * ty * tz)
}

/// `phi_j` at a point.
pub fn basis_eval(triple: [usize; 3], p: [f64; 3]) -> Result<f64> {
    let mut v = normalization(triple);
    for d in 0..3 {
        v *= cheb_values(triple[d], p[d])?[triple[d]];
    }
    Ok(v)
}

/// m-point Gauss-Chebyshev rule: nodes `cos((2i - 1) pi / (2m))`, i = 1..m
/// (descending), common weight `pi / m`.
pub fn gauss_chebyshev_1d(m: usize) -> (Vec<f64>, f64) {
    assert!(m >= 1, "Gauss-Chebyshev rule needs at least one node");
    let nodes = (1..=m)
        .map(|i| {
            let theta = (2 * i - 1) as f64 * PI / (2 * m) as f64;
            theta.cos()
        })
        .collect();
    (nodes, PI / m as f64)
}

/// Tensor Gauss-Chebyshev rule on `[-1,1]^3` exact on degree `2n` for the
/// product Chebyshev measure.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxRule {
    pub degree: usize,
    /// `(n + 1)^3` nodes, x index fastest.
    pub nodes: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
    /// The one-dimensional nodes the tensor grid is built from.
    pub nodes_1d: Vec<f64>,
}

impl BoxRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

pub fn box_rule(n: usize) -> BoxRule {
    let m = n + 1;
    let (x, w) = gauss_chebyshev_1d(m);
    let mut nodes = Vec::with_capacity(m * m * m);
    for &z in &x {
        for &y in &x {
            for &xx in &x {
                nodes.push([xx, y, z]);
            }
        }
    }
    let weights = vec![w * w * w; nodes.len()];
    BoxRule {
        degree: n,
        nodes,
        weights,
        nodes_1d: x,
    }
}

/// `V[i][j] = phi_j(P_i)`, stored as a dense column-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct VandermondeMatrix {
    pub degree: usize,
    pub matrix: DMatrix<f64>,
}

impl VandermondeMatrix {
    pub fn rows(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.ncols()
    }

    /// `V m`.
    pub fn apply(&self, m: &[f64]) -> Vec<f64> {
        let m = DVector::from_column_slice(m);
        (&self.matrix * m).data.into()
    }
}

pub fn vandermonde(n: usize, points: &[[f64; 3]]) -> Result<VandermondeMatrix> {
    let index = MultiIndexSet::new(n);
    let coeff: Vec<f64> = index.iter().map(|&t| normalization(t)).collect();
    let mut matrix = DMatrix::<f64>::zeros(points.len(), index.len());
    let mut tx = vec![0.0; n + 1];
    let mut ty = vec![0.0; n + 1];
    let mut tz = vec![0.0; n + 1];
    for (i, p) in points.iter().enumerate() {
        fill_chebyshev(check_domain(p[0])?, &mut tx);
        fill_chebyshev(check_domain(p[1])?, &mut ty);
        fill_chebyshev(check_domain(p[2])?, &mut tz);
        for (j, (t, c)) in index.iter().zip(&coeff).enumerate() {
            matrix[(i, j)] = c * tx[t[0]] * ty[t[1]] * tz[t[2]];
        }
    }
    Ok(VandermondeMatrix { degree: n, matrix })
}

/// `max |V^T diag(u) V - I|` for the degree-`n` box rule.
pub fn orthonormality_residual(rule: &BoxRule, v: &VandermondeMatrix) -> f64 {
    let mut scaled = v.matrix.clone();
    for (mut row, &u) in scaled.row_iter_mut().zip(&rule.weights) {
        row *= u;
    }
    let gram = v.matrix.transpose() * scaled;
    let mut worst: f64 = 0.0;
    for j in 0..gram.ncols() {
        for i in 0..gram.nrows() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((gram[(i, j)] - target).abs());
        }
    }
    worst
}
