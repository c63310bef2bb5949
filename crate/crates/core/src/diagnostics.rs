//! Accuracy, stability and timing reports over a range of degrees.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chebyshev::orthonormality_residual;
use crate::error::Result;
use crate::geometry::{affine_map, bounding_box, divergence_volume, Polyhedron};
use crate::moments::{moments_along, moments_crosscheck, PrimitiveAxis};
use crate::oracle::{BoxUnion, TetFan};
use crate::rule::{build_rule, rule_from_moments, QuadratureRule, RuleCache};
use crate::shapes;

/// Relative errors below this are recorded as this value before taking logs.
pub const LOG_ERROR_FLOOR: f64 = 1e-17;

/// Coefficients `(a, b, c, d)` of `(a x + b y + c z + d)^n`, uniform in `[-1, 1]`.
pub fn random_linear_forms(seed: u64, count: usize) -> Vec<[f64; 4]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            [
                rng.gen_range(-1.0..=1.0),
                rng.gen_range(-1.0..=1.0),
                rng.gen_range(-1.0..=1.0),
                rng.gen_range(-1.0..=1.0),
            ]
        })
        .collect()
}

pub fn linear_form_power(c: &[f64; 4], n: usize, x: f64, y: f64, z: f64) -> f64 {
    (c[0] * x + c[1] * y + c[2] * z + c[3]).powi(n as i32)
}

/// Where reference integrals come from.
#[derive(Debug, Clone)]
pub enum Reference {
    /// Analytic box decomposition of a registered shape.
    BoxUnion(BoxUnion),
    /// Centroid tetrahedra of a convex solid.
    ConvexTets(TetFan),
    /// Rule rebuilt from y-primitive moments; only a consistency check.
    YPrimitive,
}

impl Reference {
    pub fn name(&self) -> &'static str {
        match self {
            Reference::BoxUnion(_) => "box-union",
            Reference::ConvexTets(_) => "convex-tets",
            Reference::YPrimitive => "y-primitive",
        }
    }

    /// Picks the strongest reference available for `p`: a registered box
    /// union when `p` coincides with that built-in, then the tetrahedral fan
    /// for convex solids, then the y-primitive rule.
    pub fn for_polyhedron(p: &Polyhedron) -> Self {
        for name in shapes::SHAPE_NAMES {
            if let Some(u) = shapes::box_union(name) {
                let builtin = shapes::by_name(name).expect("registered");
                if same_geometry(&builtin, p) {
                    return Reference::BoxUnion(u);
                }
            }
        }
        match TetFan::new(p) {
            Ok(fan) => Reference::ConvexTets(fan),
            Err(_) => Reference::YPrimitive,
        }
    }
}

fn same_geometry(a: &Polyhedron, b: &Polyhedron) -> bool {
    a.vertices.len() == b.vertices.len()
        && a.faces.len() == b.faces.len()
        && a.vertices
            .iter()
            .zip(&b.vertices)
            .all(|(u, v)| (u - v).norm() <= 1e-12 * (1.0 + u.norm()))
        && a.faces
            .iter()
            .zip(&b.faces)
            .all(|(f, g)| f.vertex_indices == g.vertex_indices)
}

/// Relative errors of `rule` on the random family `(a x + b y + c z + d)^n`.
pub fn linear_form_errors(
    p: &Polyhedron,
    rule: &QuadratureRule,
    reference: &Reference,
    forms: &[[f64; 4]],
    cache: &RuleCache,
) -> Result<Vec<f64>> {
    let n = rule.degree;
    let alternate = match reference {
        Reference::YPrimitive => {
            let map = affine_map(&bounding_box(p)?);
            let my = moments_along(p, &map, n, PrimitiveAxis::Y)?;
            Some(rule_from_moments(&my, cache, &p.label)?)
        }
        _ => None,
    };
    Ok(forms
        .iter()
        .map(|c| {
            let g = |x: f64, y: f64, z: f64| linear_form_power(c, n, x, y, z);
            let q = rule.integrate(|q| g(q[0], q[1], q[2]));
            let exact = match reference {
                Reference::BoxUnion(u) => u.integrate(n, g),
                Reference::ConvexTets(fan) => fan.integrate(n, g),
                Reference::YPrimitive => alternate
                    .as_ref()
                    .expect("built above")
                    .integrate(|q| g(q[0], q[1], q[2])),
            };
            (q - exact).abs() / exact.abs()
        })
        .collect())
}

pub fn mean_log10(errors: &[f64]) -> f64 {
    errors
        .iter()
        .map(|e| e.max(LOG_ERROR_FLOOR).log10())
        .sum::<f64>()
        / errors.len() as f64
}

/// One line of the check report.
#[derive(Debug, Clone, Serialize)]
pub struct CheckRow {
    pub degree: usize,
    pub stability_ratio: f64,
    pub negative_weights: usize,
    /// `|sum w - divergence volume| / volume`.
    pub volume_residual: f64,
    pub orthonormality_residual: f64,
    pub crosscheck_residual: f64,
    pub mean_log10_error: f64,
    pub max_error: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub label: String,
    pub reference: String,
    pub seed: u64,
    pub samples: usize,
    pub rows: Vec<CheckRow>,
}

impl CheckReport {
    /// `n,ratio,mean_log_err` rows.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,ratio,mean_log_err\n");
        for r in &self.rows {
            s.push_str(&format!(
                "{},{},{}\n",
                r.degree, r.stability_ratio, r.mean_log10_error
            ));
        }
        s
    }
}

/// Even degrees from 4 up to `nmax`.
pub fn even_degrees(nmax: usize) -> Vec<usize> {
    (4..=nmax).step_by(2).collect()
}

pub fn check(
    p: &Polyhedron,
    degrees: &[usize],
    seed: u64,
    samples: usize,
    cache: &RuleCache,
) -> Result<CheckReport> {
    let reference = Reference::for_polyhedron(p);
    let forms = random_linear_forms(seed, samples);
    let volume = divergence_volume(p)?;
    let map = affine_map(&bounding_box(p)?);
    let mut rows = Vec::with_capacity(degrees.len());
    for &n in degrees {
        let rule = build_rule(p, n, cache)?;
        let entry = cache.get(n)?;
        let errors = linear_form_errors(p, &rule, &reference, &forms, cache)?;
        rows.push(CheckRow {
            degree: n,
            stability_ratio: rule.stability_ratio,
            negative_weights: rule.weights.iter().filter(|&&w| w < 0.0).count(),
            volume_residual: (rule.volume_estimate - volume).abs() / volume,
            orthonormality_residual: orthonormality_residual(&entry.box_rule, &entry.vandermonde),
            crosscheck_residual: moments_crosscheck(p, &map, n)?,
            mean_log10_error: mean_log10(&errors),
            max_error: errors.iter().copied().fold(0.0, f64::max),
        });
    }
    Ok(CheckReport {
        label: p.label.clone(),
        reference: reference.name().to_owned(),
        seed,
        samples,
        rows,
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct BenchRow {
    pub degree: usize,
    /// Mean seconds with a fresh cache (includes building `V`).
    pub cold_seconds: f64,
    /// Mean seconds with the degree already cached.
    pub warm_seconds: f64,
}

/// Times [`build_rule`] end to end, `repeats` times per degree.
pub fn bench(p: &Polyhedron, degrees: &[usize], repeats: usize) -> Result<Vec<BenchRow>> {
    let repeats = repeats.max(1);
    let mut rows = Vec::with_capacity(degrees.len());
    for &n in degrees {
        let mut cold = 0.0;
        for _ in 0..repeats {
            let cache = RuleCache::new();
            let start = Instant::now();
            build_rule(p, n, &cache)?;
            cold += start.elapsed().as_secs_f64();
        }
        let cache = RuleCache::new();
        cache.get(n)?;
        let mut warm = 0.0;
        for _ in 0..repeats {
            let start = Instant::now();
            build_rule(p, n, &cache)?;
            warm += start.elapsed().as_secs_f64();
        }
        rows.push(BenchRow {
            degree: n,
            cold_seconds: cold / repeats as f64,
            warm_seconds: warm / repeats as f64,
        });
    }
    Ok(rows)
}

pub fn bench_csv(rows: &[BenchRow]) -> String {
    let mut s = String::from("n,cold_seconds,warm_seconds\n");
    for r in rows {
        s.push_str(&format!(
            "{},{:e},{:e}\n",
            r.degree, r.cold_seconds, r.warm_seconds
        ));
    }
    s
}
