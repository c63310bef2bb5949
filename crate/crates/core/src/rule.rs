//! Quadrature rules `w = u .* (V m)` on the bounding-box Gauss-Chebyshev nodes.
//!
//! The box nodes, their weights `u` and the Vandermonde-like matrix `V` only
//! depend on the degree and live in a [`RuleCache`]. The polyhedron enters
//! through its moment vector `m` alone, so building a rule for a new element
//! costs one moment computation plus one matrix-vector product. No linear
//! system is solved anywhere.
//!
//! Stability: the weights may be negative, but `sum |w_i|` converges to
//! `vol(Omega)` as the degree grows, so the ratio reported by
//! [`stability_report`] tends to 1.

use std::collections::HashMap;
use std::io::{Read, Write};
use std::sync::{Arc, RwLock};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::chebyshev::{box_rule, vandermonde, BoxRule, VandermondeMatrix};
use crate::error::{Error, Result};
use crate::geometry::{affine_map, bounding_box, Polyhedron, Vec3};
use crate::moments::{polyhedron_moments, MomentVector};

/// Highest exactness degree accepted.
pub const MAX_DEGREE: usize = 30;

/// Degree-dependent, element-independent data.
#[derive(Debug)]
pub struct CacheEntry {
    pub box_rule: BoxRule,
    pub vandermonde: VandermondeMatrix,
    pub build_time: Duration,
    pub built_at: Instant,
}

/// Per-degree store of box rules and Vandermonde matrices, shared between
/// threads. Entries are never evicted.
#[derive(Debug, Default)]
pub struct RuleCache {
    entries: RwLock<HashMap<usize, Arc<CacheEntry>>>,
}

impl RuleCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the entry for degree `n`, building it on first use. Two racing
    /// builders produce identical data; the first one inserted wins.
    pub fn get(&self, n: usize) -> Result<Arc<CacheEntry>> {
        check_degree(n)?;
        if let Some(e) = self.entries.read().expect("cache lock").get(&n) {
            return Ok(Arc::clone(e));
        }
        let start = Instant::now();
        let rule = box_rule(n);
        let v = vandermonde(n, &rule.nodes)?;
        let entry = Arc::new(CacheEntry {
            box_rule: rule,
            vandermonde: v,
            build_time: start.elapsed(),
            built_at: Instant::now(),
        });
        let mut map = self.entries.write().expect("cache lock");
        Ok(Arc::clone(map.entry(n).or_insert(entry)))
    }

    pub fn contains(&self, n: usize) -> bool {
        self.entries.read().expect("cache lock").contains_key(&n)
    }

    pub fn len(&self) -> usize {
        self.entries.read().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn check_degree(n: usize) -> Result<()> {
    if n > MAX_DEGREE {
        Err(Error::DegreeTooHigh {
            degree: n,
            max: MAX_DEGREE,
        })
    } else {
        Ok(())
    }
}

/// Nodes in physical coordinates with signed weights carrying the volume units.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub degree: usize,
    pub nodes: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
    /// Sum of the weights.
    pub volume_estimate: f64,
    /// `sum |w_i| / sum w_i`.
    pub stability_ratio: f64,
    pub polyhedron_label: String,
}

impl QuadratureRule {
    fn from_parts(degree: usize, nodes: Vec<[f64; 3]>, weights: Vec<f64>, label: String) -> Self {
        let volume_estimate: f64 = weights.iter().sum();
        let sum_abs: f64 = weights.iter().map(|w| w.abs()).sum();
        QuadratureRule {
            degree,
            nodes,
            weights,
            volume_estimate,
            stability_ratio: sum_abs / volume_estimate,
            polyhedron_label: label,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `sum_i w_i f(P_i)`.
    pub fn integrate(&self, f: impl Fn(&[f64; 3]) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(p, w)| w * f(p))
            .sum()
    }
}

/// Builds the degree-`n` rule for `p`, pulling box data from `cache`.
pub fn build_rule(p: &Polyhedron, n: usize, cache: &RuleCache) -> Result<QuadratureRule> {
    let map = affine_map(&bounding_box(p)?);
    let moments = polyhedron_moments(p, &map, n)?;
    rule_from_moments(&moments, cache, &p.label)
}

/// The cached half of [`build_rule`]: `w = J * u .* (V m)`, nodes mapped back
/// to physical space.
pub fn rule_from_moments(
    moments: &MomentVector,
    cache: &RuleCache,
    label: &str,
) -> Result<QuadratureRule> {
    let n = moments.degree;
    let entry = cache.get(n)?;
    let map = moments.reference_frame;
    let vm = entry.vandermonde.apply(&moments.values);
    let weights = vm
        .iter()
        .zip(&entry.box_rule.weights)
        .map(|(s, u)| map.jacobian * (u * s))
        .collect();
    let nodes = entry
        .box_rule
        .nodes
        .iter()
        .map(|q| {
            let p = map.inverse(&Vec3::new(q[0], q[1], q[2]));
            [p.x, p.y, p.z]
        })
        .collect();
    Ok(QuadratureRule::from_parts(
        n,
        nodes,
        weights,
        label.to_owned(),
    ))
}

/// Dot product of the weights with samples taken at the rule nodes.
pub fn apply(rule: &QuadratureRule, samples: &[f64]) -> Result<f64> {
    if samples.len() != rule.weights.len() {
        return Err(Error::LengthMismatch {
            expected: rule.weights.len(),
            actual: samples.len(),
        });
    }
    Ok(rule.weights.iter().zip(samples).map(|(w, s)| w * s).sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub sum_abs: f64,
    pub ratio: f64,
    pub negative_count: usize,
    pub min_weight: f64,
}

pub fn stability_report(rule: &QuadratureRule) -> StabilityReport {
    let sum: f64 = rule.weights.iter().sum();
    let sum_abs: f64 = rule.weights.iter().map(|w| w.abs()).sum();
    StabilityReport {
        sum_abs,
        ratio: sum_abs / sum,
        negative_count: rule.weights.iter().filter(|&&w| w < 0.0).count(),
        min_weight: rule.weights.iter().copied().fold(f64::INFINITY, f64::min),
    }
}

/// The computable factor `vol + sum |w_i|` of the error bound
/// `|int f - Q f| <= (vol + sum |w_i|) E_n(f; B)`, where `E_n(f; B)` is the
/// best uniform approximation error of `f` by degree-`n` polynomials on the
/// bounding box. As the ratio tends to 1 the factor approaches `2 vol`.
pub fn error_bound_factor(rule: &QuadratureRule, vol: f64) -> f64 {
    vol + rule.weights.iter().map(|w| w.abs()).sum::<f64>()
}

#[derive(Serialize, Deserialize)]
struct RuleJson {
    degree: usize,
    nodes: Vec<[f64; 3]>,
    weights: Vec<f64>,
    volume: f64,
    stability_ratio: f64,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    label: String,
}

#[derive(Serialize, Deserialize)]
struct CsvRow {
    x: f64,
    y: f64,
    z: f64,
    w: f64,
}

impl QuadratureRule {
    pub fn write_json<W: Write>(&self, out: W) -> Result<()> {
        let doc = RuleJson {
            degree: self.degree,
            nodes: self.nodes.clone(),
            weights: self.weights.clone(),
            volume: self.volume_estimate,
            stability_ratio: self.stability_ratio,
            label: self.polyhedron_label.clone(),
        };
        serde_json::to_writer_pretty(out, &doc)?;
        Ok(())
    }

    pub fn read_json<R: Read>(source: R) -> Result<Self> {
        let doc: RuleJson = serde_json::from_reader(source)?;
        if doc.nodes.len() != doc.weights.len() {
            return Err(Error::LengthMismatch {
                expected: doc.nodes.len(),
                actual: doc.weights.len(),
            });
        }
        Ok(QuadratureRule::from_parts(
            doc.degree,
            doc.nodes,
            doc.weights,
            doc.label,
        ))
    }

    /// `x,y,z,w` rows with a header line.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut writer = csv::Writer::from_writer(out);
        for (p, &w) in self.nodes.iter().zip(&self.weights) {
            writer.serialize(CsvRow {
                x: p[0],
                y: p[1],
                z: p[2],
                w,
            })?;
        }
        writer.flush()?;
        Ok(())
    }

    /// Reads rows written by [`write_csv`](Self::write_csv). CSV does not carry
    /// the degree, so the caller supplies it.
    pub fn read_csv<R: Read>(source: R, degree: usize) -> Result<Self> {
        let mut reader = csv::Reader::from_reader(source);
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for row in reader.deserialize() {
            let row: CsvRow = row?;
            nodes.push([row.x, row.y, row.z]);
            weights.push(row.w);
        }
        Ok(QuadratureRule::from_parts(
            degree,
            nodes,
            weights,
            String::new(),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::BoundingBox;
    use crate::shapes;

    #[test]
    fn cube_weights_sum_to_volume() {
        let cache = RuleCache::new();
        for n in [0, 1, 2, 5, 10] {
            let r = build_rule(&shapes::cube(), n, &cache).unwrap();
            assert_eq!(r.len(), (n + 1).pow(3));
            assert!((r.volume_estimate - 8.0).abs() <= 1e-12 * 8.0, "n={n}");
        }
    }

    #[test]
    fn tetrahedron_volume_at_degree_four() {
        let r = build_rule(&shapes::tetrahedron(), 4, &RuleCache::new()).unwrap();
        let v = 1.0 / 6.0;
        assert!((r.volume_estimate - v).abs() <= 1e-12 * v);
    }

    #[test]
    fn apply_constants_and_xyz() {
        let cache = RuleCache::new();
        let unit = shapes::axis_box([0.0; 3], [1.0; 3]);
        let r = build_rule(&unit, 3, &cache).unwrap();
        let ones = vec![1.0; r.len()];
        assert!((apply(&r, &ones).unwrap() - 1.0).abs() < 1e-14);
        assert_eq!(apply(&r, &vec![0.0; r.len()]).unwrap(), 0.0);
        let xyz: Vec<f64> = r.nodes.iter().map(|p| p[0] * p[1] * p[2]).collect();
        assert!((apply(&r, &xyz).unwrap() - 0.125).abs() <= 1e-12);
        assert!(matches!(
            apply(&r, &[1.0]),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn nodes_stay_in_the_physical_box() {
        let p = shapes::l_prism();
        let r = build_rule(&p, 6, &RuleCache::new()).unwrap();
        let b: BoundingBox = bounding_box(&p).unwrap();
        assert!(r
            .nodes
            .iter()
            .all(|q| b.contains(&Vec3::new(q[0], q[1], q[2]), 0.0)));
    }

    #[test]
    fn degree_cap() {
        let cache = RuleCache::new();
        assert!(matches!(
            build_rule(&shapes::cube(), MAX_DEGREE + 1, &cache),
            Err(Error::DegreeTooHigh { .. })
        ));
    }

    #[test]
    fn cache_builds_each_degree_once() {
        let cache = RuleCache::new();
        let a = cache.get(4).unwrap();
        let b = cache.get(4).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
        assert_eq!(cache.len(), 1);
    }

    #[test]
    fn stability_and_error_factor() {
        let cube = shapes::cube();
        let r = build_rule(&cube, 6, &RuleCache::new()).unwrap();
        let s = stability_report(&r);
        assert!(s.ratio >= 1.0 - 1e-10);
        assert_eq!(s.ratio, r.stability_ratio);
        let factor = error_bound_factor(&r, 8.0);
        assert!(factor >= 16.0 - 1e-9);
        assert!(factor <= 16.0 + s.sum_abs - 8.0 + 1e-12);
        let vol = r.volume_estimate;
        assert!((error_bound_factor(&r, vol) - vol * (1.0 + r.stability_ratio)).abs() < 1e-12);
    }

    #[test]
    fn json_and_csv_round_trip() {
        let r = build_rule(&shapes::tetrahedron(), 3, &RuleCache::new()).unwrap();
        let mut json = Vec::new();
        r.write_json(&mut json).unwrap();
        let back = QuadratureRule::read_json(json.as_slice()).unwrap();
        assert_eq!(back, r);

        let mut csv = Vec::new();
        r.write_csv(&mut csv).unwrap();
        let text = String::from_utf8(csv.clone()).unwrap();
        assert!(text.starts_with("x,y,z,w\n"));
        let back = QuadratureRule::read_csv(csv.as_slice(), 3).unwrap();
        assert_eq!(back.nodes, r.nodes);
        assert_eq!(back.weights, r.weights);
    }
}
