//! Tetrahedra-free quadrature on polyhedra.
//!
//! A rule exact for total degree `n` on a polyhedron `Omega` is supported on
//! the `(n + 1)^3` tensor Gauss-Chebyshev nodes of its bounding box. The
//! weights are `w = u .* (V m)`, where `u` are the Gauss-Chebyshev weights, `V`
//! holds the orthonormal product Chebyshev basis at the nodes and `m` are the
//! moments of that basis over `Omega`, computed face by face with the
//! divergence theorem.
//!
//! ```
//! use polyquad::{build_rule, shapes, RuleCache};
//!
//! let cache = RuleCache::new();
//! let rule = build_rule(&shapes::l_prism(), 6, &cache).unwrap();
//! let integral = rule.integrate(|p| p[0] * p[1] * p[2]);
//! assert!((integral - 0.875).abs() < 1e-12);
//! ```

// tolerance checks are written `!(x <= tol)` so that NaN fails them
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chebyshev;
pub mod diagnostics;
pub mod error;
pub mod geometry;
pub mod moments;
pub mod oracle;
pub mod poly;
pub mod quadrature;
pub mod rule;
pub mod shapes;

pub use error::{Error, Result};
pub use geometry::{Polyhedron, Vec3};
pub use rule::{apply, build_rule, stability_report, QuadratureRule, RuleCache};
