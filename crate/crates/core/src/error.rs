use thiserror::Error;

/// Errors raised while loading geometry or building quadrature rules.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("face {face} refers to vertex {index}, but only {count} vertices exist")]
    IndexOutOfRange {
        face: usize,
        index: usize,
        count: usize,
    },

    #[error(
        "degenerate bounding box: extent {extent:e} along axis {axis} (diameter {diameter:e})"
    )]
    DegenerateBox {
        axis: usize,
        extent: f64,
        diameter: f64,
    },

    #[error("polyhedron has no vertices")]
    EmptyPolyhedron,

    #[error("enclosed volume {0:e} is not positive; faces are probably oriented inward")]
    NegativeVolume(f64),

    #[error("face {face} is degenerate (area {area:e})")]
    DegenerateFace { face: usize, area: f64 },

    #[error("ear clipping failed on face {face}; the polygon is not simple")]
    EarClippingFailure { face: usize },

    #[error("{value} lies outside [-1, 1]")]
    Domain { value: f64 },

    #[error("Gauss-Legendre Newton iteration did not converge for k = {k}")]
    ConvergenceFailure { k: usize },

    #[error("Gauss-Legendre order {0} outside the supported range 1..=64")]
    UnsupportedOrder(usize),

    #[error("degenerate triangle (area {0:e})")]
    DegenerateTriangle(f64),

    #[error("moment {index} is not finite")]
    NonFiniteMoment { index: usize },

    #[error("expected {expected} samples, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("degree {degree} exceeds the supported maximum {max}")]
    DegreeTooHigh { degree: usize, max: usize },

    #[error("polyhedron is not convex (tetrahedron volume {volume:e})")]
    NonConvex { volume: f64 },

    #[error("unknown shape {0:?}")]
    UnknownShape(String),

    #[error("polyhedron failed validation: {0}")]
    Invalid(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
