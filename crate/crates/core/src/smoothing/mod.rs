//! Explicit evaluation of the maps used to smooth a PL manifold near its
//! vertices, together with numerical checks of the properties they must
//! have.
//!
//! All evaluators work in binary64. The flat metric on a complex is the
//! unit-edge metric: every simplex is isometric to the standard simplex with
//! unit edges, so distances follow from barycentric coordinates alone
//! (`|Δλ| / √2` inside one simplex).

mod chart;
mod cover;
mod embedding;
mod radial;
mod reparam;

pub use chart::{cone_angle, regular_polygon_chart, PolygonChart};
pub use cover::{cover_metrics, safe_radius, voronoi_ball, CoverMember, SymmetricProductCover};
pub use embedding::{check_embedding, EmbeddingOptions, EmbeddingReport, Pd, SampledMap};
pub use radial::{star_cone, ConeExtension, RadialExtension, DENOMINATOR_FLOOR, UNIT_TOLERANCE};
pub use reparam::{build_phi0, eval_H, eval_h, Phi0, Phi0Options, StarPoint, StarReparam, VertexStar};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::approx::ApproxError;
use crate::complex::ComplexError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SmoothingError {
    #[error("cut-off interval [{a}, {b}] is empty")]
    EmptyInterval { a: f64, b: f64 },
    #[error("radial projection of the zero vector")]
    ZeroVector,
    #[error("map value has norm {norm}, expected 1")]
    NotUnit { norm: f64 },
    #[error("normalisation denominator {value} below {floor}; refine the subdivision")]
    DenominatorUnderflow { value: f64, floor: f64 },
    #[error("point outside the domain: {0}")]
    OutOfDomain(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid cover: {0}")]
    InvalidCover(String),
    #[error("vertex {0} is not an interior vertex of a surface")]
    BoundaryVertex(usize),
    #[error(transparent)]
    Approx(#[from] ApproxError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// 1 below the interval, 0 above.
    Decreasing,
    /// 0 below the interval, 1 above.
    Increasing,
}

/// Smooth monotone step across `[a, b]`, exactly constant outside it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutoffSpec {
    pub a: f64,
    pub b: f64,
    pub orientation: Orientation,
}

impl CutoffSpec {
    pub fn new(a: f64, b: f64, orientation: Orientation) -> Result<Self, SmoothingError> {
        if !(a < b) {
            return Err(SmoothingError::EmptyInterval { a, b });
        }
        Ok(CutoffSpec { a, b, orientation })
    }

    /// θ of the radial extension: 1 for t < 1/3, 0 for t > 2/3.
    pub fn radial() -> Self {
        CutoffSpec { a: 1.0 / 3.0, b: 2.0 / 3.0, orientation: Orientation::Decreasing }
    }

    /// θ of the vertex reparametrisation: 0 for t < 2λ, 1 for t > 1/10.
    pub fn apex(params: &SmoothingParams) -> Self {
        CutoffSpec { a: 2.0 * params.lambda, b: 0.1, orientation: Orientation::Increasing }
    }

    pub fn eval(&self, t: f64) -> f64 {
        let s = (t - self.a) / (self.b - self.a);
        match self.orientation {
            Orientation::Increasing => step(s),
            Orientation::Decreasing => step(1.0 - s),
        }
    }
}

fn e(s: f64) -> f64 {
    if s > 0.0 { (-1.0 / s).exp() } else { 0.0 }
}

/// `e(s) / (e(s) + e(1 - s))`: 0 for s ≤ 0, 1 for s ≥ 1, 1/2 at s = 1/2.
fn step(s: f64) -> f64 {
    if s <= 0.0 {
        0.0
    } else if s >= 1.0 {
        1.0
    } else {
        let (p, q) = (e(s), e(1.0 - s));
        p / (p + q)
    }
}

pub fn cutoff(spec: &CutoffSpec, t: f64) -> f64 {
    spec.eval(t)
}

/// Radii of the excluded vertex neighbourhoods and of the flattened cone.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmoothingParams {
    pub eps1: f64,
    pub eps2: f64,
    pub lambda: f64,
}

impl Default for SmoothingParams {
    fn default() -> Self {
        SmoothingParams { eps1: 0.01, eps2: 0.005, lambda: 0.04 }
    }
}

impl SmoothingParams {
    /// Requires ε₁, ε₂ > 0, 5ε₂ < λ and 2λ < 1/10, so that the apex cut-off
    /// has a nonempty transition interval.
    pub fn validate(&self) -> Result<(), SmoothingError> {
        let bad = |m: String| Err(SmoothingError::InvalidParams(m));
        if !(self.eps1 > 0.0 && self.eps2 > 0.0) {
            return bad(format!("ε₁ = {}, ε₂ = {} must be positive", self.eps1, self.eps2));
        }
        if !(5.0 * self.eps2 < self.lambda) {
            return bad(format!("5ε₂ = {} must be below λ = {}", 5.0 * self.eps2, self.lambda));
        }
        if !(2.0 * self.lambda < 0.1) {
            return bad(format!("2λ = {} must be below 1/10", 2.0 * self.lambda));
        }
        Ok(())
    }
}

pub fn radial_project(p: &[f64]) -> Result<Vec<f64>, SmoothingError> {
    let r = norm(p);
    if r == 0.0 || !r.is_finite() {
        return Err(SmoothingError::ZeroVector);
    }
    Ok(p.iter().map(|x| x / r).collect())
}

pub(crate) fn norm(x: &[f64]) -> f64 {
    x.iter().map(|c| c * c).sum::<f64>().sqrt()
}

/// Cone coordinates `t · v` with `v` a point of a base complex given by a
/// facet index and barycentric coordinates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConePoint {
    pub t: f64,
    pub facet: usize,
    pub bary: Vec<f64>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cutoff_examples() {
        let theta = CutoffSpec::radial();
        assert_eq!(theta.eval(0.2), 1.0);
        assert_eq!(theta.eval(0.9), 0.0);
        // 1/3 and 2/3 are rounded, so the midpoint is only approximately 1/2
        assert!((theta.eval(0.5) - 0.5).abs() < 1e-12);
        let up = CutoffSpec::new(0.0, 1.0, Orientation::Increasing).unwrap();
        assert_eq!(up.eval(0.5), 0.5);
        assert!(CutoffSpec::new(1.0, 1.0, Orientation::Increasing).is_err());
    }

    #[test]
    fn cutoff_is_monotone() {
        let theta = CutoffSpec::radial();
        let values: Vec<f64> = (0..=1000).map(|i| theta.eval(i as f64 / 1000.0)).collect();
        assert!(values.windows(2).all(|w| w[1] <= w[0]));
        assert!(values.iter().all(|v| (0.0..=1.0).contains(v)));
    }

    #[test]
    fn radial_projection() {
        assert_eq!(radial_project(&[3.0, 4.0]).unwrap(), vec![0.6, 0.8]);
        assert_eq!(radial_project(&[0.0, 1.0]).unwrap(), vec![0.0, 1.0]);
        assert_eq!(radial_project(&[0.0, 0.0]), Err(SmoothingError::ZeroVector));
    }

    #[test]
    fn parameter_validation() {
        assert!(SmoothingParams::default().validate().is_ok());
        assert!(SmoothingParams { eps1: 0.01, eps2: 0.01, lambda: 0.04 }.validate().is_err());
        assert!(SmoothingParams { eps1: 0.01, eps2: 0.01, lambda: 0.1 }.validate().is_err());
    }
}
