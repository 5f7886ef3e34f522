//! Shape control of subdivisions and secant approximation of piecewise
//! differentiable maps.
//!
//! Thickness and diameter are computed from exact squared quantities and
//! converted to binary64 once at the end. Function values and derivatives
//! are binary64 throughout.

mod edgewise;
mod pd;
pub(crate) mod sampling;

pub use edgewise::{edgewise_subdivision, EdgewiseSubdivision};
pub use pd::{builtin_function, secant_map, AmbientFunction, PdFunction, SecantMap, BUILTIN_FUNCTIONS};
pub use sampling::{
    c1_distance_estimate, halton_simplex_points, refine_until_close, C1Gap, RefineOptions, RefineResult, RoundReport,
    SampleOptions,
};

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::complex::{ComplexError, Simplex, SimplicialComplex};
use crate::geometry::{linalg, rational_to_f64, Rational, RationalPoint};
use crate::group::GroupError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ApproxError {
    #[error("degenerate simplex {0:?}")]
    Degenerate(Simplex),
    #[error("subdivision is not equivariant: {0}")]
    NotEquivariant(String),
    #[error("group acts on {found} points but the complex has {expected} vertices")]
    ActionMismatch { expected: usize, found: usize },
    #[error("edgewise degree must be at least 1, got {0}")]
    BadDegree(usize),
    #[error("not a subdivision of the function's domain")]
    NotASubdivision,
    #[error("target δ not reached after {rounds} rounds (last gaps {value_gap:.3e}, {derivative_gap:.3e})")]
    IterationCap { rounds: usize, value_gap: f64, derivative_gap: f64 },
    #[error("unknown function {0:?}")]
    UnknownFunction(String),
    #[error("{0}")]
    Domain(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

fn gram(points: &[&RationalPoint]) -> Vec<Vec<Rational>> {
    let edges: Vec<Vec<Rational>> = points[1..].iter().map(|p| *p - points[0]).collect();
    edges.iter().map(|a| edges.iter().map(|b| linalg::dot(a, b)).collect()).collect()
}

/// Exact squared diameter (longest squared edge length).
pub fn diameter_squared(points: &[&RationalPoint]) -> Rational {
    let mut best = Rational::zero();
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            let d = *a - *b;
            let l = linalg::dot(&d, &d);
            if l > best {
                best = l;
            }
        }
    }
    best
}

/// Exact squared thickness: the squared distance from the barycenter to the
/// nearest facet hyperplane, divided by the squared diameter.
///
/// The height over facet `i` satisfies `h_i² = det G / det G_i` for the Gram
/// matrices of the simplex and of the facet, and the barycenter sits at
/// `h_i / (d+1)`.
pub fn thickness_squared(points: &[&RationalPoint]) -> Option<Rational> {
    let d = points.len().checked_sub(1)?;
    if d == 0 {
        return None;
    }
    let full = linalg::det(&gram(points));
    if full.is_zero() {
        return None;
    }
    let mut min_height = None::<Rational>;
    for i in 0..=d {
        let facet: Vec<&RationalPoint> =
            points.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, p)| *p).collect();
        let fg = if facet.len() == 1 { Rational::from_integer(1.into()) } else { linalg::det(&gram(&facet)) };
        let h2 = &full / fg;
        if min_height.as_ref().is_none_or(|m| &h2 < m) {
            min_height = Some(h2);
        }
    }
    let scale = Rational::from_integer(((d + 1) * (d + 1)).into());
    Some(min_height? / (scale * diameter_squared(points)))
}

/// Thickness of a nondegenerate simplex of positive dimension.
pub fn thickness(points: &[&RationalPoint]) -> Option<f64> {
    thickness_squared(points).map(|t| rational_to_f64(&t).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SubdivisionQuality {
    pub max_diameter: f64,
    pub min_thickness: f64,
}

/// Largest diameter and smallest thickness over the positive-dimensional
/// maximal simplices.
pub fn quality(k: &SimplicialComplex) -> Result<SubdivisionQuality, ApproxError> {
    let mut max_d2 = Rational::zero();
    let mut min_t2: Option<Rational> = None;
    for f in k.facets().iter().filter(|f| f.dim() > 0) {
        let pts = k.points(f);
        let t2 = thickness_squared(&pts).ok_or_else(|| ApproxError::Degenerate(f.clone()))?;
        let d2 = diameter_squared(&pts);
        if d2 > max_d2 {
            max_d2 = d2;
        }
        if min_t2.as_ref().is_none_or(|m| &t2 < m) {
            min_t2 = Some(t2);
        }
    }
    Ok(SubdivisionQuality {
        max_diameter: rational_to_f64(&max_d2).sqrt(),
        min_thickness: min_t2.map_or(1.0, |t| rational_to_f64(&t).sqrt()),
    })
}
