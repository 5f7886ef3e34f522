use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use super::ApproxError;
use crate::complex::volume::check_simplicial_subdivision;
use crate::complex::SimplicialComplex;
use crate::geometry::rational_to_f64;

/// A map that is smooth on each maximal simplex of its domain.
///
/// Points are addressed by a facet index of [`PdFunction::domain`] and
/// barycentric coordinates in that facet. Directions are ambient vectors
/// tangent to the facet. Evaluators must agree on shared faces and be safe to
/// call concurrently.
pub trait PdFunction: Sync {
    fn domain(&self) -> &SimplicialComplex;
    fn target_dim(&self) -> usize;
    fn eval(&self, facet: usize, bary: &[f64]) -> Vec<f64>;
    fn derivative(&self, facet: usize, bary: &[f64], direction: &[f64]) -> Vec<f64>;
}

type ValueFn = dyn Fn(&[f64]) -> Vec<f64> + Send + Sync;
type DerivFn = dyn Fn(&[f64], &[f64]) -> Vec<f64> + Send + Sync;

/// Restriction to a complex of a smooth map defined on the ambient space.
#[derive(Clone)]
pub struct AmbientFunction {
    domain: SimplicialComplex,
    coords: Vec<Vec<f64>>,
    target_dim: usize,
    value: Arc<ValueFn>,
    derivative: Arc<DerivFn>,
}

impl fmt::Debug for AmbientFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AmbientFunction").field("target_dim", &self.target_dim).finish_non_exhaustive()
    }
}

impl AmbientFunction {
    pub fn new(
        domain: SimplicialComplex,
        target_dim: usize,
        value: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
        derivative: impl Fn(&[f64], &[f64]) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        let coords = domain.vertices().iter().map(|v| v.to_f64()).collect();
        AmbientFunction { domain, coords, target_dim, value: Arc::new(value), derivative: Arc::new(derivative) }
    }

    pub fn point(&self, facet: usize, bary: &[f64]) -> Vec<f64> {
        bary_point(&self.coords, self.domain.facets()[facet].vertices(), bary)
    }

    /// Evaluates at an ambient point.
    pub fn eval_point(&self, x: &[f64]) -> Vec<f64> {
        (self.value)(x)
    }
}

fn bary_point(coords: &[Vec<f64>], vertices: &[usize], bary: &[f64]) -> Vec<f64> {
    let n = coords.first().map_or(0, |c| c.len());
    let mut x = vec![0.0; n];
    for (&v, &w) in vertices.iter().zip(bary) {
        for (xi, ci) in x.iter_mut().zip(&coords[v]) {
            *xi += w * ci;
        }
    }
    x
}

impl PdFunction for AmbientFunction {
    fn domain(&self) -> &SimplicialComplex {
        &self.domain
    }

    fn target_dim(&self) -> usize {
        self.target_dim
    }

    fn eval(&self, facet: usize, bary: &[f64]) -> Vec<f64> {
        (self.value)(&self.point(facet, bary))
    }

    fn derivative(&self, facet: usize, bary: &[f64], direction: &[f64]) -> Vec<f64> {
        (self.derivative)(&self.point(facet, bary), direction)
    }
}

/// Names and descriptions of the built-in test maps.
pub const BUILTIN_FUNCTIONS: &[(&str, &str)] = &[
    ("identity", "x ↦ x"),
    ("square", "x ↦ (x_1², …, x_N²)"),
    ("radial", "x ↦ x/|x|"),
    ("paraboloid", "x ↦ (x, |x|²)"),
    ("wave", "x ↦ exp(x_1)·sin(x_N)"),
    ("product", "x ↦ x_1·x_2·…·x_N"),
];

/// One of [`BUILTIN_FUNCTIONS`] restricted to `domain`.
pub fn builtin_function(name: &str, domain: &SimplicialComplex) -> Result<AmbientFunction, ApproxError> {
    let n = domain.ambient_dim();
    let d = domain.clone();
    Ok(match name {
        "identity" => AmbientFunction::new(d, n, |x| x.to_vec(), |_, v| v.to_vec()),
        "square" => AmbientFunction::new(
            d,
            n,
            |x| x.iter().map(|c| c * c).collect(),
            |x, v| x.iter().zip(v).map(|(c, w)| 2.0 * c * w).collect(),
        ),
        "radial" => AmbientFunction::new(
            d,
            n,
            |x| {
                let r = norm(x);
                x.iter().map(|c| c / r).collect()
            },
            |x, v| {
                let r = norm(x);
                let xv: f64 = x.iter().zip(v).map(|(a, b)| a * b).sum();
                x.iter().zip(v).map(|(c, w)| w / r - c * xv / (r * r * r)).collect()
            },
        ),
        "paraboloid" => AmbientFunction::new(
            d,
            n + 1,
            |x| {
                let mut y = x.to_vec();
                y.push(x.iter().map(|c| c * c).sum());
                y
            },
            |x, v| {
                let mut y = v.to_vec();
                y.push(2.0 * x.iter().zip(v).map(|(a, b)| a * b).sum::<f64>());
                y
            },
        ),
        "wave" => {
            if n == 0 {
                return Err(ApproxError::Domain("wave needs a positive ambient dimension".into()));
            }
            AmbientFunction::new(
                d,
                1,
                move |x| vec![x[0].exp() * x[n - 1].sin()],
                move |x, v| {
                    let e = x[0].exp();
                    vec![e * x[n - 1].sin() * v[0] + e * x[n - 1].cos() * v[n - 1]]
                },
            )
        }
        "product" => AmbientFunction::new(
            d,
            1,
            |x| vec![x.iter().product()],
            |x, v| {
                let others = |i: usize| x.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, c)| c).product::<f64>();
                vec![v.iter().enumerate().map(|(i, w)| w * others(i)).sum()]
            },
        ),
        other => return Err(ApproxError::UnknownFunction(other.to_string())),
    })
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|c| c * c).sum::<f64>().sqrt()
}

/// Piecewise-affine map given by its values at the vertices.
#[derive(Clone, Debug)]
pub struct SecantMap {
    domain: SimplicialComplex,
    coords: Vec<Vec<f64>>,
    values: Vec<Vec<f64>>,
}

impl SecantMap {
    pub fn from_values(domain: SimplicialComplex, values: Vec<Vec<f64>>) -> Result<Self, ApproxError> {
        if values.len() != domain.vertex_count() {
            return Err(ApproxError::Domain(format!("{} values for {} vertices", values.len(), domain.vertex_count())));
        }
        let coords = domain.vertices().iter().map(|v| v.to_f64()).collect();
        Ok(SecantMap { domain, coords, values })
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }
}

impl PdFunction for SecantMap {
    fn domain(&self) -> &SimplicialComplex {
        &self.domain
    }

    fn target_dim(&self) -> usize {
        self.values.first().map_or(0, |v| v.len())
    }

    fn eval(&self, facet: usize, bary: &[f64]) -> Vec<f64> {
        bary_point(&self.values, self.domain.facets()[facet].vertices(), bary)
    }

    /// Linear part of the affine piece applied to the tangent component of
    /// `direction` (least squares in the facet's edge frame).
    fn derivative(&self, facet: usize, _bary: &[f64], direction: &[f64]) -> Vec<f64> {
        let vs = self.domain.facets()[facet].vertices();
        let m = self.target_dim();
        let d = vs.len() - 1;
        if d == 0 {
            return vec![0.0; m];
        }
        let n = direction.len();
        let edges = DMatrix::from_fn(n, d, |r, c| self.coords[vs[c + 1]][r] - self.coords[vs[0]][r]);
        let u = DVector::from_column_slice(direction);
        let normal = edges.transpose() * &edges;
        let rhs = edges.transpose() * u;
        let a = normal.lu().solve(&rhs).unwrap_or_else(|| DVector::zeros(d));
        (0..m)
            .map(|k| (0..d).map(|c| a[c] * (self.values[vs[c + 1]][k] - self.values[vs[0]][k])).sum())
            .collect()
    }
}

/// Secant map of `f` on a subdivision `fine` of its domain: affine on each
/// simplex of `fine` and equal to `f` at every vertex.
pub fn secant_map(fine: &SimplicialComplex, f: &dyn PdFunction) -> Result<SecantMap, ApproxError> {
    if fine.ambient_dim() != f.domain().ambient_dim() || !check_simplicial_subdivision(fine, f.domain()).is_ok() {
        return Err(ApproxError::NotASubdivision);
    }
    let values = fine
        .vertices()
        .iter()
        .map(|x| {
            let (facet, bc) = f.domain().locate(x).ok_or(ApproxError::NotASubdivision)?;
            let bc: Vec<f64> = bc.iter().map(rational_to_f64).collect();
            Ok(f.eval(facet, &bc))
        })
        .collect::<Result<Vec<_>, ApproxError>>()?;
    SecantMap::from_values(fine.clone(), values)
}
