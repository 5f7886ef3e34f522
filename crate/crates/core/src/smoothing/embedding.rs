use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use super::SmoothingError;
use crate::approx::{halton_simplex_points, PdFunction};
use crate::complex::SimplicialComplex;

/// A map evaluable at points of a complex given by facet and barycentric
/// coordinates. `OutOfDomain` marks points where the map is not defined;
/// any other error is a failure.
pub trait SampledMap: Sync {
    fn domain(&self) -> &SimplicialComplex;
    fn eval(&self, facet: usize, bary: &[f64]) -> Result<Vec<f64>, SmoothingError>;
}

/// A piecewise differentiable map viewed as a [`SampledMap`].
pub struct Pd<'a>(pub &'a dyn PdFunction);

impl SampledMap for Pd<'_> {
    fn domain(&self) -> &SimplicialComplex {
        self.0.domain()
    }

    fn eval(&self, facet: usize, bary: &[f64]) -> Result<Vec<f64>, SmoothingError> {
        Ok(self.0.eval(facet, bary))
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct EmbeddingOptions {
    /// Total sample count, spread evenly over the top-dimensional facets.
    pub samples: usize,
    /// Central-difference step in barycentric coordinates.
    pub step: f64,
    pub seed: u64,
    /// Smallest acceptable ratio of image distance to domain distance.
    pub injectivity_threshold: f64,
    /// Smallest acceptable Jacobian singular value.
    pub immersion_threshold: f64,
}

impl Default for EmbeddingOptions {
    fn default() -> Self {
        EmbeddingOptions { samples: 2000, step: 1e-6, seed: 0, injectivity_threshold: 1e-6, immersion_threshold: 1e-6 }
    }
}

/// Worst values found; both checks are sampled, not certified.
#[derive(Debug, Clone, Serialize)]
pub struct EmbeddingReport {
    pub options: EmbeddingOptions,
    pub samples: usize,
    pub pairs: u64,
    /// Minimum over sample pairs of `|F(p) − F(q)| / |p − q|`.
    pub worst_contraction: f64,
    pub worst_pair: Option<(Vec<f64>, Vec<f64>)>,
    /// Extremes of the singular values of the Jacobian on tangent spaces.
    pub min_singular_value: f64,
    pub max_singular_value: f64,
    pub worst_point: Option<(usize, Vec<f64>)>,
    /// Samples whose point or difference stencil left the map's domain.
    pub skipped: usize,
    pub eval_failures: usize,
    pub first_failure: Option<String>,
    pub injective: bool,
    pub immersed: bool,
}

struct Sample {
    facet: usize,
    bary: Vec<f64>,
    point: Vec<f64>,
    image: Vec<f64>,
    sigma: (f64, f64),
}

fn at(coords: &[Vec<f64>], vertices: &[usize], bary: &[f64]) -> Vec<f64> {
    let mut x = vec![0.0; coords[0].len()];
    for (&v, &w) in vertices.iter().zip(bary) {
        for (xi, c) in x.iter_mut().zip(&coords[v]) {
            *xi += w * c;
        }
    }
    x
}

/// Singular values of the Jacobian of `map` on the tangent space of the
/// facet, from central differences along the edge frame `vᵢ − v₀`.
fn singular_values(
    map: &dyn SampledMap,
    coords: &[Vec<f64>],
    facet: usize,
    bary: &[f64],
    h: f64,
) -> Result<(f64, f64), SmoothingError> {
    let vs = map.domain().facets()[facet].vertices();
    let d = vs.len() - 1;
    let n = coords[0].len();
    let mut columns = Vec::with_capacity(d);
    for c in 1..=d {
        let shifted = |sign: f64| {
            let mut b = bary.to_vec();
            b[c] += sign * h;
            b[0] -= sign * h;
            map.eval(facet, &b)
        };
        let (plus, minus) = (shifted(1.0)?, shifted(-1.0)?);
        columns.push(plus.iter().zip(&minus).map(|(p, m)| (p - m) / (2.0 * h)).collect::<Vec<f64>>());
    }
    let m = columns[0].len();
    let js = DMatrix::from_fn(m, d, |r, c| columns[c][r]);
    let edges = DMatrix::from_fn(n, d, |r, c| coords[vs[c + 1]][r] - coords[vs[0]][r]);
    let chol = (edges.transpose() * &edges).cholesky().ok_or_else(|| SmoothingError::OutOfDomain("degenerate facet".into()))?;
    // J in an orthonormal tangent frame is Js · L⁻ᵀ with G = L Lᵀ.
    let linv_t = chol.l().transpose().try_inverse().expect("Cholesky factor is invertible");
    let jt = js * linv_t;
    let eig = SymmetricEigen::new(jt.transpose() * &jt);
    let sv: Vec<f64> = eig.eigenvalues.iter().map(|e| e.max(0.0).sqrt()).collect();
    Ok((sv.iter().copied().fold(f64::INFINITY, f64::min), sv.iter().copied().fold(0.0, f64::max)))
}

/// Samples low-discrepancy interior points of every top-dimensional facet,
/// then reports the worst pairwise contraction (injectivity) and the extreme
/// Jacobian singular values (immersion).
pub fn check_embedding(map: &dyn SampledMap, options: &EmbeddingOptions) -> EmbeddingReport {
    let k = map.domain();
    let coords: Vec<Vec<f64>> = k.vertices().iter().map(|v| v.to_f64()).collect();
    let top: Vec<usize> = (0..k.facets().len()).filter(|&i| k.facets()[i].dim() == k.dim()).collect();
    let d = k.dim();
    let mut jobs = Vec::new();
    for (j, &facet) in top.iter().enumerate() {
        let count = options.samples / top.len() + usize::from(j < options.samples % top.len());
        // pull points towards the barycenter so difference stencils stay inside
        let eta = (2.0 * (d + 1) as f64 * options.step).min(0.5);
        for p in halton_simplex_points(d, count, options.seed ^ facet as u64) {
            let bary: Vec<f64> = p.iter().map(|l| (1.0 - eta) * l + eta / (d + 1) as f64).collect();
            jobs.push((facet, bary));
        }
    }
    let work = |(facet, bary): (usize, Vec<f64>)| -> Result<Sample, SmoothingError> {
        let point = at(&coords, k.facets()[facet].vertices(), &bary);
        let image = map.eval(facet, &bary)?;
        let sigma = singular_values(map, &coords, facet, &bary, options.step)?;
        Ok(Sample { facet, bary, point, image, sigma })
    };
    #[cfg(feature = "parallel")]
    let results: Vec<Result<Sample, SmoothingError>> = {
        use rayon::prelude::*;
        jobs.into_par_iter().map(work).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let results: Vec<Result<Sample, SmoothingError>> = jobs.into_iter().map(work).collect();

    let mut skipped = 0;
    let mut eval_failures = 0;
    let mut first_failure = None;
    let mut samples = Vec::new();
    for r in results {
        match r {
            Ok(s) => samples.push(s),
            Err(SmoothingError::OutOfDomain(_)) => skipped += 1,
            Err(e) => {
                eval_failures += 1;
                first_failure.get_or_insert_with(|| e.to_string());
            }
        }
    }

    let mut worst_point = None;
    let (mut smin, mut smax) = (f64::INFINITY, 0.0f64);
    for s in &samples {
        if s.sigma.0 < smin {
            smin = s.sigma.0;
            worst_point = Some((s.facet, s.bary.clone()));
        }
        smax = smax.max(s.sigma.1);
    }

    let dist = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
    let row = |i: usize| -> (f64, usize) {
        let mut best = (f64::INFINITY, usize::MAX);
        for j in i + 1..samples.len() {
            let dx = dist(&samples[i].point, &samples[j].point);
            if dx == 0.0 {
                continue;
            }
            let r = dist(&samples[i].image, &samples[j].image) / dx;
            if r < best.0 {
                best = (r, j);
            }
        }
        best
    };
    #[cfg(feature = "parallel")]
    let rows: Vec<(f64, usize)> = {
        use rayon::prelude::*;
        (0..samples.len()).into_par_iter().map(row).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<(f64, usize)> = (0..samples.len()).map(row).collect();
    let (worst_contraction, worst_pair) = rows
        .iter()
        .enumerate()
        .filter(|(_, r)| r.1 != usize::MAX)
        .min_by(|a, b| a.1 .0.total_cmp(&b.1 .0))
        .map_or((f64::INFINITY, None), |(i, &(r, j))| (r, Some((samples[i].point.clone(), samples[j].point.clone()))));

    let n = samples.len() as u64;
    let complete = eval_failures == 0 && !samples.is_empty();
    EmbeddingReport {
        options: *options,
        samples: samples.len(),
        pairs: n * n.saturating_sub(1) / 2,
        worst_contraction,
        worst_pair,
        min_singular_value: smin,
        max_singular_value: smax,
        worst_point,
        skipped,
        eval_failures,
        first_failure,
        injective: complete && worst_contraction > options.injectivity_threshold,
        immersed: complete && smin > options.immersion_threshold,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approx::{builtin_function, AmbientFunction};
    use crate::complex::standard_realization;
    use crate::geometry::RationalPoint;

    fn square() -> SimplicialComplex {
        let v = [[0, 0], [1, 0], [1, 1], [0, 1]].iter().map(|c| RationalPoint::from_ints(c)).collect();
        SimplicialComplex::new(v, vec![vec![0, 1, 2], vec![0, 2, 3]]).unwrap()
    }

    #[test]
    fn identity_is_an_isometric_embedding() {
        let f = builtin_function("identity", &square()).unwrap();
        let r = check_embedding(&Pd(&f), &EmbeddingOptions { samples: 300, ..Default::default() });
        assert!((r.worst_contraction - 1.0).abs() < 1e-9);
        assert!((r.min_singular_value - 1.0).abs() < 1e-6 && (r.max_singular_value - 1.0).abs() < 1e-6);
        assert!(r.injective && r.immersed);
    }

    #[test]
    fn constant_map_fails() {
        let f = AmbientFunction::new(square(), 2, |_| vec![1.0, 1.0], |_, _| vec![0.0, 0.0]);
        let r = check_embedding(&Pd(&f), &EmbeddingOptions { samples: 100, ..Default::default() });
        assert_eq!(r.worst_contraction, 0.0);
        assert!(!r.injective && !r.immersed);
    }

    #[test]
    fn singular_values_use_the_tangent_metric() {
        // a triangle in ℝ³ mapped by x ↦ 2x has all singular values 2
        let k = standard_realization(3, vec![vec![0, 1, 2]]).unwrap();
        let f = AmbientFunction::new(k, 3, |x| x.iter().map(|c| 2.0 * c).collect(), |_, v| v.iter().map(|c| 2.0 * c).collect());
        let r = check_embedding(&Pd(&f), &EmbeddingOptions { samples: 50, ..Default::default() });
        assert!((r.min_singular_value - 2.0).abs() < 1e-6 && (r.max_singular_value - 2.0).abs() < 1e-6);
    }
}
