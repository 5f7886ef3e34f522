use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::pd::{secant_map, PdFunction};
use super::{edgewise_subdivision, quality, ApproxError, SubdivisionQuality};
use crate::complex::SimplicialComplex;
use crate::geometry::{all_nonnegative, barycentric, rational_to_f64, RationalPoint};
use crate::group::GroupAction;

const PRIMES: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn radical_inverse(mut i: u64, base: u32) -> f64 {
    let b = base as f64;
    let mut inv = 1.0 / b;
    let mut out = 0.0;
    while i > 0 {
        out += (i % base as u64) as f64 * inv;
        i /= base as u64;
        inv /= b;
    }
    out
}

/// `count` barycentric points of a `d`-simplex from a randomly shifted
/// Halton sequence, mapped to the simplex by sorting.
pub fn halton_simplex_points(d: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    assert!(d <= PRIMES.len(), "Halton sampling supports up to {} dimensions", PRIMES.len());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shift: Vec<f64> = (0..d).map(|_| rng.random::<f64>()).collect();
    (1..=count as u64)
        .map(|i| {
            let mut u: Vec<f64> = (0..d).map(|k| (radical_inverse(i, PRIMES[k]) + shift[k]).fract()).collect();
            u.sort_by(f64::total_cmp);
            let mut bary = Vec::with_capacity(d + 1);
            let mut prev = 0.0;
            for x in u {
                bary.push(x - prev);
                prev = x;
            }
            bary.push(1.0 - prev);
            bary
        })
        .collect()
}

/// Barycentric lattice of resolution `m` (includes vertices and, for even
/// `m`, edge midpoints).
fn lattice_points(d: usize, m: usize) -> Vec<Vec<f64>> {
    (0..d)
        .map(|_| 0..=m)
        .multi_cartesian_product()
        .filter(|c| c.iter().sum::<usize>() <= m)
        .map(|c| {
            let rest = m - c.iter().sum::<usize>();
            std::iter::once(rest).chain(c).map(|x| x as f64 / m as f64).collect()
        })
        .collect()
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SampleOptions {
    /// Barycentric lattice resolution per simplex.
    pub lattice: usize,
    /// Extra low-discrepancy points per simplex.
    pub halton: usize,
    pub seed: u64,
}

impl Default for SampleOptions {
    fn default() -> Self {
        SampleOptions { lattice: 4, halton: 16, seed: 0 }
    }
}

/// Sampled C¹ distance. Both components are maxima over finitely many
/// points, hence lower bounds for the true suprema.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct C1Gap {
    pub value_gap: f64,
    pub derivative_gap: f64,
    pub samples: usize,
}

impl C1Gap {
    pub fn max(&self) -> f64 {
        self.value_gap.max(self.derivative_gap)
    }
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// A coarse facet index and barycentric coordinates in it.
pub(crate) type Frame = (usize, Vec<Vec<f64>>);

/// For every facet of `fine`, a facet of `coarse` containing it and the
/// barycentric coordinates of its vertices in that facet.
pub(crate) fn coarse_frames(
    coarse: &SimplicialComplex,
    fine: &SimplicialComplex,
) -> Result<Vec<Frame>, ApproxError> {
    fine.facets()
        .iter()
        .map(|tau| {
            let pts = fine.points(tau);
            coarse
                .facets()
                .iter()
                .enumerate()
                .find_map(|(si, s)| {
                    let sp = coarse.points(s);
                    let rows: Option<Vec<Vec<f64>>> = pts
                        .iter()
                        .map(|p| {
                            let bc = barycentric(&sp, p)?;
                            all_nonnegative(&bc).then(|| bc.iter().map(rational_to_f64).collect())
                        })
                        .collect();
                    rows.map(|r| (si, r))
                })
                .ok_or(ApproxError::NotASubdivision)
        })
        .collect()
}

/// Maps barycentric coordinates in a fine facet to those in its coarse frame.
pub(crate) fn to_coarse(rows: &[Vec<f64>], lam: &[f64]) -> Vec<f64> {
    (0..rows[0].len()).map(|k| lam.iter().zip(rows).map(|(l, row)| l * row[k]).sum()).collect()
}

/// Estimates the C¹ distance between `f` and `g`, where the domain of `g`
/// refines that of `f`. Derivatives are compared along every unit edge
/// direction of each simplex of `g`'s domain.
pub fn c1_distance_estimate(f: &dyn PdFunction, g: &dyn PdFunction, options: &SampleOptions) -> Result<C1Gap, ApproxError> {
    let coarse = f.domain();
    let fine = g.domain();
    if coarse.ambient_dim() != fine.ambient_dim() || f.target_dim() != g.target_dim() {
        return Err(ApproxError::Domain("maps live in different spaces".into()));
    }
    let frames = coarse_frames(coarse, fine)?;
    let work = |(ti, tau): (usize, &crate::complex::Simplex)| -> Result<C1Gap, ApproxError> {
        let pts: Vec<&RationalPoint> = fine.points(tau);
        let (si, sigma) = (frames[ti].0, &frames[ti].1);
        let d = tau.dim();
        let coords: Vec<Vec<f64>> = pts.iter().map(|p| p.to_f64()).collect();
        let dirs: Vec<Vec<f64>> = (0..=d)
            .tuple_combinations()
            .map(|(i, j)| {
                let e: Vec<f64> = coords[j].iter().zip(&coords[i]).map(|(a, b)| a - b).collect();
                let l = e.iter().map(|x| x * x).sum::<f64>().sqrt();
                e.into_iter().map(|x| x / l).collect()
            })
            .collect();
        let mut samples = lattice_points(d, options.lattice.max(1));
        samples.extend(halton_simplex_points(d, options.halton, options.seed ^ ti as u64));
        let mut gap = C1Gap { value_gap: 0.0, derivative_gap: 0.0, samples: samples.len() };
        for lam in &samples {
            let mu = to_coarse(sigma, lam);
            gap.value_gap = gap.value_gap.max(dist(&f.eval(si, &mu), &g.eval(ti, lam)));
            for u in &dirs {
                gap.derivative_gap = gap.derivative_gap.max(dist(&f.derivative(si, &mu, u), &g.derivative(ti, lam, u)));
            }
        }
        Ok(gap)
    };
    let items: Vec<(usize, &crate::complex::Simplex)> = fine.facets().iter().enumerate().collect();
    #[cfg(feature = "parallel")]
    let parts: Vec<Result<C1Gap, ApproxError>> = {
        use rayon::prelude::*;
        items.into_par_iter().map(work).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let parts: Vec<Result<C1Gap, ApproxError>> = items.into_iter().map(work).collect();
    parts.into_iter().try_fold(C1Gap { value_gap: 0.0, derivative_gap: 0.0, samples: 0 }, |acc, p| {
        let p = p?;
        Ok(C1Gap {
            value_gap: acc.value_gap.max(p.value_gap),
            derivative_gap: acc.derivative_gap.max(p.derivative_gap),
            samples: acc.samples + p.samples,
        })
    })
}

#[derive(Debug, Clone, Copy)]
pub struct RefineOptions {
    pub max_rounds: usize,
    pub samples: SampleOptions,
}

impl Default for RefineOptions {
    fn default() -> Self {
        RefineOptions { max_rounds: 12, samples: SampleOptions::default() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RoundReport {
    pub round: usize,
    /// Edgewise degree relative to the input complex (`2^round`).
    pub degree: usize,
    pub simplices: usize,
    pub quality: SubdivisionQuality,
    pub gap: C1Gap,
}

#[derive(Debug, Clone)]
pub struct RefineResult {
    pub complex: SimplicialComplex,
    pub action: GroupAction,
    pub rounds: usize,
    pub history: Vec<RoundReport>,
}

/// Refines the domain of `f` by degree-2 edgewise rounds until the secant
/// map is C¹ `delta`-close to `f` (as estimated). Round `r` is the degree
/// `2^r` edgewise subdivision of the input, which is `r` iterated degree-2
/// rounds.
pub fn refine_until_close(
    f: &dyn PdFunction,
    delta: f64,
    g: &GroupAction,
    options: &RefineOptions,
) -> Result<RefineResult, ApproxError> {
    if !(delta > 0.0) {
        return Err(ApproxError::Domain(format!("δ must be positive, got {delta}")));
    }
    let k = f.domain();
    let mut history = Vec::new();
    for round in 0..=options.max_rounds {
        let degree = 1usize << round;
        let (complex, action) = if round == 0 {
            (k.clone(), g.clone())
        } else {
            let e = edgewise_subdivision(k, degree, g)?;
            (e.complex, e.action)
        };
        let secant = secant_map(&complex, f)?;
        let gap = c1_distance_estimate(f, &secant, &options.samples)?;
        history.push(RoundReport { round, degree, simplices: complex.facets().len(), quality: quality(&complex)?, gap });
        if gap.max() < delta {
            return Ok(RefineResult { complex, action, rounds: round, history });
        }
    }
    let last = history.last().expect("at least one round").gap;
    Err(ApproxError::IterationCap {
        rounds: options.max_rounds,
        value_gap: last.value_gap,
        derivative_gap: last.derivative_gap,
    })
}
