use std::collections::BTreeMap;

use serde::Serialize;

use super::embedding::SampledMap;
use super::{ConePoint, CutoffSpec, Orientation, SmoothingError, SmoothingParams, SymmetricProductCover};
use crate::complex::{Simplex, SimplicialComplex};
use crate::group::automorphism_group;

#[derive(Debug, Clone)]
pub struct Phi0Options {
    /// Bump coefficient `c`; values lie in `[1 − c, 1]`.
    pub coefficient: f64,
    /// Bump amplitude per base facet in `[0, 1]`, averaged over the
    /// automorphism group. Defaults to 1 everywhere.
    pub amplitudes: Option<Vec<f64>>,
}

impl Default for Phi0Options {
    fn default() -> Self {
        Phi0Options { coefficient: 0.1, amplitudes: None }
    }
}

/// Radial profile `φ₀ = 1 − c · a_F · β(λ)` on a pure base complex.
///
/// `β = θ((n+1)^{n+1} Π λᵢ)` with θ increasing from 0 to 1 on `[a, 1]`,
/// where `a` bounds the scaled product on every cover member of a stratum
/// below the top. Hence `φ₀ = 1` on those members (in particular near the
/// vertices), `β` is symmetric in the barycentric coordinates, and with
/// orbit-averaged amplitudes `φ₀` commutes with every automorphism.
#[derive(Debug, Clone, Serialize)]
pub struct Phi0 {
    #[serde(skip)]
    base: SimplicialComplex,
    coefficient: f64,
    amplitudes: Vec<f64>,
    bump: Option<CutoffSpec>,
    scale: f64,
}

impl Phi0 {
    pub fn base(&self) -> &SimplicialComplex {
        &self.base
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    /// Lower end of the bump transition in the scaled product.
    pub fn onset(&self) -> Option<f64> {
        self.bump.map(|b| b.a)
    }

    pub fn eval(&self, facet: usize, bary: &[f64]) -> f64 {
        let Some(bump) = self.bump else { return 1.0 };
        let product: f64 = bary.iter().map(|l| l.max(0.0)).product();
        let beta = bump.eval(self.scale * product);
        if beta == 0.0 {
            return 1.0;
        }
        1.0 - self.coefficient * self.amplitudes[facet] * beta
    }
}

/// Builds `φ₀` on `base` adapted to `cover`.
pub fn build_phi0(base: &SimplicialComplex, cover: &SymmetricProductCover, options: &Phi0Options) -> Result<Phi0, SmoothingError> {
    cover.validate(base)?;
    let bad = |m: String| Err(SmoothingError::InvalidParams(m));
    let c = options.coefficient;
    if !(0.0..1.0).contains(&c) {
        return bad(format!("bump coefficient {c} must lie in [0, 1)"));
    }
    let facets = base.facets();
    let raw = options.amplitudes.clone().unwrap_or_else(|| vec![1.0; facets.len()]);
    if raw.len() != facets.len() || raw.iter().any(|a| !(0.0..=1.0).contains(a)) {
        return bad("need one amplitude in [0, 1] per base facet".into());
    }
    let index: BTreeMap<&Simplex, usize> = facets.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let group = automorphism_group(base);
    let amplitudes: Vec<f64> = facets
        .iter()
        .map(|f| {
            let sum: f64 = group.elements().iter().map(|g| raw[index[&g.apply_simplex(f)]]).sum();
            sum / group.order() as f64
        })
        .collect();
    let n = base.dim();
    let scale = ((n + 1) as f64).powi(n as i32 + 1);
    let bump = if n == 0 || c == 0.0 {
        None
    } else {
        // On a lower member some λⱼ ≤ √2 R while the rest multiply to ≤ n⁻ⁿ.
        let onset = scale / (n as f64).powi(n as i32) * std::f64::consts::SQRT_2 * cover.max_lower_radius();
        if onset >= 1.0 {
            return Err(SmoothingError::InvalidCover(format!("cover too coarse for a bump (onset {onset})")));
        }
        Some(CutoffSpec::new(onset, 1.0, Orientation::Increasing)?)
    };
    Ok(Phi0 { base: base.clone(), coefficient: c, amplitudes, bump, scale })
}

/// `h(t, v) = (φ(t, v), v)` with `φ = θ(t) t + (1 − θ(t)) t φ₀(v)` and θ
/// increasing from 0 at `2λ` to 1 at `1/10`. Defined for `t ≥ 2ε₂`.
pub fn eval_h(p: &ConePoint, phi0: &Phi0, params: &SmoothingParams) -> Result<ConePoint, SmoothingError> {
    params.validate()?;
    if !(p.t >= 2.0 * params.eps2) || p.t > 1.0 {
        return Err(SmoothingError::OutOfDomain(format!("t = {} outside [2ε₂, 1]", p.t)));
    }
    let theta = CutoffSpec::apex(params).eval(p.t);
    if theta == 1.0 {
        return Ok(p.clone());
    }
    let v = phi0.eval(p.facet, &p.bary);
    if !(v > 0.0 && v <= 1.0) {
        return Err(SmoothingError::OutOfDomain(format!("φ₀ = {v} outside (0, 1]")));
    }
    if v == 1.0 {
        return Ok(p.clone());
    }
    let t = theta * p.t + (1.0 - theta) * p.t * v;
    Ok(ConePoint { t, facet: p.facet, bary: p.bary.clone() })
}

/// A point of a complex: facet index and barycentric coordinates in the
/// facet's sorted vertex order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StarPoint {
    pub facet: usize,
    pub bary: Vec<f64>,
}

/// `star(x) = C(lk(x))` in cone coordinates about the vertex `x`.
#[derive(Debug, Clone)]
pub struct VertexStar {
    vertex: usize,
    link: SimplicialComplex,
    /// For each facet of the complex containing `x`, the link facet opposite.
    link_facet: BTreeMap<usize, usize>,
}

impl VertexStar {
    pub fn new(k: &SimplicialComplex, x: usize) -> Result<Self, SmoothingError> {
        let v = Simplex::vertex(x);
        // restrict renumbers in increasing order, so sorted facets stay aligned
        let (link, old_of_new) = k.restrict(&k.link_facets(&v)?);
        let old_facets: Vec<Simplex> = link.facets().iter().map(|f| f.map(|i| old_of_new[i])).collect();
        let link_facet = k
            .facets()
            .iter()
            .enumerate()
            .filter(|(_, f)| f.contains_vertex(x))
            .filter_map(|(i, f)| old_facets.iter().position(|g| *g == f.minus(&v)).map(|j| (i, j)))
            .collect();
        Ok(VertexStar { vertex: x, link, link_facet })
    }

    pub fn vertex(&self) -> usize {
        self.vertex
    }

    pub fn link(&self) -> &SimplicialComplex {
        &self.link
    }

    fn position(&self, k: &SimplicialComplex, facet: usize) -> Result<usize, SmoothingError> {
        k.facets()
            .get(facet)
            .and_then(|f| f.vertices().iter().position(|&v| v == self.vertex))
            .filter(|_| self.link_facet.contains_key(&facet))
            .ok_or_else(|| SmoothingError::OutOfDomain(format!("facet {facet} is not in the star of {}", self.vertex)))
    }

    /// Cone coordinates: `t = 1 − β_x` and `v` the normalised remaining
    /// coordinates on the opposite link facet.
    pub fn to_cone(&self, k: &SimplicialComplex, p: &StarPoint) -> Result<ConePoint, SmoothingError> {
        let px = self.position(k, p.facet)?;
        let rest: Vec<f64> = p.bary.iter().enumerate().filter(|&(i, _)| i != px).map(|(_, b)| *b).collect();
        let t: f64 = rest.iter().sum();
        if t <= 0.0 {
            return Err(SmoothingError::OutOfDomain("cone point".into()));
        }
        Ok(ConePoint { t, facet: self.link_facet[&p.facet], bary: rest.iter().map(|b| b / t).collect() })
    }
}

/// `H(t, v) = h(t, v)` in the cone coordinates of `star(x)`, with `φ₀` built
/// on the link of `x`. The identity wherever `h` is.
#[allow(non_snake_case)]
pub fn eval_H(
    k: &SimplicialComplex,
    star: &VertexStar,
    p: &StarPoint,
    phi0: &Phi0,
    params: &SmoothingParams,
) -> Result<StarPoint, SmoothingError> {
    if phi0.base() != star.link() {
        return Err(SmoothingError::InvalidParams("φ₀ is not built on the link of the vertex".into()));
    }
    let px = star.position(k, p.facet)?;
    let cone = star.to_cone(k, p)?;
    let image = eval_h(&cone, phi0, params)?;
    if image == cone {
        return Ok(p.clone());
    }
    let mut bary = Vec::with_capacity(p.bary.len());
    let mut rest = image.bary.iter();
    for i in 0..p.bary.len() {
        bary.push(if i == px { 1.0 - image.t } else { image.t * rest.next().expect("aligned coordinates") });
    }
    Ok(StarPoint { facet: p.facet, bary })
}

/// `H` on `star(x)` as a map into the ambient space of `k`. Points with
/// `t < 2ε₂` are outside its domain.
pub struct StarReparam<'a> {
    k: &'a SimplicialComplex,
    star: &'a VertexStar,
    phi0: &'a Phi0,
    params: SmoothingParams,
    domain: SimplicialComplex,
    facet_in_k: Vec<usize>,
    coords: Vec<Vec<f64>>,
}

impl<'a> StarReparam<'a> {
    pub fn new(k: &'a SimplicialComplex, star: &'a VertexStar, phi0: &'a Phi0, params: SmoothingParams) -> Result<Self, SmoothingError> {
        params.validate()?;
        let facets = k.star_facets(&Simplex::vertex(star.vertex))?;
        // restrict keeps the vertex order, so barycentric coordinates agree
        let (domain, _) = k.restrict(&facets);
        let facet_in_k = facets
            .iter()
            .map(|f| k.facets().iter().position(|g| g == f).expect("star facet of k"))
            .collect();
        let coords = k.vertices().iter().map(|v| v.to_f64()).collect();
        Ok(StarReparam { k, star, phi0, params, domain, facet_in_k, coords })
    }

    /// The facet of `k` behind a facet of the domain.
    pub fn facet_in_k(&self, facet: usize) -> usize {
        self.facet_in_k[facet]
    }
}

impl SampledMap for StarReparam<'_> {
    fn domain(&self) -> &SimplicialComplex {
        &self.domain
    }

    fn eval(&self, facet: usize, bary: &[f64]) -> Result<Vec<f64>, SmoothingError> {
        let kf = self.facet_in_k[facet];
        let q = eval_H(self.k, self.star, &StarPoint { facet: kf, bary: bary.to_vec() }, self.phi0, &self.params)?;
        let mut x = vec![0.0; self.k.ambient_dim()];
        for (&v, w) in self.k.facets()[kf].vertices().iter().zip(&q.bary) {
            for (xi, c) in x.iter_mut().zip(&self.coords[v]) {
                *xi += w * c;
            }
        }
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::simplex_boundary;
    use crate::group::Permutation;
    use crate::smoothing::SymmetricProductCover;
    use itertools::Itertools;

    fn link_phi0(coefficient: f64) -> (SimplicialComplex, VertexStar, Phi0) {
        let k = simplex_boundary(4);
        let star = VertexStar::new(&k, 0).unwrap();
        let cover = SymmetricProductCover::proportional(star.link(), 0.05).unwrap();
        let phi0 = build_phi0(star.link(), &cover, &Phi0Options { coefficient, amplitudes: None }).unwrap();
        (k, star, phi0)
    }

    #[test]
    fn phi0_range_and_vertices() {
        let (_, star, phi0) = link_phi0(0.1);
        let n = star.link().facets().len();
        assert_eq!(phi0.eval(0, &[1.0, 0.0, 0.0]), 1.0);
        let centre = phi0.eval(0, &[1.0 / 3.0; 3]);
        assert!((0.9..1.0).contains(&centre), "{centre}");
        for f in 0..n {
            for (i, j) in (0..=20).tuple_combinations() {
                if i + j > 20 {
                    continue;
                }
                let b = [i as f64 / 20.0, j as f64 / 20.0, (20 - i - j) as f64 / 20.0];
                assert!((0.9..=1.0).contains(&phi0.eval(f, &b)));
            }
        }
    }

    #[test]
    fn zero_coefficient_is_constant() {
        let (_, _, phi0) = link_phi0(0.0);
        assert_eq!(phi0.eval(1, &[0.2, 0.3, 0.5]), 1.0);
    }

    #[test]
    fn amplitudes_are_symmetrised() {
        let (_, star, _) = link_phi0(0.1);
        let cover = SymmetricProductCover::proportional(star.link(), 0.05).unwrap();
        let raw: Vec<f64> = (0..star.link().facets().len()).map(|i| i as f64 / 4.0).collect();
        let phi0 = build_phi0(star.link(), &cover, &Phi0Options { coefficient: 0.1, amplitudes: Some(raw) }).unwrap();
        let a = phi0.amplitudes();
        assert!(a.iter().all(|x| (x - a[0]).abs() < 1e-15));
    }

    #[test]
    fn h_examples() {
        let (_, _, phi0) = link_phi0(0.1);
        let params = SmoothingParams::default();
        let p = ConePoint { t: 0.5, facet: 2, bary: vec![0.2, 0.3, 0.5] };
        assert_eq!(eval_h(&p, &phi0, &params).unwrap(), p);
        let low = ConePoint { t: 0.05, facet: 0, bary: vec![1.0 / 3.0; 3] };
        let image = eval_h(&low, &phi0, &params).unwrap();
        assert!((image.t - 0.05 * phi0.eval(0, &low.bary)).abs() < 1e-15);
        let too_low = ConePoint { t: 0.001, ..low };
        assert!(eval_h(&too_low, &phi0, &params).is_err());
    }

    #[test]
    fn h_is_monotone_in_t() {
        let (_, _, phi0) = link_phi0(0.1);
        let params = SmoothingParams::default();
        let ts: Vec<f64> = (0..=1000).map(|i| 0.01 + 0.99 * i as f64 / 1000.0).collect();
        let images: Vec<f64> = ts
            .iter()
            .map(|&t| eval_h(&ConePoint { t, facet: 0, bary: vec![1.0 / 3.0; 3] }, &phi0, &params).unwrap().t)
            .collect();
        assert!(images.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn big_h_is_identity_away_from_the_vertex() {
        let (k, star, phi0) = link_phi0(0.1);
        let params = SmoothingParams::default();
        let facet = k.facets().iter().position(|f| f.contains_vertex(0)).unwrap();
        let p = StarPoint { facet, bary: vec![0.6, 0.1, 0.1, 0.2] };
        assert_eq!(eval_H(&k, &star, &p, &phi0, &params).unwrap(), p);
        let near = StarPoint { facet, bary: vec![0.94, 0.02, 0.02, 0.02] };
        let image = eval_H(&k, &star, &near, &phi0, &params).unwrap();
        assert!(image.bary[0] > near.bary[0]);
    }

    #[test]
    fn big_h_is_equivariant() {
        let (k, star, phi0) = link_phi0(0.1);
        let params = SmoothingParams::default();
        let act = |g: &Permutation, p: &StarPoint| -> StarPoint {
            let f = &k.facets()[p.facet];
            let image = g.apply_simplex(f);
            let facet = k.facets().iter().position(|s| *s == image).unwrap();
            let mut bary = vec![0.0; p.bary.len()];
            for (i, &v) in f.vertices().iter().enumerate() {
                let j = image.vertices().iter().position(|&w| w == g.apply(v)).unwrap();
                bary[j] = p.bary[i];
            }
            StarPoint { facet, bary }
        };
        let p = StarPoint { facet: 0, bary: vec![0.95, 0.03, 0.015, 0.005] };
        for perm in (1..5).permutations(4) {
            let g = Permutation::new(std::iter::once(0).chain(perm).collect()).unwrap();
            let lhs = eval_H(&k, &star, &act(&g, &p), &phi0, &params).unwrap();
            let rhs = act(&g, &eval_H(&k, &star, &p, &phi0, &params).unwrap());
            assert_eq!(lhs.facet, rhs.facet);
            assert!(lhs.bary.iter().zip(&rhs.bary).all(|(a, b)| (a - b).abs() < 1e-12));
        }
    }

    #[test]
    fn h_embeds_the_star() {
        let (k, star, phi0) = link_phi0(0.1);
        let map = StarReparam::new(&k, &star, &phi0, SmoothingParams::default()).unwrap();
        let r = crate::smoothing::check_embedding(&map, &crate::smoothing::EmbeddingOptions { samples: 400, ..Default::default() });
        assert_eq!(r.eval_failures, 0);
        assert!(r.injective && r.immersed, "{r:?}");
    }
}
