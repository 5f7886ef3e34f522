use std::collections::BTreeMap;

use itertools::Itertools;
use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::SmoothingError;
use crate::complex::{barycentric_subdivision, ComplexError, Simplex, SimplicialComplex};
use crate::group::automorphism_group;

/// Star and link of the vertex `x` in the first barycentric subdivision.
/// With unit edges these are the Voronoi ball about `x` and its boundary.
pub fn voronoi_ball(k: &SimplicialComplex, x: usize) -> Result<(SimplicialComplex, SimplicialComplex), ComplexError> {
    let v = Simplex::vertex(x);
    let sub = barycentric_subdivision(k);
    let i = sub.origin.iter().position(|s| *s == v).ok_or(ComplexError::SimplexNotInComplex(v))?;
    let centre = Simplex::vertex(i);
    Ok((sub.complex.star(&centre)?, sub.complex.link(&centre)?))
}

/// Unit-edge distance from the barycenter of an `i`-face of the standard
/// `n`-simplex to the affine hulls of the opposite facets of the flag
/// simplices containing it. Balls of smaller radius lie in its open star.
pub fn safe_radius(n: usize, i: usize) -> f64 {
    assert!(i <= n, "stratum {i} exceeds dimension {n}");
    let centroid = |face: &[usize]| -> DVector<f64> {
        let mut c = DVector::zeros(n + 1);
        for &v in face {
            c[v] = 1.0 / face.len() as f64;
        }
        c
    };
    let mut best = f64::INFINITY;
    for head in (0..=i).permutations(i + 1) {
        for tail in (i + 1..=n).permutations(n - i) {
            let order: Vec<usize> = head.iter().chain(&tail).copied().collect();
            let flag: Vec<DVector<f64>> = (1..=n + 1).map(|j| centroid(&order[..j])).collect();
            let p = &flag[i];
            let others: Vec<&DVector<f64>> = flag.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, q)| q).collect();
            best = best.min(affine_distance(p, &others) / std::f64::consts::SQRT_2);
        }
    }
    best
}

fn affine_distance(p: &DVector<f64>, hull: &[&DVector<f64>]) -> f64 {
    let base = hull[0];
    if hull.len() == 1 {
        return (p - base).norm();
    }
    let a = DMatrix::from_fn(p.len(), hull.len() - 1, |r, c| hull[c + 1][r] - base[r]);
    let rhs = p - base;
    let x = (a.transpose() * &a).lu().solve(&(a.transpose() * &rhs)).expect("flag vertices are independent");
    (rhs - a * x).norm()
}

/// Product neighbourhood `V_x × S_x` about the barycenter `x` of `face`,
/// given by the radii of its two factors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverMember {
    pub face: Simplex,
    /// Dimension of `face`.
    pub stratum: usize,
    pub v_radius: f64,
    pub s_radius: f64,
}

/// One product neighbourhood for every barycenter of a face of a pure
/// complex.
#[derive(Debug, Clone, Serialize)]
pub struct SymmetricProductCover {
    dim: usize,
    members: Vec<CoverMember>,
}

impl SymmetricProductCover {
    /// Radii depending only on the stratum: `radii[i] = (v, s)`. The `V`
    /// factor of a vertex and the `S` factor of a top face are points, so
    /// those radii are forced to 0.
    pub fn uniform(k: &SimplicialComplex, radii: &[(f64, f64)]) -> Result<Self, SmoothingError> {
        let n = k.dim();
        if radii.len() != n + 1 {
            return Err(SmoothingError::InvalidCover(format!("{} radius pairs for {} strata", radii.len(), n + 1)));
        }
        let members = k
            .simplices()
            .into_iter()
            .map(|face| {
                let i = face.dim();
                let (v, s) = radii[i];
                CoverMember {
                    face,
                    stratum: i,
                    v_radius: if i == 0 { 0.0 } else { v },
                    s_radius: if i == n { 0.0 } else { s },
                }
            })
            .collect();
        Self::from_members(k, members)
    }

    /// Cover with every member at a fixed fraction of its safe radius.
    pub fn proportional(k: &SimplicialComplex, fraction: f64) -> Result<Self, SmoothingError> {
        let n = k.dim();
        let radii: Vec<(f64, f64)> =
            (0..=n).map(|i| (fraction * safe_radius(n, i) / 2f64.sqrt(), fraction * safe_radius(n, i) / 2f64.sqrt())).collect();
        Self::uniform(k, &radii)
    }

    pub fn from_members(k: &SimplicialComplex, members: Vec<CoverMember>) -> Result<Self, SmoothingError> {
        let cover = SymmetricProductCover { dim: k.dim(), members };
        cover.validate(k)?;
        Ok(cover)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn members(&self) -> &[CoverMember] {
        &self.members
    }

    /// Largest `√(v² + s²)` over members of stratum below the top.
    pub fn max_lower_radius(&self) -> f64 {
        self.members
            .iter()
            .filter(|m| m.stratum < self.dim)
            .map(|m| m.v_radius.hypot(m.s_radius))
            .fold(0.0, f64::max)
    }

    /// Checks the product structure, containment in open stars (which makes
    /// members of one stratum disjoint) and invariance under the
    /// automorphism group of `k`.
    pub fn validate(&self, k: &SimplicialComplex) -> Result<(), SmoothingError> {
        let bad = |m: String| Err(SmoothingError::InvalidCover(m));
        if k.is_empty() || !k.is_pure() {
            return bad("base complex must be pure and nonempty".into());
        }
        let n = k.dim();
        let by_face: BTreeMap<&Simplex, &CoverMember> = self.members.iter().map(|m| (&m.face, m)).collect();
        if by_face.len() != self.members.len() || by_face.len() != k.simplices().len() {
            return bad("need exactly one member per face".into());
        }
        for m in &self.members {
            if !k.contains_simplex(&m.face) || m.stratum != m.face.dim() {
                return bad(format!("member {:?} does not match a face", m.face.vertices()));
            }
            if !(m.v_radius >= 0.0 && m.s_radius >= 0.0 && m.v_radius.is_finite() && m.s_radius.is_finite()) {
                return bad(format!("radii of {:?} must be finite and nonnegative", m.face.vertices()));
            }
            if (m.stratum == 0 && m.v_radius != 0.0) || (m.stratum == n && m.s_radius != 0.0) {
                return bad(format!("point factor of {:?} has positive radius", m.face.vertices()));
            }
            let limit = safe_radius(n, m.stratum);
            if m.v_radius.hypot(m.s_radius) >= limit {
                return bad(format!("member {:?} leaves its open star (limit {limit})", m.face.vertices()));
            }
        }
        for g in automorphism_group(k).elements() {
            for m in &self.members {
                let image = by_face[&g.apply_simplex(&m.face)];
                if (image.v_radius, image.s_radius) != (m.v_radius, m.s_radius) {
                    return bad(format!("not invariant under the automorphism {g:?}"));
                }
            }
        }
        Ok(())
    }
}

/// `(fin, cofin)`: the largest `S` radius and the largest `V` radius.
pub fn cover_metrics(cover: &SymmetricProductCover) -> (f64, f64) {
    cover.members.iter().fold((0.0, 0.0), |(f, c), m| (f64::max(f, m.s_radius), f64::max(c, m.v_radius)))
}
