//! Integral homology, surface classification and the vertex-link test for
//! PL manifolds.
//!
//! Links of dimension at most two are decided exactly. For three-dimensional
//! links only necessary conditions are checked, and verdicts say so.

mod homology;
mod surface;

pub use homology::{homology, smith_normal_form, HomologyGroup, HomologyProfile};
pub use surface::{classify_closed_surface, is_ball, is_single_cycle, SurfaceClass};

use serde::Serialize;
use thiserror::Error;

use crate::complex::{Simplex, SimplicialComplex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ManifoldError {
    #[error("complex is not pure of dimension {0}")]
    NonPure(usize),
    #[error("link dimension {0} is not supported")]
    UnsupportedDimension(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkVerdict {
    /// Decided: a PL sphere.
    Sphere,
    /// Decided: a PL ball (boundary point).
    Ball,
    /// Decided: neither sphere nor ball.
    NotSphere,
    /// Closed 3-manifold with the homology of S³; not a decision.
    NecessaryConditionsPassed,
}

/// Whether `link` is a PL `d`-sphere, for `d ≤ 3`.
pub fn is_pl_sphere_link(link: &SimplicialComplex, d: usize) -> Result<LinkVerdict, ManifoldError> {
    let yes = |b: bool| if b { LinkVerdict::Sphere } else { LinkVerdict::NotSphere };
    Ok(match d {
        0 => yes(link.vertex_count() == 2 && link.facets().iter().all(|f| f.len() == 1)),
        1 => yes(is_single_cycle(link)),
        2 => yes(classify_closed_surface(link) == SurfaceClass::Sphere),
        3 => {
            if is_closed_3_manifold(link)
                && link.euler_characteristic() == 0
                && homology(link).is_sphere(3)
            {
                LinkVerdict::NecessaryConditionsPassed
            } else {
                LinkVerdict::NotSphere
            }
        }
        _ => return Err(ManifoldError::UnsupportedDimension(d)),
    })
}

/// Pure, connected, every triangle in exactly two tetrahedra, every vertex
/// link a 2-sphere.
fn is_closed_3_manifold(k: &SimplicialComplex) -> bool {
    if k.is_empty() || k.dim() != 3 || !k.is_pure() || !surface::is_connected(k) {
        return false;
    }
    let mut count = std::collections::BTreeMap::<Simplex, usize>::new();
    for f in k.facets() {
        for t in f.facets() {
            *count.entry(t).or_default() += 1;
        }
    }
    count.values().all(|&c| c == 2)
        && (0..k.vertex_count()).all(|v| {
            k.link(&Simplex::vertex(v)).is_ok_and(|l| classify_closed_surface(&l) == SurfaceClass::Sphere)
        })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    VerifiedManifold,
    VerifiedNotManifold,
    NecessaryConditionsPassed,
    Failed,
}

#[derive(Debug, Clone, Serialize)]
pub struct VertexDiagnostic {
    pub vertex: usize,
    pub link_vertices: usize,
    pub link_facets: usize,
    pub link_euler: i64,
    pub verdict: LinkVerdict,
}

#[derive(Debug, Clone, Serialize)]
pub struct ManifoldReport {
    pub dimension: usize,
    pub verdict: Verdict,
    /// Some vertex link is a ball; such verdicts are partial.
    pub has_boundary: bool,
    pub vertices: Vec<VertexDiagnostic>,
}

/// Vertex-link test for a pure `n`-complex, `n ≤ 4`.
///
/// A link that is neither sphere nor ball gives `VerifiedNotManifold`. If
/// every link is a decided sphere the verdict is `VerifiedManifold`. Links
/// that only pass necessary conditions (n = 4), or ball links, give
/// `NecessaryConditionsPassed`.
pub fn check_pl_manifold(k: &SimplicialComplex, n: usize) -> Result<ManifoldReport, ManifoldError> {
    if n > 4 {
        return Err(ManifoldError::UnsupportedDimension(n));
    }
    if k.is_empty() || k.dim() != n || !k.is_pure() {
        return Err(ManifoldError::NonPure(n));
    }
    let diagnose = |v: usize| -> VertexDiagnostic {
        let link = k.link(&Simplex::vertex(v)).expect("every vertex lies in a facet");
        let verdict = if n == 0 {
            LinkVerdict::Sphere
        } else {
            match is_pl_sphere_link(&link, n - 1).expect("link dimension at most three") {
                LinkVerdict::NotSphere if n - 1 <= 2 && is_ball(&link, n - 1) => LinkVerdict::Ball,
                other => other,
            }
        };
        VertexDiagnostic {
            vertex: v,
            link_vertices: link.vertex_count(),
            link_facets: link.facets().len(),
            link_euler: link.euler_characteristic(),
            verdict,
        }
    };
    #[cfg(feature = "parallel")]
    let vertices: Vec<VertexDiagnostic> = {
        use rayon::prelude::*;
        (0..k.vertex_count()).into_par_iter().map(diagnose).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let vertices: Vec<VertexDiagnostic> = (0..k.vertex_count()).map(diagnose).collect();

    let has = |x: LinkVerdict| vertices.iter().any(|d| d.verdict == x);
    let has_boundary = has(LinkVerdict::Ball);
    let verdict = if has(LinkVerdict::NotSphere) {
        Verdict::VerifiedNotManifold
    } else if has_boundary || has(LinkVerdict::NecessaryConditionsPassed) {
        Verdict::NecessaryConditionsPassed
    } else {
        Verdict::VerifiedManifold
    };
    Ok(ManifoldReport { dimension: n, verdict, has_boundary, vertices })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{barycentric_subdivision, simplex_boundary, standard_realization};

    fn torus() -> SimplicialComplex {
        standard_realization(
            7,
            (0..7).flat_map(|i| [vec![i, (i + 1) % 7, (i + 3) % 7], vec![i, (i + 2) % 7, (i + 3) % 7]]).collect(),
        )
        .unwrap()
    }

    #[test]
    fn link_verdicts() {
        assert_eq!(is_pl_sphere_link(&simplex_boundary(3), 2), Ok(LinkVerdict::Sphere));
        assert_eq!(is_pl_sphere_link(&simplex_boundary(4), 3), Ok(LinkVerdict::NecessaryConditionsPassed));
        assert_eq!(is_pl_sphere_link(&torus(), 2), Ok(LinkVerdict::NotSphere));
        assert_eq!(is_pl_sphere_link(&simplex_boundary(1), 0), Ok(LinkVerdict::Sphere));
        assert_eq!(is_pl_sphere_link(&simplex_boundary(5), 4), Err(ManifoldError::UnsupportedDimension(4)));
    }

    #[test]
    fn manifold_verdicts() {
        assert_eq!(check_pl_manifold(&simplex_boundary(4), 3).unwrap().verdict, Verdict::VerifiedManifold);
        assert_eq!(check_pl_manifold(&simplex_boundary(5), 4).unwrap().verdict, Verdict::NecessaryConditionsPassed);
        let glued = standard_realization(7, vec![vec![0, 1, 2, 3], vec![0, 4, 5, 6]]).unwrap();
        let report = check_pl_manifold(&glued, 3).unwrap();
        assert_eq!(report.verdict, Verdict::VerifiedNotManifold);
        assert_eq!(report.vertices[0].verdict, LinkVerdict::NotSphere);
        assert!(check_pl_manifold(&torus(), 2).unwrap().verdict == Verdict::VerifiedManifold);
    }

    #[test]
    fn boundary_is_partial() {
        let tet = standard_realization(4, vec![vec![0, 1, 2, 3]]).unwrap();
        let report = check_pl_manifold(&tet, 3).unwrap();
        assert_eq!(report.verdict, Verdict::NecessaryConditionsPassed);
        assert!(report.has_boundary);
    }

    #[test]
    fn verdicts_survive_subdivision() {
        for (k, n) in [(simplex_boundary(4), 3), (torus(), 2)] {
            let before = check_pl_manifold(&k, n).unwrap().verdict;
            let after = check_pl_manifold(&barycentric_subdivision(&k).complex, n).unwrap().verdict;
            assert_eq!(before, after);
        }
    }

    #[test]
    fn non_pure_is_an_error() {
        let k = standard_realization(4, vec![vec![0, 1, 2], vec![2, 3]]).unwrap();
        assert_eq!(check_pl_manifold(&k, 2).unwrap_err(), ManifoldError::NonPure(2));
    }
}
