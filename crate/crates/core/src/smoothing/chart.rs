use std::f64::consts::PI;

use serde::Serialize;

use super::{SmoothingError, StarPoint};
use crate::complex::{Simplex, SimplicialComplex};
use crate::manifold::is_single_cycle;

/// Angle at a vertex of a unit-edge simplex: the edge vectors `eₐ − eₓ`,
/// `e_b − eₓ` have inner product `½ Σ ΔᵢΔ'ᵢ` in barycentric coordinates.
fn unit_edge_angle() -> f64 {
    let (u, w) = ([-1.0, 1.0, 0.0], [-1.0, 0.0, 1.0]);
    let ip = |a: &[f64; 3], b: &[f64; 3]| 0.5 * a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    (ip(&u, &w) / (ip(&u, &u) * ip(&w, &w)).sqrt()).acos()
}

/// Cyclic order of the triangles around an interior vertex `x` of a
/// 2-complex, as `(facet, a, b)` with the triangle `{x, a, b}`.
fn sectors(k: &SimplicialComplex, x: usize) -> Result<Vec<(usize, usize, usize)>, SmoothingError> {
    if k.dim() != 2 || !k.is_pure() {
        return Err(SmoothingError::InvalidParams("need a pure 2-complex".into()));
    }
    let v = Simplex::vertex(x);
    let edges = k.link_facets(&v)?;
    let (link, _) = k.restrict(&edges);
    if !is_single_cycle(&link) {
        return Err(SmoothingError::BoundaryVertex(x));
    }
    let next = |from: usize, at: usize| -> usize {
        edges
            .iter()
            .filter(|e| e.contains_vertex(at))
            .map(|e| e.minus(&Simplex::vertex(at)).vertices()[0])
            .find(|&w| w != from)
            .expect("cycle vertices have two neighbours")
    };
    let start = edges[0].vertices()[0];
    let mut walk = vec![start, edges[0].vertices()[1]];
    while walk.len() < edges.len() {
        let w = next(walk[walk.len() - 2], walk[walk.len() - 1]);
        walk.push(w);
    }
    Ok((0..walk.len())
        .map(|i| {
            let (a, b) = (walk[i], walk[(i + 1) % walk.len()]);
            let tri = Simplex::new(vec![x, a, b]);
            let facet = k.facets().iter().position(|f| *f == tri).expect("link edge spans a triangle");
            (facet, a, b)
        })
        .collect())
}

/// Total angle at the interior vertex `x` in the unit-edge metric.
pub fn cone_angle(k: &SimplicialComplex, x: usize) -> Result<f64, SmoothingError> {
    Ok(sectors(k, x)?.len() as f64 * unit_edge_angle())
}

/// Chart of `star(x)` onto the regular `m`-gon of radius 1, sending the
/// `i`-th triangle affinely onto the `i`-th sector. The sector angle at the
/// centre becomes `2π/m`; for `m = 6` the chart is an isometry.
#[derive(Debug, Clone, Serialize)]
pub struct PolygonChart {
    pub vertex: usize,
    /// `(facet, a, b)` in cyclic order; `a` goes to corner `i`, `b` to `i+1`.
    pub sectors: Vec<(usize, usize, usize)>,
}

impl PolygonChart {
    pub fn corner(&self, i: usize) -> [f64; 2] {
        let a = 2.0 * PI * (i % self.sectors.len()) as f64 / self.sectors.len() as f64;
        [a.cos(), a.sin()]
    }

    pub fn map(&self, k: &SimplicialComplex, p: &StarPoint) -> Result<[f64; 2], SmoothingError> {
        let i = self
            .sectors
            .iter()
            .position(|s| s.0 == p.facet)
            .ok_or_else(|| SmoothingError::OutOfDomain(format!("facet {} is not in the star", p.facet)))?;
        let (_, a, b) = self.sectors[i];
        let f = &k.facets()[p.facet];
        let weight = |v: usize| p.bary[f.vertices().iter().position(|&w| w == v).expect("vertex of facet")];
        let (pa, pb) = (self.corner(i), self.corner(i + 1));
        let (wa, wb) = (weight(a), weight(b));
        Ok([wa * pa[0] + wb * pb[0], wa * pa[1] + wb * pb[1]])
    }
}

pub fn regular_polygon_chart(k: &SimplicialComplex, x: usize) -> Result<PolygonChart, SmoothingError> {
    Ok(PolygonChart { vertex: x, sectors: sectors(k, x)? })
}
