//! Geometric simplicial complexes and cell complexes.

mod cell_complex;
mod subdivide;
mod validate;
pub mod volume;

pub use cell_complex::CellComplex;
pub use subdivide::{
    barycentric_subdivision, closed_cone, extend_subdivision, star_subdivide, BarycentricSubdivision,
};
pub use validate::{validate_complex, validate_simplex_set, ValidationReport, Violation};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use itertools::Itertools;
use num_traits::Signed;
use serde::Serialize;
use thiserror::Error;

use crate::geometry::{barycentric, ConvexCell, GeometryError, Rational, RationalPoint};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("simplex {simplex} entry {entry}: vertex index {index} out of range ({count} vertices)")]
    IndexOutOfRange { simplex: usize, entry: usize, index: usize, count: usize },
    #[error("simplex {0:?} is not in the complex")]
    SimplexNotInComplex(Simplex),
    #[error("point {0:?} lies outside the complex")]
    PointOutsideComplex(RationalPoint),
    #[error("invalid cell complex: {0}")]
    InvalidCellComplex(String),
    #[error("not a subdivision: {0}")]
    NotASubdivision(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// A simplex as a sorted set of vertex indices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Simplex(Vec<usize>);

impl Simplex {
    pub fn new(mut vertices: Vec<usize>) -> Simplex {
        vertices.sort_unstable();
        vertices.dedup();
        Simplex(vertices)
    }

    pub fn vertex(v: usize) -> Simplex {
        Simplex(vec![v])
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Dimension; the empty simplex has none.
    pub fn dim(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    /// Whether `other` is a face of `self`.
    pub fn has_face(&self, other: &Simplex) -> bool {
        other.0.iter().all(|v| self.contains_vertex(*v))
    }

    /// All nonempty faces, including `self`.
    pub fn faces(&self) -> impl Iterator<Item = Simplex> + '_ {
        (1..=self.0.len()).flat_map(move |k| self.0.iter().copied().combinations(k).map(Simplex))
    }

    /// Codimension-one faces.
    pub fn facets(&self) -> Vec<Simplex> {
        if self.0.len() <= 1 {
            return Vec::new();
        }
        self.0.iter().copied().combinations(self.0.len() - 1).map(Simplex).collect()
    }

    pub fn union(&self, other: &Simplex) -> Simplex {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Simplex::new(v)
    }

    pub fn minus(&self, other: &Simplex) -> Simplex {
        Simplex(self.0.iter().copied().filter(|v| !other.contains_vertex(*v)).collect())
    }

    pub fn is_disjoint(&self, other: &Simplex) -> bool {
        self.0.iter().all(|v| !other.contains_vertex(*v))
    }

    /// Image under a vertex map.
    pub fn map(&self, f: impl Fn(usize) -> usize) -> Simplex {
        Simplex::new(self.0.iter().map(|&v| f(v)).collect())
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl From<Vec<usize>> for Simplex {
    fn from(v: Vec<usize>) -> Self {
        Simplex::new(v)
    }
}

/// Finite simplicial complex with an exact embedding in ℝ^N.
///
/// Only maximal simplices are stored; every vertex belongs to at least one
/// of them (isolated vertices are kept as 0-simplices).
#[derive(Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    ambient_dim: usize,
    vertices: Vec<RationalPoint>,
    facets: Vec<Simplex>,
}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SimplicialComplex")
            .field("vertices", &self.vertices)
            .field("facets", &self.facets)
            .finish()
    }
}

impl SimplicialComplex {
    pub fn new(vertices: Vec<RationalPoint>, simplices: Vec<Vec<usize>>) -> Result<Self, ComplexError> {
        let ambient_dim = vertices.first().map_or(0, |v| v.dim());
        Self::with_ambient(ambient_dim, vertices, simplices)
    }

    /// Like [`SimplicialComplex::new`] but with an explicit ambient dimension,
    /// which matters for the empty complex.
    pub fn with_ambient(
        ambient_dim: usize,
        vertices: Vec<RationalPoint>,
        simplices: Vec<Vec<usize>>,
    ) -> Result<Self, ComplexError> {
        for v in &vertices {
            if v.dim() != ambient_dim {
                return Err(GeometryError::DimensionMismatch { expected: ambient_dim, found: v.dim() }.into());
            }
        }
        let count = vertices.len();
        for (si, s) in simplices.iter().enumerate() {
            for (entry, &index) in s.iter().enumerate() {
                if index >= count {
                    return Err(ComplexError::IndexOutOfRange { simplex: si, entry, index, count });
                }
            }
        }
        let mut all: Vec<Simplex> = simplices.into_iter().map(Simplex::new).filter(|s| !s.is_empty()).collect();
        let used: BTreeSet<usize> = all.iter().flat_map(|s| s.0.iter().copied()).collect();
        all.extend((0..count).filter(|v| !used.contains(v)).map(Simplex::vertex));
        Ok(SimplicialComplex { ambient_dim, vertices, facets: maximal_simplices(all) })
    }

    pub fn empty(ambient_dim: usize) -> Self {
        SimplicialComplex { ambient_dim, vertices: Vec::new(), facets: Vec::new() }
    }

    pub(crate) fn from_parts_unchecked(ambient_dim: usize, vertices: Vec<RationalPoint>, facets: Vec<Simplex>) -> Self {
        SimplicialComplex { ambient_dim, vertices, facets: maximal_simplices(facets) }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn vertices(&self) -> &[RationalPoint] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &RationalPoint {
        &self.vertices[i]
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Maximal simplices in sorted order.
    pub fn facets(&self) -> &[Simplex] {
        &self.facets
    }

    pub fn is_empty(&self) -> bool {
        self.facets.is_empty()
    }

    /// Largest simplex dimension (0 for the empty complex).
    pub fn dim(&self) -> usize {
        self.facets.iter().map(Simplex::dim).max().unwrap_or(0)
    }

    pub fn is_pure(&self) -> bool {
        let d = self.dim();
        self.facets.iter().all(|f| f.dim() == d)
    }

    /// Every simplex of the complex (face closure of the facets).
    pub fn simplices(&self) -> BTreeSet<Simplex> {
        self.facets.iter().flat_map(|f| f.faces()).collect()
    }

    pub fn simplices_of_dim(&self, k: usize) -> BTreeSet<Simplex> {
        self.facets
            .iter()
            .filter(|f| f.len() > k)
            .flat_map(|f| f.0.iter().copied().combinations(k + 1).map(Simplex))
            .collect()
    }

    /// Number of simplices per dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        if self.is_empty() {
            return Vec::new();
        }
        let mut f = vec![0; self.dim() + 1];
        for s in self.simplices() {
            f[s.dim()] += 1;
        }
        f
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(d, &n)| if d % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum()
    }

    pub fn contains_simplex(&self, s: &Simplex) -> bool {
        !s.is_empty() && self.facets.iter().any(|f| f.has_face(s))
    }

    pub fn points(&self, s: &Simplex) -> Vec<&RationalPoint> {
        s.0.iter().map(|&v| &self.vertices[v]).collect()
    }

    pub fn cell(&self, s: &Simplex) -> ConvexCell {
        let pts: Vec<RationalPoint> = s.0.iter().map(|&v| self.vertices[v].clone()).collect();
        ConvexCell::simplex(&pts).expect("simplex vertices share an ambient space")
    }

    pub fn barycenter(&self, s: &Simplex) -> RationalPoint {
        RationalPoint::mean(&self.points(s))
    }

    /// Index of the vertex at `p`, if any.
    pub fn vertex_index(&self, p: &RationalPoint) -> Option<usize> {
        self.vertices.iter().position(|v| v == p)
    }

    /// Facets as point sets; equal for complexes that differ only in vertex
    /// numbering.
    pub fn geometric_facets(&self) -> BTreeSet<BTreeSet<RationalPoint>> {
        self.facets.iter().map(|f| f.0.iter().map(|&v| self.vertices[v].clone()).collect()).collect()
    }

    /// Vertex-position lookup table.
    pub fn vertex_lookup(&self) -> BTreeMap<RationalPoint, usize> {
        self.vertices.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect()
    }

    /// Finds a facet containing `x`, with barycentric coordinates of `x` in it.
    pub fn locate(&self, x: &RationalPoint) -> Option<(usize, Vec<Rational>)> {
        self.facets.iter().enumerate().find_map(|(i, f)| {
            let bc = barycentric(&self.points(f), x)?;
            bc.iter().all(|c| !c.is_negative()).then_some((i, bc))
        })
    }

    /// The simplex containing `x` in its relative interior.
    pub fn support(&self, x: &RationalPoint) -> Result<Simplex, ComplexError> {
        let (fi, bc) = self.locate(x).ok_or_else(|| ComplexError::PointOutsideComplex(x.clone()))?;
        let f = &self.facets[fi];
        Ok(Simplex(
            f.0.iter().zip(&bc).filter(|(_, c)| c.is_positive()).map(|(&v, _)| v).collect(),
        ))
    }

    /// Facets containing `s`.
    pub fn cofacets(&self, s: &Simplex) -> Vec<&Simplex> {
        self.facets.iter().filter(|f| f.has_face(s)).collect()
    }

    /// Maximal simplices of the star of `s`, in this complex's indexing.
    pub fn star_facets(&self, s: &Simplex) -> Result<Vec<Simplex>, ComplexError> {
        let out: Vec<Simplex> = self.cofacets(s).into_iter().cloned().collect();
        if out.is_empty() || s.is_empty() {
            return Err(ComplexError::SimplexNotInComplex(s.clone()));
        }
        Ok(out)
    }

    /// Maximal simplices of the link of `s`, in this complex's indexing.
    pub fn link_facets(&self, s: &Simplex) -> Result<Vec<Simplex>, ComplexError> {
        let star = self.star_facets(s)?;
        Ok(maximal_simplices(star.iter().map(|f| f.minus(s)).filter(|f| !f.is_empty()).collect()))
    }

    /// Smallest subcomplex containing every simplex that contains `s`.
    pub fn star(&self, s: &Simplex) -> Result<SimplicialComplex, ComplexError> {
        Ok(self.restrict(&self.star_facets(s)?).0)
    }

    /// Simplices disjoint from `s` that span a simplex of the complex with it.
    pub fn link(&self, s: &Simplex) -> Result<SimplicialComplex, ComplexError> {
        Ok(self.restrict(&self.link_facets(s)?).0)
    }

    /// Subcomplex generated by `facets`, reindexed compactly. The second value
    /// maps new vertex indices to indices in `self`.
    pub fn restrict(&self, facets: &[Simplex]) -> (SimplicialComplex, Vec<usize>) {
        let used: BTreeSet<usize> = facets.iter().flat_map(|f| f.0.iter().copied()).collect();
        let old_of_new: Vec<usize> = used.into_iter().collect();
        let new_of_old: BTreeMap<usize, usize> = old_of_new.iter().enumerate().map(|(n, &o)| (o, n)).collect();
        let vertices = old_of_new.iter().map(|&o| self.vertices[o].clone()).collect();
        let facets = facets.iter().map(|f| f.map(|v| new_of_old[&v])).collect();
        (SimplicialComplex::from_parts_unchecked(self.ambient_dim, vertices, facets), old_of_new)
    }

    /// Same complex with the vertex coordinates replaced.
    pub fn with_vertices(&self, vertices: Vec<RationalPoint>) -> Result<SimplicialComplex, ComplexError> {
        let simplices = self.facets.iter().map(|f| f.0.clone()).collect();
        SimplicialComplex::new(vertices, simplices)
    }

    /// Combinatorial vertex degree: number of facets containing `v`.
    pub fn facet_degree(&self, v: usize) -> usize {
        self.facets.iter().filter(|f| f.contains_vertex(v)).count()
    }

    /// Sum of facet volumes (Gram determinant, converted to binary64).
    pub fn volume_f64(&self) -> f64 {
        self.facets.iter().map(|f| volume::simplex_volume_f64(&self.points(f))).sum()
    }
}

/// Keeps only simplices that are not faces of other listed simplices.
pub(crate) fn maximal_simplices(mut simplices: Vec<Simplex>) -> Vec<Simplex> {
    simplices.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    simplices.dedup();
    let mut kept: Vec<Simplex> = Vec::new();
    for s in simplices {
        if !kept.iter().any(|k| k.len() > s.len() && k.has_face(&s)) {
            kept.push(s);
        }
    }
    kept.sort();
    kept
}

/// Boundary of the standard `n`-simplex, with vertices at the standard basis
/// of ℝ^{n+1}.
pub fn simplex_boundary(n: usize) -> SimplicialComplex {
    let vertices = (0..=n).map(|i| RationalPoint::basis(n + 1, i)).collect();
    let facets = (0..=n).combinations(n).collect();
    SimplicialComplex::new(vertices, facets).expect("valid boundary complex")
}

/// Abstract complex realised with vertex `i` at the `i`-th standard basis
/// vector; every abstract complex is embedded properly this way.
pub fn standard_realization(vertex_count: usize, facets: Vec<Vec<usize>>) -> Result<SimplicialComplex, ComplexError> {
    let vertices = (0..vertex_count).map(|i| RationalPoint::basis(vertex_count, i)).collect();
    SimplicialComplex::new(vertices, facets)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cone_over_hexagon() -> SimplicialComplex {
        let mut vertices = vec![RationalPoint::from_ints(&[0, 0])];
        let ring = [(2, 0), (1, 2), (-1, 2), (-2, 0), (-1, -2), (1, -2)];
        vertices.extend(ring.iter().map(|&(x, y)| RationalPoint::from_ints(&[x, y])));
        let facets = (0..6).map(|i| vec![0, 1 + i, 1 + (i + 1) % 6]).collect();
        SimplicialComplex::new(vertices, facets).unwrap()
    }

    #[test]
    fn links_in_tetrahedron_boundary() {
        let k = simplex_boundary(3);
        let lv = k.link(&Simplex::vertex(0)).unwrap();
        assert_eq!(lv.facets().len(), 3);
        assert!(lv.facets().iter().all(|f| f.len() == 2));
        assert_eq!(lv.vertex_count(), 3);
        let le = k.link(&Simplex::new(vec![0, 1])).unwrap();
        assert_eq!(le.facets().len(), 2);
        assert!(le.facets().iter().all(|f| f.len() == 1));
    }

    #[test]
    fn link_of_cone_point_is_hexagon() {
        let k = cone_over_hexagon();
        let l = k.link(&Simplex::vertex(0)).unwrap();
        assert_eq!(l.facets().len(), 6);
        assert_eq!(l.euler_characteristic(), 0);
        assert!(k.link(&Simplex::new(vec![0, 3])).is_ok());
        assert!(matches!(
            k.link(&Simplex::new(vec![1, 4])),
            Err(ComplexError::SimplexNotInComplex(_))
        ));
    }

    #[test]
    fn support_examples() {
        let tri = SimplicialComplex::new(
            vec![
                RationalPoint::from_ints(&[0, 0]),
                RationalPoint::from_ints(&[1, 0]),
                RationalPoint::from_ints(&[0, 1]),
            ],
            vec![vec![0, 1, 2]],
        )
        .unwrap();
        assert_eq!(tri.support(&RationalPoint::from_ints(&[1, 0])).unwrap(), Simplex::vertex(1));
        assert_eq!(
            tri.support(&RationalPoint::from_ratios(&[(1, 2), (0, 1)])).unwrap(),
            Simplex::new(vec![0, 1])
        );
        assert_eq!(
            tri.support(&RationalPoint::from_ratios(&[(1, 3), (1, 3)])).unwrap(),
            Simplex::new(vec![0, 1, 2])
        );
        assert!(matches!(
            tri.support(&RationalPoint::from_ints(&[1, 1])),
            Err(ComplexError::PointOutsideComplex(_))
        ));
    }

    #[test]
    fn support_of_every_barycenter_is_its_simplex() {
        let k = simplex_boundary(3);
        for s in k.simplices() {
            assert_eq!(k.support(&k.barycenter(&s)).unwrap(), s);
        }
    }

    #[test]
    fn star_is_join_of_vertex_with_link() {
        let k = cone_over_hexagon();
        for v in 0..k.vertex_count() {
            let star: BTreeSet<Simplex> = k.star_facets(&Simplex::vertex(v)).unwrap().into_iter().collect();
            let join: BTreeSet<Simplex> =
                k.link_facets(&Simplex::vertex(v)).unwrap().iter().map(|l| l.union(&Simplex::vertex(v))).collect();
            assert_eq!(star, join);
        }
    }

    #[test]
    fn construction_checks_indices() {
        let err = SimplicialComplex::new(vec![RationalPoint::from_ints(&[0])], vec![vec![0, 3]]).unwrap_err();
        assert_eq!(err, ComplexError::IndexOutOfRange { simplex: 0, entry: 1, index: 3, count: 1 });
    }

    #[test]
    fn euler_characteristics() {
        assert_eq!(simplex_boundary(2).euler_characteristic(), 0);
        assert_eq!(simplex_boundary(3).euler_characteristic(), 2);
        assert_eq!(simplex_boundary(4).euler_characteristic(), 0);
        assert_eq!(simplex_boundary(3).f_vector(), vec![4, 6, 4]);
    }
}
