use std::collections::{BTreeSet, HashSet};
use std::hash::{Hash, Hasher};
use std::sync::OnceLock;

use itertools::Itertools;
use num_traits::{Signed, Zero};

use super::linalg::{self, dot};
use super::{affine_dim, GeometryError, Rational, RationalPoint};

/// Closed halfspace `normal · x <= offset`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HalfSpace {
    pub normal: Vec<Rational>,
    pub offset: Rational,
}

impl HalfSpace {
    fn slack(&self, x: &[Rational]) -> Rational {
        &self.offset - dot(&self.normal, x)
    }

    /// Scales so that the first nonzero normal entry has absolute value one.
    fn normalized(mut self) -> Self {
        if let Some(lead) = self.normal.iter().find(|c| !c.is_zero()).map(|c| c.abs()) {
            for c in self.normal.iter_mut() {
                *c /= &lead;
            }
            self.offset /= &lead;
        }
        self
    }
}

/// Halfspace description of a cell: affine-hull equations plus one
/// inequality per facet, with every facet normal lying in the cell's
/// direction space.
#[derive(Clone, Debug, Default)]
pub struct HRep {
    pub equalities: Vec<(Vec<Rational>, Rational)>,
    pub facets: Vec<HalfSpace>,
}

impl HRep {
    pub fn contains(&self, x: &RationalPoint) -> bool {
        self.equalities.iter().all(|(a, b)| &dot(a, x.coords()) == b)
            && self.facets.iter().all(|h| !h.slack(x.coords()).is_negative())
    }
}

/// Compact convex polyhedron given by its extreme points.
///
/// Vertices are sorted lexicographically, so two cells are equal exactly when
/// their vertex lists are.
#[derive(Clone)]
pub struct ConvexCell {
    vertices: Vec<RationalPoint>,
    dim: usize,
    hrep: OnceLock<HRep>,
}

impl PartialEq for ConvexCell {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
    }
}

impl Eq for ConvexCell {}

impl Hash for ConvexCell {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.vertices.hash(state);
    }
}

impl PartialOrd for ConvexCell {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ConvexCell {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.dim, &self.vertices).cmp(&(other.dim, &other.vertices))
    }
}

impl std::fmt::Debug for ConvexCell {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Cell{}{:?}", self.dim, self.vertices)
    }
}

impl ConvexCell {
    /// The cell spanned by `points`: redundant (non-extreme) points are dropped.
    pub fn from_vertices(points: &[RationalPoint]) -> Result<ConvexCell, GeometryError> {
        let dim = affine_dim(points)?;
        let mut pts = points.to_vec();
        pts.sort();
        pts.dedup();
        if dim == 0 {
            return Ok(ConvexCell::with_hrep(pts, 0, point_hrep(&points[0])));
        }
        let basis = direction_basis(&pts);
        let facets = facet_hyperplanes(&pts, &basis);
        let extreme: Vec<RationalPoint> = pts
            .into_iter()
            .filter(|p| {
                let tight: Vec<Vec<Rational>> = facets
                    .iter()
                    .filter(|h| h.slack(p.coords()).is_zero())
                    .map(|h| h.normal.clone())
                    .collect();
                linalg::rank(&tight) == dim
            })
            .collect();
        let equalities = hull_equalities(&extreme[0], &basis);
        Ok(ConvexCell::with_hrep(extreme, dim, HRep { equalities, facets }))
    }

    /// Trusted constructor for a vertex list already known to be the set of
    /// extreme points of an affinely independent simplex.
    pub fn simplex(points: &[RationalPoint]) -> Result<ConvexCell, GeometryError> {
        let dim = affine_dim(points)?;
        if dim + 1 != points.len() {
            return ConvexCell::from_vertices(points);
        }
        let mut pts = points.to_vec();
        pts.sort();
        Ok(ConvexCell { vertices: pts, dim, hrep: OnceLock::new() })
    }

    fn with_hrep(vertices: Vec<RationalPoint>, dim: usize, hrep: HRep) -> ConvexCell {
        let cell = ConvexCell { vertices, dim, hrep: OnceLock::new() };
        let _ = cell.hrep.set(hrep);
        cell
    }

    pub fn vertices(&self) -> &[RationalPoint] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ambient_dim(&self) -> usize {
        self.vertices[0].dim()
    }

    pub fn is_simplex(&self) -> bool {
        self.vertices.len() == self.dim + 1
    }

    /// Halfspace representation, computed on first use.
    pub fn hrep(&self) -> &HRep {
        self.hrep.get_or_init(|| {
            if self.dim == 0 {
                return point_hrep(&self.vertices[0]);
            }
            let basis = direction_basis(&self.vertices);
            HRep {
                equalities: hull_equalities(&self.vertices[0], &basis),
                facets: facet_hyperplanes(&self.vertices, &basis),
            }
        })
    }

    pub fn contains_point(&self, x: &RationalPoint) -> bool {
        self.hrep().contains(x)
    }

    pub fn contains_cell(&self, other: &ConvexCell) -> bool {
        other.vertices.iter().all(|v| self.contains_point(v))
    }

    /// Arithmetic mean of the vertex list.
    pub fn barycenter(&self) -> RationalPoint {
        let refs: Vec<&RationalPoint> = self.vertices.iter().collect();
        RationalPoint::mean(&refs)
    }

    /// Codimension-one faces.
    pub fn facets(&self) -> Vec<ConvexCell> {
        if self.dim == 0 {
            return Vec::new();
        }
        let mut out: Vec<ConvexCell> = self
            .hrep()
            .facets
            .iter()
            .map(|h| {
                let on: Vec<RationalPoint> = self
                    .vertices
                    .iter()
                    .filter(|v| h.slack(v.coords()).is_zero())
                    .cloned()
                    .collect();
                if on.len() == self.dim {
                    ConvexCell::simplex(&on).expect("facet of a cell")
                } else {
                    ConvexCell::from_vertices(&on).expect("facet of a cell")
                }
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// All nonempty faces, including the cell itself, sorted by dimension.
    pub fn faces(&self) -> Vec<ConvexCell> {
        let mut seen: BTreeSet<ConvexCell> = BTreeSet::new();
        let mut stack = vec![self.clone()];
        while let Some(c) = stack.pop() {
            if seen.contains(&c) {
                continue;
            }
            stack.extend(c.facets());
            seen.insert(c);
        }
        seen.into_iter().collect()
    }

    /// Axis-aligned bounding box `(min, max)`.
    pub fn bbox(&self) -> (Vec<Rational>, Vec<Rational>) {
        let n = self.ambient_dim();
        let mut lo = self.vertices[0].coords().to_vec();
        let mut hi = lo.clone();
        for v in &self.vertices[1..] {
            for i in 0..n {
                if v[i] < lo[i] {
                    lo[i] = v[i].clone();
                }
                if v[i] > hi[i] {
                    hi[i] = v[i].clone();
                }
            }
        }
        (lo, hi)
    }
}

fn point_hrep(p: &RationalPoint) -> HRep {
    let n = p.dim();
    let equalities = (0..n)
        .map(|i| {
            let mut a = vec![Rational::zero(); n];
            a[i] = num_traits::One::one();
            (a, p[i].clone())
        })
        .collect();
    HRep { equalities, facets: Vec::new() }
}

fn direction_basis(points: &[RationalPoint]) -> Vec<Vec<Rational>> {
    let base = &points[0];
    let diffs: Vec<Vec<Rational>> = points[1..].iter().map(|p| p - base).collect();
    linalg::row_basis(&diffs)
}

fn hull_equalities(base: &RationalPoint, basis: &[Vec<Rational>]) -> Vec<(Vec<Rational>, Rational)> {
    let n = base.dim();
    linalg::nullspace(basis, n)
        .into_iter()
        .map(|a| {
            let b = dot(&a, base.coords());
            (a, b)
        })
        .collect()
}

/// Facet-defining halfspaces of the hull of `points` whose direction space is
/// spanned by `basis`. Brute force over `d`-subsets of the points.
fn facet_hyperplanes(points: &[RationalPoint], basis: &[Vec<Rational>]) -> Vec<HalfSpace> {
    let d = basis.len();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for combo in points.iter().combinations(d) {
        let w0 = combo[0];
        let m: Vec<Vec<Rational>> = combo[1..]
            .iter()
            .map(|w| {
                let diff = *w - w0;
                basis.iter().map(|b| dot(&diff, b)).collect()
            })
            .collect();
        let ns = if m.is_empty() {
            vec![vec![num_traits::One::one()]]
        } else {
            linalg::nullspace(&m, d)
        };
        if ns.len() != 1 {
            continue;
        }
        let c = &ns[0];
        let n = w0.dim();
        let mut normal = vec![Rational::zero(); n];
        for (ck, bk) in c.iter().zip(basis) {
            for (x, y) in normal.iter_mut().zip(bk) {
                *x += ck * y;
            }
        }
        let mut pos = false;
        let mut neg = false;
        for p in points {
            let s = dot(&normal, &(p - w0));
            if s.is_positive() {
                pos = true;
            } else if s.is_negative() {
                neg = true;
            }
            if pos && neg {
                break;
            }
        }
        if pos && neg {
            continue;
        }
        if pos {
            for x in normal.iter_mut() {
                *x = -x.clone();
            }
        }
        let offset = dot(&normal, w0.coords());
        let h = HalfSpace { normal, offset }.normalized();
        if seen.insert(h.clone()) {
            out.push(h);
        }
    }
    out
}

fn boxes_overlap(a: &ConvexCell, b: &ConvexCell) -> bool {
    let (alo, ahi) = a.bbox();
    let (blo, bhi) = b.bbox();
    (0..alo.len()).all(|i| alo[i] <= bhi[i] && blo[i] <= ahi[i])
}

/// Exact intersection of two cells, via their halfspace descriptions and
/// vertex enumeration. `None` when the intersection is empty.
pub fn intersect_cells(a: &ConvexCell, b: &ConvexCell) -> Option<ConvexCell> {
    assert_eq!(a.ambient_dim(), b.ambient_dim(), "cells live in different spaces");
    if !boxes_overlap(a, b) {
        return None;
    }
    if a == b {
        return Some(a.clone());
    }
    let n = a.ambient_dim();
    let (ha, hb) = (a.hrep(), b.hrep());
    let (eq_rows, eq_rhs): (Vec<Vec<Rational>>, Vec<Rational>) =
        ha.equalities.iter().chain(&hb.equalities).cloned().unzip();
    let (x0, dirs) = linalg::affine_solution(&eq_rows, &eq_rhs, n)?;
    let k = dirs.len();

    // Inequalities restricted to the solution flat x = x0 + Σ y_l dirs[l].
    let mut rows: Vec<HalfSpace> = Vec::new();
    let mut seen = HashSet::new();
    for h in ha.facets.iter().chain(&hb.facets) {
        let coeffs: Vec<Rational> = dirs.iter().map(|d| dot(&h.normal, d)).collect();
        let rhs = h.slack(&x0);
        if coeffs.iter().all(|c| c.is_zero()) {
            if rhs.is_negative() {
                return None;
            }
            continue;
        }
        let restricted = HalfSpace { normal: coeffs, offset: rhs }.normalized();
        if seen.insert(restricted.clone()) {
            rows.push(restricted);
        }
    }

    let lift = |y: &[Rational]| -> RationalPoint {
        let mut x = x0.clone();
        for (yl, d) in y.iter().zip(&dirs) {
            for (xi, di) in x.iter_mut().zip(d) {
                *xi += yl * di;
            }
        }
        RationalPoint::new(x)
    };

    if k == 0 {
        return Some(ConvexCell::from_vertices(&[RationalPoint::new(x0)]).expect("single point"));
    }
    let mut found: BTreeSet<RationalPoint> = BTreeSet::new();
    for combo in rows.iter().combinations(k) {
        let a: Vec<Vec<Rational>> = combo.iter().map(|h| h.normal.clone()).collect();
        let rhs: Vec<Rational> = combo.iter().map(|h| h.offset.clone()).collect();
        let Some(y) = linalg::solve(&a, &rhs) else {
            continue;
        };
        if rows.iter().all(|h| !h.slack(&y).is_negative()) {
            found.insert(lift(&y));
        }
    }
    if found.is_empty() {
        return None;
    }
    let pts: Vec<RationalPoint> = found.into_iter().collect();
    Some(ConvexCell::from_vertices(&pts).expect("nonempty intersection"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{int, ratio};

    fn p(c: &[(i64, i64)]) -> RationalPoint {
        RationalPoint::from_ratios(c)
    }

    fn square(dx: i64) -> ConvexCell {
        ConvexCell::from_vertices(&[
            RationalPoint::from_ints(&[dx, 0]),
            RationalPoint::from_ints(&[dx + 1, 0]),
            RationalPoint::from_ints(&[dx, 1]),
            RationalPoint::from_ints(&[dx + 1, 1]),
        ])
        .unwrap()
    }

    #[test]
    fn redundant_points_are_dropped() {
        let seg = ConvexCell::from_vertices(&[
            RationalPoint::from_ints(&[0, 0]),
            RationalPoint::from_ints(&[1, 0]),
            p(&[(1, 2), (0, 1)]),
        ])
        .unwrap();
        assert_eq!(seg.dim(), 1);
        assert_eq!(seg.vertices(), &[RationalPoint::from_ints(&[0, 0]), RationalPoint::from_ints(&[1, 0])]);

        assert_eq!(square(0).vertices().len(), 4);
        assert_eq!(square(0).dim(), 2);

        let tri = ConvexCell::from_vertices(&[
            RationalPoint::from_ints(&[0, 0]),
            RationalPoint::from_ints(&[2, 0]),
            RationalPoint::from_ints(&[0, 2]),
            p(&[(2, 3), (2, 3)]),
        ])
        .unwrap();
        assert_eq!(tri.vertices().len(), 3);
        assert!(!tri.vertices().contains(&p(&[(2, 3), (2, 3)])));
    }

    #[test]
    fn square_intersections() {
        let shared = intersect_cells(&square(0), &square(1)).unwrap();
        assert_eq!(shared.dim(), 1);
        assert_eq!(shared.vertices(), &[RationalPoint::from_ints(&[1, 0]), RationalPoint::from_ints(&[1, 1])]);
        assert!(intersect_cells(&square(0), &square(3)).is_none());
        assert_eq!(intersect_cells(&square(0), &square(0)).unwrap(), square(0));
    }

    #[test]
    fn square_faces() {
        let faces = square(0).faces();
        assert_eq!(faces.iter().filter(|f| f.dim() == 0).count(), 4);
        assert_eq!(faces.iter().filter(|f| f.dim() == 1).count(), 4);
        assert_eq!(faces.iter().filter(|f| f.dim() == 2).count(), 1);
    }

    #[test]
    fn lower_dimensional_cells_in_space() {
        // Two triangles in different planes of R^3 meeting along an edge.
        let a = ConvexCell::from_vertices(&[
            RationalPoint::from_ints(&[0, 0, 0]),
            RationalPoint::from_ints(&[1, 0, 0]),
            RationalPoint::from_ints(&[0, 1, 0]),
        ])
        .unwrap();
        let b = ConvexCell::from_vertices(&[
            RationalPoint::from_ints(&[0, 0, 0]),
            RationalPoint::from_ints(&[1, 0, 0]),
            RationalPoint::from_ints(&[0, 0, 1]),
        ])
        .unwrap();
        let c = intersect_cells(&a, &b).unwrap();
        assert_eq!(c.dim(), 1);
        assert!(a.contains_point(&p(&[(1, 3), (1, 3), (0, 1)])));
        assert!(!a.contains_point(&p(&[(1, 3), (1, 3), (1, 3)])));
        assert_eq!(a.barycenter(), RationalPoint::new(vec![ratio(1, 3), ratio(1, 3), int(0)]));
    }
}
