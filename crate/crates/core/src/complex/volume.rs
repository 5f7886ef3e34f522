//! Exact volume bookkeeping for subdivisions.
//!
//! Volumes of simplices inside a common k-flat are compared through a
//! coordinate projection that is injective on the flat: the projected volume
//! `|det| / k!` is rational and differs from the true k-volume by a constant
//! factor of the flat, so equalities of sums are exact.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::{CellComplex, Simplex, SimplicialComplex};
use crate::geometry::{linalg, rational_to_f64, ConvexCell, Rational, RationalPoint};

fn factorial(k: usize) -> BigInt {
    (1..=k).fold(BigInt::from(1), |acc, i| acc * BigInt::from(i))
}

/// Coordinates on which the projection of the cell's affine hull is injective.
pub fn flat_coordinates(cell: &ConvexCell) -> Vec<usize> {
    let base = &cell.vertices()[0];
    let mut diffs: Vec<Vec<Rational>> = cell.vertices()[1..].iter().map(|p| p - base).collect();
    if diffs.is_empty() {
        return Vec::new();
    }
    let n = base.dim();
    linalg::rref(&mut diffs, n)
}

/// `|det| / k!` of the simplex projected onto `coords` (k = coords.len()).
pub fn projected_volume(points: &[&RationalPoint], coords: &[usize]) -> Rational {
    let k = coords.len();
    if points.len() != k + 1 {
        return Rational::zero();
    }
    let rows: Vec<Vec<Rational>> = points[1..]
        .iter()
        .map(|p| coords.iter().map(|&c| &p[c] - &points[0][c]).collect())
        .collect();
    linalg::det(&rows).abs() / Rational::from_integer(factorial(k))
}

/// Pulling triangulation of a convex cell: cone from the first vertex over
/// the triangulated facets not containing it.
pub fn triangulate_cell(cell: &ConvexCell) -> Vec<Vec<RationalPoint>> {
    if cell.is_simplex() {
        return vec![cell.vertices().to_vec()];
    }
    let apex = &cell.vertices()[0];
    let mut out = Vec::new();
    for facet in cell.facets() {
        if facet.vertices().contains(apex) {
            continue;
        }
        for mut s in triangulate_cell(&facet) {
            s.push(apex.clone());
            out.push(s);
        }
    }
    out
}

/// Projected volume of a cell, in the given coordinates.
pub fn cell_projected_volume(cell: &ConvexCell, coords: &[usize]) -> Rational {
    triangulate_cell(cell)
        .iter()
        .map(|s| projected_volume(&s.iter().collect::<Vec<_>>(), coords))
        .sum()
}

/// k-volume from the Gram determinant, in binary64.
pub fn simplex_volume_f64(points: &[&RationalPoint]) -> f64 {
    let k = points.len() - 1;
    if k == 0 {
        return 1.0;
    }
    let edges: Vec<Vec<Rational>> = points[1..].iter().map(|p| *p - points[0]).collect();
    let gram: Vec<Vec<Rational>> =
        edges.iter().map(|a| edges.iter().map(|b| linalg::dot(a, b)).collect()).collect();
    let g = rational_to_f64(&linalg::det(&gram)).max(0.0);
    let kf: f64 = (1..=k).map(|i| i as f64).product();
    g.sqrt() / kf
}

#[derive(Debug, Clone, Serialize, Default)]
pub struct SubdivisionReport {
    /// Facets of the fine complex not contained in an equal-dimensional cell.
    pub uncontained: Vec<Simplex>,
    /// Coarse cells whose volume is not matched exactly: (cell index, expected, found).
    pub volume_mismatches: Vec<(usize, String, String)>,
}

impl SubdivisionReport {
    pub fn is_ok(&self) -> bool {
        self.uncontained.is_empty() && self.volume_mismatches.is_empty()
    }
}

/// Exact check that `fine` subdivides the maximal cells of `coarse`: every
/// facet of `fine` lies in a maximal cell of the same dimension, and for every
/// maximal cell the contained fine facets have exactly the cell's volume.
pub fn check_subdivision(fine: &SimplicialComplex, coarse: &CellComplex) -> SubdivisionReport {
    let maximal: Vec<&ConvexCell> = coarse.maximal_cells().collect();
    let coords: Vec<Vec<usize>> = maximal.iter().map(|c| flat_coordinates(c)).collect();
    let mut sums: Vec<Rational> = vec![Rational::zero(); maximal.len()];
    let mut report = SubdivisionReport::default();
    for f in fine.facets() {
        let pts = fine.points(f);
        let home = maximal
            .iter()
            .position(|c| c.dim() == f.dim() && pts.iter().all(|p| c.contains_point(p)));
        match home {
            Some(i) => sums[i] += projected_volume(&pts, &coords[i]),
            None => report.uncontained.push(f.clone()),
        }
    }
    for (i, cell) in maximal.iter().enumerate() {
        let expected = cell_projected_volume(cell, &coords[i]);
        if expected != sums[i] {
            report.volume_mismatches.push((i, expected.to_string(), sums[i].to_string()));
        }
    }
    report
}

/// Exact check that `fine` subdivides the simplicial complex `coarse`.
pub fn check_simplicial_subdivision(fine: &SimplicialComplex, coarse: &SimplicialComplex) -> SubdivisionReport {
    check_subdivision(fine, &CellComplex::from_simplicial(coarse))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{int, ratio};

    #[test]
    fn projected_volume_of_triangle_in_space() {
        let a = RationalPoint::from_ints(&[0, 0, 1]);
        let b = RationalPoint::from_ints(&[2, 0, 1]);
        let c = RationalPoint::from_ints(&[0, 3, 1]);
        let cell = ConvexCell::from_vertices(&[a.clone(), b.clone(), c.clone()]).unwrap();
        let coords = flat_coordinates(&cell);
        assert_eq!(coords, vec![0, 1]);
        assert_eq!(projected_volume(&[&a, &b, &c], &coords), int(3));
        assert!((simplex_volume_f64(&[&a, &b, &c]) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn pulling_triangulation_of_square_and_cube() {
        let sq = ConvexCell::from_vertices(&[
            RationalPoint::from_ints(&[0, 0]),
            RationalPoint::from_ints(&[1, 0]),
            RationalPoint::from_ints(&[0, 1]),
            RationalPoint::from_ints(&[1, 1]),
        ])
        .unwrap();
        assert_eq!(triangulate_cell(&sq).len(), 2);
        assert_eq!(cell_projected_volume(&sq, &[0, 1]), int(1));
        let mut cube = Vec::new();
        for x in 0..2 {
            for y in 0..2 {
                for z in 0..2 {
                    cube.push(RationalPoint::from_ints(&[x, y, z]));
                }
            }
        }
        let cube = ConvexCell::from_vertices(&cube).unwrap();
        assert_eq!(cell_projected_volume(&cube, &[0, 1, 2]), int(1));
        let half = ConvexCell::from_vertices(&[
            RationalPoint::from_ints(&[0, 0]),
            RationalPoint::from_ints(&[1, 0]),
            RationalPoint::from_ints(&[0, 1]),
        ])
        .unwrap();
        assert_eq!(cell_projected_volume(&half, &[0, 1]), ratio(1, 2));
    }
}
