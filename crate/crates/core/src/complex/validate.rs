use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::{maximal_simplices, Simplex, SimplicialComplex};
use crate::geometry::{affine_dim, intersect_cells, ConvexCell, Rational, RationalPoint};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    IndexOutOfRange { simplex: usize, index: usize },
    DimensionMismatch { vertex: usize, expected: usize, found: usize },
    DuplicateVertex { first: usize, second: usize },
    AffinelyDependent { simplex: Simplex },
    ImproperIntersection { first: Simplex, second: Simplex },
    MissingFace { simplex: Simplex, face: Simplex },
}

/// Every violated complex invariant; empty iff the input is a valid
/// geometric simplicial complex.
#[derive(Debug, Clone, Default, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Validates a stored complex. Face closure holds by construction, so only
/// independence, distinct vertices and proper intersection are checked.
pub fn validate_complex(k: &SimplicialComplex) -> ValidationReport {
    let mut report = ValidationReport::default();
    check_geometry(k.vertices(), k.facets(), &mut report);
    report
}

/// Validates an explicit simplex list, including closure under faces.
pub fn validate_simplex_set(vertices: &[RationalPoint], simplices: &[Vec<usize>]) -> ValidationReport {
    let mut report = ValidationReport::default();
    let ambient = vertices.first().map_or(0, |v| v.dim());
    for (i, v) in vertices.iter().enumerate() {
        if v.dim() != ambient {
            report.violations.push(Violation::DimensionMismatch { vertex: i, expected: ambient, found: v.dim() });
        }
    }
    if !report.is_valid() {
        return report;
    }
    let mut listed = Vec::new();
    for (si, s) in simplices.iter().enumerate() {
        if let Some(&index) = s.iter().find(|&&v| v >= vertices.len()) {
            report.violations.push(Violation::IndexOutOfRange { simplex: si, index });
        } else if !s.is_empty() {
            listed.push(Simplex::new(s.clone()));
        }
    }
    let present: BTreeSet<&Simplex> = listed.iter().collect();
    let mut reported = BTreeSet::new();
    for s in &listed {
        for face in s.faces() {
            if !present.contains(&face) && reported.insert(face.clone()) {
                report.violations.push(Violation::MissingFace { simplex: s.clone(), face });
            }
        }
    }
    // Proper intersection of maximal simplices implies it for all faces.
    let top = maximal_simplices(listed);
    check_geometry(vertices, &top, &mut report);
    report
}

fn check_geometry(vertices: &[RationalPoint], top: &[Simplex], report: &mut ValidationReport) {
    let mut seen: BTreeMap<&RationalPoint, usize> = BTreeMap::new();
    for (i, v) in vertices.iter().enumerate() {
        if let Some(&first) = seen.get(v) {
            report.violations.push(Violation::DuplicateVertex { first, second: i });
        } else {
            seen.insert(v, i);
        }
    }
    let mut independent = Vec::new();
    for s in top {
        let pts: Vec<RationalPoint> = s.vertices().iter().map(|&v| vertices[v].clone()).collect();
        if affine_dim(&pts).map_or(true, |d| d + 1 != pts.len()) {
            report.violations.push(Violation::AffinelyDependent { simplex: s.clone() });
        } else {
            independent.push((s, ConvexCell::simplex(&pts).expect("independent points")));
        }
    }
    report.violations.extend(improper_pairs(vertices, &independent));
}

/// Sweep over the first coordinate of the bounding boxes, then an exact
/// intersection test on every overlapping pair.
fn improper_pairs(vertices: &[RationalPoint], cells: &[(&Simplex, ConvexCell)]) -> Vec<Violation> {
    if cells.is_empty() || vertices[0].dim() == 0 {
        return Vec::new();
    }
    let boxes: Vec<(Vec<Rational>, Vec<Rational>)> = cells.iter().map(|(_, c)| c.bbox()).collect();
    let mut order: Vec<usize> = (0..cells.len()).collect();
    order.sort_by(|&a, &b| boxes[a].0[0].cmp(&boxes[b].0[0]));
    let mut candidates = Vec::new();
    for (pos, &i) in order.iter().enumerate() {
        for &j in &order[pos + 1..] {
            if boxes[j].0[0] > boxes[i].1[0] {
                break;
            }
            let overlap = (1..boxes[i].0.len())
                .all(|c| boxes[i].0[c] <= boxes[j].1[c] && boxes[j].0[c] <= boxes[i].1[c]);
            if overlap {
                candidates.push((i.min(j), i.max(j)));
            }
        }
    }
    candidates.sort();
    let check = |&(i, j): &(usize, usize)| -> Option<Violation> {
        let (si, ci) = &cells[i];
        let (sj, cj) = &cells[j];
        let common: Vec<RationalPoint> =
            si.vertices().iter().filter(|v| sj.contains_vertex(**v)).map(|&v| vertices[v].clone()).collect();
        let expected = if common.is_empty() { None } else { ConvexCell::simplex(&common).ok() };
        (intersect_cells(ci, cj) != expected)
            .then(|| Violation::ImproperIntersection { first: (*si).clone(), second: (*sj).clone() })
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        candidates.par_iter().filter_map(check).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        candidates.iter().filter_map(check).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::simplex_boundary;

    fn pts(c: &[(i64, i64, i64, i64)]) -> Vec<RationalPoint> {
        c.iter().map(|&(a, b, x, y)| RationalPoint::from_ratios(&[(a, b), (x, y)])).collect()
    }

    #[test]
    fn boundary_of_triangle_is_valid() {
        assert!(validate_complex(&simplex_boundary(2)).is_valid());
    }

    #[test]
    fn triangles_sharing_half_an_edge() {
        let v = pts(&[(0, 1, 0, 1), (1, 1, 0, 1), (0, 1, 1, 1), (1, 2, 0, 1), (3, 2, 0, 1), (1, 1, -1, 1)]);
        let k = SimplicialComplex::new(v, vec![vec![0, 1, 2], vec![3, 4, 5]]).unwrap();
        let report = validate_complex(&k);
        assert_eq!(
            report.violations,
            vec![Violation::ImproperIntersection {
                first: Simplex::new(vec![0, 1, 2]),
                second: Simplex::new(vec![3, 4, 5])
            }]
        );
    }

    #[test]
    fn missing_edge_is_a_closure_violation() {
        let v = pts(&[(0, 1, 0, 1), (1, 1, 0, 1), (0, 1, 1, 1)]);
        let simplices = vec![vec![0], vec![1], vec![2], vec![0, 1], vec![1, 2], vec![0, 1, 2]];
        let report = validate_simplex_set(&v, &simplices);
        assert_eq!(
            report.violations,
            vec![Violation::MissingFace { simplex: Simplex::new(vec![0, 1, 2]), face: Simplex::new(vec![0, 2]) }]
        );
    }

    #[test]
    fn dependent_simplex_and_duplicate_vertex() {
        let v = pts(&[(0, 1, 0, 1), (1, 1, 1, 1), (2, 1, 2, 1), (0, 1, 0, 1)]);
        let k = SimplicialComplex::new(v, vec![vec![0, 1, 2], vec![3]]).unwrap();
        let report = validate_complex(&k);
        assert!(report.violations.contains(&Violation::AffinelyDependent { simplex: Simplex::new(vec![0, 1, 2]) }));
        assert!(report.violations.contains(&Violation::DuplicateVertex { first: 0, second: 3 }));
    }

    #[test]
    fn crossing_segments_are_improper() {
        let v = pts(&[(0, 1, 0, 1), (1, 1, 1, 1), (0, 1, 1, 1), (1, 1, 0, 1)]);
        let k = SimplicialComplex::new(v, vec![vec![0, 1], vec![2, 3]]).unwrap();
        assert_eq!(validate_complex(&k).violations.len(), 1);
    }
}
