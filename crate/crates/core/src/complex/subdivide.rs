use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use num_traits::Zero;

use super::volume::{cell_projected_volume, check_subdivision, flat_coordinates, projected_volume};
use super::{CellComplex, ComplexError, Simplex, SimplicialComplex};
use crate::geometry::{ConvexCell, Rational, RationalPoint};

/// First barycentric subdivision together with the simplex of the original
/// complex whose barycenter each new vertex is.
#[derive(Clone, Debug)]
pub struct BarycentricSubdivision {
    pub complex: SimplicialComplex,
    pub origin: Vec<Simplex>,
}

/// Vertices are the barycenters of all simplices of `k` (in sorted simplex
/// order); maximal simplices are the maximal flags.
pub fn barycentric_subdivision(k: &SimplicialComplex) -> BarycentricSubdivision {
    let origin: Vec<Simplex> = k.simplices().into_iter().collect();
    let index: BTreeMap<&Simplex, usize> = origin.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let vertices: Vec<RationalPoint> = origin.iter().map(|s| k.barycenter(s)).collect();
    let mut facets = Vec::new();
    for f in k.facets() {
        for perm in f.vertices().iter().copied().permutations(f.len()) {
            let flag = (1..=perm.len()).map(|j| index[&Simplex::new(perm[..j].to_vec())]).collect();
            facets.push(Simplex::new(flag));
        }
    }
    let complex = SimplicialComplex::from_parts_unchecked(k.ambient_dim(), vertices, facets);
    BarycentricSubdivision { complex, origin }
}

/// Cone with `k` lifted to height 1 in ℝ^{N+1} and the apex at the origin,
/// stored as the last vertex.
pub fn closed_cone(k: &SimplicialComplex) -> SimplicialComplex {
    let n = k.ambient_dim();
    let mut vertices: Vec<RationalPoint> =
        k.vertices().iter().map(|v| v.lifted(Rational::from_integer(1.into()))).collect();
    let apex = vertices.len();
    vertices.push(RationalPoint::origin(n + 1));
    let mut facets: Vec<Simplex> = k.facets().iter().map(|f| f.union(&Simplex::vertex(apex))).collect();
    if facets.is_empty() {
        facets.push(Simplex::vertex(apex));
    }
    SimplicialComplex::from_parts_unchecked(n + 1, vertices, facets)
}

/// Canonical simplicial subdivision of a cell complex by starring cells in
/// ascending dimension. A simplex whose boundary is still unsubdivided is
/// kept as is; any other cell of dimension at least two becomes the join of
/// its subdivided boundary with its barycenter.
pub fn star_subdivide(l: &CellComplex) -> Result<SimplicialComplex, ComplexError> {
    l.validate()?;
    Ok(Starring::new(l).run(&BTreeMap::new()))
}

/// Extends a subdivision `sub1` of the subcomplex `l1` to all of `l`,
/// leaving `sub1` unchanged on `|l1|` and starring every other cell.
pub fn extend_subdivision(
    l: &CellComplex,
    l1: &CellComplex,
    sub1: &SimplicialComplex,
) -> Result<SimplicialComplex, ComplexError> {
    l.validate()?;
    if !l1.is_subcomplex_of(l) {
        return Err(ComplexError::InvalidCellComplex("L1 is not a subcomplex of L".into()));
    }
    if l1.is_empty() {
        return Ok(Starring::new(l).run(&BTreeMap::new()));
    }
    if sub1.ambient_dim() != l.ambient_dim() {
        return Err(ComplexError::NotASubdivision("ambient dimensions differ".into()));
    }
    let report = check_subdivision(sub1, l1);
    if !report.is_ok() {
        return Err(ComplexError::NotASubdivision(format!(
            "{} uncontained simplices, {} volume mismatches",
            report.uncontained.len(),
            report.volume_mismatches.len()
        )));
    }

    // Pieces of each cell of L1, as point lists of sub1 simplices.
    let simplices: Vec<Simplex> = sub1.simplices().into_iter().collect();
    let mut fixed: BTreeMap<usize, Vec<Vec<RationalPoint>>> = BTreeMap::new();
    for cell in l1.cells() {
        let coords = flat_coordinates(cell);
        let mut total = Rational::zero();
        let mut pieces = Vec::new();
        for s in simplices.iter().filter(|s| s.dim() == cell.dim()) {
            let pts = sub1.points(s);
            if pts.iter().all(|p| cell.contains_point(p)) {
                total += projected_volume(&pts, &coords);
                pieces.push(pts.into_iter().cloned().collect());
            }
        }
        if total != cell_projected_volume(cell, &coords) {
            return Err(ComplexError::NotASubdivision(format!("cell {cell:?} is not covered")));
        }
        fixed.insert(l.index_of(cell).expect("L1 is a subcomplex"), pieces);
    }
    Ok(Starring::new(l).run(&fixed))
}

struct Starring<'a> {
    l: &'a CellComplex,
    vertices: Vec<RationalPoint>,
    lookup: BTreeMap<RationalPoint, usize>,
}

impl<'a> Starring<'a> {
    fn new(l: &'a CellComplex) -> Self {
        Starring { l, vertices: Vec::new(), lookup: BTreeMap::new() }
    }

    fn vertex(&mut self, p: &RationalPoint) -> usize {
        if let Some(&i) = self.lookup.get(p) {
            return i;
        }
        self.vertices.push(p.clone());
        self.lookup.insert(p.clone(), self.vertices.len() - 1);
        self.vertices.len() - 1
    }

    fn run(mut self, fixed: &BTreeMap<usize, Vec<Vec<RationalPoint>>>) -> SimplicialComplex {
        let cells = self.l.cells();
        // Triangulation of each cell, as simplices of its own dimension.
        let mut tri: Vec<Vec<Simplex>> = Vec::with_capacity(cells.len());
        for (ci, cell) in cells.iter().enumerate() {
            let pieces = if let Some(pieces) = fixed.get(&ci) {
                pieces.iter().map(|pts| Simplex::new(pts.iter().map(|p| self.vertex(p)).collect())).collect()
            } else if cell.dim() == 0 {
                vec![Simplex::vertex(self.vertex(&cell.vertices()[0]))]
            } else {
                let facets: Vec<usize> = cell
                    .facets()
                    .iter()
                    .map(|f| self.l.index_of(f).expect("complex is closed under faces"))
                    .collect();
                let untouched = |f: usize| tri[f].len() == 1 && tri[f][0].len() == cells[f].vertices().len();
                if cell.is_simplex() && facets.iter().all(|&f| untouched(f)) {
                    vec![Simplex::new(cell.vertices().iter().map(|p| self.vertex(p)).collect())]
                } else {
                    let apex = Simplex::vertex(self.vertex(&cell.barycenter()));
                    facets.iter().flat_map(|&f| tri[f].iter().map(|s| s.union(&apex))).collect()
                }
            };
            tri.push(pieces);
        }
        let maximal: BTreeSet<&ConvexCell> = self.l.maximal_cells().collect();
        let facets = cells
            .iter()
            .enumerate()
            .filter(|(_, c)| maximal.contains(c))
            .flat_map(|(i, _)| tri[i].iter().cloned())
            .collect();
        SimplicialComplex::from_parts_unchecked(self.l.ambient_dim(), self.vertices, facets)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{simplex_boundary, validate_complex, volume::check_subdivision};

    fn cell(pts: &[&[i64]]) -> ConvexCell {
        let v: Vec<RationalPoint> = pts.iter().map(|p| RationalPoint::from_ints(p)).collect();
        ConvexCell::from_vertices(&v).unwrap()
    }

    fn single(c: ConvexCell) -> CellComplex {
        CellComplex::from_cells(c.ambient_dim(), vec![c]).unwrap()
    }

    fn standard_simplex(n: usize) -> SimplicialComplex {
        let mut v = vec![RationalPoint::origin(n)];
        v.extend((0..n).map(|i| RationalPoint::basis(n, i)));
        SimplicialComplex::new(v, vec![(0..=n).collect()]).unwrap()
    }

    #[test]
    fn barycentric_counts() {
        assert_eq!(barycentric_subdivision(&standard_simplex(2)).complex.facets().len(), 6);
        assert_eq!(barycentric_subdivision(&standard_simplex(3)).complex.facets().len(), 24);
        let sd = barycentric_subdivision(&simplex_boundary(3));
        assert_eq!(sd.complex.facets().len(), 24);
        assert_eq!(sd.complex.euler_characteristic(), 2);
        assert!(validate_complex(&sd.complex).is_valid());
        assert!(check_subdivision(&sd.complex, &CellComplex::from_simplicial(&simplex_boundary(3))).is_ok());
    }

    #[test]
    fn cone_examples() {
        let two_points = SimplicialComplex::new(
            vec![RationalPoint::from_ints(&[0]), RationalPoint::from_ints(&[1])],
            vec![vec![0], vec![1]],
        )
        .unwrap();
        let c = closed_cone(&two_points);
        assert_eq!(c.facets().len(), 2);
        assert!(c.facets().iter().all(|f| f.len() == 2));
        assert_eq!(closed_cone(&simplex_boundary(2)).facets().len(), 3);
        let ball = closed_cone(&simplex_boundary(3));
        assert_eq!(ball.facets().len(), 4);
        assert!(validate_complex(&ball).is_valid());
        assert_eq!(ball.euler_characteristic(), 1);
    }

    #[test]
    fn starring_square_triangle_cube() {
        let sq = single(cell(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]));
        let out = star_subdivide(&sq).unwrap();
        assert_eq!(out.facets().len(), 4);
        assert!(check_subdivision(&out, &sq).is_ok());

        let tri = single(cell(&[&[0, 0], &[1, 0], &[0, 1]]));
        assert_eq!(star_subdivide(&tri).unwrap().facets().len(), 1);

        let mut cube = Vec::new();
        for x in 0..2 {
            for y in 0..2 {
                for z in 0..2 {
                    cube.push(RationalPoint::from_ints(&[x, y, z]));
                }
            }
        }
        let cube = single(ConvexCell::from_vertices(&cube).unwrap());
        let out = star_subdivide(&cube).unwrap();
        assert_eq!(out.facets().len(), 24);
        assert_eq!(out.vertex_count(), 8 + 6 + 1);
        assert!(validate_complex(&out).is_valid());
        assert!(check_subdivision(&out, &cube).is_ok());
        assert_eq!(out.euler_characteristic(), 1);
    }

    #[test]
    fn extension_over_refined_edge() {
        let tri = cell(&[&[0, 0], &[2, 0], &[0, 2]]);
        let l = single(tri);
        let edge = cell(&[&[0, 0], &[2, 0]]);
        let l1 = single(edge);
        let sub1 = SimplicialComplex::new(
            vec![RationalPoint::from_ints(&[0, 0]), RationalPoint::from_ints(&[1, 0]), RationalPoint::from_ints(&[2, 0])],
            vec![vec![0, 1], vec![1, 2]],
        )
        .unwrap();
        let out = extend_subdivision(&l, &l1, &sub1).unwrap();
        assert_eq!(out.facets().len(), 4);
        assert!(validate_complex(&out).is_valid());
        assert!(check_subdivision(&out, &l).is_ok());

        let empty = CellComplex::empty(2);
        let same = extend_subdivision(&l, &empty, &SimplicialComplex::empty(2)).unwrap();
        assert_eq!(same, star_subdivide(&l).unwrap());
    }

    #[test]
    fn extension_rejects_non_subdivision() {
        let l = single(cell(&[&[0, 0], &[2, 0], &[0, 2]]));
        let l1 = single(cell(&[&[0, 0], &[2, 0]]));
        let short = SimplicialComplex::new(
            vec![RationalPoint::from_ints(&[0, 0]), RationalPoint::from_ints(&[1, 0])],
            vec![vec![0, 1]],
        )
        .unwrap();
        assert!(matches!(extend_subdivision(&l, &l1, &short), Err(ComplexError::NotASubdivision(_))));
    }
}
