use std::collections::{BTreeMap, VecDeque};

use num_traits::Signed;

use super::{GroupError, Permutation};
use crate::complex::volume::check_simplicial_subdivision;
use crate::complex::{star_subdivide, validate_complex, CellComplex, SimplicialComplex};
use crate::geometry::{barycentric, intersect_cells, ConvexCell, RationalPoint};

/// Default cap on the size of a group generated by PL maps.
pub const DEFAULT_GROUP_BOUND: usize = 256;

/// A PL homeomorphism given by a subdivision `L_g` of its domain and the
/// exact image of every vertex of `L_g`; affine on each simplex of `L_g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PLHomeoSpec {
    domain: SimplicialComplex,
    images: Vec<RationalPoint>,
}

impl PLHomeoSpec {
    pub fn new(domain: SimplicialComplex, images: Vec<RationalPoint>) -> Result<Self, GroupError> {
        if images.len() != domain.vertex_count() {
            return Err(GroupError::InvalidMap(format!(
                "{} images for {} vertices",
                images.len(),
                domain.vertex_count()
            )));
        }
        if let Some(p) = images.iter().find(|p| p.dim() != domain.ambient_dim()) {
            return Err(GroupError::InvalidMap(format!("image {p:?} has the wrong dimension")));
        }
        Ok(PLHomeoSpec { domain, images })
    }

    pub fn identity(k: &SimplicialComplex) -> Self {
        PLHomeoSpec { domain: k.clone(), images: k.vertices().to_vec() }
    }

    /// Simplicial map of `k` given by a vertex permutation.
    pub fn from_permutation(k: &SimplicialComplex, p: &Permutation) -> Result<Self, GroupError> {
        if p.len() != k.vertex_count() {
            return Err(GroupError::NotAPermutation(k.vertex_count()));
        }
        let images = (0..p.len()).map(|i| k.vertex(p.apply(i)).clone()).collect();
        Ok(PLHomeoSpec { domain: k.clone(), images })
    }

    pub fn domain(&self) -> &SimplicialComplex {
        &self.domain
    }

    pub fn images(&self) -> &[RationalPoint] {
        &self.images
    }

    fn image_complex(&self) -> Result<SimplicialComplex, GroupError> {
        Ok(self.domain.with_vertices(self.images.clone())?)
    }

    /// Checks that `L_g` subdivides `k`, that each simplex of `L_g` maps into
    /// a simplex of `k`, and that the images form a subdivision of `k` as well
    /// (so the map is a homeomorphism of `|k|`).
    pub fn validate(&self, k: &SimplicialComplex) -> Result<(), GroupError> {
        if self.domain.ambient_dim() != k.ambient_dim() {
            return Err(GroupError::InvalidMap("domain lives in another space".into()));
        }
        if !check_simplicial_subdivision(&self.domain, k).is_ok() {
            return Err(GroupError::InvalidMap("L_g is not a subdivision of K".into()));
        }
        for f in self.domain.facets() {
            let img: Vec<&RationalPoint> = f.vertices().iter().map(|&v| &self.images[v]).collect();
            let inside = k.facets().iter().any(|t| {
                let tp = k.points(t);
                img.iter().all(|y| barycentric(&tp, y).is_some_and(|bc| bc.iter().all(|c| !c.is_negative())))
            });
            if !inside {
                return Err(GroupError::InvalidMap(format!("simplex {f:?} is not mapped into a simplex of K")));
            }
        }
        let image = self.image_complex()?;
        if !validate_complex(&image).is_valid() {
            return Err(GroupError::InvalidMap("map is not injective".into()));
        }
        if !check_simplicial_subdivision(&image, k).is_ok() {
            return Err(GroupError::InvalidMap("map is not onto |K|".into()));
        }
        Ok(())
    }

    /// Index of a domain facet containing all `points`.
    fn facet_containing(&self, points: &[RationalPoint]) -> Option<usize> {
        self.domain.facets().iter().position(|f| {
            let fp = self.domain.points(f);
            points.iter().all(|x| barycentric(&fp, x).is_some_and(|bc| bc.iter().all(|c| !c.is_negative())))
        })
    }

    fn map_in_facet(&self, facet: usize, x: &RationalPoint) -> RationalPoint {
        let f = &self.domain.facets()[facet];
        let bc = barycentric(&self.domain.points(f), x).expect("point lies in the facet");
        let img: Vec<&RationalPoint> = f.vertices().iter().map(|&v| &self.images[v]).collect();
        RationalPoint::combination(&img, &bc)
    }

    /// Exact image of a point of the domain.
    pub fn eval(&self, x: &RationalPoint) -> Option<RationalPoint> {
        let fi = self.facet_containing(std::slice::from_ref(x))?;
        Some(self.map_in_facet(fi, x))
    }

    /// Affine image of a cell lying inside one simplex of `L_g`.
    pub fn map_cell(&self, cell: &ConvexCell) -> Option<ConvexCell> {
        let fi = self.facet_containing(cell.vertices())?;
        let img: Vec<RationalPoint> = cell.vertices().iter().map(|x| self.map_in_facet(fi, x)).collect();
        ConvexCell::from_vertices(&img).ok()
    }

    /// `self ∘ other`, on the starred common refinement of `L_other` and the
    /// pull-back of `L_self`.
    pub fn compose(&self, other: &PLHomeoSpec) -> Result<PLHomeoSpec, GroupError> {
        let n = other.domain.ambient_dim();
        let mut pieces = Vec::new();
        for f in other.domain.facets() {
            let src: Vec<&RationalPoint> = other.domain.points(f);
            let img: Vec<RationalPoint> = f.vertices().iter().map(|&v| other.images[v].clone()).collect();
            let tau = ConvexCell::simplex(&img).map_err(|e| GroupError::InvalidMap(e.to_string()))?;
            if tau.dim() + 1 != img.len() {
                return Err(GroupError::InvalidMap(format!("simplex {f:?} collapses")));
            }
            let img_refs: Vec<&RationalPoint> = img.iter().collect();
            for g in self.domain.facets() {
                let Some(meet) = intersect_cells(&tau, &self.domain.cell(g)) else { continue };
                if meet.dim() != tau.dim() {
                    continue;
                }
                let pulled: Vec<RationalPoint> = meet
                    .vertices()
                    .iter()
                    .map(|y| {
                        let bc = barycentric(&img_refs, y).expect("point of the image simplex");
                        RationalPoint::combination(&src, &bc)
                    })
                    .collect();
                pieces.push(ConvexCell::from_vertices(&pulled).expect("nonempty piece"));
            }
        }
        let refinement = star_subdivide(&CellComplex::from_cells(n, pieces)?)?;
        let images = refinement
            .vertices()
            .iter()
            .map(|x| {
                let y = other.eval(x).ok_or_else(|| GroupError::InvalidMap("point outside domain".into()))?;
                self.eval(&y).ok_or_else(|| GroupError::InvalidMap("image outside domain".into()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PLHomeoSpec { domain: refinement, images })
    }

    /// Exact equality of the two maps, compared on the vertices of the common
    /// refinement of their domains.
    pub fn agrees_with(&self, other: &PLHomeoSpec) -> Result<bool, GroupError> {
        let common = CellComplex::from_simplicial(&self.domain).intersection(&CellComplex::from_simplicial(&other.domain))?;
        for v in common.cells_of_dim(0) {
            let x = &v.vertices()[0];
            if self.eval(x) != other.eval(x) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn fingerprint(&self, probes: &[RationalPoint]) -> Vec<Option<RationalPoint>> {
        probes.iter().map(|x| self.eval(x)).collect()
    }
}

/// Closes `generators` (maps of `|k|` onto itself) under composition,
/// identity first. Fails once more than `bound` distinct maps appear.
pub fn generate_pl_group(
    k: &SimplicialComplex,
    generators: &[PLHomeoSpec],
    bound: usize,
) -> Result<Vec<PLHomeoSpec>, GroupError> {
    let mut probes: Vec<RationalPoint> = k.vertices().to_vec();
    probes.extend(k.facets().iter().map(|f| k.barycenter(f)));
    let mut elements = vec![PLHomeoSpec::identity(k)];
    let mut by_print: BTreeMap<Vec<Option<RationalPoint>>, Vec<usize>> = BTreeMap::new();
    by_print.insert(elements[0].fingerprint(&probes), vec![0]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(e) = queue.pop_front() {
        for g in generators {
            let q = g.compose(&elements[e])?;
            let print = q.fingerprint(&probes);
            let bucket = by_print.entry(print).or_default();
            let mut known = false;
            for &i in bucket.iter() {
                if elements[i].agrees_with(&q)? {
                    known = true;
                    break;
                }
            }
            if known {
                continue;
            }
            if elements.len() == bound {
                return Err(GroupError::NotClosed { bound });
            }
            bucket.push(elements.len());
            queue.push_back(elements.len());
            elements.push(q);
        }
    }
    Ok(elements)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ratio;

    fn segment() -> SimplicialComplex {
        SimplicialComplex::new(
            vec![RationalPoint::from_ints(&[0]), RationalPoint::from_ints(&[1])],
            vec![vec![0, 1]],
        )
        .unwrap()
    }

    fn pl_interval_map(breaks: &[(i64, i64)], values: &[(i64, i64)]) -> PLHomeoSpec {
        let v: Vec<RationalPoint> = breaks.iter().map(|&(n, d)| RationalPoint::from_ratios(&[(n, d)])).collect();
        let simplices = (0..v.len() - 1).map(|i| vec![i, i + 1]).collect();
        let domain = SimplicialComplex::new(v, simplices).unwrap();
        let images = values.iter().map(|&(n, d)| RationalPoint::from_ratios(&[(n, d)])).collect();
        PLHomeoSpec::new(domain, images).unwrap()
    }

    #[test]
    fn involution_squares_to_identity() {
        let k = segment();
        let g = pl_interval_map(&[(0, 1), (1, 4), (1, 2), (1, 1)], &[(1, 1), (1, 2), (1, 4), (0, 1)]);
        g.validate(&k).unwrap();
        let gg = g.compose(&g).unwrap();
        assert!(gg.agrees_with(&PLHomeoSpec::identity(&k)).unwrap());
        assert_eq!(g.eval(&RationalPoint::new(vec![ratio(3, 8)])).unwrap(), RationalPoint::new(vec![ratio(3, 8)]));
        assert_eq!(generate_pl_group(&k, &[g], DEFAULT_GROUP_BOUND).unwrap().len(), 2);
    }

    #[test]
    fn non_injective_map_is_rejected() {
        let fold = pl_interval_map(&[(0, 1), (1, 2), (1, 1)], &[(0, 1), (1, 1), (0, 1)]);
        assert!(fold.validate(&segment()).is_err());
    }

    #[test]
    fn infinite_order_map_hits_the_bound() {
        let k = segment();
        let shift = pl_interval_map(&[(0, 1), (1, 2), (1, 1)], &[(0, 1), (1, 4), (1, 1)]);
        shift.validate(&k).unwrap();
        assert_eq!(generate_pl_group(&k, &[shift], 8), Err(GroupError::NotClosed { bound: 8 }));
    }
}
