use std::collections::BTreeSet;

use super::pl::{generate_pl_group, PLHomeoSpec, DEFAULT_GROUP_BOUND};
use super::{normalize_pointwise_fixed, GroupAction, GroupError, Permutation};
use crate::complex::volume::check_simplicial_subdivision;
use crate::complex::{star_subdivide, CellComplex, Simplex, SimplicialComplex};
use crate::geometry::ConvexCell;

#[derive(Clone, Debug)]
pub struct TriangulateOptions {
    /// Cap on the size of the group generated by the input maps.
    pub group_bound: usize,
    /// Follow with a barycentric subdivision so invariant simplices are
    /// fixed pointwise.
    pub pointwise_fixed: bool,
}

impl Default for TriangulateOptions {
    fn default() -> Self {
        TriangulateOptions { group_bound: DEFAULT_GROUP_BOUND, pointwise_fixed: false }
    }
}

#[derive(Clone, Debug)]
pub struct EquivariantTriangulation {
    pub complex: SimplicialComplex,
    pub action: GroupAction,
    /// Group elements as PL maps, identity first.
    pub maps: Vec<PLHomeoSpec>,
    /// Maximal cells of the intersection of all `L_g`.
    pub common_cells: usize,
    /// Maximal cells of the intersection of all translates `gL`.
    pub invariant_cells: usize,
}

fn meet_all(complexes: impl Iterator<Item = CellComplex>) -> Result<CellComplex, GroupError> {
    let mut acc: Option<CellComplex> = None;
    for c in complexes {
        acc = Some(match acc {
            None => c,
            Some(a) if a == c => a,
            Some(a) => a.intersection(&c)?,
        });
    }
    Ok(acc.expect("group contains the identity"))
}

/// Triangulates `|k|` so that the group generated by `maps` acts
/// simplicially: intersect all `L_g`, intersect all translates of the
/// result, star, then read off and verify the induced vertex permutations.
pub fn equivariant_triangulate(
    k: &SimplicialComplex,
    maps: &[PLHomeoSpec],
    options: &TriangulateOptions,
) -> Result<EquivariantTriangulation, GroupError> {
    for m in maps {
        m.validate(k)?;
    }
    let elements = generate_pl_group(k, maps, options.group_bound)?;
    let l = meet_all(elements.iter().map(|g| CellComplex::from_simplicial(g.domain())))?;
    let translates = elements
        .iter()
        .map(|g| {
            let cells = l
                .maximal_cells()
                .map(|c| g.map_cell(c).ok_or_else(|| GroupError::VerificationFailed(format!("cell {c:?} straddles L_g"))))
                .collect::<Result<Vec<ConvexCell>, _>>()?;
            Ok(CellComplex::from_cells(l.ambient_dim(), cells)?)
        })
        .collect::<Result<Vec<_>, GroupError>>()?;
    let m = meet_all(translates.into_iter())?;
    let out = star_subdivide(&m)?;

    let lookup = out.vertex_lookup();
    let facets: BTreeSet<&Simplex> = out.facets().iter().collect();
    let mut perms = Vec::with_capacity(elements.len());
    for g in &elements {
        let images = out
            .vertices()
            .iter()
            .map(|x| {
                g.eval(x)
                    .and_then(|y| lookup.get(&y).copied())
                    .ok_or_else(|| GroupError::VerificationFailed(format!("vertex {x:?} is not mapped to a vertex")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let p = Permutation::new(images)?;
        for f in out.facets() {
            if g.map_cell(&out.cell(f)).is_none() {
                return Err(GroupError::VerificationFailed(format!("g is not affine on {f:?}")));
            }
            if !facets.contains(&p.apply_simplex(f)) {
                return Err(GroupError::VerificationFailed(format!("image of {f:?} is not a simplex")));
            }
        }
        perms.push(p);
    }
    let distinct: BTreeSet<&Permutation> = perms.iter().collect();
    let action = GroupAction::generate(out.vertex_count(), &perms, elements.len())?;
    if distinct.len() != elements.len() || action.order() != elements.len() {
        return Err(GroupError::VerificationFailed("induced permutations do not form the group".into()));
    }
    if !check_simplicial_subdivision(&out, k).is_ok() {
        return Err(GroupError::VerificationFailed("output does not subdivide K".into()));
    }

    let (complex, action) = if options.pointwise_fixed {
        let (sd, action) = normalize_pointwise_fixed(&out, &action)?;
        (sd.complex, action)
    } else {
        (out, action)
    };
    Ok(EquivariantTriangulation {
        complex,
        action,
        maps: elements,
        common_cells: l.maximal_cells().count(),
        invariant_cells: m.maximal_cells().count(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{ratio, Rational, RationalPoint};
    use num_traits::Zero;

    fn segment_involution() -> (SimplicialComplex, PLHomeoSpec) {
        let k = SimplicialComplex::new(
            vec![RationalPoint::from_ints(&[0]), RationalPoint::from_ints(&[1])],
            vec![vec![0, 1]],
        )
        .unwrap();
        let lg = SimplicialComplex::new(
            vec![
                RationalPoint::from_ints(&[0]),
                RationalPoint::from_ratios(&[(1, 3)]),
                RationalPoint::from_ints(&[1]),
            ],
            vec![vec![0, 1], vec![1, 2]],
        )
        .unwrap();
        let images =
            vec![RationalPoint::from_ints(&[1]), RationalPoint::from_ratios(&[(2, 3)]), RationalPoint::from_ints(&[0])];
        (k, PLHomeoSpec::new(lg, images).unwrap())
    }

    /// Fixed point of a PL interval map, solved independently on each piece.
    fn fixed_point(g: &PLHomeoSpec) -> Rational {
        let d = g.domain();
        for f in d.facets() {
            let (a, b) = (&d.vertex(f.vertices()[0])[0], &d.vertex(f.vertices()[1])[0]);
            let (ga, gb) = (&g.images()[f.vertices()[0]][0], &g.images()[f.vertices()[1]][0]);
            // g(x) = ga + (x - a)(gb - ga)/(b - a) = x
            let slope = (gb - ga) / (b - a);
            let x = (ga - &slope * a) / (Rational::from_integer(1.into()) - &slope);
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            if lo <= &x && &x <= hi {
                return x;
            }
        }
        panic!("no fixed point");
    }

    fn coords(k: &SimplicialComplex) -> BTreeSet<Rational> {
        k.vertices().iter().map(|v| v[0].clone()).collect()
    }

    #[test]
    fn segment_involution_without_and_with_normalization() {
        let (k, g) = segment_involution();
        let p = fixed_point(&g);
        assert_eq!(p, ratio(1, 2));
        let plain = equivariant_triangulate(&k, std::slice::from_ref(&g), &TriangulateOptions::default()).unwrap();
        let expect: BTreeSet<Rational> = [Rational::zero(), ratio(1, 3), ratio(2, 3), ratio(1, 1)].into();
        assert_eq!(coords(&plain.complex), expect);
        assert_eq!(plain.action.order(), 2);

        let opts = TriangulateOptions { pointwise_fixed: true, ..Default::default() };
        let fixed = equivariant_triangulate(&k, &[g], &opts).unwrap();
        let got = coords(&fixed.complex);
        for q in expect.iter().chain([&p]) {
            assert!(got.contains(q));
        }
        let pi = fixed.complex.vertex_index(&RationalPoint::new(vec![p])).unwrap();
        assert!(fixed.action.elements().iter().all(|e| e.apply(pi) == pi));
    }

    #[test]
    fn linear_symmetries_of_a_triangle() {
        let k = SimplicialComplex::new(
            vec![RationalPoint::from_ints(&[0, 0]), RationalPoint::from_ints(&[2, 0]), RationalPoint::from_ints(&[1, 2])],
            vec![vec![0, 1, 2]],
        )
        .unwrap();
        let gens: Vec<PLHomeoSpec> = [vec![1, 0, 2], vec![1, 2, 0]]
            .into_iter()
            .map(|p| PLHomeoSpec::from_permutation(&k, &Permutation::new(p).unwrap()).unwrap())
            .collect();
        let out = equivariant_triangulate(&k, &gens, &TriangulateOptions::default()).unwrap();
        assert_eq!(out.complex.geometric_facets(), k.geometric_facets());
        assert_eq!(out.action.order(), 6);
    }
}
