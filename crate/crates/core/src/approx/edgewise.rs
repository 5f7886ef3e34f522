use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;

use super::ApproxError;
use crate::complex::{Simplex, SimplicialComplex};
use crate::geometry::{Rational, RationalPoint};
use crate::group::{GroupAction, Permutation};

/// Barycentric label of an output vertex: sorted `(input vertex, weight)`
/// pairs with positive weights summing to one.
pub type Label = Vec<(usize, Rational)>;

#[derive(Clone, Debug)]
pub struct EdgewiseSubdivision {
    pub complex: SimplicialComplex,
    /// Induced action on the output vertices.
    pub action: GroupAction,
    /// Position of each output vertex in terms of the input vertices.
    pub labels: Vec<Label>,
}

/// Freudenthal simplices of the degree-`k` lattice in the standard
/// `d`-simplex, in cumulative coordinates `k ≥ y_1 ≥ … ≥ y_d ≥ 0`.
fn kuhn_simplices(d: usize, k: usize) -> Vec<Vec<Vec<usize>>> {
    let inside = |y: &[usize]| y.windows(2).all(|w| w[0] >= w[1]) && y.first().is_none_or(|&y1| y1 <= k);
    let mut out = Vec::new();
    for base in (0..d).map(|_| 0..k).multi_cartesian_product() {
        for perm in (0..d).permutations(d) {
            let mut path = vec![base.clone()];
            let mut y = base.clone();
            for &axis in &perm {
                y[axis] += 1;
                path.push(y.clone());
            }
            if path.iter().all(|p| inside(p)) {
                out.push(path);
            }
        }
    }
    if d == 0 {
        out.push(vec![Vec::new()]);
    }
    out
}

/// Barycentric lattice coordinates `c_0..c_d` of a cumulative point.
fn lattice_coords(y: &[usize], k: usize) -> Vec<usize> {
    let d = y.len();
    let mut c = Vec::with_capacity(d + 1);
    c.push(k - y.first().copied().unwrap_or(0));
    for i in 0..d {
        c.push(y[i] - y.get(i + 1).copied().unwrap_or(0));
    }
    c
}

/// Degree-`k` edgewise subdivision of every maximal simplex of `complex`.
///
/// Each simplex is subdivided with its vertices ordered by the key
/// `(orbit index, vertex index)`. The induced action of `g` is read off
/// from barycentric labels and checked exactly; an element that does not act
/// simplicially on the output is an error.
pub fn edgewise_subdivision(
    complex: &SimplicialComplex,
    k: usize,
    g: &GroupAction,
) -> Result<EdgewiseSubdivision, ApproxError> {
    if k == 0 {
        return Err(ApproxError::BadDegree(k));
    }
    if g.degree() != complex.vertex_count() {
        return Err(ApproxError::ActionMismatch { expected: complex.vertex_count(), found: g.degree() });
    }
    let orbit = g.orbit_index();
    let kq = Rational::from_integer(k.into());
    let mut tables: BTreeMap<usize, Vec<Vec<Vec<usize>>>> = BTreeMap::new();
    let mut labels: Vec<Label> = Vec::new();
    let mut index: BTreeMap<Label, usize> = BTreeMap::new();
    let mut facets = Vec::new();
    for f in complex.facets() {
        let mut order: Vec<usize> = f.vertices().to_vec();
        order.sort_by_key(|&v| (orbit[v], v));
        let d = f.dim();
        let table = tables.entry(d).or_insert_with(|| kuhn_simplices(d, k));
        for path in table.iter() {
            let mut simplex = Vec::with_capacity(d + 1);
            for y in path {
                let label: Label = lattice_coords(y, k)
                    .into_iter()
                    .zip(&order)
                    .filter(|(c, _)| *c > 0)
                    .map(|(c, &v)| (v, Rational::from_integer(c.into()) / &kq))
                    .sorted()
                    .collect();
                let next = labels.len();
                let id = *index.entry(label.clone()).or_insert(next);
                if id == next {
                    labels.push(label);
                }
                simplex.push(id);
            }
            facets.push(simplex);
        }
    }
    let vertices: Vec<RationalPoint> = labels
        .iter()
        .map(|l| {
            let pts: Vec<&RationalPoint> = l.iter().map(|(v, _)| complex.vertex(*v)).collect();
            let w: Vec<Rational> = l.iter().map(|(_, w)| w.clone()).collect();
            RationalPoint::combination(&pts, &w)
        })
        .collect();
    let out = SimplicialComplex::new(vertices, facets)?;

    let present: BTreeSet<&Simplex> = out.facets().iter().collect();
    let mut induced = Vec::with_capacity(g.order());
    for p in g.elements() {
        let images = labels
            .iter()
            .map(|l| {
                let moved: Label = l.iter().map(|(v, w)| (p.apply(*v), w.clone())).sorted().collect();
                index.get(&moved).copied().ok_or_else(|| {
                    ApproxError::NotEquivariant(format!("vertex {l:?} has no image under {p:?}"))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let q = Permutation::new(images)?;
        if let Some(f) = out.facets().iter().find(|f| !present.contains(&q.apply_simplex(f))) {
            return Err(ApproxError::NotEquivariant(format!("{p:?} does not map {f:?} onto a simplex")));
        }
        induced.push(q);
    }
    let action = GroupAction::generate(out.vertex_count(), &induced, g.order().max(1))?;
    Ok(EdgewiseSubdivision { complex: out, action, labels })
}
