//! Finite groups acting on complexes by vertex permutations, and the
//! equivariant triangulation of PL group actions.

mod equivariant;
mod pl;

pub use equivariant::{equivariant_triangulate, EquivariantTriangulation, TriangulateOptions};
pub use pl::{generate_pl_group, PLHomeoSpec, DEFAULT_GROUP_BOUND};

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::complex::{barycentric_subdivision, BarycentricSubdivision, ComplexError, Simplex, SimplicialComplex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("maps generate more than {bound} elements")]
    NotClosed { bound: usize },
    #[error("invalid PL homeomorphism: {0}")]
    InvalidMap(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("not a permutation of {0} points")]
    NotAPermutation(usize),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Permutation of `0..n`, stored as the image of each point.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self, GroupError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(GroupError::NotAPermutation(n));
            }
        }
        Ok(Permutation(images))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    /// Product of disjoint cycles on `0..n`.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self, GroupError> {
        let mut images: Vec<usize> = (0..n).collect();
        for c in cycles {
            for (k, &i) in c.iter().enumerate() {
                *images.get_mut(i).ok_or(GroupError::NotAPermutation(n))? = c[(k + 1) % c.len()];
            }
        }
        Permutation::new(images)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn apply_simplex(&self, s: &Simplex) -> Simplex {
        s.map(|v| self.0[v])
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Permutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn order(&self) -> usize {
        let mut p = self.clone();
        let mut k = 1;
        while !p.is_identity() {
            p = self.compose(&p);
            k += 1;
        }
        k
    }

    /// Whether the permutation maps maximal simplices of `k` onto maximal
    /// simplices, i.e. is a simplicial automorphism.
    pub fn is_automorphism_of(&self, k: &SimplicialComplex) -> bool {
        let facets: BTreeSet<&Simplex> = k.facets().iter().collect();
        self.0.len() == k.vertex_count() && k.facets().iter().all(|f| facets.contains(&self.apply_simplex(f)))
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// A finite group of permutations of `0..n`, sorted, containing the identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupAction {
    degree: usize,
    elements: Vec<Permutation>,
}

impl GroupAction {
    pub fn trivial(n: usize) -> Self {
        GroupAction { degree: n, elements: vec![Permutation::identity(n)] }
    }

    /// Group generated by `generators`, failing past `bound` elements.
    pub fn generate(n: usize, generators: &[Permutation], bound: usize) -> Result<Self, GroupError> {
        if let Some(g) = generators.iter().find(|g| g.len() != n) {
            return Err(GroupError::NotAPermutation(g.len().max(n)));
        }
        let id = Permutation::identity(n);
        let mut seen: BTreeSet<Permutation> = BTreeSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        while let Some(p) = queue.pop_front() {
            for g in generators {
                let q = g.compose(&p);
                if seen.insert(q.clone()) {
                    if seen.len() > bound {
                        return Err(GroupError::NotClosed { bound });
                    }
                    queue.push_back(q);
                }
            }
        }
        Ok(GroupAction { degree: n, elements: seen.into_iter().collect() })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.elements.binary_search(p).is_ok()
    }

    /// Vertex orbits, each sorted, ordered by least member.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut orbit_of = vec![usize::MAX; self.degree];
        let mut out: Vec<Vec<usize>> = Vec::new();
        for v in 0..self.degree {
            if orbit_of[v] != usize::MAX {
                continue;
            }
            let orbit: BTreeSet<usize> = self.elements.iter().map(|g| g.apply(v)).collect();
            for &w in &orbit {
                orbit_of[w] = out.len();
            }
            out.push(orbit.into_iter().collect());
        }
        out
    }

    /// Orbits of the given simplices (closed under the action as a set is not
    /// required; each orbit is the full G-orbit intersected with `items`).
    pub fn simplex_orbits(&self, items: &[Simplex]) -> Vec<Vec<Simplex>> {
        let present: BTreeSet<&Simplex> = items.iter().collect();
        let mut done: BTreeSet<Simplex> = BTreeSet::new();
        let mut out = Vec::new();
        let mut sorted: Vec<&Simplex> = items.iter().collect();
        sorted.sort();
        for s in sorted {
            if done.contains(s) {
                continue;
            }
            let orbit: BTreeSet<Simplex> = self
                .elements
                .iter()
                .map(|g| g.apply_simplex(s))
                .filter(|t| present.contains(t))
                .collect();
            done.extend(orbit.iter().cloned());
            out.push(orbit.into_iter().collect());
        }
        out
    }

    /// Index of the orbit of each vertex, with orbits ordered by least member.
    pub fn orbit_index(&self) -> Vec<usize> {
        let mut idx = vec![0; self.degree];
        for (k, orbit) in self.orbits().iter().enumerate() {
            for &v in orbit {
                idx[v] = k;
            }
        }
        idx
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ActionViolation {
    WrongDegree { element: usize, degree: usize },
    NotSimplicial { element: usize, simplex: Simplex },
    MissingIdentity,
    MissingInverse { element: usize },
    NotClosed { first: usize, second: usize },
}

#[derive(Debug, Clone, Serialize)]
pub struct ActionReport {
    /// Elements that are not simplicial automorphisms.
    pub violations: Vec<ActionViolation>,
    /// Identity, inverse and closure failures of the set as given.
    pub group_violations: Vec<ActionViolation>,
    /// Order of the generated group, when every element is an automorphism.
    pub generated_order: Option<usize>,
}

impl ActionReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn is_group(&self) -> bool {
        self.is_valid() && self.group_violations.is_empty()
    }
}

/// Checks that each candidate permutation is a simplicial automorphism of
/// `k`, and reports how far the set is from being a group.
pub fn verify_simplicial_action(k: &SimplicialComplex, candidates: &[Permutation]) -> ActionReport {
    let n = k.vertex_count();
    let facets: BTreeSet<&Simplex> = k.facets().iter().collect();
    let mut violations = Vec::new();
    for (e, g) in candidates.iter().enumerate() {
        if g.len() != n {
            violations.push(ActionViolation::WrongDegree { element: e, degree: g.len() });
            continue;
        }
        if let Some(f) = k.facets().iter().find(|f| !facets.contains(&g.apply_simplex(f))) {
            violations.push(ActionViolation::NotSimplicial { element: e, simplex: f.clone() });
        }
    }
    let mut group_violations = Vec::new();
    let generated_order = if violations.is_empty() {
        let index: BTreeMap<&Permutation, usize> = candidates.iter().enumerate().map(|(i, g)| (g, i)).collect();
        if !index.contains_key(&Permutation::identity(n)) {
            group_violations.push(ActionViolation::MissingIdentity);
        }
        for (i, g) in candidates.iter().enumerate() {
            if !index.contains_key(&g.inverse()) {
                group_violations.push(ActionViolation::MissingInverse { element: i });
            }
        }
        'outer: for (i, a) in candidates.iter().enumerate() {
            for (j, b) in candidates.iter().enumerate() {
                if !index.contains_key(&a.compose(b)) {
                    group_violations.push(ActionViolation::NotClosed { first: i, second: j });
                    break 'outer;
                }
            }
        }
        // Automorphisms of a finite complex form a finite group.
        GroupAction::generate(n, candidates, usize::MAX).ok().map(|g| g.order())
    } else {
        None
    };
    ActionReport { violations, group_violations, generated_order }
}

/// All simplicial automorphisms of `k`, by backtracking over vertex
/// assignments that preserve local invariants and 1-skeleton adjacency.
pub fn automorphism_group(k: &SimplicialComplex) -> GroupAction {
    let n = k.vertex_count();
    let edges: BTreeSet<(usize, usize)> = k
        .simplices_of_dim(1)
        .into_iter()
        .map(|e| (e.vertices()[0], e.vertices()[1]))
        .collect();
    let adjacent = |a: usize, b: usize| edges.contains(&(a.min(b), a.max(b)));
    let invariant: Vec<(Vec<usize>, usize)> = (0..n)
        .map(|v| {
            let mut sizes: Vec<usize> = k.cofacets(&Simplex::vertex(v)).iter().map(|f| f.len()).collect();
            sizes.sort_unstable();
            let degree = (0..n).filter(|&w| w != v && adjacent(v, w)).count();
            (sizes, degree)
        })
        .collect();

    // Breadth-first vertex order keeps new vertices adjacent to assigned ones.
    let mut order = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    for start in 0..n {
        if placed[start] {
            continue;
        }
        placed[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for w in 0..n {
                if !placed[w] && adjacent(v, w) {
                    placed[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }

    let mut found = Vec::new();
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn search(
        depth: usize,
        order: &[usize],
        image: &mut Vec<usize>,
        used: &mut Vec<bool>,
        ok: &dyn Fn(usize, usize, &[usize]) -> bool,
        done: &mut dyn FnMut(&[usize]),
    ) {
        if depth == order.len() {
            done(image);
            return;
        }
        let v = order[depth];
        for w in 0..image.len() {
            if used[w] || !ok(v, w, image) {
                continue;
            }
            image[v] = w;
            used[w] = true;
            search(depth + 1, order, image, used, ok, done);
            used[w] = false;
            image[v] = usize::MAX;
        }
    }
    let ok = |v: usize, w: usize, image: &[usize]| -> bool {
        invariant[v] == invariant[w]
            && (0..n).all(|u| image[u] == usize::MAX || adjacent(u, v) == adjacent(image[u], w))
    };
    let mut done = |image: &[usize]| {
        let p = Permutation(image.to_vec());
        if p.is_automorphism_of(k) {
            found.push(p);
        }
    };
    search(0, &order, &mut image, &mut used, &ok, &mut done);
    found.sort();
    GroupAction { degree: n, elements: found }
}

/// Barycentric subdivision with the induced action on barycenters; after it,
/// every element fixes each simplex it leaves invariant pointwise.
pub fn normalize_pointwise_fixed(
    k: &SimplicialComplex,
    g: &GroupAction,
) -> Result<(BarycentricSubdivision, GroupAction), GroupError> {
    let sd = barycentric_subdivision(k);
    let index: BTreeMap<&Simplex, usize> = sd.origin.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let induced: Vec<Permutation> = g
        .elements()
        .iter()
        .map(|p| Permutation(sd.origin.iter().map(|s| index[&p.apply_simplex(s)]).collect()))
        .collect();
    let mut elements = induced;
    elements.sort();
    let action = GroupAction { degree: sd.complex.vertex_count(), elements };
    for p in action.elements() {
        if !p.is_automorphism_of(&sd.complex) {
            return Err(GroupError::VerificationFailed("induced map is not simplicial".into()));
        }
        for s in sd.complex.simplices() {
            if p.apply_simplex(&s) == s && s.vertices().iter().any(|&v| p.apply(v) != v) {
                return Err(GroupError::VerificationFailed(format!("invariant simplex {s:?} is not fixed pointwise")));
            }
        }
    }
    Ok((sd, action))
}
