use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;

use crate::complex::{Simplex, SimplicialComplex};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum SurfaceClass {
    Sphere,
    /// Closed connected surface other than the sphere. `genus` counts handles
    /// when orientable and cross-caps otherwise.
    Surface { orientable: bool, genus: usize, euler: i64 },
    NonManifold { reason: String },
    NotClosed { reason: String },
    Disconnected { components: usize },
}

pub(crate) fn components(k: &SimplicialComplex) -> usize {
    let n = k.vertex_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for f in k.facets() {
        let vs = f.vertices();
        for w in &vs[1..] {
            let (a, b) = (find(&mut parent, vs[0]), find(&mut parent, *w));
            parent[a] = b;
        }
    }
    (0..n).filter(|&x| find(&mut parent, x) == x).count()
}

pub(crate) fn is_connected(k: &SimplicialComplex) -> bool {
    components(k) == 1
}

fn edge_counts(k: &SimplicialComplex) -> BTreeMap<Simplex, usize> {
    let mut count = BTreeMap::new();
    for f in k.facets() {
        for e in f.facets() {
            *count.entry(e).or_default() += 1;
        }
    }
    count
}

/// A connected 1-complex in which every vertex has degree two.
pub fn is_single_cycle(k: &SimplicialComplex) -> bool {
    if k.is_empty() || k.dim() != 1 || !k.is_pure() || k.vertex_count() < 3 {
        return false;
    }
    (0..k.vertex_count()).all(|v| k.facet_degree(v) == 2) && is_connected(k)
}

fn is_path(k: &SimplicialComplex) -> bool {
    if k.is_empty() || k.dim() != 1 || !k.is_pure() || !is_connected(k) {
        return false;
    }
    let degrees: Vec<usize> = (0..k.vertex_count()).map(|v| k.facet_degree(v)).collect();
    degrees.iter().all(|&d| d <= 2) && degrees.iter().filter(|&&d| d == 1).count() == 2
}

/// Whether `k` is a PL `d`-ball, for `d ≤ 2`.
pub fn is_ball(k: &SimplicialComplex, d: usize) -> bool {
    match d {
        0 => k.vertex_count() == 1,
        1 => is_path(k),
        2 => {
            if k.is_empty() || k.dim() != 2 || !k.is_pure() || !is_connected(k) {
                return false;
            }
            let counts = edge_counts(k);
            if counts.values().any(|&c| c > 2) {
                return false;
            }
            let boundary: Vec<Vec<usize>> =
                counts.iter().filter(|(_, &c)| c == 1).map(|(e, _)| e.vertices().to_vec()).collect();
            let (bd, _) = k.restrict(&boundary.iter().map(|e| Simplex::new(e.clone())).collect::<Vec<_>>());
            let links_ok = (0..k.vertex_count()).all(|v| {
                k.link(&Simplex::vertex(v)).is_ok_and(|l| is_single_cycle(&l) || is_path(&l))
            });
            links_ok && is_single_cycle(&bd) && k.euler_characteristic() == 1
        }
        _ => false,
    }
}

/// Orientability of a closed pseudo-surface by propagating triangle
/// orientations across edges.
fn orientable(k: &SimplicialComplex) -> bool {
    let tris = k.facets();
    let mut by_edge: BTreeMap<Simplex, Vec<usize>> = BTreeMap::new();
    for (i, t) in tris.iter().enumerate() {
        for e in t.facets() {
            by_edge.entry(e).or_default().push(i);
        }
    }
    // sign[i] = ±1 relative to the sorted vertex orientation.
    let mut sign = vec![0i8; tris.len()];
    // Sorted-order boundary sign of the edge omitting the vertex at position p.
    let induced = |t: &Simplex, e: &Simplex| -> i8 {
        let omitted = t.minus(e).vertices()[0];
        let p = t.vertices().iter().position(|&v| v == omitted).expect("edge of triangle");
        if p % 2 == 0 { 1 } else { -1 }
    };
    for start in 0..tris.len() {
        if sign[start] != 0 {
            continue;
        }
        sign[start] = 1;
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            for e in tris[i].facets() {
                for &j in &by_edge[&e] {
                    if j == i {
                        continue;
                    }
                    // Neighbours induce opposite orientations on the shared edge.
                    let want = -sign[i] * induced(&tris[i], &e) * induced(&tris[j], &e);
                    if sign[j] == 0 {
                        sign[j] = want;
                        queue.push_back(j);
                    } else if sign[j] != want {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Classifies a 2-complex as a closed surface by Euler characteristic and
/// orientability, after checking the manifold conditions.
pub fn classify_closed_surface(k: &SimplicialComplex) -> SurfaceClass {
    let bad = |r: &str| SurfaceClass::NonManifold { reason: r.to_string() };
    if k.is_empty() || k.dim() != 2 || !k.is_pure() {
        return bad("not pure of dimension 2");
    }
    let counts = edge_counts(k);
    if counts.values().any(|&c| c > 2) {
        return bad("edge in more than two triangles");
    }
    if counts.values().any(|&c| c == 1) {
        return SurfaceClass::NotClosed { reason: "edge in only one triangle".into() };
    }
    for v in 0..k.vertex_count() {
        if !k.link(&Simplex::vertex(v)).is_ok_and(|l| is_single_cycle(&l)) {
            return bad("vertex link is not a single cycle");
        }
    }
    let c = components(k);
    if c != 1 {
        return SurfaceClass::Disconnected { components: c };
    }
    let euler = k.euler_characteristic();
    let orientable = orientable(k);
    if orientable && euler == 2 {
        return SurfaceClass::Sphere;
    }
    let genus = if orientable { (2 - euler) / 2 } else { 2 - euler };
    SurfaceClass::Surface { orientable, genus: genus as usize, euler }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{simplex_boundary, standard_realization};

    #[test]
    fn examples() {
        assert_eq!(classify_closed_surface(&simplex_boundary(3)), SurfaceClass::Sphere);
        let torus = standard_realization(
            7,
            (0..7).flat_map(|i| [vec![i, (i + 1) % 7, (i + 3) % 7], vec![i, (i + 2) % 7, (i + 3) % 7]]).collect(),
        )
        .unwrap();
        assert_eq!(
            classify_closed_surface(&torus),
            SurfaceClass::Surface { orientable: true, genus: 1, euler: 0 }
        );
        let bowtie = standard_realization(5, vec![vec![0, 1, 2], vec![0, 3, 4]]).unwrap();
        assert!(matches!(classify_closed_surface(&bowtie), SurfaceClass::NonManifold { .. } | SurfaceClass::NotClosed { .. }));
        let rp2 = standard_realization(
            6,
            vec![
                vec![0, 1, 2], vec![0, 2, 3], vec![0, 3, 4], vec![0, 4, 5], vec![0, 5, 1],
                vec![1, 2, 4], vec![2, 3, 5], vec![3, 4, 1], vec![4, 5, 2], vec![5, 1, 3],
            ],
        )
        .unwrap();
        assert_eq!(
            classify_closed_surface(&rp2),
            SurfaceClass::Surface { orientable: false, genus: 1, euler: 1 }
        );
    }

    #[test]
    fn balls() {
        let disk = standard_realization(4, vec![vec![0, 1, 2], vec![0, 2, 3]]).unwrap();
        assert!(is_ball(&disk, 2));
        assert!(!is_ball(&simplex_boundary(3), 2));
        let arc = standard_realization(3, vec![vec![0, 1], vec![1, 2]]).unwrap();
        assert!(is_ball(&arc, 1));
    }
}
