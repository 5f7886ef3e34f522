//! Named standard complexes, some with group actions given as PL maps.

use crate::complex::{simplex_boundary, standard_realization, SimplicialComplex};
use crate::geometry::RationalPoint;
use crate::group::{PLHomeoSpec, Permutation};
use crate::io::ComplexFile;

pub const NAMES: &[&str] = &[
    "interval",
    "equilateral-triangle",
    "diamond",
    "tetrahedron",
    "sphere",
    "torus7",
    "rp2",
    "boundary-4-simplex",
    "boundary-5-simplex",
    "glued-tetrahedra",
    "wheel5",
    "wheel6",
    "wheel7",
    "segment-involution",
    "square-dihedral",
    "triangle-s3",
    "tetrahedron-s4",
    "torus-z2",
    "square-rotation",
];

/// Inputs carrying PL maps, for the equivariant triangulation.
pub const EQUIVARIANT: &[&str] =
    &["segment-involution", "square-dihedral", "triangle-s3", "tetrahedron-s4", "torus-z2", "square-rotation"];

fn points(coords: &[&[i64]]) -> Vec<RationalPoint> {
    coords.iter().map(|c| RationalPoint::from_ints(c)).collect()
}

fn complex(coords: &[&[i64]], facets: Vec<Vec<usize>>) -> SimplicialComplex {
    SimplicialComplex::new(points(coords), facets).expect("catalog complexes are valid")
}

fn with_permutations(k: SimplicialComplex, gens: &[&[usize]]) -> ComplexFile {
    let perms: Vec<Permutation> = gens.iter().map(|g| Permutation::new(g.to_vec()).expect("permutation")).collect();
    let maps = perms.iter().map(|p| PLHomeoSpec::from_permutation(&k, p).expect("automorphism")).collect();
    ComplexFile { complex: k, group: None, plmaps: Some(maps) }
}

/// Möbius' 7-vertex torus, in the standard realization.
pub fn torus7() -> SimplicialComplex {
    standard_realization(7, (0..7).flat_map(|i| [vec![i, (i + 1) % 7, (i + 3) % 7], vec![i, (i + 2) % 7, (i + 3) % 7]]).collect())
        .expect("torus")
}

/// The 6-vertex real projective plane, in the standard realization.
pub fn rp2() -> SimplicialComplex {
    standard_realization(
        6,
        vec![
            vec![0, 1, 2],
            vec![0, 2, 3],
            vec![0, 3, 4],
            vec![0, 4, 5],
            vec![0, 5, 1],
            vec![1, 2, 4],
            vec![2, 3, 5],
            vec![3, 4, 1],
            vec![4, 5, 2],
            vec![5, 1, 3],
        ],
    )
    .expect("rp2")
}

/// Boundary of the square with vertices `(±1, 0)`, `(0, ±1)`; every vertex has
/// norm 1.
pub fn diamond() -> SimplicialComplex {
    complex(&[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]], vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]])
}

/// Boundary of a regular tetrahedron centred at the origin, vertices of
/// norm √3.
pub fn tetrahedron() -> SimplicialComplex {
    complex(
        &[&[1, 1, 1], &[1, -1, -1], &[-1, 1, -1], &[-1, -1, 1]],
        vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]],
    )
}

/// Cone on an `m`-cycle: an interior vertex 0 with `m` triangles.
pub fn wheel(m: usize) -> SimplicialComplex {
    standard_realization(m + 1, (1..=m).map(|i| vec![0, i, i % m + 1]).collect()).expect("wheel")
}

pub fn glued_tetrahedra() -> SimplicialComplex {
    standard_realization(7, vec![vec![0, 1, 2, 3], vec![0, 4, 5, 6]]).expect("glued tetrahedra")
}

/// `[0, 1]` with the involution fixing `1/2`, given on the subdivision at
/// `1/3`: `0 ↦ 1`, `1/3 ↦ 2/3`, `1 ↦ 0`.
fn segment_involution() -> ComplexFile {
    let k = complex(&[&[0], &[1]], vec![vec![0, 1]]);
    let lg = SimplicialComplex::new(
        vec![RationalPoint::from_ints(&[0]), RationalPoint::from_ratios(&[(1, 3)]), RationalPoint::from_ints(&[1])],
        vec![vec![0, 1], vec![1, 2]],
    )
    .expect("subdivision");
    let images = vec![RationalPoint::from_ints(&[1]), RationalPoint::from_ratios(&[(2, 3)]), RationalPoint::from_ints(&[0])];
    ComplexFile { complex: k, group: None, plmaps: Some(vec![PLHomeoSpec::new(lg, images).expect("map")]) }
}

/// The square `[0, 2]²` cut along one diagonal, with the quarter turn given on the
/// subdivision starred at the centre. The turn is not simplicial on the input.
fn square_rotation() -> ComplexFile {
    let corners: &[&[i64]] = &[&[0, 0], &[2, 0], &[2, 2], &[0, 2]];
    let k = complex(corners, vec![vec![0, 1, 2], vec![0, 2, 3]]);
    let mut verts = points(corners);
    verts.push(RationalPoint::from_ints(&[1, 1]));
    let lg = SimplicialComplex::new(verts, vec![vec![0, 1, 4], vec![1, 2, 4], vec![2, 3, 4], vec![3, 0, 4]]).expect("star");
    // (x, y) ↦ (2 − y, x)
    let images = points(&[&[2, 0], &[2, 2], &[0, 2], &[0, 0], &[1, 1]]);
    ComplexFile { complex: k, group: None, plmaps: Some(vec![PLHomeoSpec::new(lg, images).expect("map")]) }
}

pub fn get(name: &str) -> Option<ComplexFile> {
    let plain = |k: SimplicialComplex| Some(ComplexFile::new(k));
    match name {
        "interval" => plain(complex(&[&[0], &[1]], vec![vec![0, 1]])),
        "equilateral-triangle" => plain(standard_realization(3, vec![vec![0, 1, 2]]).expect("triangle")),
        "diamond" => plain(diamond()),
        "tetrahedron" => plain(tetrahedron()),
        "sphere" => plain(simplex_boundary(3)),
        "torus7" => plain(torus7()),
        "rp2" => plain(rp2()),
        "boundary-4-simplex" => plain(simplex_boundary(4)),
        "boundary-5-simplex" => plain(simplex_boundary(5)),
        "glued-tetrahedra" => plain(glued_tetrahedra()),
        "wheel5" => plain(wheel(5)),
        "wheel6" => plain(wheel(6)),
        "wheel7" => plain(wheel(7)),
        "segment-involution" => Some(segment_involution()),
        "square-dihedral" => Some(with_permutations(
            complex(&[&[0, 0], &[1, 0], &[1, 1], &[0, 1]], vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]]),
            &[&[1, 2, 3, 0], &[0, 3, 2, 1]],
        )),
        "triangle-s3" => Some(with_permutations(
            standard_realization(3, vec![vec![0, 1, 2]]).expect("triangle"),
            &[&[1, 0, 2], &[1, 2, 0]],
        )),
        "tetrahedron-s4" => Some(with_permutations(simplex_boundary(3), &[&[1, 0, 2, 3], &[1, 2, 3, 0]])),
        // i ↦ −i mod 7 exchanges the two triangle families
        "torus-z2" => Some(with_permutations(torus7(), &[&[0, 6, 5, 4, 3, 2, 1]])),
        "square-rotation" => Some(square_rotation()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_name_resolves() {
        for name in NAMES {
            let file = get(name).unwrap_or_else(|| panic!("{name}"));
            if let Some(maps) = &file.plmaps {
                for m in maps {
                    m.validate(&file.complex).unwrap_or_else(|e| panic!("{name}: {e}"));
                }
            }
        }
        assert!(EQUIVARIANT.iter().all(|n| get(n).unwrap().plmaps.is_some()));
        assert!(get("nothing").is_none());
    }

    #[test]
    fn face_counts() {
        assert_eq!(torus7().f_vector(), vec![7, 21, 14]);
        assert_eq!(rp2().f_vector(), vec![6, 15, 10]);
        assert_eq!(get("tetrahedron").unwrap().complex.f_vector(), vec![4, 6, 4]);
        assert!(diamond().vertices().iter().all(|v| v.squared_norm() == crate::geometry::int(1)));
    }
}
