use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::complex::{Simplex, SimplicialComplex};

/// Position of the nonzero entry of least magnitude in the block `t..`.
fn least_entry(a: &[Vec<BigInt>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, x) in row.iter().enumerate().skip(t) {
            if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < a[bi][bj].abs()) {
                if x.abs().is_one() {
                    return Some((i, j));
                }
                best = Some((i, j));
            }
        }
    }
    best
}

/// Quotient rounded to the nearest integer, so `|x − q·p| ≤ |p|/2`.
fn nearest_quotient(x: &BigInt, p: &BigInt) -> BigInt {
    let (q, r) = x.div_mod_floor(p);
    // r carries the sign of p, so stepping q up moves r towards zero
    if (&r + &r).abs() > p.abs() { q + 1 } else { q }
}

/// Nonzero invariant factors of an integer matrix: positive, each dividing
/// the next.
///
/// The pivot is always the least nonzero entry of the remaining block and
/// remainders are symmetric, which keeps entries from growing on dense
/// inputs.
pub fn smith_normal_form(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = least_entry(&a, t) else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        let mut clean = true;
        for i in t + 1..rows {
            if a[i][t].is_zero() {
                continue;
            }
            let q = nearest_quotient(&a[i][t], &a[t][t]);
            for j in t..cols {
                let delta = &q * &a[t][j];
                a[i][j] -= delta;
            }
            clean &= a[i][t].is_zero();
        }
        for j in t + 1..cols {
            if a[t][j].is_zero() {
                continue;
            }
            let q = nearest_quotient(&a[t][j], &a[t][t]);
            for row in a.iter_mut().skip(t) {
                let delta = &q * &row[t];
                row[j] -= delta;
            }
            clean &= a[t][j].is_zero();
        }
        // a nonzero remainder is smaller than the pivot and becomes the next one
        if !clean {
            continue;
        }
        // enforce divisibility by folding an offending row into row t
        let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&a[i][j] % &a[t][t]).is_zero()));
        if let Some(i) = bad {
            for j in t..cols {
                let v = a[i][j].clone();
                a[t][j] += v;
            }
            continue;
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    diag
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologyGroup {
    pub betti: usize,
    /// Torsion coefficients, each at least 2, in divisibility order.
    pub torsion: Vec<u64>,
}

impl HomologyGroup {
    pub fn is_zero(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }

    pub fn is_z(&self) -> bool {
        self.betti == 1 && self.torsion.is_empty()
    }
}

impl std::fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.betti {
            0 => {}
            1 => parts.push("Z".into()),
            b => parts.push(format!("Z^{b}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Integral homology groups `H_0 … H_dim`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct HomologyProfile(pub Vec<HomologyGroup>);

impl HomologyProfile {
    pub fn groups(&self) -> &[HomologyGroup] {
        &self.0
    }

    /// Alternating sum of Betti numbers.
    pub fn euler_characteristic(&self) -> i64 {
        self.0.iter().enumerate().map(|(d, g)| if d % 2 == 0 { g.betti as i64 } else { -(g.betti as i64) }).sum()
    }

    /// Whether this is the homology of the `n`-sphere.
    pub fn is_sphere(&self, n: usize) -> bool {
        self.0.len() == n + 1
            && self.0.iter().enumerate().all(|(d, g)| if d == 0 || d == n { g.is_z() } else { g.is_zero() })
    }
}

/// Boundary matrix `∂_k : C_k → C_{k-1}` in sorted simplex bases, with the
/// orientation induced by sorted vertex order.
fn boundary_matrix(lower: &[Simplex], upper: &[Simplex]) -> Vec<Vec<BigInt>> {
    let index: BTreeMap<&Simplex, usize> = lower.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut m = vec![vec![BigInt::zero(); upper.len()]; lower.len()];
    for (j, s) in upper.iter().enumerate() {
        for (i, face) in s.facets().iter().enumerate() {
            // facets() drops vertices from the back, so facet i omits vertex d - i.
            let omitted = s.len() - 1 - i;
            m[index[face]][j] = if omitted % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        }
    }
    m
}

/// Integral simplicial homology via Smith normal forms of the boundary maps.
pub fn homology(k: &SimplicialComplex) -> HomologyProfile {
    if k.is_empty() {
        return HomologyProfile(Vec::new());
    }
    let top = k.dim();
    let chains: Vec<Vec<Simplex>> = (0..=top).map(|d| k.simplices_of_dim(d).into_iter().collect()).collect();
    // invariant factors of ∂_d for d = 1..=top
    let mut factors: Vec<Vec<BigInt>> = vec![Vec::new()];
    for d in 1..=top {
        factors.push(smith_normal_form(boundary_matrix(&chains[d - 1], &chains[d])));
    }
    factors.push(Vec::new());
    let groups = (0..=top)
        .map(|d| {
            let rank_out = factors[d].len();
            let rank_in = factors[d + 1].len();
            HomologyGroup {
                betti: chains[d].len() - rank_out - rank_in,
                torsion: factors[d + 1]
                    .iter()
                    .filter(|x| !x.is_one())
                    .map(|x| x.to_u64().expect("torsion coefficient fits in 64 bits"))
                    .collect(),
            }
        })
        .collect();
    HomologyProfile(groups)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{simplex_boundary, standard_realization};

    fn bi(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn nearest_quotient_leaves_small_remainders() {
        for x in -30i64..=30 {
            for p in [-7i64, -4, -1, 1, 4, 7] {
                let q = nearest_quotient(&BigInt::from(x), &BigInt::from(p));
                let r = BigInt::from(x) - q * p;
                assert!(2 * r.abs() <= BigInt::from(p.abs()), "{x} mod {p}");
            }
        }
    }

    #[test]
    fn dense_matrix_with_negative_pivots() {
        let a = bi(&[&[-5, 3, -4, 2], &[4, -5, 5, -3], &[-3, 2, -5, 4], &[5, -4, 3, -5]]);
        // |det| = 138 and the 3×3 minors are coprime
        assert_eq!(smith_normal_form(a), [1, 1, 1, 138].map(BigInt::from));
    }

    #[test]
    fn small_smith_forms() {
        assert_eq!(smith_normal_form(bi(&[&[2, 4], &[6, 8]])), vec![BigInt::from(2), BigInt::from(4)]);
        assert_eq!(smith_normal_form(bi(&[&[2, 0], &[0, 3]])), vec![BigInt::from(1), BigInt::from(6)]);
        assert_eq!(smith_normal_form(bi(&[&[0, 0], &[0, 0]])), Vec::<BigInt>::new());
    }

    #[test]
    fn sphere_homology() {
        let h = homology(&simplex_boundary(3));
        assert!(h.is_sphere(2));
        assert_eq!(h.euler_characteristic(), 2);
        assert!(homology(&simplex_boundary(4)).is_sphere(3));
    }

    #[test]
    fn torus_and_projective_plane() {
        let torus = standard_realization(
            7,
            (0..7).flat_map(|i| [vec![i, (i + 1) % 7, (i + 3) % 7], vec![i, (i + 2) % 7, (i + 3) % 7]]).collect(),
        )
        .unwrap();
        let h = homology(&torus);
        assert_eq!(h.0.iter().map(|g| g.to_string()).collect::<Vec<_>>(), vec!["Z", "Z^2", "Z"]);

        let rp2 = standard_realization(
            6,
            vec![
                vec![0, 1, 2], vec![0, 2, 3], vec![0, 3, 4], vec![0, 4, 5], vec![0, 5, 1],
                vec![1, 2, 4], vec![2, 3, 5], vec![3, 4, 1], vec![4, 5, 2], vec![5, 1, 3],
            ],
        )
        .unwrap();
        let h = homology(&rp2);
        assert_eq!(h.0.iter().map(|g| g.to_string()).collect::<Vec<_>>(), vec!["Z", "Z/2", "0"]);
    }
}
