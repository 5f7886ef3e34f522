//! Exact Gaussian elimination over the rationals.

use num_traits::{One, Zero};

use super::Rational;

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// Reduced row echelon form in place; returns the pivot columns.
/// Only the first `ncols` columns are used for pivoting.
pub fn rref(rows: &mut [Vec<Rational>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Rational::one() / &rows[r][c];
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &factor * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let Some(first) = rows.first() else {
        return 0;
    };
    let ncols = first.len();
    let mut m = rows.to_vec();
    rref(&mut m, ncols).len()
}

/// Solves an augmented system `[A | b]` with `nvars` unknowns. Returns the
/// solution when it exists and is unique.
pub fn solve_augmented(mut rows: Vec<Vec<Rational>>, nvars: usize) -> Option<Vec<Rational>> {
    let pivots = rref(&mut rows, nvars);
    // Inconsistent row: zero coefficients with nonzero right-hand side.
    for row in rows.iter().skip(pivots.len()) {
        if !row[nvars].is_zero() {
            return None;
        }
    }
    if pivots.len() != nvars {
        return None;
    }
    Some((0..nvars).map(|i| rows[i][nvars].clone()).collect())
}

/// Square system `A x = b`; `None` if singular.
pub fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.first().map_or(0, |r| r.len());
    let rows = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    solve_augmented(rows, n)
}

/// Basis of `{x : A x = 0}` for a matrix with `ncols` columns.
pub fn nullspace(a: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let mut m = a.to_vec();
    let pivots = rref(&mut m, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[r][f].clone();
            }
            v
        })
        .collect()
}

/// Particular solution and nullspace basis of `A x = b`, or `None` when
/// inconsistent.
pub fn affine_solution(
    a: &[Vec<Rational>],
    b: &[Rational],
    ncols: usize,
) -> Option<(Vec<Rational>, Vec<Vec<Rational>>)> {
    let mut rows: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut rows, ncols);
    for row in rows.iter().skip(pivots.len()) {
        if !row[ncols].is_zero() {
            return None;
        }
    }
    let mut x0 = vec![Rational::zero(); ncols];
    for (r, &p) in pivots.iter().enumerate() {
        x0[p] = rows[r][ncols].clone();
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let basis = free
        .iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -rows[r][f].clone();
            }
            v
        })
        .collect();
    Some((x0, basis))
}

/// Determinant by elimination.
pub fn det(a: &[Vec<Rational>]) -> Rational {
    let n = a.len();
    let mut m = a.to_vec();
    let mut d = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        let pivot = m[c][c].clone();
        d *= &pivot;
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &pivot;
            for j in c..n {
                let delta = &f * &m[c][j];
                m[i][j] -= delta;
            }
        }
    }
    d
}

/// Row-reduced basis of the span of `vectors`.
pub fn row_basis(vectors: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let Some(first) = vectors.first() else {
        return Vec::new();
    };
    let n = first.len();
    let mut m = vectors.to_vec();
    let r = rref(&mut m, n).len();
    m.truncate(r);
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{int, ratio};

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn determinant_and_rank() {
        let a = m(&[&[2, 1], &[1, 3]]);
        assert_eq!(det(&a), int(5));
        assert_eq!(rank(&m(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(det(&m(&[&[0, 1], &[1, 0]])), int(-1));
    }

    #[test]
    fn nullspace_is_annihilated() {
        let a = m(&[&[1, 1, 1], &[0, 1, 2]]);
        let ns = nullspace(&a, 3);
        assert_eq!(ns.len(), 1);
        for row in &a {
            assert!(dot(row, &ns[0]).is_zero());
        }
    }

    #[test]
    fn solve_unique_and_singular() {
        let a = m(&[&[2, 0], &[0, 4]]);
        assert_eq!(solve(&a, &[int(1), int(1)]), Some(vec![ratio(1, 2), ratio(1, 4)]));
        assert_eq!(solve(&m(&[&[1, 1], &[1, 1]]), &[int(1), int(2)]), None);
    }
}
