//! Exact rational geometry: points, linear algebra and convex cells.
//!
//! Everything in this module is computed with arbitrary-precision rationals.
//! Floating point only appears in explicit `to_f64` conversions used by the
//! numeric layers further up.

mod cell;
pub mod linalg;

pub use cell::{intersect_cells, ConvexCell, HalfSpace, HRep};

use std::fmt;
use std::ops::{Add, Index, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary-precision rational number, always kept in lowest terms with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("empty point set")]
    Empty,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("cannot parse rational {0:?}")]
    BadRational(String),
}

/// Integer-valued rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `num / den` in lowest terms. Panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"p"` or `"p/q"`. Returns the canonical value and whether the input
/// text was already canonical (no common factor, positive denominator, no `+`,
/// no `/1`).
pub fn parse_rational(text: &str) -> Result<(Rational, bool), GeometryError> {
    let bad = || GeometryError::BadRational(text.to_string());
    let trimmed = text.trim();
    let (num, den) = match trimmed.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (trimmed, None),
    };
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let value = match den {
        Some(d) => {
            let d = BigInt::from_str(d).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Rational::new(num, d)
        }
        None => Rational::from_integer(num),
    };
    let canonical = format_rational(&value) == text;
    Ok((value, canonical))
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // Huge numerators/denominators: fall back to a scaled division.
        let n = q.numer().to_f64().unwrap_or(f64::NAN);
        let d = q.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// A point of ℝ^N with exact rational coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalPoint(Vec<Rational>);

impl RationalPoint {
    pub fn new(coords: Vec<Rational>) -> Self {
        RationalPoint(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        RationalPoint(coords.iter().map(|&c| int(c)).collect())
    }

    /// Builds a point from `(numerator, denominator)` pairs.
    pub fn from_ratios(coords: &[(i64, i64)]) -> Self {
        RationalPoint(coords.iter().map(|&(n, d)| ratio(n, d)).collect())
    }

    pub fn origin(dim: usize) -> Self {
        RationalPoint(vec![Rational::zero(); dim])
    }

    /// The `i`-th standard basis vector of ℝ^dim.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut coords = vec![Rational::zero(); dim];
        coords[i] = Rational::one();
        RationalPoint(coords)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.0
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(rational_to_f64).collect()
    }

    pub fn dot(&self, other: &[Rational]) -> Rational {
        linalg::dot(&self.0, other)
    }

    pub fn scale(&self, s: &Rational) -> RationalPoint {
        RationalPoint(self.0.iter().map(|c| c * s).collect())
    }

    /// Appends a coordinate (used for cone embeddings).
    pub fn lifted(&self, last: Rational) -> RationalPoint {
        let mut coords = self.0.clone();
        coords.push(last);
        RationalPoint(coords)
    }

    /// Exact affine combination `Σ weights[i] * points[i]`.
    pub fn combination(points: &[&RationalPoint], weights: &[Rational]) -> RationalPoint {
        assert_eq!(points.len(), weights.len());
        let dim = points.first().map_or(0, |p| p.dim());
        let mut out = vec![Rational::zero(); dim];
        for (p, w) in points.iter().zip(weights) {
            if w.is_zero() {
                continue;
            }
            for (o, c) in out.iter_mut().zip(&p.0) {
                *o += c * w;
            }
        }
        RationalPoint(out)
    }

    /// Arithmetic mean of a nonempty point list.
    pub fn mean(points: &[&RationalPoint]) -> RationalPoint {
        let n = Rational::from_integer(BigInt::from(points.len()));
        let w = vec![Rational::one() / n; points.len()];
        RationalPoint::combination(points, &w)
    }

    pub fn squared_norm(&self) -> Rational {
        linalg::dot(&self.0, &self.0)
    }
}

impl Index<usize> for RationalPoint {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl Sub for &RationalPoint {
    type Output = Vec<Rational>;
    fn sub(self, rhs: &RationalPoint) -> Vec<Rational> {
        self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect()
    }
}

impl Add<&[Rational]> for &RationalPoint {
    type Output = RationalPoint;
    fn add(self, rhs: &[Rational]) -> RationalPoint {
        RationalPoint(self.0.iter().zip(rhs).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Debug for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", format_rational(c))?;
        }
        write!(f, ")")
    }
}

fn check_uniform(points: &[RationalPoint]) -> Result<usize, GeometryError> {
    let first = points.first().ok_or(GeometryError::Empty)?;
    let dim = first.dim();
    for p in points {
        if p.dim() != dim {
            return Err(GeometryError::DimensionMismatch { expected: dim, found: p.dim() });
        }
    }
    Ok(dim)
}

/// Dimension of the affine hull of a nonempty point set.
pub fn affine_dim(points: &[RationalPoint]) -> Result<usize, GeometryError> {
    check_uniform(points)?;
    let base = &points[0];
    let diffs: Vec<Vec<Rational>> = points[1..].iter().map(|p| p - base).collect();
    Ok(linalg::rank(&diffs))
}

/// Barycentric coordinates of `x` with respect to affinely independent
/// `vertices`; `None` when `x` is off their affine hull.
pub fn barycentric(vertices: &[&RationalPoint], x: &RationalPoint) -> Option<Vec<Rational>> {
    let n = x.dim();
    let k = vertices.len();
    // Rows: one per coordinate plus the partition-of-unity row.
    let mut rows = Vec::with_capacity(n + 1);
    for i in 0..n {
        let mut row: Vec<Rational> = vertices.iter().map(|v| v[i].clone()).collect();
        row.push(x[i].clone());
        rows.push(row);
    }
    let mut last = vec![Rational::one(); k];
    last.push(Rational::one());
    rows.push(last);
    linalg::solve_augmented(rows, k)
}

/// Whether every coordinate is nonnegative.
pub fn all_nonnegative(coords: &[Rational]) -> bool {
    coords.iter().all(|c| !c.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn affine_dim_examples() {
        assert_eq!(affine_dim(&[RationalPoint::from_ints(&[0, 0])]).unwrap(), 0);
        let tri = [
            RationalPoint::from_ints(&[0, 0]),
            RationalPoint::from_ints(&[1, 0]),
            RationalPoint::from_ints(&[0, 1]),
        ];
        assert_eq!(affine_dim(&tri).unwrap(), 2);
        let line = [
            RationalPoint::from_ints(&[0, 0]),
            RationalPoint::from_ints(&[1, 1]),
            RationalPoint::from_ints(&[2, 2]),
        ];
        assert_eq!(affine_dim(&line).unwrap(), 1);
    }

    #[test]
    fn affine_dim_rejects_mixed_dimensions() {
        let pts = [RationalPoint::from_ints(&[0, 0]), RationalPoint::from_ints(&[1, 0, 0])];
        assert_eq!(
            affine_dim(&pts),
            Err(GeometryError::DimensionMismatch { expected: 2, found: 3 })
        );
        assert_eq!(affine_dim(&[]), Err(GeometryError::Empty));
    }

    #[test]
    fn rational_parsing_reports_canonical_form() {
        assert_eq!(parse_rational("2/4").unwrap(), (ratio(1, 2), false));
        assert_eq!(parse_rational("1/2").unwrap(), (ratio(1, 2), true));
        assert_eq!(parse_rational("-3").unwrap(), (int(-3), true));
        assert_eq!(parse_rational("3/-6").unwrap(), (ratio(-1, 2), false));
        assert_eq!(parse_rational("4/2").unwrap(), (int(2), false));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn barycentric_inside_and_off_hull() {
        let a = RationalPoint::from_ints(&[0, 0, 0]);
        let b = RationalPoint::from_ints(&[1, 0, 0]);
        let c = RationalPoint::from_ints(&[0, 1, 0]);
        let x = RationalPoint::from_ratios(&[(1, 3), (1, 3), (0, 1)]);
        let bc = barycentric(&[&a, &b, &c], &x).unwrap();
        assert_eq!(bc, vec![ratio(1, 3), ratio(1, 3), ratio(1, 3)]);
        let off = RationalPoint::from_ints(&[0, 0, 1]);
        assert!(barycentric(&[&a, &b, &c], &off).is_none());
    }
}
