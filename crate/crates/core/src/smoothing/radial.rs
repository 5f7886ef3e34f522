use std::collections::BTreeMap;

use super::embedding::SampledMap;
use super::{norm, radial_project, CutoffSpec, SmoothingError};
use crate::approx::sampling::{coarse_frames, to_coarse, Frame};
use crate::approx::{secant_map, PdFunction, SecantMap};
use crate::complex::{validate_complex, Simplex, SimplicialComplex};
use crate::geometry::RationalPoint;

/// Allowed deviation of `|f(x)|` from 1.
pub const UNIT_TOLERANCE: f64 = 1e-9;
/// Smallest admissible normalisation denominator in the upper branch.
pub const DENOMINATOR_FLOOR: f64 = 0.5;

/// Extension `F: K × [0, 1] → ℝ^{n+1}` of a map `f: K → Sⁿ` over the cone,
/// built from the secant map `Lf` of `f` on a subdivision `K̃`.
///
/// With `f̃ = Lf / |Lf|` and a decreasing cut-off θ on `[1/3, 2/3]`:
///
/// * for `t > 1/2`, `F = t · w / |w|` with `w = θ(2t−1) f̃ + (1 − θ(2t−1)) f`;
/// * for `t ≤ 1/2`, `F = t · ν · f̃` with `ν = θ(2t) |Lf| + (1 − θ(2t))`.
///
/// So `F(·, 1) = f`, `F(·, 0) = 0`, both branches equal `t f̃` at `t = 1/2`,
/// and `F = t · Lf` is affine on cone simplices for `t < 1/6`.
pub struct RadialExtension<'a> {
    f: &'a dyn PdFunction,
    secant: SecantMap,
    frames: Vec<Frame>,
    theta: CutoffSpec,
}

impl<'a> RadialExtension<'a> {
    pub fn new(f: &'a dyn PdFunction, fine: &SimplicialComplex) -> Result<Self, SmoothingError> {
        let secant = secant_map(fine, f)?;
        let frames = coarse_frames(f.domain(), fine)?;
        Ok(RadialExtension { f, secant, frames, theta: CutoffSpec::radial() })
    }

    /// The subdivision `K̃` on which points are addressed.
    pub fn fine(&self) -> &SimplicialComplex {
        self.secant.domain()
    }

    pub fn secant(&self) -> &SecantMap {
        &self.secant
    }

    pub fn target_dim(&self) -> usize {
        self.f.target_dim()
    }

    /// `f` at a point of `K̃`, checked to be a unit vector.
    pub fn f_value(&self, facet: usize, bary: &[f64]) -> Result<Vec<f64>, SmoothingError> {
        let (si, rows) = &self.frames[facet];
        let fx = self.f.eval(*si, &to_coarse(rows, bary));
        let r = norm(&fx);
        if (r - 1.0).abs() > UNIT_TOLERANCE {
            return Err(SmoothingError::NotUnit { norm: r });
        }
        Ok(fx)
    }

    /// `F(x, t)` for `x` given by a facet of `K̃` and barycentric coordinates.
    pub fn eval(&self, facet: usize, bary: &[f64], t: f64) -> Result<Vec<f64>, SmoothingError> {
        if !(0.0..=1.0).contains(&t) || facet >= self.frames.len() {
            return Err(SmoothingError::OutOfDomain(format!("t = {t}, facet {facet}")));
        }
        let lf = self.secant.eval(facet, bary);
        if t == 0.0 {
            return Ok(vec![0.0; lf.len()]);
        }
        if t > 0.5 {
            let fx = self.f_value(facet, bary)?;
            let ft = radial_project(&lf)?;
            let th = self.theta.eval(2.0 * t - 1.0);
            let w: Vec<f64> = ft.iter().zip(&fx).map(|(a, b)| th * a + (1.0 - th) * b).collect();
            let d = norm(&w);
            if d < DENOMINATOR_FLOOR {
                return Err(SmoothingError::DenominatorUnderflow { value: d, floor: DENOMINATOR_FLOOR });
            }
            Ok(w.into_iter().map(|x| t * x / d).collect())
        } else {
            let th = self.theta.eval(2.0 * t);
            if th == 1.0 {
                return Ok(lf.into_iter().map(|x| t * x).collect());
            }
            let ft = radial_project(&lf)?;
            let nu = th * norm(&lf) + (1.0 - th);
            Ok(ft.into_iter().map(|x| t * nu * x).collect())
        }
    }
}

/// Geometric cone over `k` with apex at the origin, stored as the last
/// vertex. Fails unless the cone is embedded, i.e. `k` is star-shaped about
/// the origin.
pub fn star_cone(k: &SimplicialComplex) -> Result<SimplicialComplex, SmoothingError> {
    let mut vertices = k.vertices().to_vec();
    let apex = vertices.len();
    vertices.push(RationalPoint::origin(k.ambient_dim()));
    let facets = k.facets().iter().map(|f| f.union(&Simplex::vertex(apex)).vertices().to_vec()).collect();
    let cone = SimplicialComplex::new(vertices, facets)?;
    let report = validate_complex(&cone);
    if !report.is_valid() {
        return Err(SmoothingError::OutOfDomain("cone over the complex is not embedded".into()));
    }
    Ok(cone)
}

/// `F` as a map on the geometric cone over `K̃`: the point
/// `Σ βᵢ vᵢ + β_apex · 0` has `t = 1 − β_apex` and `x = Σ (βᵢ / t) vᵢ`.
pub struct ConeExtension<'a> {
    ext: &'a RadialExtension<'a>,
    cone: SimplicialComplex,
    base_facet: Vec<usize>,
}

impl<'a> ConeExtension<'a> {
    pub fn new(ext: &'a RadialExtension<'a>) -> Result<Self, SmoothingError> {
        let fine = ext.fine();
        let cone = star_cone(fine)?;
        let apex = fine.vertex_count();
        let index: BTreeMap<&Simplex, usize> = fine.facets().iter().enumerate().map(|(i, f)| (f, i)).collect();
        let base_facet = cone.facets().iter().map(|c| index[&c.minus(&Simplex::vertex(apex))]).collect();
        Ok(ConeExtension { ext, cone, base_facet })
    }
}

impl SampledMap for ConeExtension<'_> {
    fn domain(&self) -> &SimplicialComplex {
        &self.cone
    }

    fn eval(&self, facet: usize, bary: &[f64]) -> Result<Vec<f64>, SmoothingError> {
        // the apex is the largest vertex, so its coordinate comes last
        let base = &bary[..bary.len() - 1];
        let t: f64 = base.iter().sum();
        if t <= 0.0 {
            return Ok(vec![0.0; self.ext.target_dim()]);
        }
        let x: Vec<f64> = base.iter().map(|b| b / t).collect();
        self.ext.eval(self.base_facet[facet], &x, t.min(1.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approx::{builtin_function, edgewise_subdivision};
    use crate::group::GroupAction;

    fn diamond() -> SimplicialComplex {
        let v = [[1, 0], [0, 1], [-1, 0], [0, -1]].iter().map(|c| RationalPoint::from_ints(c)).collect();
        SimplicialComplex::new(v, vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]]).unwrap()
    }

    #[test]
    fn endpoint_and_midpoint_values() {
        let k = diamond();
        let f = builtin_function("radial", &k).unwrap();
        let ext = RadialExtension::new(&f, &k).unwrap();
        let mid = [0.5, 0.5];
        let facet = k.facets().iter().position(|s| s.vertices() == [0, 1]).unwrap();
        let at_one = ext.eval(facet, &mid, 1.0).unwrap();
        let s = 0.5f64.sqrt();
        assert!((at_one[0] - s).abs() < 1e-12 && (at_one[1] - s).abs() < 1e-12);
        assert_eq!(ext.eval(facet, &mid, 0.0).unwrap(), vec![0.0, 0.0]);
        let low = ext.eval(facet, &mid, 0.1).unwrap();
        assert!((low[0] - 0.05).abs() < 1e-15 && (low[1] - 0.05).abs() < 1e-15);
    }

    #[test]
    fn branches_meet_at_one_half() {
        let k = diamond();
        let f = builtin_function("radial", &k).unwrap();
        let fine = edgewise_subdivision(&k, 2, &GroupAction::trivial(4)).unwrap().complex;
        let ext = RadialExtension::new(&f, &fine).unwrap();
        for facet in 0..fine.facets().len() {
            for i in 0..=10 {
                let l = i as f64 / 10.0;
                let bary = [l, 1.0 - l];
                let below = ext.eval(facet, &bary, 0.5).unwrap();
                let above = ext.eval(facet, &bary, 0.5 + 1e-13).unwrap();
                assert!(below.iter().zip(&above).all(|(a, b)| (a - b).abs() < 1e-10));
            }
        }
    }

    /// `p ∘ Lf` for a fixed secant map, as a map on the same complex.
    struct Projected(SecantMap);

    impl PdFunction for Projected {
        fn domain(&self) -> &SimplicialComplex {
            self.0.domain()
        }
        fn target_dim(&self) -> usize {
            self.0.target_dim()
        }
        fn eval(&self, facet: usize, bary: &[f64]) -> Vec<f64> {
            radial_project(&self.0.eval(facet, bary)).unwrap()
        }
        fn derivative(&self, _: usize, _: &[f64], _: &[f64]) -> Vec<f64> {
            vec![0.0; self.target_dim()]
        }
    }

    #[test]
    fn equal_maps_scale_linearly() {
        let k = diamond();
        let f = Projected(secant_map(&k, &builtin_function("radial", &k).unwrap()).unwrap());
        let ext = RadialExtension::new(&f, &k).unwrap();
        for facet in 0..4 {
            for t in [0.55, 0.7, 0.9, 1.0] {
                let bary = [0.3, 0.7];
                let v = ext.eval(facet, &bary, t).unwrap();
                let fx = f.eval(facet, &bary);
                assert!(v.iter().zip(&fx).all(|(a, b)| (a - t * b).abs() < 1e-15));
            }
        }
    }

    #[test]
    fn non_unit_maps_are_rejected() {
        let k = diamond();
        let f = builtin_function("identity", &k).unwrap();
        let ext = RadialExtension::new(&f, &k).unwrap();
        assert!(matches!(ext.eval(0, &[0.5, 0.5], 0.9), Err(SmoothingError::NotUnit { .. })));
    }

    #[test]
    fn cone_requires_star_shape() {
        assert!(star_cone(&diamond()).is_ok());
        let offset = SimplicialComplex::new(
            vec![RationalPoint::from_ints(&[1, 1]), RationalPoint::from_ints(&[2, 1])],
            vec![vec![0, 1]],
        )
        .unwrap();
        assert!(star_cone(&offset).is_ok());
        let through = SimplicialComplex::new(
            vec![RationalPoint::from_ints(&[-1, 0]), RationalPoint::from_ints(&[1, 0])],
            vec![vec![0, 1]],
        )
        .unwrap();
        assert!(star_cone(&through).is_err());
    }
}
