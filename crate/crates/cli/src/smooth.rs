use serde_json::{json, Value};

use plsmooth::approx::{builtin_function, edgewise_subdivision, halton_simplex_points};
use plsmooth::group::GroupAction;
use plsmooth::io::ComplexFile;
use plsmooth::smoothing::{
    build_phi0, check_embedding, eval_H, ConeExtension, EmbeddingOptions, Phi0Options, RadialExtension, SampledMap,
    SmoothingParams, StarPoint, StarReparam, SymmetricProductCover, VertexStar, DENOMINATOR_FLOOR, UNIT_TOLERANCE,
};

use crate::{usage, Ctx, Failure, MapKind, Outcome};

/// Agreement of `F(·, 1)` with `f`.
pub const BOUNDARY_TOLERANCE: f64 = 1e-12;
/// Jump of `F` across `t = 1/2`.
pub const CONTINUITY_TOLERANCE: f64 = 1e-10;
/// Second differences of `F` where it is affine (`t < 1/6`).
pub const AFFINE_TOLERANCE: f64 = 1e-12;
const CONTINUITY_STEP: f64 = 1e-12;

pub struct Args<'a> {
    pub map: MapKind,
    pub vertex: usize,
    pub samples: usize,
    pub params: Option<&'a str>,
    pub degree: usize,
    pub function: &'a str,
    pub cover_fraction: f64,
}

fn parse_params(text: Option<&str>) -> Result<SmoothingParams, Failure> {
    let mut p = SmoothingParams::default();
    if let Some(text) = text {
        let parts: Vec<&str> = text.split(',').collect();
        let [eps2, lambda] = parts.as_slice() else {
            return Err(usage(format!("--params expects eps2,lambda, got {text:?}")));
        };
        p.eps2 = eps2.trim().parse().map_err(|_| usage(format!("bad eps2 {eps2:?}")))?;
        p.lambda = lambda.trim().parse().map_err(|_| usage(format!("bad lambda {lambda:?}")))?;
    }
    p.validate().map_err(usage)?;
    Ok(p)
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn embedding_options(ctx: &Ctx, samples: usize) -> EmbeddingOptions {
    EmbeddingOptions { samples, seed: ctx.seed, ..Default::default() }
}

fn tolerances(opts: &EmbeddingOptions) -> Value {
    json!({
        "unit_tolerance": UNIT_TOLERANCE,
        "denominator_floor": DENOMINATOR_FLOOR,
        "boundary": BOUNDARY_TOLERANCE,
        "continuity": CONTINUITY_TOLERANCE,
        "affine_second_difference": AFFINE_TOLERANCE,
        "difference_step": opts.step,
        "injectivity_threshold": opts.injectivity_threshold,
        "immersion_threshold": opts.immersion_threshold,
    })
}

/// Pointwise checks of `F` on sample points of `K̃`: the worst deviation
/// from `f` at `t = 1`, from 0 at `t = 0`, the jump across `t = 1/2`, and
/// the worst second difference along segments in the affine zone.
pub fn radial_checks(ext: &RadialExtension, per_facet: usize, seed: u64) -> Result<Value, Failure> {
    let fine = ext.fine();
    let d = fine.dim();
    let (mut boundary, mut apex, mut jump, mut affine) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for facet in 0..fine.facets().len() {
        let pts = halton_simplex_points(d, per_facet, seed ^ facet as u64);
        for (i, x) in pts.iter().enumerate() {
            boundary = boundary.max(dist(&ext.eval(facet, x, 1.0)?, &ext.f_value(facet, x)?));
            apex = apex.max(ext.eval(facet, x, 0.0)?.iter().fold(0.0, |m, c| m.max(c.abs())));
            jump = jump.max(dist(&ext.eval(facet, x, 0.5 + CONTINUITY_STEP)?, &ext.eval(facet, x, 0.5)?));
            // cone points t·x and s·y and their midpoint, all with t < 1/6
            let y = &pts[(i + 1) % pts.len()];
            let (t, s) = (0.02 + 0.1 * x[0], 0.03 + 0.1 * y[0]);
            let m = 0.5 * (t + s);
            let mid: Vec<f64> = x.iter().zip(y).map(|(a, b)| (t * a + s * b) / (t + s)).collect();
            let (fa, fb, fm) = (ext.eval(facet, x, t)?, ext.eval(facet, y, s)?, ext.eval(facet, &mid, m)?);
            let second = fa.iter().zip(&fb).zip(&fm).map(|((a, b), c)| (a + b - 2.0 * c).abs()).fold(0.0, f64::max);
            affine = affine.max(second);
        }
    }
    Ok(json!({
        "max_boundary_error": boundary,
        "max_apex_value": apex,
        "max_jump_at_half": jump,
        "max_affine_second_difference": affine,
        "passed": boundary <= BOUNDARY_TOLERANCE && apex == 0.0 && jump <= CONTINUITY_TOLERANCE && affine <= AFFINE_TOLERANCE,
    }))
}

fn eval_f(ctx: &Ctx, file: &ComplexFile, args: &Args) -> Result<Outcome, Failure> {
    let k = &file.complex;
    let f = builtin_function(args.function, k).map_err(usage)?;
    let fine = edgewise_subdivision(k, args.degree, &GroupAction::trivial(k.vertex_count()))?.complex;
    let ext = RadialExtension::new(&f, &fine)?;
    let cone = ConeExtension::new(&ext)?;
    let checks = radial_checks(&ext, 32, ctx.seed)?;
    let opts = embedding_options(ctx, args.samples);
    let report = check_embedding(&cone, &opts);
    let ok = checks["passed"] == json!(true) && report.injective && report.immersed;
    let body = json!({
        "map": "F",
        "function": args.function,
        "fine_top_simplices": fine.facets().len(),
        "checks": checks,
        "embedding": report,
    });
    Ok(ctx.report("smooth-eval", body, tolerances(&opts), ok))
}

fn eval_h(ctx: &Ctx, file: &ComplexFile, args: &Args) -> Result<Outcome, Failure> {
    let k = &file.complex;
    if args.vertex >= k.vertex_count() {
        return Err(usage(format!("vertex {} out of range ({} vertices)", args.vertex, k.vertex_count())));
    }
    let params = parse_params(args.params)?;
    let star = VertexStar::new(k, args.vertex)?;
    let cover = SymmetricProductCover::proportional(star.link(), args.cover_fraction)?;
    let phi0 = build_phi0(star.link(), &cover, &Phi0Options::default())?;
    let map = StarReparam::new(k, &star, &phi0, params)?;

    // H is the identity for t > 1/10
    let (mut outer, mut outer_moved, mut displacement) = (0usize, 0usize, 0.0f64);
    let dom = map.domain();
    for facet in 0..dom.facets().len() {
        let kf = map.facet_in_k(facet);
        for bary in halton_simplex_points(dom.dim(), 64, ctx.seed ^ facet as u64) {
            let p = StarPoint { facet: kf, bary };
            let t = star.to_cone(k, &p)?.t;
            if t < 2.0 * params.eps2 {
                continue;
            }
            let q = eval_H(k, &star, &p, &phi0, &params)?;
            let moved = q.bary.iter().zip(&p.bary).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            displacement = displacement.max(moved);
            if t > 0.1 {
                outer += 1;
                outer_moved += usize::from(q != p);
            }
        }
    }
    let opts = embedding_options(ctx, args.samples);
    let report = check_embedding(&map, &opts);
    let ok = outer_moved == 0 && report.injective && report.immersed;
    let body = json!({
        "map": "H",
        "vertex": args.vertex,
        "params": params,
        "phi0": phi0,
        "cover_max_lower_radius": cover.max_lower_radius(),
        "identity_region": { "samples": outer, "moved": outer_moved },
        "max_barycentric_displacement": displacement,
        "embedding": report,
    });
    Ok(ctx.report("smooth-eval", body, tolerances(&opts), ok))
}

pub fn run(ctx: &Ctx, file: &ComplexFile, args: &Args) -> Result<Outcome, Failure> {
    match args.map {
        MapKind::F => eval_f(ctx, file, args),
        MapKind::H => eval_h(ctx, file, args),
    }
}
