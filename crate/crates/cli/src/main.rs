//! Command-line driver: reads complex files, runs one operation and prints a
//! JSON report. Exit status 0 on success, 1 when a verdict fails, 2 on usage
//! or input errors.

mod smooth;

use std::collections::BTreeMap;
use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use plsmooth::approx::{
    builtin_function, edgewise_subdivision, quality, refine_until_close, ApproxError, PdFunction, RefineOptions,
    SampleOptions, SecantMap, BUILTIN_FUNCTIONS,
};
use plsmooth::catalog;
use plsmooth::complex::volume::check_simplicial_subdivision;
use plsmooth::complex::{barycentric_subdivision, validate_complex, Simplex, SimplicialComplex};
use plsmooth::group::{equivariant_triangulate, verify_simplicial_action, GroupAction, Permutation, TriangulateOptions};
use plsmooth::io::{export_off, parse_complex, serialize_complex, ComplexFile, SCHEMA_VERSION};
use plsmooth::manifold::{check_pl_manifold, homology, Verdict};

#[derive(Parser)]
#[command(name = "plsmooth", version, about = "Exact simplicial complexes, group actions, subdivisions and smoothing checks")]
struct Cli {
    /// Seed for every sampled estimate.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for the parallel inner loops (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Add the numeric tolerances in force to the report.
    #[arg(long, global = true)]
    tolerance_report: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the complex, its group generators and its PL maps.
    Validate { file: PathBuf },
    /// Subdivide and write the result as a complex file.
    Subdivide {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Scheme::Barycentric)]
        scheme: Scheme,
        /// Edgewise degree.
        #[arg(long, default_value_t = 2)]
        degree: usize,
        #[arg(long, default_value_t = 1)]
        rounds: usize,
        /// Write the complex here and print a report instead.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Triangulate so that the group generated by the PL maps acts simplicially.
    TriangulateEquivariant {
        file: PathBuf,
        /// Subdivide once more so invariant simplices are fixed pointwise.
        #[arg(long)]
        pointwise_fixed: bool,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Vertex-link manifold test.
    CheckManifold {
        file: PathBuf,
        /// Expected dimension (default: the dimension of the complex).
        #[arg(long)]
        dim: Option<usize>,
    },
    /// Integral homology.
    Homology { file: PathBuf },
    /// Refine until the secant map is C¹ δ-close to a function.
    Secant {
        file: PathBuf,
        /// Built-in function name.
        #[arg(long, conflicts_with = "table", required_unless_present = "table")]
        function: Option<String>,
        /// JSON file with one value vector per vertex (a PL function).
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = 12)]
        max_rounds: usize,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Evaluate a smoothing map and check that it is an embedding.
    SmoothEval {
        file: PathBuf,
        #[arg(long, value_enum)]
        map: MapKind,
        /// Vertex whose star H acts on.
        #[arg(long, default_value_t = 0)]
        vertex: usize,
        #[arg(long, default_value_t = 2000)]
        samples: usize,
        /// `eps2,lambda`.
        #[arg(long)]
        params: Option<String>,
        /// Edgewise degree of the subdivision carrying the secant map of f.
        #[arg(long, default_value_t = 2)]
        degree: usize,
        /// Built-in unit-vector-valued function f for F.
        #[arg(long, default_value = "radial")]
        function: String,
        /// Cover radii as a fraction of the safe radii, for H.
        #[arg(long, default_value_t = 0.05)]
        cover_fraction: f64,
    },
    /// Write the vertices and triangles as OFF.
    ExportOff {
        file: PathBuf,
        #[arg(long, default_value_t = 6)]
        precision: usize,
        /// Project ambient dimensions above 3 along the moment curve.
        #[arg(long)]
        project: bool,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Print a named standard complex, or list the names.
    Catalog { name: Option<String> },
}

#[derive(Clone, Copy, ValueEnum)]
enum Scheme {
    Barycentric,
    Edgewise,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub(crate) enum MapKind {
    #[value(name = "F")]
    F,
    #[value(name = "H")]
    H,
}

pub(crate) enum Failure {
    Usage(String),
    Runtime(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Runtime(e.to_string())
    }
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

/// Text to print and whether the verdict passed.
pub(crate) struct Outcome {
    text: String,
    ok: bool,
}

pub(crate) struct Ctx {
    pub seed: u64,
    tolerance_report: bool,
}

impl Ctx {
    /// Report with the schema version, command name and optional tolerances.
    pub(crate) fn report(&self, command: &str, body: Value, tolerances: Value, ok: bool) -> Outcome {
        let mut map = serde_json::Map::new();
        map.insert("schema_version".into(), json!(SCHEMA_VERSION));
        map.insert("command".into(), json!(command));
        map.insert("ok".into(), json!(ok));
        if let Value::Object(body) = body {
            map.extend(body);
        }
        if self.tolerance_report {
            map.insert("tolerances".into(), tolerances);
        }
        Outcome { text: pretty(&Value::Object(map)), ok }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialise");
    s.push('\n');
    s
}

fn exact() -> Value {
    json!({ "arithmetic": "exact rational, zero tolerance" })
}

fn read_input(path: &PathBuf) -> Result<(ComplexFile, Vec<String>), Failure> {
    let bytes = if path.as_os_str() == "-" {
        let mut buf = Vec::new();
        std::io::stdin().read_to_end(&mut buf).map_err(usage)?;
        buf
    } else {
        fs::read(path).map_err(|e| usage(format!("{}: {e}", path.display())))?
    };
    let parsed = parse_complex(&bytes).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    for w in &parsed.warnings {
        eprintln!("warning: {w}");
    }
    Ok((parsed.file, parsed.warnings))
}

fn write_output(path: &PathBuf, bytes: &[u8]) -> Result<(), Failure> {
    fs::write(path, bytes).map_err(|e| usage(format!("{}: {e}", path.display())))
}

/// The complex file itself on stdout, or the report when it goes to a file.
fn emit(ctx: &Ctx, command: &str, file: &ComplexFile, output: &Option<PathBuf>, body: Value, ok: bool) -> Result<Outcome, Failure> {
    let bytes = serialize_complex(file);
    match output {
        Some(path) => {
            write_output(path, &bytes)?;
            let mut body = body;
            body["output"] = json!(path.display().to_string());
            Ok(ctx.report(command, body, exact(), ok))
        }
        None => Ok(Outcome { text: String::from_utf8(bytes).expect("UTF-8"), ok }),
    }
}

fn summary(k: &SimplicialComplex) -> Value {
    json!({
        "ambient_dim": k.ambient_dim(),
        "dimension": k.dim(),
        "vertices": k.vertex_count(),
        "top_simplices": k.facets().len(),
        "pure": k.is_pure(),
        "f_vector": k.f_vector(),
        "euler_characteristic": k.euler_characteristic(),
    })
}

fn non_identity(action: &GroupAction) -> Option<Vec<Permutation>> {
    let gens: Vec<Permutation> = action.elements().iter().filter(|g| !g.is_identity()).cloned().collect();
    (!gens.is_empty()).then_some(gens)
}

fn validate(ctx: &Ctx, file: &PathBuf) -> Result<Outcome, Failure> {
    let (f, warnings) = read_input(file)?;
    let k = &f.complex;
    let complex = validate_complex(k);
    let mut ok = complex.is_valid();
    let mut body = json!({ "complex": summary(k), "violations": complex.violations, "warnings": warnings });
    if let Some(gens) = &f.group {
        let action = verify_simplicial_action(k, gens);
        ok &= action.is_valid();
        body["group"] = serde_json::to_value(&action)?;
    }
    if let Some(maps) = &f.plmaps {
        let checks: Vec<Value> = maps
            .iter()
            .map(|m| match m.validate(k) {
                Ok(()) => json!({ "valid": true }),
                Err(e) => json!({ "valid": false, "error": e.to_string() }),
            })
            .collect();
        ok &= checks.iter().all(|c| c["valid"] == json!(true));
        body["plmaps"] = json!(checks);
    }
    Ok(ctx.report("validate", body, exact(), ok))
}

fn subdivide(ctx: &Ctx, file: &PathBuf, scheme: Scheme, degree: usize, rounds: usize, output: &Option<PathBuf>) -> Result<Outcome, Failure> {
    let (mut f, _) = read_input(file)?;
    let before = f.complex.facets().len();
    let mut action = f.group_action()?;
    for _ in 0..rounds {
        match scheme {
            Scheme::Barycentric => {
                let sub = barycentric_subdivision(&f.complex);
                let index: BTreeMap<&Simplex, usize> = sub.origin.iter().enumerate().map(|(i, s)| (s, i)).collect();
                let induced = action
                    .elements()
                    .iter()
                    .map(|g| Permutation::new(sub.origin.iter().map(|s| index[&g.apply_simplex(s)]).collect()))
                    .collect::<Result<Vec<_>, _>>()?;
                action = GroupAction::generate(sub.complex.vertex_count(), &induced, action.order())?;
                f.complex = sub.complex;
            }
            Scheme::Edgewise => {
                let sub = edgewise_subdivision(&f.complex, degree, &action)?;
                action = sub.action;
                f.complex = sub.complex;
            }
        }
    }
    f.group = f.group.as_ref().and_then(|_| non_identity(&action));
    f.plmaps = None;
    let body = json!({
        "scheme": match scheme { Scheme::Barycentric => "barycentric", Scheme::Edgewise => "edgewise" },
        "degree": degree,
        "rounds": rounds,
        "top_simplices_before": before,
        "complex": summary(&f.complex),
        "quality": quality(&f.complex)?,
    });
    emit(ctx, "subdivide", &f, output, body, true)
}

fn triangulate(ctx: &Ctx, file: &PathBuf, pointwise_fixed: bool, output: &Option<PathBuf>) -> Result<Outcome, Failure> {
    let (f, _) = read_input(file)?;
    let maps = f.plmaps.as_ref().ok_or_else(|| usage("triangulate-equivariant needs a plmaps block"))?;
    let options = TriangulateOptions { pointwise_fixed, ..Default::default() };
    let t = equivariant_triangulate(&f.complex, maps, &options)?;
    let action = verify_simplicial_action(&t.complex, t.action.elements());
    let volume = check_simplicial_subdivision(&t.complex, &f.complex);
    let ok = action.is_group() && volume.is_ok();
    let out = ComplexFile { complex: t.complex.clone(), group: non_identity(&t.action), plmaps: None };
    let body = json!({
        "group_order": t.action.order(),
        "common_cells": t.common_cells,
        "invariant_cells": t.invariant_cells,
        "complex": summary(&t.complex),
        "action": action,
        "subdivision": volume,
    });
    if !ok {
        eprintln!("{}", pretty(&body));
    }
    emit(ctx, "triangulate-equivariant", &out, output, body, ok)
}

fn check_manifold(ctx: &Ctx, file: &PathBuf, dim: Option<usize>) -> Result<Outcome, Failure> {
    let (f, _) = read_input(file)?;
    let n = dim.unwrap_or(f.complex.dim());
    let report = check_pl_manifold(&f.complex, n).map_err(usage)?;
    let ok = matches!(report.verdict, Verdict::VerifiedManifold | Verdict::NecessaryConditionsPassed);
    Ok(ctx.report("check-manifold", json!({ "report": report }), exact(), ok))
}

fn homology_cmd(ctx: &Ctx, file: &PathBuf) -> Result<Outcome, Failure> {
    let (f, _) = read_input(file)?;
    let h = homology(&f.complex);
    let body = json!({
        "groups": h.groups().iter().map(|g| g.to_string()).collect::<Vec<_>>(),
        "homology": h,
        "euler_characteristic": h.euler_characteristic(),
        "euler_from_faces": f.complex.euler_characteristic(),
    });
    Ok(ctx.report("homology", body, exact(), true))
}

#[allow(clippy::too_many_arguments)]
fn secant(
    ctx: &Ctx,
    file: &PathBuf,
    function: &Option<String>,
    table: &Option<PathBuf>,
    delta: f64,
    max_rounds: usize,
    output: &Option<PathBuf>,
) -> Result<Outcome, Failure> {
    let (f, _) = read_input(file)?;
    let k = &f.complex;
    let func: Box<dyn PdFunction> = match (function, table) {
        (Some(name), _) => Box::new(builtin_function(name, k).map_err(|e| match e {
            ApproxError::UnknownFunction(_) => usage(format!(
                "{e}; known: {}",
                BUILTIN_FUNCTIONS.iter().map(|(n, _)| *n).collect::<Vec<_>>().join(", ")
            )),
            other => other.into(),
        })?),
        (None, Some(path)) => {
            let text = fs::read(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            let values: Vec<Vec<f64>> = serde_json::from_slice(&text).map_err(usage)?;
            Box::new(SecantMap::from_values(k.clone(), values).map_err(usage)?)
        }
        (None, None) => return Err(usage("need --function or --table")),
    };
    let options = RefineOptions { max_rounds, samples: SampleOptions { seed: ctx.seed, ..Default::default() } };
    let action = f.group_action()?;
    let tolerances = json!({
        "delta": delta,
        "lattice_resolution": options.samples.lattice,
        "halton_points_per_simplex": options.samples.halton,
    });
    match refine_until_close(func.as_ref(), delta, &action, &options) {
        Ok(r) => {
            let mut body = json!({
                "function": function.clone().unwrap_or_else(|| "table".into()),
                "delta": delta,
                "rounds": r.rounds,
                "history": r.history,
                "complex": summary(&r.complex),
            });
            if let Some(path) = output {
                let group = f.group.as_ref().and_then(|_| non_identity(&r.action));
                write_output(path, &serialize_complex(&ComplexFile { complex: r.complex, group, plmaps: None }))?;
                body["output"] = json!(path.display().to_string());
            }
            Ok(ctx.report("secant", body, tolerances, true))
        }
        Err(e @ ApproxError::IterationCap { .. }) => {
            Ok(ctx.report("secant", json!({ "delta": delta, "error": e.to_string() }), tolerances, false))
        }
        Err(e) => Err(e.into()),
    }
}

fn export(file: &PathBuf, precision: usize, project: bool, output: &Option<PathBuf>) -> Result<Outcome, Failure> {
    let (f, _) = read_input(file)?;
    let text = export_off(&f.complex, precision, project).map_err(usage)?;
    match output {
        Some(path) => {
            write_output(path, text.as_bytes())?;
            Ok(Outcome { text: String::new(), ok: true })
        }
        None => Ok(Outcome { text, ok: true }),
    }
}

fn catalog_cmd(name: &Option<String>) -> Result<Outcome, Failure> {
    match name {
        None => Ok(Outcome { text: pretty(&json!({ "schema_version": SCHEMA_VERSION, "names": catalog::NAMES })), ok: true }),
        Some(n) => {
            let f = catalog::get(n).ok_or_else(|| usage(format!("unknown catalog entry {n:?}")))?;
            Ok(Outcome { text: String::from_utf8(serialize_complex(&f)).expect("UTF-8"), ok: true })
        }
    }
}

fn run(cli: Cli) -> Result<Outcome, Failure> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(usage)?;
    }
    let ctx = Ctx { seed: cli.seed, tolerance_report: cli.tolerance_report };
    match &cli.command {
        Command::Validate { file } => validate(&ctx, file),
        Command::Subdivide { file, scheme, degree, rounds, output } => subdivide(&ctx, file, *scheme, *degree, *rounds, output),
        Command::TriangulateEquivariant { file, pointwise_fixed, output } => triangulate(&ctx, file, *pointwise_fixed, output),
        Command::CheckManifold { file, dim } => check_manifold(&ctx, file, *dim),
        Command::Homology { file } => homology_cmd(&ctx, file),
        Command::Secant { file, function, table, delta, max_rounds, output } => {
            secant(&ctx, file, function, table, *delta, *max_rounds, output)
        }
        Command::SmoothEval { file, map, vertex, samples, params, degree, function, cover_fraction } => {
            let (f, _) = read_input(file)?;
            let args = smooth::Args {
                map: *map,
                vertex: *vertex,
                samples: *samples,
                params: params.as_deref(),
                degree: *degree,
                function,
                cover_fraction: *cover_fraction,
            };
            smooth::run(&ctx, &f, &args)
        }
        Command::ExportOff { file, precision, project, output } => export(file, *precision, *project, output),
        Command::Catalog { name } => catalog_cmd(name),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            // a closed pipe is not worth a panic
            let _ = stdout.write_all(out.text.as_bytes());
            ExitCode::from(if out.ok { 0 } else { 1 })
        }
        Err(Failure::Usage(m)) => {
            eprintln!("{}", pretty(&json!({ "schema_version": SCHEMA_VERSION, "error": m, "kind": "usage" })));
            ExitCode::from(2)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("{}", pretty(&json!({ "schema_version": SCHEMA_VERSION, "error": m, "kind": "failure" })));
            ExitCode::from(1)
        }
    }
}
