//! The JSON complex file format and OFF mesh export.
//!
//! Coordinates are exact rationals written as `"p"` or `"p/q"` strings.
//! Serialisation is canonical: rationals in lowest terms, top simplices
//! reduced to the maximal ones, sorted, and a fixed layout, so
//! `serialize ∘ parse` is the identity on canonical files byte for byte.

mod off;

pub use off::{export_off, moment_curve_projection};

use serde::Deserialize;
use serde_json::Value;
use thiserror::Error;

use crate::complex::{ComplexError, SimplicialComplex};
use crate::geometry::{format_rational, parse_rational, RationalPoint};
use crate::group::{GroupAction, GroupError, PLHomeoSpec, Permutation, DEFAULT_GROUP_BOUND};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IoError {
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
    #[error("unsupported schema version {0}")]
    SchemaVersion(u64),
    #[error("{at}: cannot parse rational {text:?}")]
    BadRational { at: String, text: String },
    #[error("{at}: expected {expected} coordinates, found {found}")]
    DimensionMismatch { at: String, expected: usize, found: usize },
    #[error("{at}: vertex index {index} out of range ({count} vertices)")]
    IndexOutOfRange { at: String, index: usize, count: usize },
    #[error("{at}: {message}")]
    Invalid { at: String, message: String },
    #[error("ambient dimension {0} needs a projection to export as OFF")]
    UnsupportedDimension(usize),
}

impl From<serde_json::Error> for IoError {
    fn from(e: serde_json::Error) -> Self {
        IoError::Json { line: e.line(), column: e.column(), message: e.to_string() }
    }
}

/// A complex with an optional vertex-permutation group and optional PL maps
/// generating a group action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexFile {
    pub complex: SimplicialComplex,
    /// Generators, each a list of vertex images.
    pub group: Option<Vec<Permutation>>,
    pub plmaps: Option<Vec<PLHomeoSpec>>,
}

impl ComplexFile {
    pub fn new(complex: SimplicialComplex) -> Self {
        ComplexFile { complex, group: None, plmaps: None }
    }

    /// The group generated by `group`, or the trivial group.
    pub fn group_action(&self) -> Result<GroupAction, GroupError> {
        let n = self.complex.vertex_count();
        match &self.group {
            Some(gens) => GroupAction::generate(n, gens, DEFAULT_GROUP_BOUND),
            None => Ok(GroupAction::trivial(n)),
        }
    }
}

/// A parsed file together with the raw simplex list as written, which the
/// validator checks for face closure.
#[derive(Debug, Clone)]
pub struct Parsed {
    pub file: ComplexFile,
    pub raw_simplices: Vec<Vec<usize>>,
    pub warnings: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    schema_version: Option<u64>,
    ambient_dim: usize,
    vertices: Vec<Vec<Value>>,
    top_simplices: Vec<Vec<usize>>,
    group: Option<Vec<Vec<usize>>>,
    plmaps: Option<Vec<RawMap>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMap {
    vertices: Vec<Vec<Value>>,
    top_simplices: Vec<Vec<usize>>,
    images: Vec<Vec<Value>>,
}

struct Reader {
    warnings: Vec<String>,
}

impl Reader {
    fn points(&mut self, at: &str, rows: &[Vec<Value>], dim: usize) -> Result<Vec<RationalPoint>, IoError> {
        rows.iter().enumerate().map(|(i, row)| self.point(&format!("{at}[{i}]"), row, dim)).collect()
    }

    fn point(&mut self, at: &str, row: &[Value], dim: usize) -> Result<RationalPoint, IoError> {
        if row.len() != dim {
            return Err(IoError::DimensionMismatch { at: at.into(), expected: dim, found: row.len() });
        }
        let mut coords = Vec::with_capacity(dim);
        for (j, v) in row.iter().enumerate() {
            let at = format!("{at}[{j}]");
            let text = match v {
                Value::String(s) => s.clone(),
                Value::Number(n) if n.is_i64() || n.is_u64() => {
                    self.warnings.push(format!("{at}: integer {n} written as a string"));
                    n.to_string()
                }
                other => return Err(IoError::BadRational { at, text: other.to_string() }),
            };
            let (q, canonical) = parse_rational(&text).map_err(|_| IoError::BadRational { at: at.clone(), text: text.clone() })?;
            if !canonical && matches!(v, Value::String(_)) {
                self.warnings.push(format!("{at}: {text:?} canonicalised to {:?}", format_rational(&q)));
            }
            coords.push(q);
        }
        Ok(RationalPoint::new(coords))
    }

    fn complex(&mut self, at: &str, ambient: usize, vertices: Vec<RationalPoint>, tops: &[Vec<usize>]) -> Result<SimplicialComplex, IoError> {
        let k = SimplicialComplex::with_ambient(ambient, vertices, tops.to_vec()).map_err(|e| match e {
            ComplexError::IndexOutOfRange { simplex, entry, index, count } => {
                IoError::IndexOutOfRange { at: format!("{at}[{simplex}][{entry}]"), index, count }
            }
            other => IoError::Invalid { at: at.into(), message: other.to_string() },
        })?;
        let canonical: Vec<Vec<usize>> = k.facets().iter().map(|s| s.vertices().to_vec()).collect();
        if canonical != tops {
            self.warnings.push(format!("{at}: reduced to sorted maximal simplices"));
        }
        Ok(k)
    }
}

pub fn parse_complex(bytes: &[u8]) -> Result<Parsed, IoError> {
    let raw: RawFile = serde_json::from_slice(bytes)?;
    let mut r = Reader { warnings: Vec::new() };
    match raw.schema_version {
        Some(v) if v != u64::from(SCHEMA_VERSION) => return Err(IoError::SchemaVersion(v)),
        Some(_) => {}
        None => r.warnings.push(format!("schema_version missing, assuming {SCHEMA_VERSION}")),
    }
    let vertices = r.points("vertices", &raw.vertices, raw.ambient_dim)?;
    let complex = r.complex("top_simplices", raw.ambient_dim, vertices, &raw.top_simplices)?;
    let n = complex.vertex_count();

    let group = match raw.group {
        None => None,
        Some(gens) => Some(
            gens.into_iter()
                .enumerate()
                .map(|(i, images)| {
                    let at = format!("group[{i}]");
                    if images.len() != n {
                        return Err(IoError::DimensionMismatch { at, expected: n, found: images.len() });
                    }
                    Permutation::new(images).map_err(|e| IoError::Invalid { at, message: e.to_string() })
                })
                .collect::<Result<Vec<_>, _>>()?,
        ),
    };

    let plmaps = match raw.plmaps {
        None => None,
        Some(maps) => {
            let mut out = Vec::with_capacity(maps.len());
            for (i, m) in maps.iter().enumerate() {
                let at = format!("plmaps[{i}]");
                let verts = r.points(&format!("{at}.vertices"), &m.vertices, raw.ambient_dim)?;
                let domain = r.complex(&format!("{at}.top_simplices"), raw.ambient_dim, verts, &m.top_simplices)?;
                let images = r.points(&format!("{at}.images"), &m.images, raw.ambient_dim)?;
                out.push(PLHomeoSpec::new(domain, images).map_err(|e| IoError::Invalid { at, message: e.to_string() })?);
            }
            Some(out)
        }
    };

    Ok(Parsed { file: ComplexFile { complex, group, plmaps }, raw_simplices: raw.top_simplices, warnings: r.warnings })
}

fn json<T: serde::Serialize + ?Sized>(x: &T) -> String {
    serde_json::to_string(x).expect("plain data serialises")
}

fn point_row(p: &RationalPoint) -> String {
    json(&p.coords().iter().map(format_rational).collect::<Vec<_>>())
}

fn block(out: &mut String, indent: &str, key: &str, rows: &[String], last: bool) {
    out.push_str(&format!("{indent}\"{key}\": ["));
    if rows.is_empty() {
        out.push(']');
    } else {
        out.push('\n');
        for (i, row) in rows.iter().enumerate() {
            let comma = if i + 1 < rows.len() { "," } else { "" };
            out.push_str(&format!("{indent}  {row}{comma}\n"));
        }
        out.push_str(&format!("{indent}]"));
    }
    out.push_str(if last { "\n" } else { ",\n" });
}

fn complex_blocks(out: &mut String, indent: &str, k: &SimplicialComplex, last: bool) {
    let vertices: Vec<String> = k.vertices().iter().map(point_row).collect();
    let tops: Vec<String> = k.facets().iter().map(|s| json(s.vertices())).collect();
    block(out, indent, "vertices", &vertices, false);
    block(out, indent, "top_simplices", &tops, last);
}

/// Canonical text: one vertex, simplex, generator or image per line.
pub fn serialize_complex(file: &ComplexFile) -> Vec<u8> {
    let k = &file.complex;
    let mut out = String::from("{\n");
    out.push_str(&format!("  \"schema_version\": {SCHEMA_VERSION},\n"));
    out.push_str(&format!("  \"ambient_dim\": {},\n", k.ambient_dim()));
    let tail = file.group.is_none() && file.plmaps.is_none();
    complex_blocks(&mut out, "  ", k, tail);
    if let Some(gens) = &file.group {
        let rows: Vec<String> = gens.iter().map(|g| json(g.images())).collect();
        block(&mut out, "  ", "group", &rows, file.plmaps.is_none());
    }
    if let Some(maps) = &file.plmaps {
        out.push_str("  \"plmaps\": [");
        if maps.is_empty() {
            out.push_str("]\n");
        } else {
            out.push('\n');
            for (i, m) in maps.iter().enumerate() {
                out.push_str("    {\n");
                complex_blocks(&mut out, "      ", m.domain(), false);
                let images: Vec<String> = m.images().iter().map(point_row).collect();
                block(&mut out, "      ", "images", &images, true);
                out.push_str(if i + 1 < maps.len() { "    },\n" } else { "    }\n" });
            }
            out.push_str("  ]\n");
        }
    }
    out.push_str("}\n");
    out.into_bytes()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::simplex_boundary;
    use crate::geometry::ratio;

    const TRIANGLE: &str = r#"{
  "schema_version": 1,
  "ambient_dim": 2,
  "vertices": [
    ["0","0"],
    ["1","0"],
    ["0","1"]
  ],
  "top_simplices": [
    [0,1,2]
  ]
}
"#;

    #[test]
    fn canonical_files_round_trip_byte_for_byte() {
        let p = parse_complex(TRIANGLE.as_bytes()).unwrap();
        assert!(p.warnings.is_empty(), "{:?}", p.warnings);
        assert_eq!(String::from_utf8(serialize_complex(&p.file)).unwrap(), TRIANGLE);
    }

    #[test]
    fn non_canonical_rationals_are_fixed_with_a_warning() {
        let text = TRIANGLE.replace(r#"["1","0"]"#, r#"["2/4","0"]"#);
        let p = parse_complex(text.as_bytes()).unwrap();
        assert_eq!(p.file.complex.vertex(1).coords()[0], ratio(1, 2));
        assert_eq!(p.warnings.len(), 1);
        assert!(p.warnings[0].contains("\"1/2\""), "{}", p.warnings[0]);
        let again = serialize_complex(&p.file);
        assert!(String::from_utf8(again.clone()).unwrap().contains(r#"["1/2","0"]"#));
        assert_eq!(serialize_complex(&parse_complex(&again).unwrap().file), again);
    }

    #[test]
    fn errors_name_the_offending_entry() {
        let text = TRIANGLE.replace("[0,1,2]", "[0,1,7]");
        let e = parse_complex(text.as_bytes()).unwrap_err();
        assert_eq!(e, IoError::IndexOutOfRange { at: "top_simplices[0][2]".into(), index: 7, count: 3 });

        let text = TRIANGLE.replace(r#"["0","1"]"#, r#"["0","1","5"]"#);
        assert!(matches!(parse_complex(text.as_bytes()), Err(IoError::DimensionMismatch { found: 3, .. })));
        assert!(matches!(parse_complex(b"{\"ambient_dim\": 2,"), Err(IoError::Json { .. })));
        let text = TRIANGLE.replace(r#""1","0""#, r#""1/0","0""#);
        assert!(matches!(parse_complex(text.as_bytes()), Err(IoError::BadRational { .. })));
    }

    #[test]
    fn group_and_maps_round_trip() {
        let k = simplex_boundary(2);
        let rot = Permutation::new(vec![1, 2, 0]).unwrap();
        let map = PLHomeoSpec::from_permutation(&k, &rot).unwrap();
        let file = ComplexFile { complex: k, group: Some(vec![rot]), plmaps: Some(vec![map]) };
        let bytes = serialize_complex(&file);
        let p = parse_complex(&bytes).unwrap();
        assert!(p.warnings.is_empty());
        assert_eq!(p.file, file);
        assert_eq!(serialize_complex(&p.file), bytes);
        assert_eq!(p.file.group_action().unwrap().order(), 3);

        let bad = String::from_utf8(bytes).unwrap().replacen("[1,2,0]", "[1,1,0]", 1);
        assert!(matches!(parse_complex(bad.as_bytes()), Err(IoError::Invalid { .. })));
    }
}
