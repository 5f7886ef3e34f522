//! Browser bindings. Every export takes a complex file as JSON text and
//! returns a JSON report; malformed input becomes a thrown error.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use plsmooth::approx::edgewise_subdivision;
use plsmooth::catalog;
use plsmooth::complex::barycentric_subdivision;
use plsmooth::io::{export_off, parse_complex, serialize_complex, ComplexFile, SCHEMA_VERSION};
use plsmooth::manifold::{check_pl_manifold, homology};

fn load(text: &str) -> Result<(ComplexFile, Vec<String>), String> {
    let parsed = parse_complex(text.as_bytes()).map_err(|e| e.to_string())?;
    Ok((parsed.file, parsed.warnings))
}

fn finish(result: Result<Value, String>) -> Result<String, JsError> {
    result.map(|v| serde_json::to_string_pretty(&v).expect("reports serialize")).map_err(|e| JsError::new(&e))
}

/// Names of the built-in complexes.
#[wasm_bindgen]
pub fn catalog_names() -> String {
    json!(catalog::NAMES).to_string()
}

/// A built-in complex as complex-file JSON.
#[wasm_bindgen]
pub fn catalog_entry(name: &str) -> Result<String, JsError> {
    let file = catalog::get(name).ok_or_else(|| JsError::new(&format!("unknown catalog entry {name:?}")))?;
    Ok(String::from_utf8(serialize_complex(&file)).expect("serialization is UTF-8"))
}

/// Integral homology and Euler characteristic.
#[wasm_bindgen]
pub fn homology_report(text: &str) -> Result<String, JsError> {
    finish(load(text).map(|(file, warnings)| {
        let h = homology(&file.complex);
        json!({
            "schema_version": SCHEMA_VERSION,
            "groups": h.groups().iter().map(|g| g.to_string()).collect::<Vec<_>>(),
            "euler_characteristic": h.euler_characteristic(),
            "warnings": warnings,
        })
    }))
}

/// Combinatorial manifold verdict in dimension `dim`.
#[wasm_bindgen]
pub fn manifold_report(text: &str, dim: usize) -> Result<String, JsError> {
    finish(load(text).and_then(|(file, warnings)| {
        let report = check_pl_manifold(&file.complex, dim).map_err(|e| e.to_string())?;
        Ok(json!({ "schema_version": SCHEMA_VERSION, "report": report, "warnings": warnings }))
    }))
}

/// One subdivision round, returned as `{ "complex": <file>, "off": <OFF text> }`.
/// `scheme` is `"barycentric"` or `"edgewise"`; `degree` applies to the latter.
#[wasm_bindgen]
pub fn subdivide(text: &str, scheme: &str, degree: usize) -> Result<String, JsError> {
    finish(load(text).and_then(|(file, _)| {
        let k = &file.complex;
        let fine = match scheme {
            "barycentric" => barycentric_subdivision(k).complex,
            "edgewise" => {
                let action = file.group_action().map_err(|e| e.to_string())?;
                edgewise_subdivision(k, degree, &action).map_err(|e| e.to_string())?.complex
            }
            other => return Err(format!("unknown scheme {other:?}")),
        };
        let off = export_off(&fine, 6, true).map_err(|e| e.to_string())?;
        let complex: Value = serde_json::from_slice(&serialize_complex(&ComplexFile::new(fine))).expect("valid JSON");
        Ok(json!({ "complex": complex, "off": off }))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subdivide_and_analyse_a_catalog_sphere() {
        let sphere = catalog_entry("sphere").unwrap();
        let h: Value = serde_json::from_str(&homology_report(&sphere).unwrap()).unwrap();
        assert_eq!(h["groups"], json!(["Z", "0", "Z"]));
        let m: Value = serde_json::from_str(&manifold_report(&sphere, 2).unwrap()).unwrap();
        assert_eq!(m["report"]["verdict"], "verified_manifold");
        let s: Value = serde_json::from_str(&subdivide(&sphere, "edgewise", 2).unwrap()).unwrap();
        assert_eq!(s["complex"]["top_simplices"].as_array().unwrap().len(), 16);
        assert!(s["off"].as_str().unwrap().starts_with("OFF\n10 16 24\n"));
    }
}
