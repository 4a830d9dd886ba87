//! Browser bindings. Every entry point returns a JSON string so the page
//! needs no generated types.

use origami_sim::anyons::{self, ModularData};
use origami_sim::mcg::{word_to_matrix, MCGWord};
use origami_sim::origami;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn render(result: Result<Value, String>) -> String {
    match result {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

fn model(spec: &str) -> Result<ModularData, String> {
    anyons::model_by_spec(spec).map_err(|e| e.to_string())
}

fn complex_rows(m: &origami_sim::linalg::CMat) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect()
}

/// Integer matrix of a word such as `Ra S T`, plus its representation on
/// the chosen model's torus states.
#[wasm_bindgen]
pub fn evaluate_word(word: &str, model_spec: &str) -> String {
    render((|| {
        let w: MCGWord = word.parse().map_err(|e: origami_sim::Error| e.to_string())?;
        let m = word_to_matrix(&w).map_err(|e| e.to_string())?;
        let data = model(model_spec)?;
        let rep = anyons::rep_on_torus(&w, &data).map_err(|e| e.to_string())?;
        Ok(json!({
            "word": w.to_string(),
            "matrix": [[m.a, m.b], [m.c, m.d]],
            "det": m.a * m.d - m.b * m.c,
            "labels": data.labels,
            "representation": complex_rows(&rep),
        }))
    })())
}

#[wasm_bindgen]
pub fn verify_model(model_spec: &str) -> String {
    render(model(model_spec).map(|m| {
        let report = anyons::verify_modular_data(&m);
        json!({ "model": m.name, "pass": report.all_pass(), "checks": report.checks })
    }))
}

#[wasm_bindgen]
pub fn protocol_names() -> String {
    json!(origami::catalog_names()).to_string()
}

#[wasm_bindgen]
pub fn verify_protocol(name: &str) -> String {
    render(origami::builtin_protocol(name).map_err(|e| e.to_string()).map(|p| {
        let report = origami::verify_protocol(&p);
        json!({ "protocol": p.name, "layers": p.geometry.layers(), "pass": report.all_pass(), "checks": report.checks })
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_round_trip() {
        let v: Value = serde_json::from_str(&evaluate_word("S", "toric_code")).unwrap();
        assert_eq!(v["matrix"], json!([[0, 1], [-1, 0]]));
        assert_eq!(v["representation"].as_array().unwrap().len(), 4);
    }

    #[test]
    fn errors_are_json() {
        let v: Value = serde_json::from_str(&evaluate_word("Q", "toric_code")).unwrap();
        assert!(v["error"].is_string());
        let v: Value = serde_json::from_str(&verify_model("laughlin(3)")).unwrap();
        assert_eq!(v["pass"], json!(true));
        let v: Value = serde_json::from_str(&verify_protocol("appB_8layer_S")).unwrap();
        assert_eq!(v["pass"], json!(true));
    }
}
