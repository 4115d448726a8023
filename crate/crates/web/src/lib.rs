//! wasm-bindgen exports for the static demo page in `www/`. Every function
//! returns a JSON string.

use poincare_ptc::expr::Sample;
use poincare_ptc::matrix::ComplexMatrix;
use poincare_ptc::poincare::{
    canonical_transform, diagonalization_residual, fs_transform, unitarity_residual, RepId,
};
use poincare_ptc::rep_calculus::{format_labels, helicity_operator, parse_labels, ptc_complete};
use poincare_ptc::samples::default_samples;
use poincare_ptc::symmetry::{full_table, Verdict, DEFAULT_RANK_TOL};
use serde::Serialize;
use wasm_bindgen::prelude::*;

#[derive(Serialize)]
struct Row {
    op: String,
    verdict: Verdict,
    nullspace_dim: usize,
    expected: String,
    involution_scale: Option<[f64; 2]>,
}

#[derive(Serialize)]
struct Table {
    rep: String,
    rows: Vec<Row>,
    matches_paper: bool,
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("demo payloads serialize")
}

/// Invariance table for one generator set (`rep1`, `rep2-`, `canonical8`, ...).
#[wasm_bindgen]
pub fn classification_table(rep: &str) -> Result<String, JsError> {
    let rep: RepId = rep.parse().map_err(|e: String| JsError::new(&e))?;
    let table = full_table(rep, &default_samples(), DEFAULT_RANK_TOL);
    let rows = table
        .entries
        .iter()
        .map(|e| Row {
            op: e.result.op.clone(),
            verdict: e.result.verdict,
            nullspace_dim: e.result.nullspace_dim,
            expected: format!("{:?}", e.expectation).to_lowercase(),
            involution_scale: e.result.involution_scale.map(|z| [z.re, z.im]),
        })
        .collect();
    Ok(to_json(&Table { rep: rep.to_string(), rows, matches_paper: table.matches_paper() }))
}

#[derive(Serialize)]
struct PtcResult {
    labels: String,
    complete: bool,
}

/// PTC-completeness of a label sum.
#[wasm_bindgen]
pub fn ptc_check(labels: &str) -> Result<String, JsError> {
    let parsed = parse_labels(labels).map_err(|e| JsError::new(&e.to_string()))?;
    Ok(to_json(&PtcResult { labels: format_labels(&parsed), complete: ptc_complete(&parsed) }))
}

#[derive(Serialize)]
struct TransformView {
    energy: f64,
    u: ComplexMatrix,
    u_unitarity: f64,
    diagonalization: f64,
    u1: ComplexMatrix,
    u1_unitarity: f64,
    /// Spectrum of S·p/E on the eight-component space.
    helicity: Vec<f64>,
}

fn order_zero(op: &poincare_ptc::operator::MomentumOperator, at: &Sample) -> ComplexMatrix {
    op.eval(at).remove(&[0, 0, 0]).unwrap_or_else(|| ComplexMatrix::zeros(op.dim()))
}

/// `U`, `U₁` and the helicity spectrum at momentum `(p1, p2, p3)` and mass `m`.
#[wasm_bindgen]
pub fn transform_at(p1: f64, p2: f64, p3: f64, m: f64) -> Result<String, JsError> {
    let at = Sample::new([p1, p2, p3], m, 0.0);
    if !(at.energy() > 0.0) {
        return Err(JsError::new("energy must be positive"));
    }
    let u = canonical_transform();
    let u1 = fs_transform();
    let helicity = order_zero(&helicity_operator(false), &at);
    let view = TransformView {
        energy: at.energy(),
        u: order_zero(&u, &at),
        u_unitarity: unitarity_residual(&u, &[at]),
        diagonalization: diagonalization_residual(&[at]),
        u1: order_zero(&u1, &at),
        u1_unitarity: unitarity_residual(&u1, &[at]),
        helicity: poincare_ptc::linalg::hermitian_eigen(&helicity).0,
    };
    Ok(to_json(&view))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn payloads() {
        let t: serde_json::Value = serde_json::from_str(&classification_table("rep3").unwrap()).unwrap();
        assert_eq!(t["matches_paper"], true);
        assert_eq!(t["rows"].as_array().unwrap().len(), 9);
        let p: serde_json::Value = serde_json::from_str(&ptc_check("D+(1/2,1/2)+D-(1/2,1/2)").unwrap()).unwrap();
        assert_eq!(p["complete"], true);
        let v: serde_json::Value = serde_json::from_str(&transform_at(0.3, -1.0, 0.5, 1.0).unwrap()).unwrap();
        assert!(v["u_unitarity"].as_f64().unwrap() < 1e-12);
        assert_eq!(v["u"].as_array().unwrap().len(), 8);
    }
}
