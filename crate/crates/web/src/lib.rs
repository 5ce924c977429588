//! Browser bindings for the curvature demo.
//!
//! Each exported function takes JSON text or numbers and returns JSON text.
//! The plain `*_json` functions hold the logic so they can be tested natively.

use curvjet::corotational::{corot_curvature_derivatives, material_curvature_derivatives};
use curvjet::curvature::{bcoef_row, jmax_table, MAX_ORDER};
use curvjet::field::{CurveSpec, RotationField};
use curvjet::oracle::verify_update;
use curvjet::updating::update_frame;
use serde::Serialize;
use wasm_bindgen::prelude::*;

const MAX_SAMPLES: usize = 2001;

fn parse_spec(text: &str) -> Result<CurveSpec, String> {
    let spec: CurveSpec = serde_json::from_str(text).map_err(|e| format!("spec: {e}"))?;
    spec.validated().map_err(|e| e.to_string())
}

fn grid(a: f64, b: f64, count: usize) -> Result<Vec<f64>, String> {
    if !(a.is_finite() && b.is_finite()) || count == 0 || count > MAX_SAMPLES {
        return Err(format!("need finite bounds and 1..={MAX_SAMPLES} samples"));
    }
    if count == 1 {
        return Ok(vec![a]);
    }
    Ok((0..count).map(|k| a + (b - a) * k as f64 / (count - 1) as f64).collect())
}

fn check_order(order: usize) -> Result<(), String> {
    if order > MAX_ORDER {
        return Err(format!("order {order} exceeds {MAX_ORDER}"));
    }
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("demo records serialize")
}

#[derive(Serialize)]
struct CurvePoint {
    xi: f64,
    kappa: Vec<[f64; 3]>,
    kappa_bar: Vec<[f64; 3]>,
    kappa_tilde: Vec<[f64; 3]>,
    /// Domain error at this point, if any.
    error: Option<String>,
}

/// Spatial, material and co-rotational curvature jets over `[a, b]`.
/// Points outside the admissible domain carry an error instead of values.
pub fn eval_curve_json(spec: &str, a: f64, b: f64, count: usize, order: usize) -> Result<String, String> {
    let spec = parse_spec(spec)?;
    check_order(order)?;
    let points: Vec<CurvePoint> = grid(a, b, count)?
        .into_iter()
        .map(|xi| {
            let rows = || -> curvjet::Result<_> {
                let frame = spec.frame_jets(xi, order)?;
                let qjet = frame.rotation_jet();
                let material = material_curvature_derivatives(&qjet, &frame.kappa, order)?;
                let tilde = if order == 0 {
                    Vec::new()
                } else {
                    corot_curvature_derivatives(&qjet, &material, order)?.rows().to_vec()
                };
                Ok((frame.kappa.rows().to_vec(), material.rows().to_vec(), tilde))
            };
            let arr = |v: Vec<curvjet::so3::Vec3>| v.iter().map(|r| [r.x, r.y, r.z]).collect();
            match rows() {
                Ok((k, m, t)) => CurvePoint { xi, kappa: arr(k), kappa_bar: arr(m), kappa_tilde: arr(t), error: None },
                Err(e) => CurvePoint {
                    xi,
                    kappa: vec![],
                    kappa_bar: vec![],
                    kappa_tilde: vec![],
                    error: Some(format!("{}: {e}", e.kind())),
                },
            }
        })
        .collect();
    Ok(to_json(&points))
}

#[derive(Serialize)]
struct Tables {
    jmax: Vec<Vec<usize>>,
    bcoef: Vec<Vec<i64>>,
}

/// `jmax(n - i)` by `(n, i)` and the `bcoef` rows for `m ≤ max_m`.
pub fn tables_json(max_m: usize) -> Result<String, String> {
    if max_m > 12 {
        return Err("max_m must be at most 12".into());
    }
    let bcoef = (0..=max_m).map(bcoef_row).collect::<curvjet::Result<Vec<_>>>().map_err(|e| e.to_string())?;
    Ok(to_json(&Tables { jmax: jmax_table(max_m), bcoef }))
}

#[derive(Serialize)]
struct UpdatePoint {
    xi: f64,
    kappa: Vec<[f64; 3]>,
    mixed_err: Vec<f64>,
    error: Option<String>,
}

/// Updated curvature jets and their mixed error against the composed field.
pub fn update_curve_json(
    initial: &str,
    increment: &str,
    a: f64,
    b: f64,
    count: usize,
    order: usize,
) -> Result<String, String> {
    let initial = parse_spec(initial)?;
    let increment = parse_spec(increment)?;
    check_order(order)?;
    let points: Vec<UpdatePoint> = grid(a, b, count)?
        .into_iter()
        .map(|xi| {
            let updated = initial
                .frame_jets(xi, order)
                .and_then(|i| update_frame(&i, &increment.frame_jets(xi, order)?, order));
            match updated {
                Ok(u) => {
                    let report = verify_update(&initial, &increment, xi, order);
                    let mixed_err = report
                        .rows
                        .iter()
                        .filter(|r| r.quantity == "kappa_f")
                        .map(|r| r.mixed_err.unwrap_or(f64::NAN))
                        .collect();
                    UpdatePoint {
                        xi,
                        kappa: u.kappa.rows().iter().map(|r| [r.x, r.y, r.z]).collect(),
                        mixed_err,
                        error: None,
                    }
                }
                Err(e) => UpdatePoint { xi, kappa: vec![], mixed_err: vec![], error: Some(format!("{}: {e}", e.kind())) },
            }
        })
        .collect();
    Ok(to_json(&points))
}

#[wasm_bindgen]
pub fn eval_curve(spec: &str, a: f64, b: f64, count: usize, order: usize) -> Result<String, JsValue> {
    eval_curve_json(spec, a, b, count, order).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn tables(max_m: usize) -> Result<String, JsValue> {
    tables_json(max_m).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn update_curve(
    initial: &str,
    increment: &str,
    a: f64,
    b: f64,
    count: usize,
    order: usize,
) -> Result<String, JsValue> {
    update_curve_json(initial, increment, a, b, count, order).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    const HELIX: &str = r#"{"kind":"fixed-axis-poly","axis":[0,0,1],"coeffs":[0,1],"domain":[0,1]}"#;
    const POLY: &str = r#"{"kind":"poly3","coeffs":[[0.3,0.5],[0.1,0,0.2],[-0.2,0.3]],"domain":[-1,1]}"#;

    #[test]
    fn eval_returns_one_entry_per_point() {
        let out: Value = serde_json::from_str(&eval_curve_json(HELIX, 0.0, 1.0, 5, 2).unwrap()).unwrap();
        let points = out.as_array().unwrap();
        assert_eq!(points.len(), 5);
        assert_eq!(points[4]["xi"], 1.0);
        assert!((points[2]["kappa"][0][2].as_f64().unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(points[0]["kappa_tilde"].as_array().unwrap().len(), 2);
    }

    #[test]
    fn eval_marks_domain_errors_per_point() {
        let spec = r#"{"kind":"poly3","coeffs":[[0,3.5],[0.1],[0]],"domain":[0,1]}"#;
        let out: Value = serde_json::from_str(&eval_curve_json(spec, 0.0, 1.0, 3, 1).unwrap()).unwrap();
        assert!(out[0]["error"].is_null());
        assert!(out[2]["error"].as_str().unwrap().starts_with("GimbalDomain"));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(eval_curve_json("{", 0.0, 1.0, 3, 1).is_err());
        assert!(eval_curve_json(HELIX, 0.0, 1.0, 0, 1).is_err());
        assert!(eval_curve_json(HELIX, 0.0, 1.0, 3, 9).is_err());
        assert!(tables_json(13).is_err());
    }

    #[test]
    fn tables_payload() {
        let out: Value = serde_json::from_str(&tables_json(6).unwrap()).unwrap();
        assert_eq!(out["jmax"][6], serde_json::json!([3, 2, 2, 1, 1, 0, 0]));
        assert_eq!(out["bcoef"][4], serde_json::json!([1, 3, 2]));
    }

    #[test]
    fn update_errors_are_small() {
        let out: Value = serde_json::from_str(&update_curve_json(POLY, HELIX, -0.5, 0.5, 4, 3).unwrap()).unwrap();
        for point in out.as_array().unwrap() {
            for e in point["mixed_err"].as_array().unwrap() {
                assert!(e.as_f64().unwrap() < 1e-5);
            }
        }
    }
}
