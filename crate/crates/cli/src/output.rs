//! Output records and their CSV/JSON encodings.
//!
//! CSV rows are `xi,quantity,order,c0..c8`: vectors fill `c0..c2`, matrices
//! fill all nine columns row-major. Numbers carry 17 significant digits.

use curvjet::corotational::{corot_curvature_derivatives, material_curvature_derivatives};
use curvjet::field::{CurveSpec, RotationField};
use curvjet::oracle::{verify_update, VerificationReport};
use curvjet::so3::{Mat3, Vec3};
use curvjet::updating::update_frame;
use serde::Serialize;

use crate::error::{CliError, CliResult};

const COLUMNS: usize = 9;

pub fn matrix_row_major(m: &Mat3) -> [f64; 9] {
    let mut out = [0.0; 9];
    for r in 0..3 {
        for c in 0..3 {
            out[3 * r + c] = m[(r, c)];
        }
    }
    out
}

fn vec3(v: &Vec3) -> [f64; 3] {
    [v.x, v.y, v.z]
}

#[derive(Debug, Serialize)]
pub struct EvalSample {
    pub xi: f64,
    #[serde(rename = "Q")]
    pub q: [f64; 9],
    pub kappa: Vec<[f64; 3]>,
    pub kappa_bar: Vec<[f64; 3]>,
    pub kappa_tilde: Vec<[f64; 3]>,
}

#[derive(Debug, Serialize)]
pub struct EvalOutput<'a> {
    pub spec: &'a CurveSpec,
    pub order: usize,
    pub samples: Vec<EvalSample>,
}

pub fn eval_sample(spec: &CurveSpec, xi: f64, order: usize) -> CliResult<EvalSample> {
    spec.check_point(xi).map_err(CliError::at(xi))?;
    let frame = spec.frame_jets(xi, order).map_err(CliError::at(xi))?;
    let qjet = frame.rotation_jet();
    let material = material_curvature_derivatives(&qjet, &frame.kappa, order).map_err(CliError::at(xi))?;
    let kappa_tilde = if order == 0 {
        Vec::new()
    } else {
        let tilde = corot_curvature_derivatives(&qjet, &material, order).map_err(CliError::at(xi))?;
        tilde.rows().iter().map(vec3).collect()
    };
    Ok(EvalSample {
        xi,
        q: matrix_row_major(frame.rotation.matrix()),
        kappa: frame.kappa.rows().iter().map(vec3).collect(),
        kappa_bar: material.rows().iter().map(vec3).collect(),
        kappa_tilde,
    })
}

#[derive(Debug, Serialize)]
pub struct UpdateSpecs<'a> {
    pub initial: &'a CurveSpec,
    pub increment: &'a CurveSpec,
}

#[derive(Debug, Serialize)]
pub struct UpdateErrors {
    #[serde(rename = "Q")]
    pub q: f64,
    pub kappa: Vec<f64>,
}

#[derive(Debug, Serialize)]
pub struct UpdateSample {
    pub xi: f64,
    #[serde(rename = "Q")]
    pub q: [f64; 9],
    pub kappa: Vec<[f64; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mixed_err: Option<UpdateErrors>,
}

#[derive(Debug, Serialize)]
pub struct UpdateOutput<'a> {
    pub spec: UpdateSpecs<'a>,
    pub order: usize,
    pub samples: Vec<UpdateSample>,
}

pub fn update_sample(
    initial: &CurveSpec,
    increment: &CurveSpec,
    xi: f64,
    order: usize,
    verify: bool,
) -> CliResult<UpdateSample> {
    initial.check_point(xi).map_err(CliError::at(xi))?;
    increment.check_point(xi).map_err(CliError::at(xi))?;
    let a = initial.frame_jets(xi, order).map_err(CliError::at(xi))?;
    let b = increment.frame_jets(xi, order).map_err(CliError::at(xi))?;
    let updated = update_frame(&a, &b, order).map_err(CliError::at(xi))?;
    let mixed_err = verify.then(|| {
        let report = verify_update(initial, increment, xi, order);
        let err = |q: &'static str| {
            report.rows.iter().filter(move |r| r.quantity == q).map(|r| r.mixed_err.unwrap_or(f64::NAN))
        };
        UpdateErrors { q: err("Q_f").next().unwrap_or(f64::NAN), kappa: err("kappa_f").collect() }
    });
    Ok(UpdateSample {
        xi,
        q: matrix_row_major(updated.rotation.matrix()),
        kappa: updated.kappa.rows().iter().map(vec3).collect(),
        mixed_err,
    })
}

fn number(x: f64) -> String {
    format!("{x:.16e}")
}

fn header(extra: &[&str]) -> Vec<String> {
    let mut h: Vec<String> = ["xi", "quantity", "order"].iter().map(|s| s.to_string()).collect();
    h.extend((0..COLUMNS).map(|c| format!("c{c}")));
    h.extend(extra.iter().map(|s| s.to_string()));
    h
}

fn record(xi: f64, quantity: &str, order: usize, values: &[f64], extra: Option<f64>) -> Vec<String> {
    let mut row = vec![number(xi), quantity.to_string(), order.to_string()];
    row.extend((0..COLUMNS).map(|c| values.get(c).map_or_else(String::new, |v| number(*v))));
    if let Some(e) = extra {
        row.push(number(e));
    }
    row
}

fn csv_bytes(rows: Vec<Vec<String>>) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.write_record(&row).expect("writing to memory");
    }
    w.into_inner().expect("flushing to memory")
}

pub fn eval_csv(samples: &[EvalSample]) -> Vec<u8> {
    let mut rows = vec![header(&[])];
    for s in samples {
        rows.push(record(s.xi, "Q", 0, &s.q, None));
        for (name, list, first) in [("kappa", &s.kappa, 0), ("kappa_bar", &s.kappa_bar, 0), ("kappa_tilde", &s.kappa_tilde, 1)] {
            for (n, v) in list.iter().enumerate() {
                rows.push(record(s.xi, name, n + first, v, None));
            }
        }
    }
    csv_bytes(rows)
}

pub fn update_csv(samples: &[UpdateSample], verify: bool) -> Vec<u8> {
    let extra: &[&str] = if verify { &["mixed_err"] } else { &[] };
    let mut rows = vec![header(extra)];
    for s in samples {
        let errs = s.mixed_err.as_ref();
        rows.push(record(s.xi, "Q", 0, &s.q, errs.map(|e| e.q)));
        for (n, v) in s.kappa.iter().enumerate() {
            rows.push(record(s.xi, "kappa", n, v, errs.map(|e| e.kappa[n])));
        }
    }
    csv_bytes(rows)
}

pub fn report_csv(reports: &[VerificationReport]) -> Vec<u8> {
    let mut rows = vec![["xi", "quantity", "order", "abs_err", "mixed_err", "tolerance", "pass", "error"]
        .iter()
        .map(|s| s.to_string())
        .collect()];
    let opt = |x: Option<f64>| x.map_or_else(String::new, number);
    for report in reports {
        for r in &report.rows {
            rows.push(vec![
                number(r.xi),
                r.quantity.clone(),
                r.order.to_string(),
                opt(r.abs_err),
                opt(r.mixed_err),
                number(r.tolerance),
                r.pass.to_string(),
                r.error.clone().unwrap_or_default(),
            ]);
        }
    }
    csv_bytes(rows)
}

pub fn json_bytes<T: Serialize>(value: &T) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(value).expect("output records serialize");
    out.push(b'\n');
    out
}
