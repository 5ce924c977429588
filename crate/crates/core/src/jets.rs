//! Truncated derivative stacks ("jets") in the arc-length parameter.
//!
//! Entry `n` of a jet is the n-th derivative at the evaluation point, not
//! the n-th Taylor coefficient, so products carry explicit binomial
//! weights (the general Leibniz rule).

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::so3::Vec3;

/// Size of the shared Pascal table.
pub const BINOMIAL_TABLE_ORDER: usize = 24;

/// Pascal triangle up to a fixed order, built by the additive recurrence.
#[derive(Debug, Clone)]
pub struct Binomial {
    max: usize,
    rows: Vec<Vec<u64>>,
}

impl Binomial {
    pub fn new(max: usize) -> Self {
        let mut rows: Vec<Vec<u64>> = Vec::with_capacity(max + 1);
        for n in 0..=max {
            let mut row = vec![1u64; n + 1];
            for i in 1..n {
                row[i] = rows[n - 1][i - 1] + rows[n - 1][i];
            }
            rows.push(row);
        }
        Binomial { max, rows }
    }

    pub fn max_order(&self) -> usize {
        self.max
    }

    pub fn get(&self, n: usize, i: usize) -> Result<u64> {
        if n > self.max || i > n {
            return Err(Error::IndexError { n, i, max: self.max });
        }
        Ok(self.rows[n][i])
    }
}

fn table() -> &'static Binomial {
    static TABLE: OnceLock<Binomial> = OnceLock::new();
    TABLE.get_or_init(|| Binomial::new(BINOMIAL_TABLE_ORDER))
}

/// Exact binomial coefficient `C(n, i)` from the shared table.
pub fn binom(n: usize, i: usize) -> Result<u64> {
    table().get(n, i)
}

/// `C(n, i)` as a float for inner loops whose indices are known valid.
pub(crate) fn choose(n: usize, i: usize) -> f64 {
    table().rows[n][i] as f64
}

fn check_orders(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::OrderMismatch { left, right });
    }
    Ok(())
}

/// A scalar function and its first `N` derivatives at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarJet {
    coeffs: Vec<f64>,
}

impl ScalarJet {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::JetDomain("a jet needs at least one entry".into()));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::JetDomain("non-finite jet entry".into()));
        }
        Ok(ScalarJet { coeffs })
    }

    pub fn constant(value: f64, order: usize) -> Self {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = value;
        ScalarJet { coeffs }
    }

    /// The identity function `ξ ↦ ξ` at `xi`.
    pub fn variable(xi: f64, order: usize) -> Self {
        let mut jet = ScalarJet::constant(xi, order);
        if order >= 1 {
            jet.coeffs[1] = 1.0;
        }
        jet
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn get(&self, n: usize) -> f64 {
        self.coeffs[n]
    }

    pub fn truncate(&self, order: usize) -> ScalarJet {
        ScalarJet { coeffs: self.coeffs[..=order.min(self.order())].to_vec() }
    }

    pub fn add(&self, other: &ScalarJet) -> Result<ScalarJet> {
        check_orders(self.order(), other.order())?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(ScalarJet { coeffs })
    }

    pub fn scaled(&self, factor: f64) -> ScalarJet {
        ScalarJet { coeffs: self.coeffs.iter().map(|c| c * factor).collect() }
    }

    pub fn offset(&self, shift: f64) -> ScalarJet {
        let mut out = self.clone();
        out.coeffs[0] += shift;
        out
    }

    fn check_finite(self) -> Result<ScalarJet> {
        if self.coeffs.iter().all(|c| c.is_finite()) {
            Ok(self)
        } else {
            Err(Error::JetDomain("jet arithmetic overflowed".into()))
        }
    }
}

/// A 3-vector function and its first `N` derivatives at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorJet {
    rows: Vec<Vec3>,
}

impl VectorJet {
    pub fn new(rows: Vec<Vec3>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::JetDomain("a jet needs at least one entry".into()));
        }
        if rows.iter().any(|r| !r.iter().all(|c| c.is_finite())) {
            return Err(Error::JetDomain("non-finite jet entry".into()));
        }
        Ok(VectorJet { rows })
    }

    pub fn constant(value: Vec3, order: usize) -> Self {
        let mut rows = vec![Vec3::zeros(); order + 1];
        rows[0] = value;
        VectorJet { rows }
    }

    pub fn zeros(order: usize) -> Self {
        VectorJet { rows: vec![Vec3::zeros(); order + 1] }
    }

    pub fn order(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn rows(&self) -> &[Vec3] {
        &self.rows
    }

    pub fn row(&self, n: usize) -> &Vec3 {
        &self.rows[n]
    }

    pub fn truncate(&self, order: usize) -> VectorJet {
        VectorJet { rows: self.rows[..=order.min(self.order())].to_vec() }
    }

    /// Jet of `ξ ↦ ∂v(ξ)`: drops the first row.
    pub fn derivative(&self) -> Option<VectorJet> {
        (self.order() >= 1).then(|| VectorJet { rows: self.rows[1..].to_vec() })
    }

    pub fn add(&self, other: &VectorJet) -> Result<VectorJet> {
        check_orders(self.order(), other.order())?;
        let rows = self.rows.iter().zip(&other.rows).map(|(a, b)| a + b).collect();
        Ok(VectorJet { rows })
    }

    pub fn component(&self, axis: usize) -> ScalarJet {
        ScalarJet { coeffs: self.rows.iter().map(|r| r[axis]).collect() }
    }
}

/// Leibniz product `∂ⁿ(fg) = Σ C(n,i) ∂ⁿ⁻ⁱf ∂ⁱg`.
pub fn jet_mul(f: &ScalarJet, g: &ScalarJet) -> Result<ScalarJet> {
    check_orders(f.order(), g.order())?;
    let coeffs = (0..=f.order())
        .map(|n| (0..=n).map(|i| choose(n, i) * f.coeffs[n - i] * g.coeffs[i]).sum())
        .collect();
    Ok(ScalarJet { coeffs })
}

pub fn jet_dot(u: &VectorJet, v: &VectorJet) -> Result<ScalarJet> {
    check_orders(u.order(), v.order())?;
    let coeffs = (0..=u.order())
        .map(|n| (0..=n).map(|i| choose(n, i) * u.rows[n - i].dot(&v.rows[i])).sum())
        .collect();
    Ok(ScalarJet { coeffs })
}

pub fn jet_cross(u: &VectorJet, v: &VectorJet) -> Result<VectorJet> {
    check_orders(u.order(), v.order())?;
    let rows = (0..=u.order())
        .map(|n| {
            (0..=n).fold(Vec3::zeros(), |acc, i| {
                acc + u.rows[n - i].cross(&v.rows[i]) * choose(n, i)
            })
        })
        .collect();
    Ok(VectorJet { rows })
}

/// `∂ⁿ(f v)`.
pub fn jet_scale(f: &ScalarJet, v: &VectorJet) -> Result<VectorJet> {
    check_orders(f.order(), v.order())?;
    let rows = (0..=f.order())
        .map(|n| {
            (0..=n).fold(Vec3::zeros(), |acc, i| acc + v.rows[i] * (choose(n, i) * f.coeffs[n - i]))
        })
        .collect();
    Ok(VectorJet { rows })
}

/// `√f`, solving `f = g·g` order by order. Requires `f > 0`.
pub fn jet_sqrt(f: &ScalarJet) -> Result<ScalarJet> {
    let f0 = f.coeffs[0];
    if !(f0 > 0.0) {
        return Err(Error::JetDomain(format!("sqrt of non-positive value {f0}")));
    }
    let mut g = vec![0.0; f.coeffs.len()];
    g[0] = f0.sqrt();
    for n in 1..g.len() {
        let cross: f64 = (1..n).map(|i| choose(n, i) * g[n - i] * g[i]).sum();
        g[n] = (f.coeffs[n] - cross) / (2.0 * g[0]);
    }
    ScalarJet { coeffs: g }.check_finite()
}

/// `1/f`, solving `f·g = 1` order by order. Requires `f > 0`.
pub fn jet_recip(f: &ScalarJet) -> Result<ScalarJet> {
    let f0 = f.coeffs[0];
    if !(f0 > 0.0) {
        return Err(Error::JetDomain(format!("reciprocal of non-positive value {f0}")));
    }
    let mut g = vec![0.0; f.coeffs.len()];
    g[0] = 1.0 / f0;
    for n in 1..g.len() {
        let acc: f64 = (0..n).map(|i| choose(n, i) * f.coeffs[n - i] * g[i]).sum();
        g[n] = -acc / f0;
    }
    ScalarJet { coeffs: g }.check_finite()
}

/// `tan(f/2)` via `t' = (1 + t²) f'/2`.
pub fn jet_tan_half(f: &ScalarJet) -> Result<ScalarJet> {
    let half = 0.5 * f.coeffs[0];
    if half.cos().abs() < 1e-8 {
        return Err(Error::JetDomain(format!("tan(f/2) has a pole at f = {}", f.coeffs[0])));
    }
    let len = f.coeffs.len();
    let mut t = vec![0.0; len];
    // u = 1 + t²
    let mut u = vec![0.0; len];
    t[0] = half.tan();
    for n in 1..len {
        let k = n - 1;
        u[k] = (0..=k).map(|j| choose(k, j) * t[k - j] * t[j]).sum::<f64>();
        if k == 0 {
            u[0] += 1.0;
        }
        t[n] = (0..=k).map(|i| choose(k, i) * u[i] * 0.5 * f.coeffs[n - i]).sum();
    }
    ScalarJet { coeffs: t }.check_finite()
}

/// `(sin f, cos f)` propagated jointly via `s' = c f'`, `c' = -s f'`.
pub fn jet_sin_cos(f: &ScalarJet) -> (ScalarJet, ScalarJet) {
    let len = f.coeffs.len();
    let mut s = vec![0.0; len];
    let mut c = vec![0.0; len];
    (s[0], c[0]) = f.coeffs[0].sin_cos();
    for n in 1..len {
        let k = n - 1;
        s[n] = (0..=k).map(|i| choose(k, i) * c[i] * f.coeffs[n - i]).sum();
        c[n] = -(0..=k).map(|i| choose(k, i) * s[i] * f.coeffs[n - i]).sum::<f64>();
    }
    (ScalarJet { coeffs: s }, ScalarJet { coeffs: c })
}

/// `cos²(f/2) = (1 + cos f)/2`; total on the real line.
pub fn jet_cos2_half(f: &ScalarJet) -> ScalarJet {
    let (_, c) = jet_sin_cos(f);
    c.offset(1.0).scaled(0.5)
}

/// Below this norm the axis of a varying rotation vector is ill-defined.
pub const GIBBS_SMALL_ANGLE: f64 = 1e-6;
/// Gibbs vectors are refused for angles above `π - GIBBS_PI_MARGIN`.
pub const GIBBS_PI_MARGIN: f64 = 1e-3;
/// Allowed off-axis residue when a fixed axis is supplied.
const AXIS_TOL: f64 = 1e-12;

/// The Gibbs vector `φ = (tan(θ/2)/θ) θ` and `φ̄ = 2cos²(θ/2)` as jets.
#[derive(Debug, Clone, PartialEq)]
pub struct GibbsJets {
    pub phi: VectorJet,
    pub phi_bar: ScalarJet,
}

/// Builds Gibbs jets from a rotation-vector jet.
///
/// With `fixed_axis = Some(e)` the field must satisfy `θ(ξ) = a(ξ) e`; the
/// signed angle `a` is then used directly (`φ = tan(a/2) e`), which stays
/// smooth through `a = 0`. Without an axis the norm `|θ|` must stay inside
/// `(1e-6, π - 1e-3)`.
pub fn gibbs_jets(theta: &VectorJet, fixed_axis: Option<&Vec3>) -> Result<GibbsJets> {
    match fixed_axis {
        Some(axis) => gibbs_jets_fixed_axis(theta, axis),
        None => gibbs_jets_general(theta),
    }
}

fn gibbs_jets_general(theta: &VectorJet) -> Result<GibbsJets> {
    let angle = theta.rows[0].norm();
    if angle >= std::f64::consts::PI - GIBBS_PI_MARGIN {
        return Err(Error::GimbalDomain { angle });
    }
    if angle <= GIBBS_SMALL_ANGLE {
        return Err(Error::SmallAngleAmbiguous { angle });
    }
    let norm = jet_sqrt(&jet_dot(theta, theta)?)?;
    let ratio = jet_mul(&jet_tan_half(&norm)?, &jet_recip(&norm)?)?;
    let phi = jet_scale(&ratio, theta)?;
    let phi_bar = jet_cos2_half(&norm).scaled(2.0);
    Ok(GibbsJets { phi, phi_bar })
}

fn gibbs_jets_fixed_axis(theta: &VectorJet, axis: &Vec3) -> Result<GibbsJets> {
    let len = axis.norm();
    if !(len > 0.0) || !len.is_finite() {
        return Err(Error::InvalidSpec("fixed axis must be a non-zero vector".into()));
    }
    let e = axis / len;
    let coeffs: Vec<f64> = theta.rows.iter().map(|r| r.dot(&e)).collect();
    for (n, row) in theta.rows.iter().enumerate() {
        let off_axis = (row - e * coeffs[n]).norm();
        if off_axis > AXIS_TOL * (1.0 + row.norm()) {
            return Err(Error::InvalidSpec(format!(
                "rotation-vector derivative {n} leaves the fixed axis by {off_axis:.3e}"
            )));
        }
    }
    let signed = ScalarJet { coeffs };
    let angle = signed.value().abs();
    if angle >= std::f64::consts::PI - GIBBS_PI_MARGIN {
        return Err(Error::GimbalDomain { angle });
    }
    let tan_half = jet_tan_half(&signed)?;
    let phi = VectorJet { rows: tan_half.coeffs.iter().map(|t| e * *t).collect() };
    let phi_bar = jet_cos2_half(&signed).scaled(2.0);
    Ok(GibbsJets { phi, phi_bar })
}
