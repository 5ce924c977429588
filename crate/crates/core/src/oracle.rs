//! Independent checks for the closed forms.
//!
//! Everything here works from raw samples of `exp_so3`, the tangent map and
//! the analytic field, or from unreduced sums. None of it calls the folded
//! curvature, update or co-rotational routines it is used to test.

use std::ops::{Add, Mul};

use serde::{Deserialize, Serialize};

use crate::corotational::{corot_curvature_derivatives, corot_curvature_recurrence, material_curvature_derivatives};
use crate::curvature::CurvatureJet;
use crate::error::{Error, Result};
use crate::field::RotationField;
use crate::jets::{binom, choose, VectorJet};
use crate::so3::{exp_so3, hat, lie_bracket, tangent_map, Mat3, Skew3, Vec3};
use crate::updating::update_frame;

/// Values a finite-difference stencil can combine.
pub trait FdValue: Copy + Add<Output = Self> + Mul<f64, Output = Self> {
    fn fd_zero() -> Self;
    fn fd_norm(&self) -> f64;
    fn components(&self) -> Vec<f64>;
}

impl FdValue for f64 {
    fn fd_zero() -> Self {
        0.0
    }
    fn fd_norm(&self) -> f64 {
        self.abs()
    }
    fn components(&self) -> Vec<f64> {
        vec![*self]
    }
}

impl FdValue for Vec3 {
    fn fd_zero() -> Self {
        Vec3::zeros()
    }
    fn fd_norm(&self) -> f64 {
        self.norm()
    }
    fn components(&self) -> Vec<f64> {
        self.iter().copied().collect()
    }
}

impl FdValue for Mat3 {
    fn fd_zero() -> Self {
        Mat3::zeros()
    }
    fn fd_norm(&self) -> f64 {
        self.norm()
    }
    fn components(&self) -> Vec<f64> {
        // row-major
        self.transpose().iter().copied().collect()
    }
}

/// A sampler `ξ ↦ f(ξ)` that is total on `[xi0 - half_width, xi0 + half_width]`.
pub struct SampledField<F> {
    pub sampler: F,
    pub xi0: f64,
    pub half_width: f64,
}

impl<F> SampledField<F> {
    pub fn new(sampler: F, xi0: f64, half_width: f64) -> Self {
        SampledField { sampler, xi0, half_width }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FdConfig {
    /// Derivative order.
    pub order: usize,
    /// Base step.
    pub step: f64,
    /// Stencil accuracy `p`, one of 2, 4, 6.
    pub accuracy: usize,
    /// Richardson levels, 0 to 2.
    pub richardson: usize,
}

impl FdConfig {
    /// Defaults tuned so truncation and rounding errors roughly balance.
    pub fn default_for(order: usize) -> Self {
        let step = match order {
            0..=2 => 1e-3,
            3 | 4 => 1e-2,
            5 => 2e-2,
            _ => 5e-2,
        };
        FdConfig { order, step, accuracy: 4, richardson: 1 }
    }

    pub fn validate(&self) -> Result<()> {
        if ![2, 4, 6].contains(&self.accuracy) {
            return Err(Error::InvalidFdConfig(format!("accuracy {} not in {{2, 4, 6}}", self.accuracy)));
        }
        if self.richardson > 2 {
            return Err(Error::InvalidFdConfig(format!("richardson {} exceeds 2", self.richardson)));
        }
        if !(self.step.is_finite() && self.step > 0.0) {
            return Err(Error::InvalidFdConfig("step must be positive".into()));
        }
        Ok(())
    }

    /// Points on each side of the centre.
    pub fn half_points(&self) -> usize {
        self.order.div_ceil(2) + self.accuracy / 2 - 1
    }
}

/// Fornberg weights for the `m`-th derivative at `x0` over arbitrary `nodes`.
pub fn fornberg_weights(x0: f64, nodes: &[f64], m: usize) -> Vec<f64> {
    let n = nodes.len();
    // c[j][k]: weight of node j for derivative k
    let mut c = vec![vec![0.0; m + 1]; n];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - x0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - x0;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[m]).collect()
}

fn central_difference<T: FdValue>(
    sampler: &impl Fn(f64) -> Result<T>,
    xi0: f64,
    order: usize,
    half: usize,
    h: f64,
) -> Result<T> {
    let nodes: Vec<f64> = (0..=2 * half).map(|k| k as f64 - half as f64).collect();
    let weights = fornberg_weights(0.0, &nodes, order);
    let scale = h.powi(-(order as i32));
    let mut acc = T::fd_zero();
    for (node, w) in nodes.iter().zip(weights) {
        if w != 0.0 {
            acc = acc + sampler(xi0 + node * h)? * w;
        }
    }
    Ok(acc * scale)
}

/// `n`-th derivative of a sampled field by a central stencil, optionally
/// Richardson-extrapolated over steps `h, h/2, h/4`.
pub fn fd_derivative<T: FdValue, F: Fn(f64) -> Result<T>>(field: &SampledField<F>, cfg: &FdConfig) -> Result<T> {
    cfg.validate()?;
    if cfg.order == 0 {
        return (field.sampler)(field.xi0);
    }
    let half = cfg.half_points();
    let reach = half as f64 * cfg.step;
    if reach > field.half_width {
        return Err(Error::StencilOutOfRange {
            lo: field.xi0 - reach,
            hi: field.xi0 + reach,
            min: field.xi0 - field.half_width,
            max: field.xi0 + field.half_width,
        });
    }
    let mut level: Vec<T> = (0..=cfg.richardson)
        .map(|k| central_difference(&field.sampler, field.xi0, cfg.order, half, cfg.step / f64::powi(2.0, k as i32)))
        .collect::<Result<_>>()?;
    // central stencils have even error exponents p, p+2, ...
    let mut exponent = cfg.accuracy as i32;
    while level.len() > 1 {
        let factor = f64::powi(2.0, exponent);
        level = level
            .windows(2)
            .map(|w| (w[1] * factor + w[0] * -1.0) * (1.0 / (factor - 1.0)))
            .collect();
        exponent += 2;
    }
    Ok(level[0])
}

/// `ξ ↦ exp(θ̂(ξ))`.
pub fn sample_rotation<R: RotationField + ?Sized>(field: &R, xi: f64) -> Mat3 {
    *exp_so3(&field.theta(xi)).matrix()
}

/// `ξ ↦ T_θ ∂θ`, the curvature by way of the tangent map.
pub fn sample_curvature<R: RotationField + ?Sized>(field: &R, xi: f64) -> Vec3 {
    let (theta, rate) = field.theta_and_rate(xi);
    tangent_map(&theta).apply(&rate)
}

/// `ξ ↦ Qᵀκ`.
pub fn sample_material_curvature<R: RotationField + ?Sized>(field: &R, xi: f64) -> Vec3 {
    sample_rotation(field, xi).transpose() * sample_curvature(field, xi)
}

/// `ξ ↦ Q₊Q_i` for an increment applied on the left.
pub fn sample_composed_rotation<A, B>(initial: &A, increment: &B, xi: f64) -> Mat3
where
    A: RotationField + ?Sized,
    B: RotationField + ?Sized,
{
    sample_rotation(increment, xi) * sample_rotation(initial, xi)
}

/// Curvature of `Q_f = Q₊Q_i` as the axial vector of `∂Q_f·Q_fᵀ`, with
/// `∂Q₊ = κ̂₊Q₊` and `∂Q_i = κ̂_iQ_i` from the tangent map.
pub fn sample_composed_curvature<A, B>(initial: &A, increment: &B, xi: f64) -> Vec3
where
    A: RotationField + ?Sized,
    B: RotationField + ?Sized,
{
    let qp = sample_rotation(increment, xi);
    let qi = sample_rotation(initial, xi);
    let kp = *hat(&sample_curvature(increment, xi)).matrix();
    let ki = *hat(&sample_curvature(initial, xi)).matrix();
    let dq = kp * qp * qi + qp * ki * qi;
    let qf = qp * qi;
    Skew3::antisymmetrize(&(dq * qf.transpose())).axial()
}

/// `∂ᵐ[â, ∂â] = Σ_{i=0..m} C(m,i)[∂ⁱâ, ∂ᵐ⁻ⁱ⁺¹â]` without folding.
pub fn brute_force_pair_derivative(a: &VectorJet, m: usize) -> Result<Skew3> {
    if a.order() < m + 1 {
        return Err(Error::InsufficientOrder { needed: m + 1, available: a.order() });
    }
    Ok((0..=m).fold(Skew3::zero(), |acc, i| {
        acc + lie_bracket(&hat(a.row(i)), &hat(a.row(m - i + 1))) * choose(m, i)
    }))
}

fn cross_i64(u: &[i64; 3], v: &[i64; 3]) -> [i64; 3] {
    [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]]
}

/// Integer version of [`brute_force_pair_derivative`] in axial form.
pub fn brute_force_pair_derivative_i64(rows: &[[i64; 3]], m: usize) -> Result<[i64; 3]> {
    if rows.len() < m + 2 {
        return Err(Error::InsufficientOrder { needed: m + 1, available: rows.len().saturating_sub(1) });
    }
    let mut acc = [0i64; 3];
    for i in 0..=m {
        let c = binom(m, i)? as i64;
        let x = cross_i64(&rows[i], &rows[m - i + 1]);
        for k in 0..3 {
            acc[k] += c * x[k];
        }
    }
    Ok(acc)
}

/// `(∂ - κ×)ⁿ v` for `n = 0..=order`, applying the operator one factor at a
/// time to the whole jet.
pub fn corot_operator_power(v: &VectorJet, kappa: &CurvatureJet, order: usize) -> Result<Vec<Vec3>> {
    if v.order() < order {
        return Err(Error::InsufficientOrder { needed: order, available: v.order() });
    }
    if order > 0 && kappa.order() + 1 < order {
        return Err(Error::InsufficientOrder { needed: order - 1, available: kappa.order() });
    }
    let mut current: Vec<Vec3> = v.rows()[..=order].to_vec();
    let mut out = vec![current[0]];
    for _ in 0..order {
        let len = current.len() - 1;
        current = (0..len)
            .map(|r| {
                let spin = (0..=r).fold(Vec3::zeros(), |acc, j| acc + kappa.row(j).cross(&current[r - j]) * choose(r, j));
                current[r + 1] - spin
            })
            .collect();
        out.push(current[0]);
    }
    Ok(out)
}

/// Default per-order tolerance on the mixed error: `1e-7·10^(n-1)`.
pub fn default_tolerance(n: usize) -> f64 {
    1e-7 * 10f64.powi(n as i32 - 1)
}

/// `‖closed - oracle‖ / (1 + ‖oracle‖)`.
pub fn mixed_error<T: FdValue + std::ops::Sub<Output = T>>(closed: &T, oracle: &T) -> f64 {
    (*closed - *oracle).fd_norm() / (1.0 + oracle.fd_norm())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub quantity: String,
    pub order: usize,
    pub xi: f64,
    pub closed: Option<Vec<f64>>,
    pub oracle: Option<Vec<f64>>,
    pub abs_err: Option<f64>,
    pub mixed_err: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    pub error: Option<String>,
}

impl ReportRow {
    fn compare<T: FdValue + std::ops::Sub<Output = T>>(
        quantity: &str,
        order: usize,
        xi: f64,
        closed: T,
        oracle: Result<T>,
        tolerance: f64,
    ) -> Self {
        match oracle {
            Ok(oracle) => {
                let abs_err = (closed - oracle).fd_norm();
                let mixed = mixed_error(&closed, &oracle);
                ReportRow {
                    quantity: quantity.into(),
                    order,
                    xi,
                    closed: Some(closed.components()),
                    oracle: Some(oracle.components()),
                    abs_err: Some(abs_err),
                    mixed_err: Some(mixed),
                    tolerance,
                    pass: mixed <= tolerance,
                    error: None,
                }
            }
            Err(e) => Self::failed(quantity, order, xi, &e, tolerance),
        }
    }

    fn failed(quantity: &str, order: usize, xi: f64, err: &Error, tolerance: f64) -> Self {
        ReportRow {
            quantity: quantity.into(),
            order,
            xi,
            closed: None,
            oracle: None,
            abs_err: None,
            mixed_err: None,
            tolerance,
            pass: false,
            error: Some(format!("{}: {}", err.kind(), err)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub xi: f64,
    pub order: usize,
    pub rows: Vec<ReportRow>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReportRow> {
        self.rows.iter().filter(|r| !r.pass)
    }

    /// Whether any row failed on a domain error rather than a mismatch.
    pub fn has_domain_error(&self) -> bool {
        self.rows.iter().any(|r| {
            r.error.as_deref().is_some_and(|e| {
                ["NearPiRotation", "TangentMapSingular", "JetDomain", "GimbalDomain", "SmallAngleAmbiguous"]
                    .iter()
                    .any(|k| e.starts_with(k))
            })
        })
    }

    pub fn max_mixed_error(&self) -> f64 {
        self.rows.iter().filter_map(|r| r.mixed_err).fold(0.0, f64::max)
    }
}

/// Half-width of the sampling window around `xi0` used by the oracle.
pub const ORACLE_HALF_WIDTH: f64 = 1.0;

fn fd_at<T: FdValue>(sampler: impl Fn(f64) -> Result<T>, xi0: f64, n: usize) -> Result<T> {
    fd_derivative(&SampledField::new(sampler, xi0, ORACLE_HALF_WIDTH), &FdConfig::default_for(n))
}

/// Compares `Q`, `κ`, `κ̄` and `∂̃κ` up to order `order` against finite
/// differences of the sampled field. Domain errors become failed rows.
pub fn verify_curvature<R: RotationField + ?Sized>(field: &R, xi0: f64, order: usize) -> VerificationReport {
    let mut rows = Vec::new();
    let frame = match field.frame_jets(xi0, order) {
        Ok(f) => f,
        Err(e) => {
            rows.push(ReportRow::failed("frame", 0, xi0, &e, 0.0));
            return VerificationReport { xi: xi0, order, rows };
        }
    };
    let qjet = frame.rotation_jet();
    for n in 0..=order {
        let oracle = fd_at(|x| Ok(sample_rotation(field, x)), xi0, n);
        rows.push(ReportRow::compare("Q", n, xi0, *qjet.row(n), oracle, default_tolerance(n)));
    }
    for n in 0..=order {
        let oracle = fd_at(|x| Ok(sample_curvature(field, x)), xi0, n);
        rows.push(ReportRow::compare("kappa", n, xi0, *frame.kappa.row(n), oracle, default_tolerance(n)));
    }
    match material_curvature_derivatives(&qjet, &frame.kappa, order) {
        Ok(material) => {
            for n in 0..=order {
                let oracle = fd_at(|x| Ok(sample_material_curvature(field, x)), xi0, n);
                rows.push(ReportRow::compare("kappa_bar", n, xi0, *material.row(n), oracle, default_tolerance(n)));
            }
            if order > 0 {
                let q0 = sample_rotation(field, xi0);
                match corot_curvature_derivatives(&qjet, &material, order) {
                    Ok(tilde) => {
                        for n in 1..=order {
                            let oracle = fd_at(|x| Ok(sample_material_curvature(field, x)), xi0, n).map(|d| q0 * d);
                            let closed = *tilde.get(n).expect("row in range");
                            rows.push(ReportRow::compare("kappa_tilde", n, xi0, closed, oracle, default_tolerance(n)));
                        }
                    }
                    Err(e) => rows.push(ReportRow::failed("kappa_tilde", 1, xi0, &e, default_tolerance(1))),
                }
            }
        }
        Err(e) => rows.push(ReportRow::failed("kappa_bar", 0, xi0, &e, default_tolerance(0))),
    }
    VerificationReport { xi: xi0, order, rows }
}

/// Compares the updated rotation and curvature against the composed field.
pub fn verify_update<A, B>(initial: &A, increment: &B, xi0: f64, order: usize) -> VerificationReport
where
    A: RotationField + ?Sized,
    B: RotationField + ?Sized,
{
    let mut rows = Vec::new();
    let frames = initial.frame_jets(xi0, order).and_then(|i| Ok((i, increment.frame_jets(xi0, order)?)));
    let updated = frames.and_then(|(i, d)| update_frame(&i, &d, order));
    let updated = match updated {
        Ok(u) => u,
        Err(e) => {
            rows.push(ReportRow::failed("frame", 0, xi0, &e, 0.0));
            return VerificationReport { xi: xi0, order, rows };
        }
    };
    rows.push(ReportRow::compare(
        "Q_f",
        0,
        xi0,
        *updated.rotation.matrix(),
        Ok(sample_composed_rotation(initial, increment, xi0)),
        default_tolerance(0),
    ));
    for n in 0..=order {
        let oracle = fd_at(|x| Ok(sample_composed_curvature(initial, increment, x)), xi0, n);
        rows.push(ReportRow::compare("kappa_f", n, xi0, *updated.kappa.row(n), oracle, default_tolerance(n)));
    }
    VerificationReport { xi: xi0, order, rows }
}

/// Cross-checks the two in-crate routes to `∂̃ⁿκ` and the operator power.
pub fn corot_route_spread(kappa: &CurvatureJet, qjet: &crate::curvature::RotationJet, order: usize) -> Result<f64> {
    let recurrence = corot_curvature_recurrence(kappa, order)?;
    let material = material_curvature_derivatives(qjet, kappa, order)?;
    let left = corot_curvature_derivatives(qjet, &material, order)?;
    let power = corot_operator_power(kappa.as_jet(), kappa, order)?;
    let mut spread: f64 = 0.0;
    for n in 1..=order {
        let a = recurrence.get(n)?;
        let b = left.get(n)?;
        let c = &power[n];
        spread = spread.max((a - b).norm()).max((a - c).norm()).max((b - c).norm());
    }
    Ok(spread)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::CurveSpec;
    use approx::assert_abs_diff_eq;

    #[test]
    fn fornberg_reproduces_classic_stencils() {
        let w = fornberg_weights(0.0, &[-1.0, 0.0, 1.0], 2);
        assert_eq!(w, vec![1.0, -2.0, 1.0]);
        let w = fornberg_weights(0.0, &[-2.0, -1.0, 0.0, 1.0, 2.0], 1);
        let expected = [1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0];
        for (a, b) in w.iter().zip(expected) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-15);
        }
    }

    #[test]
    fn stencil_widths() {
        assert_eq!(FdConfig { order: 1, step: 1.0, accuracy: 2, richardson: 0 }.half_points(), 1);
        assert_eq!(FdConfig { order: 2, step: 1.0, accuracy: 4, richardson: 0 }.half_points(), 2);
        assert_eq!(FdConfig { order: 4, step: 1.0, accuracy: 4, richardson: 0 }.half_points(), 3);
    }

    #[test]
    fn cubic_second_derivative() {
        let f = SampledField::new(|x: f64| Ok(x * x * x), 1.0, 1.0);
        let cfg = FdConfig { order: 2, step: 1e-3, accuracy: 4, richardson: 1 };
        assert_abs_diff_eq!(fd_derivative(&f, &cfg).unwrap(), 6.0, epsilon = 1e-9);
    }

    #[test]
    fn sine_fourth_derivative_at_zero() {
        let f = SampledField::new(|x: f64| Ok(x.sin()), 0.0, 1.0);
        let cfg = FdConfig { order: 4, step: 1e-2, accuracy: 4, richardson: 1 };
        assert_abs_diff_eq!(fd_derivative(&f, &cfg).unwrap(), 0.0, epsilon = 1e-4);
    }

    #[test]
    fn rotation_rate_matches_curvature() {
        let spec = CurveSpec::Poly3 {
            coeffs: [vec![0.1, 0.3], vec![0.0, 0.0, 0.2], vec![-0.2, 0.0, 0.0, 0.1]],
            domain: [-2.0, 2.0],
        };
        let xi = 0.4;
        let dq = fd_at(|x| Ok(sample_rotation(&spec, x)), xi, 1).unwrap();
        let expected = hat(&sample_curvature(&spec, xi)).matrix() * sample_rotation(&spec, xi);
        assert_abs_diff_eq!(dq, expected, epsilon = 1e-7);
    }

    #[test]
    fn stencil_range_and_config_errors() {
        let f = SampledField::new(|x: f64| Ok(x), 0.0, 1e-3);
        let err = fd_derivative(&f, &FdConfig::default_for(4)).unwrap_err();
        assert_eq!(err.kind(), "StencilOutOfRange");
        let bad = FdConfig { order: 1, step: 1e-3, accuracy: 3, richardson: 0 };
        assert_eq!(fd_derivative(&f, &bad).unwrap_err().kind(), "InvalidFdConfig");
    }

    #[test]
    fn error_scales_with_step_power() {
        // p = 2, no extrapolation: halving h quarters the error
        let f = SampledField::new(|x: f64| Ok(x.exp()), 0.3, 1.0);
        let err = |h: f64| {
            let cfg = FdConfig { order: 1, step: h, accuracy: 2, richardson: 0 };
            (fd_derivative(&f, &cfg).unwrap() - 0.3f64.exp()).abs()
        };
        let ratio = err(2e-2) / err(1e-2);
        assert!((ratio - 4.0).abs() < 0.1, "ratio {ratio}");
    }

    #[test]
    fn brute_force_pair_small_case() {
        // m = 1: [a, a''] + [a', a'] = [a, a'']
        let rows = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
        assert_eq!(brute_force_pair_derivative_i64(&rows, 1).unwrap(), [0, -1, 0]);
        assert!(brute_force_pair_derivative_i64(&rows, 2).is_err());
    }

    #[test]
    fn operator_power_first_order() {
        let v = VectorJet::new(vec![Vec3::new(1.0, 2.0, 3.0), Vec3::new(0.5, 0.0, -1.0)]).unwrap();
        let kappa = CurvatureJet::new(VectorJet::new(vec![Vec3::new(0.0, 0.0, 1.0)]).unwrap());
        let out = corot_operator_power(&v, &kappa, 1).unwrap();
        assert_eq!(out[1], v.row(1) - Vec3::z().cross(v.row(0)));
    }

    #[test]
    fn verify_fixed_axis_is_exact() {
        let spec = CurveSpec::FixedAxisPoly { axis: [0.0, 0.0, 1.0], coeffs: vec![0.0, 1.0], domain: [0.0, 1.0] };
        let report = verify_curvature(&spec, 0.5, 3);
        assert!(report.passed(), "{:?}", report.failures().collect::<Vec<_>>());
        for row in report.rows.iter().filter(|r| r.quantity == "kappa") {
            assert!(row.abs_err.unwrap() <= 1e-9);
        }
    }

    #[test]
    fn verify_reports_gimbal_row() {
        let a = std::f64::consts::PI - 1e-4;
        let spec = CurveSpec::Poly3 { coeffs: [vec![a], vec![0.0, 0.1], vec![0.0]], domain: [-1.0, 1.0] };
        let report = verify_curvature(&spec, 0.0, 2);
        assert!(!report.passed());
        assert!(report.has_domain_error());
        assert!(report.rows[0].error.as_deref().unwrap().starts_with("GimbalDomain"));
    }
}
