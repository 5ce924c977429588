//! Analytic rotation-vector fields `ξ ↦ θ(ξ)`.
//!
//! Fields are described by coefficients so every derivative the jets need
//! is exact.

use serde::{Deserialize, Serialize};

use crate::curvature::FrameJets;
use crate::error::{Error, Result};
use crate::jets::VectorJet;
use crate::so3::Vec3;

/// A smooth rotation-vector field that can report its derivatives exactly.
pub trait RotationField {
    /// `∂ⁿθ(ξ)` for `n = 0..=order`.
    fn theta_jet(&self, xi: f64, order: usize) -> VectorJet;

    /// Unit axis when `θ(ξ) = a(ξ)·e` for a fixed `e`.
    fn fixed_axis(&self) -> Option<Vec3> {
        None
    }

    fn theta(&self, xi: f64) -> Vec3 {
        *self.theta_jet(xi, 0).row(0)
    }

    /// `(θ(ξ), ∂θ(ξ))`.
    fn theta_and_rate(&self, xi: f64) -> (Vec3, Vec3) {
        let jet = self.theta_jet(xi, 1);
        (*jet.row(0), *jet.row(1))
    }

    /// Rotation and curvature jets of order `order` at `xi`.
    fn frame_jets(&self, xi: f64, order: usize) -> Result<FrameJets> {
        let theta = self.theta_jet(xi, order + 1);
        FrameJets::from_rotation_vector(&theta, self.fixed_axis().as_ref(), order)
    }
}

fn default_omega() -> f64 {
    1.0
}

/// Preset field families, as read from JSON spec files.
///
/// * `fixed-axis-poly`: `θ(ξ) = (Σ cₖ ξᵏ)·axis`
/// * `poly3`: each component `Σ cₖ ξᵏ`
/// * `fourier3`: each component `a₀ + Σ (aₖ cos kωξ + bₖ sin kωξ)` with
///   coefficients laid out as `[a₀, a₁, b₁, a₂, b₂, …]`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CurveSpec {
    FixedAxisPoly {
        axis: [f64; 3],
        coeffs: Vec<f64>,
        domain: [f64; 2],
    },
    Poly3 {
        coeffs: [Vec<f64>; 3],
        domain: [f64; 2],
    },
    Fourier3 {
        coeffs: [Vec<f64>; 3],
        #[serde(default = "default_omega")]
        omega: f64,
        domain: [f64; 2],
    },
}

impl CurveSpec {
    /// Checks the coefficients and normalizes a fixed axis.
    pub fn validated(self) -> Result<Self> {
        let bad = |msg: &str| Err(Error::InvalidSpec(msg.to_string()));
        let domain = self.domain();
        if !(domain[0].is_finite() && domain[1].is_finite() && domain[0] <= domain[1]) {
            return bad("domain must be a finite interval [min, max]");
        }
        match self {
            CurveSpec::FixedAxisPoly { axis, coeffs, domain } => {
                let a = Vec3::from(axis);
                let len = a.norm();
                if !(len.is_finite() && len > 0.0) {
                    return bad("axis must be a non-zero finite vector");
                }
                check_coeffs(std::slice::from_ref(&coeffs))?;
                let unit = a / len;
                Ok(CurveSpec::FixedAxisPoly { axis: [unit.x, unit.y, unit.z], coeffs, domain })
            }
            CurveSpec::Poly3 { ref coeffs, .. } => {
                check_coeffs(coeffs)?;
                Ok(self)
            }
            CurveSpec::Fourier3 { ref coeffs, omega, .. } => {
                check_coeffs(coeffs)?;
                if !(omega.is_finite() && omega > 0.0) {
                    return bad("omega must be positive");
                }
                Ok(self)
            }
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CurveSpec::FixedAxisPoly { .. } => "fixed-axis-poly",
            CurveSpec::Poly3 { .. } => "poly3",
            CurveSpec::Fourier3 { .. } => "fourier3",
        }
    }

    pub fn domain(&self) -> [f64; 2] {
        match self {
            CurveSpec::FixedAxisPoly { domain, .. }
            | CurveSpec::Poly3 { domain, .. }
            | CurveSpec::Fourier3 { domain, .. } => *domain,
        }
    }

    pub fn contains(&self, xi: f64) -> bool {
        let [lo, hi] = self.domain();
        xi >= lo && xi <= hi
    }

    pub fn check_point(&self, xi: f64) -> Result<()> {
        if !self.contains(xi) {
            let [lo, hi] = self.domain();
            return Err(Error::InvalidSpec(format!("xi = {xi} lies outside the domain [{lo}, {hi}]")));
        }
        Ok(())
    }

    /// The field `θ ≡ 0`.
    pub fn zero(domain: [f64; 2]) -> Self {
        CurveSpec::Poly3 { coeffs: [vec![0.0], vec![0.0], vec![0.0]], domain }
    }
}

fn check_coeffs(lists: &[Vec<f64>]) -> Result<()> {
    for list in lists {
        if list.is_empty() {
            return Err(Error::InvalidSpec("coefficient lists must be non-empty".into()));
        }
        if list.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidSpec("coefficients must be finite".into()));
        }
    }
    Ok(())
}

/// `∂ⁿ Σ cₖ ξᵏ`.
pub fn poly_derivative(coeffs: &[f64], xi: f64, n: usize) -> f64 {
    let mut acc = 0.0;
    // Horner over the differentiated coefficients k!/(k-n)! cₖ
    for k in (n..coeffs.len()).rev() {
        let falling: f64 = ((k - n + 1)..=k).map(|j| j as f64).product();
        acc = acc * xi + coeffs[k] * falling;
    }
    acc
}

/// `∂ⁿ [a₀ + Σ (aₖ cos kωξ + bₖ sin kωξ)]`.
pub fn fourier_derivative(coeffs: &[f64], omega: f64, xi: f64, n: usize) -> f64 {
    let mut acc = if n == 0 { coeffs[0] } else { 0.0 };
    for (k, pair) in coeffs[1..].chunks(2).enumerate() {
        let w = (k + 1) as f64 * omega;
        let a = pair[0];
        let b = pair.get(1).copied().unwrap_or(0.0);
        let (s, c) = (w * xi).sin_cos();
        // derivatives of (cos, sin) cycle with period 4
        let (dc, ds) = match n % 4 {
            0 => (c, s),
            1 => (-s, c),
            2 => (-c, -s),
            _ => (s, -c),
        };
        acc += w.powi(n as i32) * (a * dc + b * ds);
    }
    acc
}

impl RotationField for CurveSpec {
    fn theta_jet(&self, xi: f64, order: usize) -> VectorJet {
        let rows = (0..=order)
            .map(|n| match self {
                CurveSpec::FixedAxisPoly { axis, coeffs, .. } => {
                    Vec3::from(*axis) * poly_derivative(coeffs, xi, n)
                }
                CurveSpec::Poly3 { coeffs, .. } => Vec3::new(
                    poly_derivative(&coeffs[0], xi, n),
                    poly_derivative(&coeffs[1], xi, n),
                    poly_derivative(&coeffs[2], xi, n),
                ),
                CurveSpec::Fourier3 { coeffs, omega, .. } => Vec3::new(
                    fourier_derivative(&coeffs[0], *omega, xi, n),
                    fourier_derivative(&coeffs[1], *omega, xi, n),
                    fourier_derivative(&coeffs[2], *omega, xi, n),
                ),
            })
            .collect();
        VectorJet::new(rows).expect("analytic field evaluates to finite values")
    }

    /// Identically zero fields count as fixed-axis so they stay admissible.
    fn fixed_axis(&self) -> Option<Vec3> {
        match self {
            CurveSpec::FixedAxisPoly { axis, .. } => Some(Vec3::from(*axis).normalize()),
            CurveSpec::Poly3 { coeffs, .. } | CurveSpec::Fourier3 { coeffs, .. }
                if coeffs.iter().flatten().all(|c| *c == 0.0) =>
            {
                Some(Vec3::z())
            }
            _ => None,
        }
    }
}
