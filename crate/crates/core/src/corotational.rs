//! Co-rotational derivatives and material curvature.
//!
//! The co-rotational derivative `∂̃` measures the rate of change of the
//! components of a spatial quantity in the moving director frame. For a
//! vector it obeys `∂̃v = ∂v - κ × v`; higher orders follow the recurrence
//! `∂̃ⁿv = ∂ⁿv - Σ_{i=1..n} ∂ⁱ⁻¹(κ × ∂̃ⁿ⁻ⁱv)`, evaluated here on jets so
//! that each `∂̃ᵏv` is available together with its own derivatives.

use std::ops::{Add, Sub};

use crate::curvature::{CurvatureJet, RotationJet};
use crate::error::{Error, Result};
use crate::jets::{choose, VectorJet};
use crate::so3::{hat, lie_bracket, Mat3, Skew3, Vec3};

/// Quantities that the curvature acts on infinitesimally.
pub trait Corotating: Copy + Add<Output = Self> + Sub<Output = Self> {
    fn zero() -> Self;
    fn scale(self, factor: f64) -> Self;
    /// `κ × v`, `[κ̂, A]` or `κ̂·B - B·κ̂`.
    fn spin(kappa: &Vec3, x: &Self) -> Self;
}

impl Corotating for Vec3 {
    fn zero() -> Self {
        Vec3::zeros()
    }
    fn scale(self, factor: f64) -> Self {
        self * factor
    }
    fn spin(kappa: &Vec3, x: &Self) -> Self {
        kappa.cross(x)
    }
}

impl Corotating for Skew3 {
    fn zero() -> Self {
        Skew3::zero()
    }
    fn scale(self, factor: f64) -> Self {
        self * factor
    }
    fn spin(kappa: &Vec3, x: &Self) -> Self {
        lie_bracket(&hat(kappa), x)
    }
}

impl Corotating for Mat3 {
    fn zero() -> Self {
        Mat3::zeros()
    }
    fn scale(self, factor: f64) -> Self {
        self * factor
    }
    fn spin(kappa: &Vec3, x: &Self) -> Self {
        let k = hat(kappa).into_matrix();
        k * x - x * k
    }
}

/// `stack[k][r] = ∂ʳ ∂̃ᵏ x` for `k + r ≤ order`.
///
/// With `drop_self_term` the `i = k` summand `∂ᵏ⁻¹(κ × ∂̃⁰x)` is omitted;
/// this is only valid when `x` is the curvature itself, for which that
/// summand vanishes identically.
fn corot_stack<T: Corotating>(
    derivs: &[T],
    kappa: &CurvatureJet,
    order: usize,
    drop_self_term: bool,
) -> Result<Vec<Vec<T>>> {
    if derivs.len() < order + 1 {
        return Err(Error::InsufficientOrder { needed: order, available: derivs.len().saturating_sub(1) });
    }
    if order > 0 && kappa.order() + 1 < order {
        return Err(Error::InsufficientOrder { needed: order - 1, available: kappa.order() });
    }
    let mut stack: Vec<Vec<T>> = Vec::with_capacity(order + 1);
    stack.push(derivs[..=order].to_vec());
    for k in 1..=order {
        let last_i = if drop_self_term { k - 1 } else { k };
        let rows = (0..=order - k)
            .map(|r| {
                let mut acc = derivs[k + r];
                for i in 1..=last_i {
                    let d = i - 1 + r;
                    let lower = &stack[k - i];
                    for j in 0..=d {
                        acc = acc - T::spin(kappa.row(j), &lower[d - j]).scale(choose(d, j));
                    }
                }
                acc
            })
            .collect();
        stack.push(rows);
    }
    Ok(stack)
}

/// `∂̃ᵏx` for `k = 0..=order` given `∂ⁿx` for `n = 0..=order`.
pub fn corot_derivatives<T: Corotating>(
    derivs: &[T],
    kappa: &CurvatureJet,
    order: usize,
) -> Result<Vec<T>> {
    Ok(corot_stack(derivs, kappa, order, false)?.into_iter().map(|rows| rows[0]).collect())
}

/// `∂̃ⁿv` of a vector field.
pub fn corot_vector(v: &VectorJet, kappa: &CurvatureJet, n: usize) -> Result<Vec3> {
    Ok(corot_derivatives(v.rows(), kappa, n)?[n])
}

/// `∂̃ⁿÂ` of a skew field given `∂ᵏÂ`, `k = 0..=n`.
pub fn corot_skew(a: &[Skew3], kappa: &CurvatureJet, n: usize) -> Result<Skew3> {
    Ok(corot_derivatives(a, kappa, n)?[n])
}

/// `∂̃ⁿB` of a general tensor field given `∂ᵏB`, `k = 0..=n`.
pub fn corot_tensor(b: &[Mat3], kappa: &CurvatureJet, n: usize) -> Result<Mat3> {
    Ok(corot_derivatives(b, kappa, n)?[n])
}

/// `∂̃ⁿv = Q ∂ⁿ(Qᵀ v)`: left translation of the material derivative.
pub fn corot_vector_left_translation(v: &VectorJet, qjet: &RotationJet, n: usize) -> Result<Vec3> {
    let available = v.order().min(qjet.order());
    if available < n {
        return Err(Error::InsufficientOrder { needed: n, available });
    }
    let material = (0..=n).fold(Vec3::zeros(), |acc, i| {
        acc + qjet.row(i).transpose() * v.row(n - i) * choose(n, i)
    });
    Ok(qjet.row(0) * material)
}

/// `∂ⁿκ̄` for `n = 0..=order`, with `κ̄ = Qᵀκ`.
#[derive(Debug, Clone, PartialEq)]
pub struct MaterialCurvatureJet {
    rows: Vec<Vec3>,
}

impl MaterialCurvatureJet {
    pub fn order(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn row(&self, n: usize) -> &Vec3 {
        &self.rows[n]
    }

    pub fn rows(&self) -> &[Vec3] {
        &self.rows
    }
}

/// `∂̃ⁿκ` for `n = 1..=order`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorotationalJet {
    rows: Vec<Vec3>,
}

impl CorotationalJet {
    pub fn order(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, n: usize) -> Result<&Vec3> {
        if n == 0 {
            return Err(Error::ZeroCorotationalOrder);
        }
        self.rows
            .get(n - 1)
            .ok_or(Error::InsufficientOrder { needed: n, available: self.rows.len() })
    }

    /// Rows for `n = 1..=order`, in order.
    pub fn rows(&self) -> &[Vec3] {
        &self.rows
    }
}

pub fn material_curvature_derivatives(
    qjet: &RotationJet,
    kappa: &CurvatureJet,
    order: usize,
) -> Result<MaterialCurvatureJet> {
    let available = qjet.order().min(kappa.order());
    if available < order {
        return Err(Error::InsufficientOrder { needed: order, available });
    }
    let rows = (0..=order)
        .map(|n| {
            (0..=n).fold(Vec3::zeros(), |acc, i| {
                acc + qjet.row(i).transpose() * kappa.row(n - i) * choose(n, i)
            })
        })
        .collect();
    Ok(MaterialCurvatureJet { rows })
}

/// `∂̃ⁿκ = Q ∂ⁿκ̄` for `n = 1..=order`.
pub fn corot_curvature_derivatives(
    qjet: &RotationJet,
    material: &MaterialCurvatureJet,
    order: usize,
) -> Result<CorotationalJet> {
    if order == 0 {
        return Err(Error::ZeroCorotationalOrder);
    }
    if material.order() < order {
        return Err(Error::InsufficientOrder { needed: order, available: material.order() });
    }
    let q = qjet.row(0);
    let rows = (1..=order).map(|n| q * material.row(n)).collect();
    Ok(CorotationalJet { rows })
}

/// `∂̃ⁿκ` for `n = 1..=order` by the curvature recurrence
/// `∂̃ⁿκ = ∂ⁿκ - Σ_{i=1..n-1} ∂ⁱ⁻¹(κ × ∂̃ⁿ⁻ⁱκ)`.
///
/// The `i = n` summand `∂ⁿ⁻¹(κ × κ)` is dropped structurally, so
/// `∂̃¹κ = ∂κ` holds bit-for-bit.
pub fn corot_curvature_recurrence(kappa: &CurvatureJet, order: usize) -> Result<CorotationalJet> {
    if order == 0 {
        return Err(Error::ZeroCorotationalOrder);
    }
    let stack = corot_stack(kappa.rows(), kappa, order, true)?;
    Ok(CorotationalJet { rows: stack[1..].iter().map(|rows| rows[0]).collect() })
}
