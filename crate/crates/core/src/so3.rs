//! SO(3) and so(3) primitives: hat/unhat, the Lie bracket, the exponential
//! and logarithm maps, and the tangent map relating rotation-vector rates to
//! curvature.
//!
//! All coefficient functions of the form `sin(t)/t` switch to a truncated
//! Taylor series below [`SMALL_ANGLE`].

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};

/// Axial vectors, rotation vectors and curvature vectors.
pub type Vec3 = Vector3<f64>;
/// Plain 3x3 matrices (tensors that need not be skew or orthogonal).
pub type Mat3 = Matrix3<f64>;

/// Below this angle the trigonometric coefficients use their series form.
pub const SMALL_ANGLE: f64 = 1e-4;
/// Largest asymmetry `max |M + Mᵀ|` accepted when building a [`Skew3`].
pub const SKEW_TOL: f64 = 1e-12;
/// Orthogonality and determinant tolerance for [`Rotation`].
pub const ROTATION_TOL: f64 = 1e-12;
/// The logarithm map refuses angles above `π - LOG_PI_MARGIN`.
pub const LOG_PI_MARGIN: f64 = 1e-6;
/// The inverse tangent map refuses angles above `2π - TANGENT_INV_MARGIN`.
pub const TANGENT_INV_MARGIN: f64 = 1e-3;

/// An element of so(3), stored as a full 3x3 matrix.
///
/// Every constructor guarantees `M + Mᵀ = 0` exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Skew3(Mat3);

impl Skew3 {
    pub fn zero() -> Self {
        Skew3(Mat3::zeros())
    }

    /// Validates that `m` is skew-symmetric and returns it unchanged.
    pub fn from_matrix(m: Mat3) -> Result<Self> {
        let asymmetry = (m + m.transpose()).amax();
        if !asymmetry.is_finite() || asymmetry > SKEW_TOL {
            return Err(Error::NotSkew { asymmetry });
        }
        Ok(Skew3::antisymmetrize(&m))
    }

    /// The skew part `(M - Mᵀ)/2`. Exactly skew in floating point.
    pub fn antisymmetrize(m: &Mat3) -> Self {
        Skew3((m - m.transpose()) * 0.5)
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.0
    }

    pub fn into_matrix(self) -> Mat3 {
        self.0
    }

    /// The axial vector `v` with `self · w = v × w`.
    pub fn axial(&self) -> Vec3 {
        Vec3::new(self.0[(2, 1)], self.0[(0, 2)], self.0[(1, 0)])
    }

    /// `[A, B] = A·B - B·A`.
    pub fn bracket(&self, other: &Skew3) -> Skew3 {
        lie_bracket(self, other)
    }
}

impl Add for Skew3 {
    type Output = Skew3;
    fn add(self, rhs: Skew3) -> Skew3 {
        Skew3(self.0 + rhs.0)
    }
}

impl AddAssign for Skew3 {
    fn add_assign(&mut self, rhs: Skew3) {
        self.0 += rhs.0;
    }
}

impl Sub for Skew3 {
    type Output = Skew3;
    fn sub(self, rhs: Skew3) -> Skew3 {
        Skew3(self.0 - rhs.0)
    }
}

impl Neg for Skew3 {
    type Output = Skew3;
    fn neg(self) -> Skew3 {
        Skew3(-self.0)
    }
}

impl Mul<f64> for Skew3 {
    type Output = Skew3;
    fn mul(self, rhs: f64) -> Skew3 {
        Skew3(self.0 * rhs)
    }
}

impl Mul<Vec3> for Skew3 {
    type Output = Vec3;
    fn mul(self, rhs: Vec3) -> Vec3 {
        self.0 * rhs
    }
}

/// A proper orthogonal matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation(Mat3);

impl Rotation {
    pub fn identity() -> Self {
        Rotation(Mat3::identity())
    }

    /// Accepts `q` if `‖qᵀq - I‖_F ≤ 1e-12` and `|det q - 1| ≤ 1e-12`.
    pub fn new(q: Mat3) -> Result<Self> {
        let orthogonality = (q.transpose() * q - Mat3::identity()).norm();
        let det = q.determinant();
        if !(orthogonality <= ROTATION_TOL && (det - 1.0).abs() <= ROTATION_TOL) {
            return Err(Error::NotRotation { orthogonality, det });
        }
        Ok(Rotation(q))
    }

    pub(crate) fn new_unchecked(q: Mat3) -> Self {
        Rotation(q)
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.0
    }

    pub fn transpose(&self) -> Rotation {
        Rotation(self.0.transpose())
    }

    /// Director `d_m = Q·E_m` (zero-based column index).
    pub fn director(&self, m: usize) -> Vec3 {
        self.0.column(m).into_owned()
    }
}

/// `T_θ` or `T_θ⁻¹`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentMap(Mat3);

impl TangentMap {
    pub fn matrix(&self) -> &Mat3 {
        &self.0
    }

    pub fn apply(&self, v: &Vec3) -> Vec3 {
        self.0 * v
    }
}

pub fn hat(v: &Vec3) -> Skew3 {
    Skew3(Mat3::new(
        0.0, -v.z, v.y, //
        v.z, 0.0, -v.x, //
        -v.y, v.x, 0.0,
    ))
}

/// Axial vector of a skew matrix; rejects input whose asymmetry exceeds 1e-12.
pub fn unhat(m: &Mat3) -> Result<Vec3> {
    Skew3::from_matrix(*m).map(|s| s.axial())
}

pub fn lie_bracket(a: &Skew3, b: &Skew3) -> Skew3 {
    let ab = a.0 * b.0;
    let ba = b.0 * a.0;
    Skew3::antisymmetrize(&(ab - ba))
}

/// `(sin t / t, (1 - cos t)/t², (t - sin t)/t³)`.
fn rodrigues_coefficients(t: f64) -> (f64, f64, f64) {
    if t < SMALL_ANGLE {
        let t2 = t * t;
        let t4 = t2 * t2;
        (
            1.0 - t2 / 6.0 + t4 / 120.0,
            0.5 - t2 / 24.0 + t4 / 720.0,
            1.0 / 6.0 - t2 / 120.0 + t4 / 5040.0,
        )
    } else {
        let (s, c) = t.sin_cos();
        (s / t, (1.0 - c) / (t * t), (t - s) / (t * t * t))
    }
}

/// Rodrigues formula `I + (sin t/t) θ̂ + ((1 - cos t)/t²) θ̂²`.
pub fn exp_so3(theta: &Vec3) -> Rotation {
    let (a, b, _) = rodrigues_coefficients(theta.norm());
    let th = hat(theta).0;
    Rotation(Mat3::identity() + th * a + th * th * b)
}

fn rotation_angle(q: &Mat3) -> f64 {
    let half_skew = Skew3::antisymmetrize(q).axial();
    let cos = 0.5 * (q.trace() - 1.0);
    half_skew.norm().atan2(cos)
}

/// Inverse of [`exp_so3`] on angles in `[0, π - 1e-6]`.
pub fn log_so3(q: &Rotation) -> Result<Vec3> {
    let angle = rotation_angle(&q.0);
    if angle > std::f64::consts::PI - LOG_PI_MARGIN {
        return Err(Error::NearPiRotation { angle });
    }
    let factor = if angle < SMALL_ANGLE {
        0.5 + angle * angle / 12.0
    } else {
        angle / (2.0 * angle.sin())
    };
    Ok(Skew3::antisymmetrize(&(q.0 - q.0.transpose())).axial() * factor)
}

/// Rotation angle `sqrt(-½ tr(θ̂·θ̂))` of `log(Q)`.
pub fn log_norm(q: &Rotation) -> Result<f64> {
    let th = hat(&log_so3(q)?).0;
    Ok((-0.5 * (th * th).trace()).max(0.0).sqrt())
}

/// `T_θ` with `κ = T_θ · ∂θ`.
pub fn tangent_map(theta: &Vec3) -> TangentMap {
    let (a, b, c) = rodrigues_coefficients(theta.norm());
    TangentMap(Mat3::identity() * a + hat(theta).0 * b + theta * theta.transpose() * c)
}

/// `T_θ⁻¹` with `∂θ = T_θ⁻¹ · κ`; singular as `|θ| → 2π`.
pub fn tangent_map_inv(theta: &Vec3) -> Result<TangentMap> {
    let t = theta.norm();
    if t >= 2.0 * std::f64::consts::PI - TANGENT_INV_MARGIN {
        return Err(Error::TangentMapSingular { angle: t });
    }
    // g = (t/2)/tan(t/2), h = (1 - g)/t²
    let (g, h) = if t < SMALL_ANGLE {
        let t2 = t * t;
        (
            1.0 - t2 / 12.0 - t2 * t2 / 720.0,
            1.0 / 12.0 + t2 / 720.0 + t2 * t2 / 30240.0,
        )
    } else {
        let g = 0.5 * t / (0.5 * t).tan();
        (g, (1.0 - g) / (t * t))
    };
    Ok(TangentMap(
        Mat3::identity() * g - hat(theta).0 * 0.5 + theta * theta.transpose() * h,
    ))
}
