//! Spatial curvature and its arc-length derivatives in closed form.
//!
//! The curvature of a Gibbs-parametrized frame is
//! `κ = φ̄ (∂φ + φ × ∂φ)`. Differentiating it `n` times with the Leibniz
//! rule produces brackets `[∂ʲφ̂, ∂ᵐ⁻ʲ⁺¹φ̂]` in antisymmetric pairs; folding
//! each pair leaves `jmax(m) + 1` terms weighted by `bcoef(m, j)`.

use crate::error::{Error, Result};
use crate::jets::{binom, choose, gibbs_jets, GibbsJets, ScalarJet, VectorJet};
use crate::so3::{hat, lie_bracket, Mat3, Rotation, Skew3, Vec3};

/// Highest curvature derivative order supported by the closed forms.
pub const MAX_ORDER: usize = 8;

/// Tolerance on `φ̄ (|φ|² + 1) = 2` for a Gibbs pair.
pub const GIBBS_PAIR_TOL: f64 = 1e-10;

/// Largest `j` kept after folding antisymmetric bracket pairs.
pub fn jmax(m: usize) -> usize {
    m / 2
}

/// `b(m, j) = C(m, j) - C(m, m - j + 1)`, with `C(m, m + 1) = 0`.
pub fn bcoef(m: usize, j: usize) -> Result<i64> {
    if j > jmax(m) {
        return Err(Error::IndexError { n: m, i: j, max: jmax(m) });
    }
    let upper = m - j + 1;
    let mirrored = if upper > m { 0 } else { binom(m, upper)? as i64 };
    Ok(binom(m, j)? as i64 - mirrored)
}

/// `jmax(n - i)` laid out by row `n = 0..=max_n` and column `i = 0..=n`.
pub fn jmax_table(max_n: usize) -> Vec<Vec<usize>> {
    (0..=max_n).map(|n| (0..=n).map(|i| jmax(n - i)).collect()).collect()
}

/// `[bcoef(m, 0), …, bcoef(m, jmax(m))]`.
pub fn bcoef_row(m: usize) -> Result<Vec<i64>> {
    (0..=jmax(m)).map(|j| bcoef(m, j)).collect()
}

fn bcoef_f64(m: usize, j: usize) -> f64 {
    let upper = m - j + 1;
    let mirrored = if upper > m { 0.0 } else { choose(m, upper) };
    choose(m, j) - mirrored
}

fn require_order(needed: usize, available: usize) -> Result<()> {
    if available < needed {
        return Err(Error::InsufficientOrder { needed, available });
    }
    Ok(())
}

fn require_supported(order: usize) -> Result<()> {
    if order > MAX_ORDER {
        return Err(Error::OrderTooLarge { order, max: MAX_ORDER });
    }
    Ok(())
}

/// `∂ᵐ[â, ∂â]` in folded form.
pub fn skew_pair_derivative(a: &VectorJet, m: usize) -> Result<Skew3> {
    require_order(m + 1, a.order())?;
    let mut acc = Skew3::zero();
    for j in 0..=jmax(m) {
        let term = lie_bracket(&hat(a.row(j)), &hat(a.row(m - j + 1)));
        acc += term * bcoef_f64(m, j);
    }
    Ok(acc)
}

/// Axial form of [`skew_pair_derivative`].
fn cross_pair_derivative(a: &VectorJet, m: usize) -> Vec3 {
    (0..=jmax(m)).fold(Vec3::zeros(), |acc, j| {
        acc + a.row(j).cross(a.row(m - j + 1)) * bcoef_f64(m, j)
    })
}

/// Spatial curvature `κ` and its derivatives up to a fixed order.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureJet {
    rows: VectorJet,
}

impl CurvatureJet {
    pub fn new(rows: VectorJet) -> Self {
        CurvatureJet { rows }
    }

    pub fn zeros(order: usize) -> Self {
        CurvatureJet { rows: VectorJet::zeros(order) }
    }

    pub fn order(&self) -> usize {
        self.rows.order()
    }

    pub fn row(&self, n: usize) -> &Vec3 {
        self.rows.row(n)
    }

    pub fn rows(&self) -> &[Vec3] {
        self.rows.rows()
    }

    pub fn hat(&self, n: usize) -> Skew3 {
        hat(self.rows.row(n))
    }

    pub fn hats(&self) -> Vec<Skew3> {
        self.rows.rows().iter().map(hat).collect()
    }

    pub fn as_jet(&self) -> &VectorJet {
        &self.rows
    }

    pub fn truncate(&self, order: usize) -> CurvatureJet {
        CurvatureJet { rows: self.rows.truncate(order) }
    }
}

/// `Q` and its derivatives `∂ⁿQ`.
#[derive(Debug, Clone, PartialEq)]
pub struct RotationJet {
    rows: Vec<Mat3>,
}

impl RotationJet {
    pub fn order(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn rotation(&self) -> Rotation {
        Rotation::new_unchecked(self.rows[0])
    }

    pub fn row(&self, n: usize) -> &Mat3 {
        &self.rows[n]
    }

    pub fn rows(&self) -> &[Mat3] {
        &self.rows
    }

    /// `∂ⁿd_m` for `n = 0..=order` (zero-based director index).
    pub fn director_derivatives(&self, m: usize) -> Vec<Vec3> {
        self.rows.iter().map(|q| q.column(m).into_owned()).collect()
    }
}

/// `κ = φ̄ (∂φ + φ × ∂φ)` and its hat.
pub fn curvature_from_gibbs(phi: &VectorJet, phi_bar: &ScalarJet) -> Result<(Vec3, Skew3)> {
    require_order(1, phi.order().min(phi_bar.order()))?;
    let p0 = phi.row(0);
    let p1 = phi.row(1);
    let kappa = (p1 + p0.cross(p1)) * phi_bar.get(0);
    Ok((kappa, hat(&kappa)))
}

/// `∂ⁿκ` for `n = 0..=order` from Gibbs jets of order `order + 1`.
pub fn curvature_derivatives(
    phi: &VectorJet,
    phi_bar: &ScalarJet,
    order: usize,
) -> Result<CurvatureJet> {
    require_supported(order)?;
    require_order(order + 1, phi.order())?;
    require_order(order + 1, phi_bar.order())?;
    let rows = (0..=order)
        .map(|n| {
            (0..=n).fold(Vec3::zeros(), |acc, i| {
                let m = n - i;
                let inner = phi.row(m + 1) + cross_pair_derivative(phi, m);
                acc + inner * (choose(n, i) * phi_bar.get(i))
            })
        })
        .collect();
    Ok(CurvatureJet { rows: VectorJet::new(rows)? })
}

/// `Q = I + φ̄ (φ̂ + φ̂²)`.
pub fn rotation_from_gibbs(phi: &Vec3, phi_bar: f64) -> Result<Rotation> {
    let product = phi_bar * (phi.norm_squared() + 1.0);
    if !((product - 2.0).abs() <= GIBBS_PAIR_TOL) {
        return Err(Error::InconsistentGibbs { product });
    }
    let p = *hat(phi).matrix();
    Ok(Rotation::new_unchecked(Mat3::identity() + (p + p * p) * phi_bar))
}

/// `∂ⁿQ = Σ_{i<n} C(n-1, i) ∂ⁱκ̂ ∂ⁿ⁻¹⁻ⁱQ`, for `n = 0..=order`.
pub fn rotation_derivatives(q: &Rotation, kappa: &CurvatureJet, order: usize) -> Result<RotationJet> {
    if order > 0 {
        require_order(order - 1, kappa.order())?;
    }
    let hats = kappa.hats();
    let mut rows: Vec<Mat3> = Vec::with_capacity(order + 1);
    rows.push(*q.matrix());
    for n in 1..=order {
        let next = (0..n).fold(Mat3::zeros(), |acc, i| {
            acc + hats[i].matrix() * rows[n - 1 - i] * choose(n - 1, i)
        });
        rows.push(next);
    }
    Ok(RotationJet { rows })
}

/// Rotation and curvature jets of a frame given by a rotation-vector jet.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameJets {
    pub rotation: Rotation,
    pub kappa: CurvatureJet,
    pub gibbs: GibbsJets,
}

impl FrameJets {
    /// `theta` must carry `order + 1` derivatives.
    pub fn from_rotation_vector(
        theta: &VectorJet,
        fixed_axis: Option<&Vec3>,
        order: usize,
    ) -> Result<Self> {
        require_supported(order)?;
        require_order(order + 1, theta.order())?;
        let gibbs = gibbs_jets(&theta.truncate(order + 1), fixed_axis)?;
        let rotation = rotation_from_gibbs(gibbs.phi.row(0), gibbs.phi_bar.get(0))?;
        let kappa = curvature_derivatives(&gibbs.phi, &gibbs.phi_bar, order)?;
        Ok(FrameJets { rotation, kappa, gibbs })
    }

    pub fn order(&self) -> usize {
        self.kappa.order()
    }

    pub fn rotation_jet(&self) -> RotationJet {
        rotation_derivatives(&self.rotation, &self.kappa, self.order())
            .expect("curvature jet covers its own order")
    }
}
