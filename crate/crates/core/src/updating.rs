//! Eulerian update of a curvature field.
//!
//! An incremental rotation `Q₊ = exp(Δα̂)` applied on the left of an initial
//! field gives `Q_f = Q₊·Q_i` and `κ̂_f = κ̂₊ + T_{Q₊}[κ̂_i]`, where
//! `T_Q[Â] = Q·Â·Qᵀ`. Derivatives of the transported term obey
//! `∂T_Q[Â] = T_Q[∂Â] + [κ̂₊, T_Q[Â]]`, which unrolls into a double sum over
//! lower-order transports; those are tabulated once and reused.

use crate::curvature::{CurvatureJet, FrameJets};
use crate::error::{Error, Result};
use crate::jets::{choose, VectorJet};
use crate::so3::{lie_bracket, Rotation, Skew3, Vec3};

/// `T_Q[Â] = Q·Â·Qᵀ`.
pub fn transport(q: &Rotation, a: &Skew3) -> Skew3 {
    let q = q.matrix();
    Skew3::antisymmetrize(&(q * a.matrix() * q.transpose()))
}

/// Triangular table of `∂ⁿ T_{Q₊}[∂ᵏ⁻¹Â]` for `n ≥ 0`, `k ≥ 1`, `n + k ≤ N + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransportTable {
    order: usize,
    // entries[n][k - 1]
    entries: Vec<Vec<Skew3>>,
}

impl TransportTable {
    /// Updating order `N` the table was built for.
    pub fn order(&self) -> usize {
        self.order
    }

    /// `∂ⁿ T_{Q₊}[∂ᵏ⁻¹Â]`, if inside the triangle.
    pub fn get(&self, n: usize, k: usize) -> Option<&Skew3> {
        if k == 0 {
            return None;
        }
        self.entries.get(n)?.get(k - 1)
    }

    /// Number of populated entries in row `n`.
    pub fn row_len(&self, n: usize) -> usize {
        self.entries.get(n).map_or(0, Vec::len)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Skew3)> {
        self.entries
            .iter()
            .enumerate()
            .flat_map(|(n, row)| row.iter().enumerate().map(move |(k, s)| (n, k + 1, s)))
    }
}

/// Fills the transport table for a skew field `Â` given `∂ᵐÂ`, `m = 0..=N`.
pub fn transport_derivatives(
    q_plus: &Rotation,
    kappa_plus: &CurvatureJet,
    a: &[Skew3],
    order: usize,
) -> Result<TransportTable> {
    if a.len() < order + 1 {
        return Err(Error::InsufficientOrder { needed: order, available: a.len().saturating_sub(1) });
    }
    if order > 0 && kappa_plus.order() + 1 < order {
        return Err(Error::InsufficientOrder { needed: order - 1, available: kappa_plus.order() });
    }
    let kappa_hats = kappa_plus.hats();
    let mut entries: Vec<Vec<Skew3>> = Vec::with_capacity(order + 1);
    for n in 0..=order {
        let row = (1..=order + 1 - n)
            .map(|k| {
                let mut acc = transport(q_plus, &a[n + k - 1]);
                for kk in 1..=n {
                    for i in 0..=n - kk {
                        let lower = &entries[n - kk - i][k + kk - 2];
                        acc += lie_bracket(&kappa_hats[i], lower) * choose(n - kk, i);
                    }
                }
                acc
            })
            .collect();
        entries.push(row);
    }
    Ok(TransportTable { order, entries })
}

/// `∂ⁿκ_f = ∂ⁿκ₊ + axial(∂ⁿT_{Q₊}[κ̂_i])` for `n = 0..=order`.
pub fn update_curvature(
    kappa_plus: &CurvatureJet,
    q_plus: &Rotation,
    kappa_i: &CurvatureJet,
    order: usize,
) -> Result<CurvatureJet> {
    let available = kappa_plus.order().min(kappa_i.order());
    if available < order {
        return Err(Error::InsufficientOrder { needed: order, available });
    }
    let table = transport_derivatives(q_plus, kappa_plus, &kappa_i.hats(), order)?;
    let rows = (0..=order)
        .map(|n| kappa_plus.row(n) + table.get(n, 1).expect("first column is full").axial())
        .collect();
    Ok(CurvatureJet::new(VectorJet::new(rows)?))
}

/// `Q_f = Q₊·Q_i`.
pub fn compose(q_plus: &Rotation, q_i: &Rotation) -> Result<Rotation> {
    Rotation::new(q_plus.matrix() * q_i.matrix())
}

/// Final frame of an Eulerian update.
#[derive(Debug, Clone, PartialEq)]
pub struct UpdatedFrame {
    pub rotation: Rotation,
    pub kappa: CurvatureJet,
}

/// Runs the full update from an initial frame and the increment's frame jets.
pub fn update_frame(initial: &FrameJets, increment: &FrameJets, order: usize) -> Result<UpdatedFrame> {
    let kappa = update_curvature(&increment.kappa, &increment.rotation, &initial.kappa, order)?;
    let rotation = compose(&increment.rotation, &initial.rotation)?;
    Ok(UpdatedFrame { rotation, kappa })
}

/// `Q·a` equals the axial vector of `T_Q[â]`.
pub fn transport_axial(q: &Rotation, a: &Vec3) -> Vec3 {
    q.matrix() * a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::so3::{exp_so3, hat, log_so3};
    use approx::assert_abs_diff_eq;

    fn frame(theta: Vec<Vec3>, order: usize) -> FrameJets {
        FrameJets::from_rotation_vector(&VectorJet::new(theta).unwrap(), None, order).unwrap()
    }

    fn initial() -> FrameJets {
        frame(
            vec![
                Vec3::new(0.5, 0.1, -0.4),
                Vec3::new(0.2, -0.3, 0.1),
                Vec3::new(0.1, 0.2, 0.3),
                Vec3::new(-0.2, 0.05, 0.0),
                Vec3::new(0.03, 0.1, -0.1),
            ],
            3,
        )
    }

    fn increment() -> FrameJets {
        frame(
            vec![
                Vec3::new(-0.2, 0.3, 0.25),
                Vec3::new(0.1, 0.1, -0.2),
                Vec3::new(0.0, -0.15, 0.05),
                Vec3::new(0.1, 0.0, 0.02),
                Vec3::new(-0.04, 0.02, 0.0),
            ],
            3,
        )
    }

    #[test]
    fn transport_basics() {
        let a = hat(&Vec3::new(0.3, -0.2, 0.9));
        assert_eq!(transport(&Rotation::identity(), &a), a);
        let theta = Vec3::new(0.4, 0.5, -0.6);
        let own = transport(&exp_so3(&theta), &hat(&theta));
        assert_abs_diff_eq!(own.into_matrix(), hat(&theta).into_matrix(), epsilon = 1e-15);
        let q = exp_so3(&Vec3::new(-0.7, 0.2, 0.1));
        let v = Vec3::new(1.0, 2.0, 3.0);
        assert_abs_diff_eq!(transport(&q, &hat(&v)).axial(), transport_axial(&q, &v), epsilon = 1e-14);
    }

    #[test]
    fn transport_maps_material_to_spatial_curvature() {
        let f = initial();
        let kbar = f.rotation.matrix().transpose() * f.kappa.row(0);
        let spatial = transport(&f.rotation, &hat(&kbar));
        assert_abs_diff_eq!(spatial.axial(), *f.kappa.row(0), epsilon = 1e-15);
        let back = transport(&f.rotation.transpose(), &f.kappa.hat(0));
        assert_abs_diff_eq!(back.axial(), kbar, epsilon = 1e-15);
    }

    #[test]
    fn table_shape_and_first_entries() {
        let inc = increment();
        let a = initial().kappa.hats();
        let table = transport_derivatives(&inc.rotation, &inc.kappa, &a, 3).unwrap();
        assert_eq!((0..=3).map(|n| table.row_len(n)).collect::<Vec<_>>(), vec![4, 3, 2, 1]);
        assert!(table.get(0, 0).is_none());
        assert!(table.get(1, 4).is_none());
        for k in 1..=4 {
            assert_eq!(*table.get(0, k).unwrap(), transport(&inc.rotation, &a[k - 1]));
        }
        let expected = transport(&inc.rotation, &a[1]) + lie_bracket(&inc.kappa.hat(0), &transport(&inc.rotation, &a[0]));
        assert_abs_diff_eq!(table.get(1, 1).unwrap().into_matrix(), expected.into_matrix(), epsilon = 1e-15);
        for (_, _, s) in table.entries() {
            let m = s.into_matrix();
            assert_eq!(m + m.transpose(), crate::so3::Mat3::zeros());
        }
    }

    #[test]
    fn zero_increment_is_identity() {
        let init = initial();
        let zero = CurvatureJet::zeros(3);
        let updated = update_curvature(&zero, &Rotation::identity(), &init.kappa, 3).unwrap();
        assert_eq!(updated, init.kappa);
    }

    #[test]
    fn trivial_initial_field_returns_increment() {
        let inc = increment();
        let updated = update_curvature(&inc.kappa, &inc.rotation, &CurvatureJet::zeros(3), 3).unwrap();
        assert_eq!(updated, inc.kappa);
    }

    #[test]
    fn compose_commuting_rotations() {
        let e = Vec3::new(1.0, 1.0, 0.0).normalize();
        let q = compose(&exp_so3(&(e * 0.3)), &exp_so3(&(e * 0.5))).unwrap();
        assert_abs_diff_eq!(log_so3(&q).unwrap(), e * 0.8, epsilon = 1e-15);
        let r = exp_so3(&Vec3::new(0.1, 0.2, 0.3));
        assert_eq!(compose(&Rotation::identity(), &r).unwrap(), r);
    }

    #[test]
    fn order_checks() {
        let inc = increment();
        let a = initial().kappa.hats();
        assert!(transport_derivatives(&inc.rotation, &inc.kappa, &a[..2], 3).is_err());
        assert!(update_curvature(&inc.kappa, &inc.rotation, &initial().kappa.truncate(2), 3).is_err());
    }
}
