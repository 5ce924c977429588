use curvjet::corotational::{corot_skew, corot_vector};
use curvjet::curvature::FrameJets;
use curvjet::field::poly_derivative;
use curvjet::jets::{
    binom, gibbs_jets, jet_cos2_half, jet_mul, jet_recip, jet_sin_cos, jet_sqrt, jet_tan_half, ScalarJet, VectorJet,
};
use curvjet::so3::{exp_so3, hat, lie_bracket, log_so3, unhat, Mat3, Vec3};
use curvjet::updating::transport_derivatives;
use proptest::prelude::*;

fn vec3(range: f64) -> impl Strategy<Value = Vec3> {
    prop::array::uniform3(-range..range).prop_map(Vec3::from)
}

fn jet_rows(order: usize, range: f64) -> impl Strategy<Value = Vec<Vec3>> {
    prop::collection::vec(vec3(range), order + 1)
}

/// A rotation-vector jet whose angle stays inside the Gibbs domain.
fn theta_jet(order: usize) -> impl Strategy<Value = VectorJet> {
    (vec3(1.0), 0.05..2.9f64, jet_rows(order, 0.8)).prop_map(|(dir, angle, mut rows)| {
        let dir = if dir.norm() < 1e-3 { Vec3::x() } else { dir.normalize() };
        rows[0] = dir * angle;
        VectorJet::new(rows).unwrap()
    })
}

fn int_poly() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec((-4i32..=4).prop_map(f64::from), 1..6)
}

fn poly_jet(coeffs: &[f64], xi: f64, order: usize) -> ScalarJet {
    ScalarJet::new((0..=order).map(|n| poly_derivative(coeffs, xi, n)).collect()).unwrap()
}

fn poly_product(p: &[f64], q: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        for (j, b) in q.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

proptest! {
    #[test]
    fn hat_unhat_exact(v in vec3(100.0)) {
        let m = *hat(&v).matrix();
        prop_assert_eq!(unhat(&m).unwrap(), v);
        prop_assert_eq!(m + m.transpose(), Mat3::zeros());
    }

    #[test]
    fn bracket_is_cross_of_axials(a in vec3(1.0), b in vec3(1.0), w in vec3(1.0)) {
        let lhs = lie_bracket(&hat(&a), &hat(&b)) * w;
        prop_assert!((lhs - a.cross(&b).cross(&w)).norm() <= 1e-13);
    }

    #[test]
    fn exp_is_a_rotation_and_log_inverts_it(dir in vec3(1.0), angle in 0.0..std::f64::consts::PI - 1e-3) {
        prop_assume!(dir.norm() > 1e-3);
        let theta = dir.normalize() * angle;
        let q = exp_so3(&theta);
        prop_assert!((q.matrix().transpose() * q.matrix() - Mat3::identity()).amax() <= 1e-12);
        prop_assert!((q.matrix().determinant() - 1.0).abs() <= 1e-12);
        prop_assert!((log_so3(&q).unwrap() - theta).norm() <= 1e-8);
    }

    #[test]
    fn jet_product_of_integer_polynomials_is_exact(p in int_poly(), q in int_poly(), xi in -2i32..=2) {
        let xi = f64::from(xi);
        let order = 6;
        let product = jet_mul(&poly_jet(&p, xi, order), &poly_jet(&q, xi, order)).unwrap();
        prop_assert_eq!(product, poly_jet(&poly_product(&p, &q), xi, order));
    }

    #[test]
    fn jet_ops_commute_with_truncation(coeffs in prop::collection::vec(-1.0..1.0f64, 7), keep in 0usize..6) {
        let mut c = coeffs;
        c[0] = 0.5 + c[0].abs();
        let f = ScalarJet::new(c).unwrap();
        let g = f.truncate(keep);
        prop_assert_eq!(jet_sqrt(&f).unwrap().truncate(keep), jet_sqrt(&g).unwrap());
        prop_assert_eq!(jet_recip(&f).unwrap().truncate(keep), jet_recip(&g).unwrap());
        prop_assert_eq!(jet_tan_half(&f).unwrap().truncate(keep), jet_tan_half(&g).unwrap());
        prop_assert_eq!(jet_cos2_half(&f).truncate(keep), jet_cos2_half(&g));
        let (s, c) = jet_sin_cos(&f);
        let (sg, cg) = jet_sin_cos(&g);
        prop_assert_eq!((s.truncate(keep), c.truncate(keep)), (sg, cg));
        prop_assert_eq!(jet_mul(&f, &f).unwrap().truncate(keep), jet_mul(&g, &g).unwrap());
    }

    #[test]
    fn gibbs_vector_reconstructs_rotation_vector(theta in theta_jet(3)) {
        let gibbs = gibbs_jets(&theta, None).unwrap();
        let phi = gibbs.phi.row(0);
        let back = phi * (2.0 * phi.norm().atan() / phi.norm());
        prop_assert!((back - theta.row(0)).norm() <= 1e-12);
        let pair = gibbs.phi_bar.get(0) * (phi.norm_squared() + 1.0);
        prop_assert!((pair - 2.0).abs() <= 1e-12);
    }

    #[test]
    fn rotation_jet_stays_orthogonal(theta in theta_jet(5)) {
        let frame = FrameJets::from_rotation_vector(&theta, None, 4).unwrap();
        let qjet = frame.rotation_jet();
        let (q0, q1) = (qjet.row(0), qjet.row(1));
        prop_assert!((q0.transpose() * q0 - Mat3::identity()).amax() <= 1e-12);
        prop_assert!((q1.transpose() * q0 + q0.transpose() * q1).amax() <= 1e-11);
        // ∂Q = κ̂Q
        prop_assert!((q1 - frame.kappa.hat(0).matrix() * q0).amax() <= 1e-12);
    }

    #[test]
    fn corotational_derivative_commutes_with_hat(theta in theta_jet(5), v in jet_rows(4, 1.0)) {
        let frame = FrameJets::from_rotation_vector(&theta, None, 4).unwrap();
        let jet = VectorJet::new(v.clone()).unwrap();
        let hats: Vec<_> = v.iter().map(hat).collect();
        for n in 0..=4 {
            let as_vector = corot_vector(&jet, &frame.kappa, n).unwrap();
            let as_skew = corot_skew(&hats, &frame.kappa, n).unwrap().axial();
            prop_assert!((as_vector - as_skew).norm() <= 1e-12 * (1.0 + as_vector.norm()));
        }
    }

    #[test]
    fn corotational_derivative_differentiates_frame_components(theta in theta_jet(5), bar in jet_rows(4, 1.0)) {
        // v = Q v̄ so its components in the director frame are v̄
        let frame = FrameJets::from_rotation_vector(&theta, None, 4).unwrap();
        let qjet = frame.rotation_jet();
        let v: Vec<Vec3> = (0..=4)
            .map(|n| (0..=n).fold(Vec3::zeros(), |acc, k| acc + qjet.row(k) * bar[n - k] * binom(n, k).unwrap() as f64))
            .collect();
        let v = VectorJet::new(v).unwrap();
        for n in 0..=4 {
            let expected = qjet.row(0) * bar[n];
            let got = corot_vector(&v, &frame.kappa, n).unwrap();
            prop_assert!((got - expected).norm() <= 1e-10 * (1.0 + expected.norm()));
        }
    }

    #[test]
    fn transport_entries_are_skew(theta in theta_jet(4), a in jet_rows(3, 2.0)) {
        let frame = FrameJets::from_rotation_vector(&theta, None, 3).unwrap();
        let hats: Vec<_> = a.iter().map(hat).collect();
        let table = transport_derivatives(&frame.rotation, &frame.kappa, &hats, 3).unwrap();
        for (_, _, entry) in table.entries() {
            let m = entry.matrix();
            prop_assert!((m + m.transpose()).amax() <= 1e-12);
        }
    }
}
