use proptest::prelude::*;

use quadric_core::hypersurface::{HypersurfaceData, HypersurfaceRecord};
use quadric_core::linalg::{sym_eigen, AmbientVector, Operator};
use quadric_core::models::{
    paired_curvature, radius_from_alpha, random_hopf, tube_alpha, TubeModel,
};
use quadric_core::report::to_json_string;
use quadric_core::tangent::TangentModel;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn vec_of(dim: usize) -> impl Strategy<Value = AmbientVector> {
    prop::collection::vec(-1.0f64..1.0, dim).prop_map(AmbientVector::from_vec)
}

fn model_and_vectors(count: usize) -> impl Strategy<Value = (TangentModel, Vec<AmbientVector>)> {
    (3usize..=6).prop_flat_map(move |m| {
        prop::collection::vec(vec_of(2 * m), count)
            .prop_map(move |vs| (TangentModel::new(m).unwrap(), vs))
    })
}

proptest! {
    #[test]
    fn first_bianchi((t, v) in model_and_vectors(3)) {
        let (x, y, z) = (&v[0], &v[1], &v[2]);
        let b = t.ambient_curvature(x, y, z) + t.ambient_curvature(y, z, x) + t.ambient_curvature(z, x, y);
        prop_assert!(b.norm() < 1e-12);
    }

    #[test]
    fn curvature_pair_symmetries((t, v) in model_and_vectors(4)) {
        let (x, y, z, w) = (&v[0], &v[1], &v[2], &v[3]);
        let rxyzw = t.ambient_curvature(x, y, z).dot(w);
        prop_assert!((rxyzw + t.ambient_curvature(y, x, z).dot(w)).abs() < 1e-12);
        prop_assert!((rxyzw + t.ambient_curvature(x, y, w).dot(z)).abs() < 1e-12);
        prop_assert!((rxyzw - t.ambient_curvature(z, w, x).dot(y)).abs() < 1e-12);
    }

    #[test]
    fn jacobi_is_self_adjoint((t, v) in model_and_vectors(3)) {
        prop_assume!(v[0].norm() > 1e-3);
        let u = v[0].normalize();
        let r = t.ambient_jacobi(&u).unwrap();
        let lhs = (&r * &v[1]).dot(&v[2]);
        let rhs = v[1].dot(&(&r * &v[2]));
        prop_assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn canonical_angle_in_range((t, v) in model_and_vectors(1), theta in 0.0f64..6.3) {
        prop_assume!(v[0].norm() > 1e-3);
        let u = v[0].normalize();
        let c = t.canonical_angle(&u).unwrap();
        prop_assert!(c.t >= 0.0 && c.t <= std::f64::consts::FRAC_PI_4 + 1e-15);
        let c2 = t.canonical_angle_wrt(&t.rotate_conjugation(theta), &u).unwrap();
        prop_assert!((c.t - c2.t).abs() < 1e-12);
    }

    #[test]
    fn jacobi_trace_is_2m_at_singular_vectors(m in 3usize..=8) {
        let t = TangentModel::new(m).unwrap();
        let p = t.ambient_jacobi(&t.z(1)).unwrap();
        let iso = (t.z(1) + t.jz(2)) * std::f64::consts::FRAC_1_SQRT_2;
        let i = t.ambient_jacobi(&iso).unwrap();
        prop_assert!((p.trace() - 2.0 * m as f64).abs() < 1e-12);
        prop_assert!((i.trace() - 2.0 * m as f64).abs() < 1e-12);
    }

    #[test]
    fn eigen_reconstruction(entries in prop::collection::vec(-2.0f64..2.0, 36)) {
        let g = Operator::from_vec(6, 6, entries);
        let a = (&g + g.transpose()) * 0.5;
        let rep = sym_eigen(&a, 1e-12).unwrap();
        prop_assert!(rep.residual < 1e-10);
        prop_assert!(rep.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        let q = &rep.eigenvectors;
        prop_assert!((q.transpose() * q - Operator::identity(6, 6)).norm() < 1e-10);
        prop_assert!((rep.eigenvalues.iter().sum::<f64>() - a.trace()).abs() < 1e-10);
    }

    #[test]
    fn radius_recovery(r in 0.01f64..1.56) {
        prop_assume!((r - std::f64::consts::FRAC_PI_4).abs() > 1e-6);
        prop_assert!((radius_from_alpha(tube_alpha(r)) - r).abs() < 1e-12);
    }

    #[test]
    fn pairing_is_involution(alpha in -4.0f64..4.0, lambda in -4.0f64..4.0) {
        prop_assume!((2.0 * lambda - alpha).abs() > 0.1);
        let mu = paired_curvature(alpha, lambda);
        prop_assume!((2.0 * mu - alpha).abs() > 0.1);
        prop_assert!((paired_curvature(alpha, mu) - lambda).abs() < 1e-9 * (1.0 + lambda.abs()));
    }

    #[test]
    fn record_round_trip(seed in 0u64..1000, m in 3usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_hopf(m, &mut rng).unwrap();
        let text = to_json_string(&h.to_record());
        let rec: HypersurfaceRecord = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(&rec, &h.to_record());
        let back = HypersurfaceData::from_record(&rec).unwrap();
        prop_assert_eq!(back.shape(), h.shape());
        prop_assert_eq!(back.alpha(), h.alpha());
    }

    #[test]
    fn tube_structure_jacobi_commutes_with_phi(k in 2usize..=4, r in 0.05f64..1.5) {
        prop_assume!((r - std::f64::consts::FRAC_PI_4).abs() > 0.02);
        let t = TubeModel::build(k, r).unwrap();
        let h = t.data();
        let rx = h.structure_jacobi();
        let c = (h.phi() * &rx - &rx * h.phi()).amax();
        prop_assert!(c < 1e-10 * (1.0 + r.tan().powi(2) + r.tan().powi(-2)));
    }
}
