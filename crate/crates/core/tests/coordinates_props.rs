use proptest::prelude::*;
use spikedtrio::coordinates::*;
use std::f64::consts::FRAC_PI_3;

fn wedge_point() -> impl Strategy<Value = PolarConfig> {
    (0.01f64..50.0, 1e-6f64..FRAC_PI_3 - 1e-6).prop_map(|(rho, phi)| PolarConfig::new(rho, phi))
}

#[test]
fn jacobi_matrices_are_orthogonal_transposes() {
    let m = jacobi_matrix();
    let inv = inverse_jacobi_matrix();
    for i in 0..3 {
        for j in 0..3 {
            assert_eq!(m[i][j], inv[j][i]);
            let dot: f64 = (0..3).map(|k| m[i][k] * m[j][k]).sum();
            let expected = if i == j { 1.0 } else { 0.0 };
            assert!((dot - expected).abs() <= 1e-15, "rows {i},{j}: {dot}");
        }
    }
}

proptest! {
    #[test]
    fn pair_differences_telescope(p in wedge_point()) {
        let (a, b, c) = pair_differences(p);
        prop_assert!((a + b + c).abs() <= 1e-14 * p.rho.max(1.0));
    }

    #[test]
    fn closed_sines_match_matrix_composition(p in wedge_point()) {
        let (a, b, c) = pair_differences(p);
        for (k, d) in [a, b, c].into_iter().enumerate() {
            prop_assert!((pair_difference_closed(p, k) - d).abs() <= 1e-13 * p.rho.max(1.0));
        }
    }

    #[test]
    fn product_of_differences_keeps_its_sign_inside_the_wedge(p in wedge_point()) {
        let (a, b, c) = pair_differences(p);
        prop_assert!(a * b * (-c) > 0.0);
    }

    #[test]
    fn particle_round_trip(x1 in -100f64..100.0, x2 in -100f64..100.0, x3 in -100f64..100.0) {
        let back = from_jacobi(to_jacobi(ParticleConfig::new(x1, x2, x3)));
        for (u, v) in [(back.x1, x1), (back.x2, x2), (back.x3, x3)] {
            prop_assert!((u - v).abs() <= 1e-13 * (1.0 + v.abs()));
        }
    }

    #[test]
    fn ordered_particles_map_into_the_wedge(
        x3 in -10f64..10.0,
        gap1 in 1e-3f64..5.0,
        gap2 in 1e-3f64..5.0,
    ) {
        let config = ParticleConfig::new(x3 + gap1 + gap2, x3 + gap2, x3);
        let j = to_jacobi(config);
        prop_assert!(PolarConfig::from_cartesian(j.x, j.y).in_wedge());
    }

    #[test]
    fn polar_map_round_trip(p in wedge_point()) {
        let (x, y) = polar_map(p);
        let back = PolarConfig::from_cartesian(x, y);
        prop_assert!((back.rho - p.rho).abs() <= 1e-14 * p.rho);
        prop_assert!((back.phi - p.phi).abs() <= 1e-13);
    }
}
