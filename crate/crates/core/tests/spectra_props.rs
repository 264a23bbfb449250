use proptest::prelude::*;
use spikedtrio::eigensolver::{
    assemble_wedge_operator, detect_separability, solve_radial, Grid1D, WedgeGrid,
};
use spikedtrio::osculation::{approximate_spectrum, harmonic_approximation, RadialPotential};
use spikedtrio::trigform::PotentialSpec;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn harmonic_ladder_is_affine(nu in 1f64..500.0, omega in 0.2f64..5.0) {
        let spec = PotentialSpec::calogero(omega, nu).unwrap();
        let h = harmonic_approximation(&spec).unwrap();
        let table = approximate_spectrum(&h, 4, 4, "");
        let (sr, se) = (2.0 * h.k_rho.sqrt(), 2.0 * h.k_eta.sqrt());
        for e in &table.entries {
            let predicted = table.energy(0, 0).unwrap() + sr * e.m as f64 + se * e.n as f64;
            prop_assert!((e.energy - predicted).abs() <= 1e-12 * e.energy);
        }
    }

    #[test]
    fn wedge_operator_is_bitwise_symmetric(
        nu in 0.5f64..50.0,
        n_rho in 5usize..30,
        n_phi in 5usize..30,
        rho_max in 2.0f64..10.0,
    ) {
        let spec = PotentialSpec::calogero(1.0, nu).unwrap();
        let grid = WedgeGrid::new(1e-2, rho_max, n_rho, n_phi).unwrap();
        let op = assemble_wedge_operator(&spec, &grid).unwrap();
        prop_assert!(op.matrix.is_symmetric_bitwise());
    }

    #[test]
    fn radial_levels_exceed_the_potential_minimum(nu in 0.5f64..100.0, omega in 0.3f64..3.0) {
        let v = RadialPotential::spiked_harmonic(omega, nu).unwrap();
        let g = Grid1D::new(1e-2, 8.0 * (nu + 1.0).sqrt() / omega.sqrt(), 400).unwrap();
        let floor = (0..400).map(|i| v.eval(g.r(i))).fold(f64::INFINITY, f64::min);
        let levels = solve_radial(&v, &g, 5).unwrap().values;
        prop_assert!(levels.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(levels[0] > floor);
    }

    #[test]
    fn separability_is_exactly_the_2_4_minus2_family(
        mask in 1u32..8,
        extra in prop::option::of(prop_oneof![-9i32..=-3, Just(-1), Just(1), Just(3), 5i32..=14]),
    ) {
        let family = [2, 4, -2];
        let mut terms: Vec<(i32, f64)> =
            (0..3).filter(|b| mask & (1 << b) != 0).map(|b| (family[b], 1.0)).collect();
        if let Some(m) = extra {
            terms.push((m, 0.25));
        }
        let spec = PotentialSpec::new(terms).unwrap();
        prop_assert_eq!(detect_separability(&spec).is_some(), extra.is_none());
    }
}
