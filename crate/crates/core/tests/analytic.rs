use ising_dos::analytic::*;
use ising_dos::curve::Grid;
use ising_dos::fermion::enumerate_spectrum;
use ising_dos::quadrature::integrate;
use ising_dos::IsingParams;
use proptest::prelude::*;
use std::f64::consts::LN_2;

#[test]
fn infinite_temperature_point() {
    let s = solve_saddle(0.0, 0.6).unwrap();
    assert_eq!(s.beta_sp, 0.0);
    assert!(s.entropy.abs() < 1e-14);
    assert!((s.curvature - (1.0 + 0.36)).abs() < 1e-12);
}

#[test]
fn saddle_density_is_normalized_at_large_n() {
    for lambda in [0.5, 1.0, 1.8] {
        let p = IsingParams::transverse(200, lambda).unwrap();
        let bound = ground_state_energy_per_spin(lambda).abs();
        let grid = Grid::new(-bound, bound, 1601).unwrap();
        let c = saddle_curve(&p, &grid).unwrap();
        assert!((c.integral() - 1.0).abs() < 5e-3, "lambda={lambda}: {}", c.integral());
    }
}

#[test]
fn ground_state_bounds_the_finite_spectrum() {
    for lambda in [0.4, 1.0, 2.0] {
        let n = 16;
        let s = enumerate_spectrum(n, lambda).unwrap();
        let bulk = n as f64 * ground_state_energy_per_spin(lambda);
        assert!((s.energies()[0] - bulk).abs() < 0.05 * bulk.abs());
    }
}

#[test]
fn out_of_support_is_reported() {
    let bound = ground_state_energy_per_spin(1.0);
    assert!(matches!(solve_saddle(bound, 1.0), Err(ising_dos::Error::OutOfSupport { .. })));
    let p = IsingParams::two_field(8, 1.0, 0.5).unwrap();
    assert!(saddle_density(0.0, &p).is_err());
    assert!(tail_density_critical(-1e3, 8).is_err());
}

#[test]
fn cubic_correction_keeps_unit_weight_and_zero_mean() {
    let p = IsingParams::two_field(10, 1.0, 1.0).unwrap();
    let g = TwoFieldGaussian::new(&p, true);
    let w = integrate(|x| g.density_eps(x), -12.0, 12.0);
    let m = integrate(|x| x * g.density_eps(x), -12.0, 12.0);
    let m3 = integrate(|x| x.powi(3) * g.density_eps(x), -12.0, 12.0) * g.scale().powi(3);
    assert!((w - 1.0).abs() < 1e-12);
    assert!(m.abs() < 1e-12);
    // The correction reproduces the exact third moment per state.
    assert!((m3 - (-6.0 * 10.0)).abs() < 1e-9);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn saddle_inverts_canonical_energy(lambda in 0.1f64..2.5, frac in -0.95f64..0.95) {
        let e = frac * ground_state_energy_per_spin(lambda).abs();
        let s = solve_saddle(e, lambda).unwrap();
        prop_assert!((canonical_energy(s.beta_sp, lambda) - e).abs() < 1e-10);
        prop_assert!(s.entropy <= 1e-14);
        prop_assert!(s.entropy >= -LN_2 - 1e-12);
        prop_assert!(s.curvature > 0.0);
        // Positive temperature below the centre.
        prop_assert!(e == 0.0 || (s.beta_sp > 0.0) == (e < 0.0));
    }

    #[test]
    fn saddle_density_is_even(lambda in 0.1f64..2.5, frac in 0.0f64..0.9) {
        let p = IsingParams::transverse(40, lambda).unwrap();
        let e = frac * ground_state_energy_per_spin(lambda).abs();
        let a = saddle_density(e, &p).unwrap();
        let b = saddle_density(-e, &p).unwrap();
        prop_assert!((a - b).abs() <= 1e-9 * a.max(1e-300));
    }
}
