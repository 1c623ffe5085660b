use proptest::prelude::*;

use wavelab::characteristics::{
    breaking_time, characteristic_jacobian, characteristic_position, characteristic_speed, riemann_shift, simple_wave,
    simple_wave_velocity, ElevationProfile,
};
use wavelab::{Error, PhysicalParams};

fn params(omega: f64) -> PhysicalParams {
    PhysicalParams::normalized(omega, 0.0).unwrap()
}

proptest! {
    #[test]
    fn characteristics_do_not_cross_before_breaking(
        a in 0.02..0.3f64,
        width in 0.5..3.0f64,
        omega in -3.0..3.0f64,
        frac in 0.0..0.98f64,
    ) {
        let profile = ElevationProfile::gaussian(a, 0.0, width).unwrap();
        let p = params(omega);
        let report = breaking_time(&profile, &p).unwrap();
        prop_assert!(report.breaks);
        let t = frac * report.t_star;
        let labels: Vec<f64> = (0..400).map(|i| -6.0 * width + 12.0 * width * i as f64 / 399.0).collect();
        let xs: Vec<f64> = labels.iter().map(|&s| characteristic_position(s, t, &profile, &p).unwrap()).collect();
        prop_assert!(xs.windows(2).all(|w| w[1] > w[0]));
        prop_assert!(labels.iter().all(|&s| characteristic_jacobian(s, t, &profile, &p) > 0.0));
    }

    #[test]
    fn label_inverts_the_characteristic_map(
        a in -0.3..0.3f64,
        omega in -2.0..2.0f64,
        s in -4.0..4.0f64,
        frac in 0.0..0.9f64,
    ) {
        prop_assume!(a.abs() > 1e-3);
        let profile = ElevationProfile::gaussian(a, 0.0, 1.0).unwrap();
        let p = params(omega);
        let field = simple_wave(&profile, &p).unwrap();
        let t = frac * field.breaking().t_star.min(20.0);
        let x = characteristic_position(s, t, &profile, &p).unwrap();
        let back = field.label(x, t).unwrap();
        prop_assert!((back - s).abs() <= 1e-9 * (1.0 + s.abs()));
    }

    #[test]
    fn riemann_shift_is_antisymmetric_and_additive(
        h1 in 0.3..2.0f64,
        h2 in 0.3..2.0f64,
        omega in -4.0..4.0f64,
    ) {
        let p = params(omega);
        let (d12, m12) = riemann_shift(h1, h2, &p).unwrap();
        let (d21, _) = riemann_shift(h2, h1, &p).unwrap();
        let (d1, _) = riemann_shift(h1, 1.0, &p).unwrap();
        let (d2, _) = riemann_shift(h2, 1.0, &p).unwrap();
        prop_assert_eq!(m12, -d12);
        prop_assert!((d12 + d21).abs() < 1e-13);
        prop_assert!((d12 - (d1 - d2)).abs() < 1e-12);
    }
}

#[test]
fn breaking_time_is_the_reciprocal_compression_rate() {
    let profile = ElevationProfile::cosine_bump(0.2, 0.0, 3.0).unwrap();
    for omega in [0.0, 1.0, -1.0] {
        let report = breaking_time(&profile, &params(omega)).unwrap();
        assert!((report.t_star * report.slope_factor - 1.0).abs() < 1e-12);
        // The compressive side of a right-moving hump is its front.
        assert!(report.s_star > 0.0);
    }
}

#[test]
fn flat_state_is_at_rest() {
    for omega in [-2.0, 0.0, 3.0] {
        let p = params(omega);
        assert_eq!(simple_wave_velocity(1.0, &p).unwrap(), 0.0);
        let lam = characteristic_speed(1.0, &p).unwrap();
        let expected = 0.5 * omega + (1.0 + 0.25 * omega * omega).sqrt();
        assert!((lam - expected).abs() < 1e-14);
    }
}

#[test]
fn evaluation_past_breaking_is_refused() {
    let profile = ElevationProfile::gaussian(0.1, 0.0, 1.0).unwrap();
    let field = simple_wave(&profile, &params(0.0)).unwrap();
    let t_star = field.breaking().t_star;
    assert!(field.eval(0.5, 0.5 * t_star).is_ok());
    assert!(matches!(
        field.eval(0.5, 1.01 * t_star),
        Err(Error::MultivaluedSolution { .. })
    ));
    assert!(field.eval(0.5, -1.0).is_err());
}

#[test]
fn depression_waves_break_at_the_back() {
    let profile = ElevationProfile::gaussian(-0.1, 0.0, 1.5).unwrap();
    let report = breaking_time(&profile, &params(0.0)).unwrap();
    assert!(report.breaks && report.s_star < 0.0);
}

#[test]
fn invalid_profiles_are_rejected() {
    assert!(ElevationProfile::gaussian(0.1, 0.0, 0.0).is_err());
    assert!(ElevationProfile::tanh_front(f64::NAN, 0.0, 1.0).is_err());
    let dry = ElevationProfile::gaussian(-1.5, 0.0, 1.0).unwrap();
    assert!(breaking_time(&dry, &params(0.0)).is_err());
}
