use std::sync::Arc;

use dlab_core::estimator::{
    quotient_sweep, strichartz_quotient, DataFamily, FamilyKind, PacketSum, QuotientSettings, QuotientSpec,
};
use dlab_core::exponents::{rat, Exponent};
use dlab_core::grid::{CartesianGrid, Field, PolarField, PolarGrid};
use dlab_core::mixed_norms::{angular_transform, time_norm};
use dlab_core::propagator::{GaussianParams, Propagator};
use dlab_core::Complex64;

fn triangle_point() -> QuotientSpec {
    QuotientSpec::new(3, Exponent::integer(3).unwrap(), "7/2".parse().unwrap(), rat(1, 2), false).unwrap()
}

#[test]
fn gaussian_quotient_settles_as_the_window_doubles() {
    let f = PacketSum::gaussian(GaussianParams::centered(3, 0.5).unwrap());
    let mut short = QuotientSettings::new(8.0, 0.0625);
    short.radial_count = 48;
    short.l_max = 2;
    let long = QuotientSettings { horizon: 16.0, ..short.clone() };
    let q8 = strichartz_quotient(&f, &triangle_point(), &short).unwrap();
    let q16 = strichartz_quotient(&f, &triangle_point(), &long).unwrap();
    assert!(q16 >= q8);
    assert!(q16 / q8 - 1.0 < 0.03, "{q8} -> {q16}");
    // Closed form: the slice norm is c (1 + 4t^2)^{-1/2}.
    let want = ((32f64).atan() / (16f64).atan()).sqrt();
    assert!((q16 / q8 / want - 1.0).abs() < 1e-4, "{} vs {want}", q16 / q8);
}

#[test]
fn packet_sums_agree_with_the_spectral_propagator() {
    let fam = DataFamily::new(2, FamilyKind::RandomBandlimited { band_limit: 1.0f64, packets: 3 }, 2, 21).unwrap();
    let f = fam.member(1).unwrap();
    let grid = CartesianGrid::new(2, 128, 16.0).unwrap();
    let u0 = Field::from_fn(grid, |x| f.eval(x, 0.0));
    let u = Propagator::new(grid).evolve(&u0, 0.75);
    let exact = Field::from_fn(grid, |x| f.eval(x, 0.75));
    assert!(u.l2_distance(&exact) < 1e-9 * exact.l2_norm());
    assert!((u0.l2_norm() - 1.0).abs() < 1e-9);
}

#[test]
fn sweeps_are_deterministic_and_bounded_by_their_max() {
    let fam = DataFamily::new(3, FamilyKind::RandomBandlimited { band_limit: 1.0f64, packets: 2 }, 6, 2).unwrap();
    let mut settings = QuotientSettings::new(2.0, 0.25);
    settings.radial_count = 24;
    settings.l_max = 6;
    let a = quotient_sweep(&fam, &triangle_point(), &settings).unwrap();
    let b = quotient_sweep(&fam, &triangle_point(), &settings).unwrap();
    assert_eq!(a, b);
    assert!(a.values.iter().all(|&v| v <= a.max && v > 0.0));
    assert_eq!(a.values[a.argmax], a.max);
}

#[test]
fn inadmissible_points_need_the_probe_flag() {
    let err = QuotientSpec::new(3, Exponent::integer(8).unwrap(), Exponent::integer(8).unwrap(), rat(1, 2), false)
        .unwrap_err();
    assert!(err.to_string().contains("not admissible"), "{err}");
}

/// `|| Lambda^{1/2} |x|^{-1} e^{it Delta} f ||_{L_t^2 L_x^2([0,T])}` for `n = 3`.
fn smoothing_norm(f: &PacketSum<f64>, horizon: f64, dt: f64) -> f64 {
    let template = PolarGrid::builder(3, 1.0).radial_count(40).l_max(12).weight_exponent(2.0).build().unwrap();
    let steps = (horizon / dt).round() as usize;
    let slices: Vec<f64> = (0..=steps)
        .map(|i| {
            let t = dt * i as f64;
            let grid = Arc::new(template.rescaled(f.support_radius(t).max(1.0)).unwrap());
            let field = PolarField::from_fn(grid.clone(), |x| f.eval(x, t));
            let spectrum = angular_transform(&field, 12).unwrap().lambda_power(0.5);
            (0..grid.radial_len())
                .map(|j| grid.radial_weights()[j] * spectrum.row_energy(j))
                .sum::<f64>()
                .sqrt()
        })
        .collect();
    time_norm(&slices, dt, 2.0).unwrap()
}

#[test]
fn angular_smoothing_quotient_is_bounded_and_monotone_in_the_window() {
    let fam = DataFamily::new(3, FamilyKind::RandomBandlimited { band_limit: 1.0f64, packets: 3 }, 50, 8).unwrap();
    let mut worst = 0.0f64;
    for i in 0..50 {
        let f = fam.member(i).unwrap();
        let q4 = smoothing_norm(&f, 4.0, 0.25);
        let q8 = smoothing_norm(&f, 8.0, 0.25);
        assert!(q8 >= q4 - 1e-12);
        worst = worst.max(q8);
    }
    assert!(worst.is_finite() && worst < 10.0, "{worst}");
}

#[test]
fn quotient_is_invariant_under_unimodular_factors() {
    let fam = DataFamily::new(3, FamilyKind::RandomBandlimited { band_limit: 1.0f64, packets: 2 }, 1, 4).unwrap();
    let f = fam.member(0).unwrap();
    let mut settings = QuotientSettings::new(1.0, 0.25);
    settings.l_max = 6;
    let base = strichartz_quotient(&f, &triangle_point(), &settings).unwrap();
    for phase in [0.3, 1.7, -2.9] {
        let g = f.scaled(Complex64::from_polar(1.0, phase));
        let q = strichartz_quotient(&g, &triangle_point(), &settings).unwrap();
        assert!((q / base - 1.0).abs() < 1e-8);
    }
}
