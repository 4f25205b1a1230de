//! Acceptance suite. Runs serially and prints one PASS/FAIL line per
//! criterion; exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use dlab_core::estimator::{
    eccentricity_trend, resolution_trend, DataFamily, FamilyKind, QuotientSettings, QuotientSpec,
};
use dlab_core::exponents::{
    beta, endpoint_inv_r, k_range, rat, region_vertices, Exponent,
};
use dlab_core::grid::{random_bandlimited_field, CartesianGrid, Field, PolarField, PolarGrid, RadialLayout};
use dlab_core::inls::{
    mass_drift, picard_solve, scaling_check, scattering_diagnostic, splitstep_solve, sup_distance,
    Coupling, INLSProblem, SolverConfig,
};
use dlab_core::mixed_norms::{embedding_sweep, mixed_norm};
use dlab_core::propagator::{decay_experiment, decay_fit, GaussianParams, Propagator};
use dlab_core::whitney::{decay_slope_experiment, whitney_decompose, BilinearDecaySpec};
use dlab_core::{Complex64, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn within(elapsed: Duration, limit: u64) -> bool {
    elapsed <= Duration::from_secs(limit)
}

fn e(p: i64) -> Exponent<i64> {
    Exponent::integer(p).unwrap()
}

fn c1_unitarity() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for dim in [2usize, 3] {
        let grid = CartesianGrid::new(dim, 128, 10.0).unwrap();
        let prop = Propagator::new(grid);
        for seed in 0..50u64 {
            let f = random_bandlimited_field(grid, 0.5, seed).unwrap();
            let spectrum = prop.spectrum(&f);
            let mass: f64 = f.l2_norm();
            for t in [0.1, 1.0, 5.0] {
                let u = prop.evolve_spectrum(&spectrum, t);
                worst = worst.max((u.l2_norm() / mass - 1.0).abs());
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        worst <= 1e-10 && within(elapsed, 30),
        format!("max |ratio - 1| = {worst:.3e}, {:.1} s", elapsed.as_secs_f64()),
    )
}

fn c2_gaussian_oracle() -> Outcome {
    let grid = CartesianGrid::new(2, 256, 12.0).unwrap();
    let params = GaussianParams::centered(2, 0.5).unwrap();
    let u = Propagator::new(grid).evolve(&params.sample(grid), 0.5);
    let exact = params.sample_at(grid, 0.5);
    let err = u.l2_distance(&exact) / exact.l2_norm();
    outcome(err <= 1e-6, format!("relative L2 error {err:.3e}"))
}

fn c3_decay_rate() -> Outcome {
    let params = GaussianParams::centered(3, 0.5).unwrap();
    let (a, b, gamma) = (Rational::from_integer(2), Rational::from_integer(2), Rational::new(1, 2));
    let times: Vec<f64> = (0..=12).map(|i| 4.0 * 2f64.powf(i as f64 / 4.0)).collect();
    let radius = params.support_radius(32.0) * 1.01;
    let polar = Arc::new(PolarGrid::new(3, radius, 64, 2, 1.0).unwrap());
    let samples = decay_experiment(&params, a, b, gamma, &times, &polar).unwrap();
    let fit = decay_fit(&samples).unwrap();
    outcome(
        (fit.slope + 0.5).abs() <= 0.05 && fit.r_squared >= 0.999,
        format!("slope {:.4}, R^2 {:.6}", fit.slope, fit.r_squared),
    )
}

fn c4_region_arithmetic() -> Outcome {
    let v = region_vertices::<i64>(3).unwrap();
    let vertices = v.a.inv_r == rat(1, 6)
        && v.a.inv_k == rat(1, 6)
        && v.d.inv_r == rat(1, 2)
        && v.d.inv_k == rat(1, 2)
        && v.e.inv_r == rat(1, 2)
        && v.e.inv_k == rat(1, 4);
    let range = k_range::<i64>(3, &rat(1, 1), &rat(1, 2));
    let ends = range.lo == rat(1, 4) && range.hi == rat(1, 2);
    outcome(
        vertices && ends,
        format!(
            "A=({}, {}), D=({}, {}), E=({}, {}), 1/k in [{}, {}]",
            v.a.inv_r, v.a.inv_k, v.d.inv_r, v.d.inv_k, v.e.inv_r, v.e.inv_k, range.lo, range.hi
        ),
    )
}

fn c5_beta_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut failures = Vec::new();
    for _ in 0..20 {
        let n: u32 = rng.gen_range(3..=12);
        let q: i64 = rng.gen_range(1..=12);
        let gamma = rat::<i64>(rng.gen_range(0..=q), q);
        let r = Exponent::from_recip(endpoint_inv_r(n, &gamma)).unwrap();
        let b = beta(&r, &r, n, &gamma);
        if b != Rational::from_integer(0) {
            failures.push(format!("(n={n}, gamma={gamma}) -> {b}"));
        }
    }
    outcome(failures.is_empty(), format!("20 samples, failures: {failures:?}"))
}

fn c6_whitney_contract() -> Outcome {
    let start = Instant::now();
    let d = whitney_decompose(1.0, -6).unwrap();
    // dist/side equals the integer gap between index ranges.
    let comparable = d
        .squares
        .iter()
        .all(|q| q.distance::<f64>() == q.separation() as f64 * q.side::<f64>() && (1..4).contains(&q.separation()));
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let strip = d.strip_width();
    let (mut located, mut bad) = (0, 0);
    while located < 10_000 {
        let s: f64 = rng.gen();
        let t: f64 = rng.gen();
        if t - s < strip {
            continue;
        }
        let hits = d.squares.iter().filter(|q| q.contains(s, t)).count();
        let found = d.locate(s, t).map(|i| d.squares[i].contains(s, t)).unwrap_or(false);
        if hits != 1 || !found {
            bad += 1;
        }
        located += 1;
    }
    let elapsed = start.elapsed();
    outcome(
        comparable && bad == 0 && within(elapsed, 10),
        format!(
            "{} squares, 1 <= dist/side < 4: {comparable}, {bad} of 10000 points misplaced, {:.2} s",
            d.squares.len(),
            elapsed.as_secs_f64()
        ),
    )
}

fn c7_bilinear_decay() -> Outcome {
    let gamma = Rational::new(1, 2);
    let inv_r = endpoint_inv_r(3, &gamma);
    let r = Exponent::from_recip(inv_r).unwrap();
    let b = Exponent::from_recip(k_range(3, &gamma, &inv_r).midpoint()).unwrap();
    let spec = BilinearDecaySpec::new(3, gamma, r.clone(), r, b.clone(), b, -4, 2);
    let report = decay_slope_experiment::<f64>(&spec).unwrap();
    outcome(
        report.beta == Rational::from_integer(0) && report.fit.slope.abs() <= 0.15,
        format!("beta {}, fitted slope {:.4}", report.beta, report.fit.slope),
    )
}

fn c8_mixed_norm_oracle() -> Outcome {
    use std::f64::consts::PI;
    let grid = Arc::new(
        PolarGrid::<f64>::builder(3, 2.0)
            .radial_count(16)
            .l_max(2)
            .weight_exponent(1.5)
            .layout(RadialLayout::Panels(vec![0.5]))
            .build()
            .unwrap(),
    );
    let f = PolarField::from_fn(grid, |x| {
        let rho = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        Complex64::new(if rho >= 1.0 { 1.0 } else { 0.0 }, 0.0)
    });
    let annulus = mixed_norm(&f, 3.0, 2.0, 0.5).unwrap();
    let hand = (4.0 * PI).sqrt() * ((2.0 / 3.0) * (2f64.powf(1.5) - 1.0)).powf(1.0 / 3.0);
    let annulus_err = (annulus / hand - 1.0).abs();

    // Smooth anisotropic bump supported in 1 < |x| < 3, r = k = 3, gamma = 1/2.
    let bump = |x: &[f64; 3]| {
        let rho = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        if rho <= 1.0 || rho >= 3.0 {
            return Complex64::new(0.0, 0.0);
        }
        let radial = (-1.0 / ((rho - 1.0) * (3.0 - rho))).exp();
        let angular = 1.0 + 0.5 * x[0] * x[1] / (rho * rho) + 0.25 * x[2] / rho;
        Complex64::new(radial * angular, radial * x[0] / rho)
    };
    let (r, gamma) = (3.0, 0.5);
    let polar = Arc::new(
        PolarGrid::<f64>::builder(3, 3.0)
            .radial_count(48)
            .l_max(8)
            .weight_exponent(r * gamma)
            .breakpoints(&[1.0])
            .build()
            .unwrap(),
    );
    let via_polar = mixed_norm(&PolarField::from_fn(polar, |x| bump(x)), r, r, gamma).unwrap();
    let cart = CartesianGrid::new(3, 128, 3.2).unwrap();
    let field = Field::from_fn(cart, |x| bump(x));
    let sum: f64 = field
        .values()
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let x = cart.position(i);
            let rho = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
            if v.norm() == 0.0 {
                0.0
            } else {
                rho.powf(-r * gamma) * v.norm().powf(r)
            }
        })
        .sum();
    let via_cartesian = (sum * cart.cell_volume()).powf(1.0 / r);
    let cart_err = (via_polar / via_cartesian - 1.0).abs();
    outcome(
        annulus_err <= 1e-6 && cart_err <= 1e-6,
        format!(
            "annulus {annulus:.6} vs {hand:.6} (rel {annulus_err:.1e}); r=k=3 polar {via_polar:.9} vs Cartesian {via_cartesian:.9} (rel {cart_err:.1e})"
        ),
    )
}

fn c9_angular_embedding() -> Outcome {
    let lo = embedding_sweep(3, 4.0f64, 16, 200, 2.0, 9).unwrap();
    let hi = embedding_sweep(3, 4.0f64, 32, 200, 2.0, 9).unwrap();
    let change = (hi.max / lo.max - 1.0).abs();
    outcome(
        change < 0.10,
        format!("max ratio {:.5} (l_max 16) vs {:.5} (l_max 32), change {:.2}%", lo.max, hi.max, 100.0 * change),
    )
}

fn c10_inls_wellposedness() -> Outcome {
    let start = Instant::now();
    let grid = CartesianGrid::new(3, 32, 12.0).unwrap();
    let u0 = dlab_core::grid::gaussian_field(grid, 1.0, [0.0; 3], [0.0; 3])
        .unwrap()
        .scaled(Complex64::new(1e-3, 0.0));
    let mut pass = true;
    let mut detail = Vec::new();
    for coupling in [Coupling::Defocusing, Coupling::Focusing] {
        let problem = INLSProblem::mass_critical(u0.clone(), Rational::from_integer(1), coupling).unwrap();
        let config = SolverConfig::new(1.0, 1e-3);
        let (picard, log) = picard_solve(&problem, &config).unwrap();
        let ratio = log.ratios().into_iter().fold(0.0f64, f64::max);
        let split = splitstep_solve(&problem, &config).unwrap();
        let gap = sup_distance(&picard, &split).unwrap();
        let drift = mass_drift(&split);
        pass &= ratio <= 0.5 && gap <= 1e-4 && drift <= 1e-8;
        detail.push(format!(
            "lambda={:+}: {} iterations, max ratio {ratio:.3e}, gap {gap:.2e}, drift {drift:.2e}",
            coupling.sign(),
            log.iterations
        ));
    }
    let elapsed = start.elapsed();
    pass &= within(elapsed, 300);
    outcome(pass, format!("{}; {:.1} s", detail.join("; "), elapsed.as_secs_f64()))
}

fn c11_mass_critical_scaling() -> Outcome {
    let grid = CartesianGrid::new(3, 32, 12.0).unwrap();
    let u0 = dlab_core::grid::gaussian_field(grid, 1.0, [0.3, 0.0, -0.2], [0.5, 0.0, 0.0])
        .unwrap()
        .scaled(Complex64::new(0.1, 0.0));
    let problem = INLSProblem::mass_critical(u0, Rational::from_integer(1), Coupling::Focusing).unwrap();
    let mut config = SolverConfig::new(0.5, 1e-2);
    config.record_every = 5;
    let mut pass = true;
    let mut detail = Vec::new();
    for delta in [0.5, 2.0] {
        let r = scaling_check(&problem, &config, delta).unwrap();
        let norm_rel = (r.rescaled_data_norm / r.data_norm - 1.0).abs();
        pass &= norm_rel <= 1e-8 && r.symmetry_defect <= 10.0 * r.refinement_error;
        detail.push(format!(
            "delta={delta}: norm rel {norm_rel:.1e}, defect {:.2e} vs 10 x {:.2e}",
            r.symmetry_defect, r.refinement_error
        ));
    }
    outcome(pass, detail.join("; "))
}

fn c12_scattering_trend() -> Outcome {
    let grid = CartesianGrid::new(3, 64, 24.0).unwrap();
    let u0 = dlab_core::grid::gaussian_field(grid, 0.25, [0.0; 3], [0.0; 3])
        .unwrap()
        .scaled(Complex64::new(1e-2, 0.0));
    let problem = INLSProblem::mass_critical(u0, Rational::from_integer(1), Coupling::Defocusing).unwrap();
    let mut config = SolverConfig::new(8.0, 1e-2);
    config.record_every = 25;
    let trajectory = splitstep_solve(&problem, &config).unwrap();
    let report = scattering_diagnostic(&trajectory, &[1.0, 2.0, 4.0, 8.0]).unwrap();
    let cauchy: Vec<String> = report.cauchy.iter().map(|c| format!("{c:.3e}")).collect();
    outcome(
        report.cauchy_strictly_decreasing(),
        format!("Cauchy differences over [1, 2, 4, 8]: {}", cauchy.join(", ")),
    )
}

fn c13_endpoint_contrast() -> Outcome {
    let forbidden = QuotientSpec::new(2, Exponent::infinity(), Exponent::infinity(), rat(0, 1), true).unwrap();
    let knapp = eccentricity_trend::<f64>(2, &[2, 4, 8, 16, 32], 3, 13, &forbidden).unwrap();

    let mut settings = QuotientSettings::new(32.0, 0.25);
    settings.radial_count = 32;
    settings.l_max = 6;
    let tao = QuotientSpec::new(2, Exponent::infinity(), e(2), rat(0, 1), true).unwrap();
    let triangle = QuotientSpec::new(3, e(3), "7/2".parse().unwrap(), rat(1, 2), false).unwrap();
    let mut stable = true;
    let mut detail = vec![format!(
        "Knapp max over lengths 2..32: {:?}",
        knapp.max.iter().map(|v| format!("{v:.4}")).collect::<Vec<_>>()
    )];
    for (name, dim, spec) in [("Tao probe", 2usize, tao), ("n=3 triangle point", 3, triangle)] {
        let family = DataFamily::new(dim, FamilyKind::RandomBandlimited { band_limit: 1.0, packets: 4 }, 100, 13).unwrap();
        let trend = resolution_trend(&family, &spec, &settings, 1).unwrap();
        let change = trend.max_relative_change();
        stable &= change < 0.05;
        detail.push(format!("{name} change {:.2}%", 100.0 * change));
    }
    outcome(knapp.strictly_increasing() && stable, detail.join("; "))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("propagator unitarity", c1_unitarity),
        ("Gaussian oracle", c2_gaussian_oracle),
        ("decay rate", c3_decay_rate),
        ("region arithmetic", c4_region_arithmetic),
        ("beta identity", c5_beta_identity),
        ("Whitney contract", c6_whitney_contract),
        ("localized bilinear decay", c7_bilinear_decay),
        ("mixed-norm oracle", c8_mixed_norm_oracle),
        ("angular embedding", c9_angular_embedding),
        ("INLS well-posedness machinery", c10_inls_wellposedness),
        ("mass-critical scaling", c11_mass_critical_scaling),
        ("scattering trend", c12_scattering_trend),
        ("endpoint contrast", c13_endpoint_contrast),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let id = format!("criterion {:>2}", i + 1);
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str()) || id.ends_with(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let result = std::panic::catch_unwind(check).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        if !result.pass {
            failed += 1;
        }
        println!(
            "{id} {} {name} [{:.1} s]: {}",
            if result.pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            result.detail
        );
    }
    println!("acceptance: {} failed", failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
