//! Weighted angularly mixed norms
//! `||f||_{L_rho^r L_omega^k(|x|^{-r gamma})} =
//! ( int_0^inf ||rho^{-gamma} f(rho .)||_{L_omega^k}^r rho^{n-1} d rho )^{1/r}`,
//! the `Lambda^s` multiplier on the sphere and space-time norms.
//!
//! Infinite exponents are `T::infinity()`. The weight `rho^{-r gamma}` lives
//! in the radial quadrature weights of the [`PolarGrid`]; the grid must have
//! been built with `weight_exponent == r * gamma`.

use std::sync::Arc;

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{sample_polar, AngularRule, PolarField, PolarGrid};
use crate::propagator::{time_weights, TimeRule, Trajectory};
use crate::scalar::Real;

pub use crate::sphere::{
    angular_transform, inverse_angular_transform, AngularSpectrum, AngularTransform,
};

/// Exponents `(q, r, k, gamma)` of `L_t^q L_rho^r L_omega^k(|x|^{-r gamma})`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixedNormSpec<T> {
    pub q: T,
    pub r: T,
    pub k: T,
    pub gamma: T,
}

impl<T: Real> MixedNormSpec<T> {
    pub fn new(q: T, r: T, k: T, gamma: T) -> Result<Self> {
        for (name, e) in [("q", q), ("r", r), ("k", k)] {
            if !(e >= T::one()) {
                return Err(Error::InvalidParameter(format!(
                    "{name} = {e} must lie in [1, inf]"
                )));
            }
        }
        if !(gamma >= T::zero()) || !gamma.is_finite() {
            return Err(Error::InvalidParameter(format!("gamma = {gamma} must be >= 0")));
        }
        Ok(Self { q, r, k, gamma })
    }

    /// Radial weight exponent `r * gamma` (zero when `r = inf`).
    pub fn weight_exponent(&self) -> T {
        if self.r.is_infinite() {
            T::zero()
        } else {
            self.r * self.gamma
        }
    }
}

/// `(sum_m v_m |u_m|^k)^{1/k}`, or `max_m |u_m|` for `k = inf`.
pub fn angular_lk<T: Real>(values: &[Complex<T>], weights: &[T], k: T) -> T {
    if k.is_infinite() {
        return values.iter().map(|z| z.norm()).fold(T::zero(), T::max);
    }
    let s: T = values
        .iter()
        .zip(weights)
        .map(|(z, &w)| w * z.norm().powf(k))
        .sum();
    s.powf(k.recip())
}

/// `||u(rho_i .)||_{L_omega^k}` at radial node `i`.
pub fn angular_norm<T: Real>(field: &PolarField<T>, i: usize, k: T) -> T {
    angular_lk(field.row(i), field.grid().angular().weights(), k)
}

/// The weighted mixed norm of a polar field.
pub fn mixed_norm<T: Real>(field: &PolarField<T>, r: T, k: T, gamma: T) -> Result<T> {
    let grid = field.grid();
    let radial = 0..grid.radial_len();
    if r.is_infinite() {
        return Ok(radial
            .map(|i| grid.radial_nodes()[i].powf(-gamma) * angular_norm(field, i, k))
            .fold(T::zero(), T::max));
    }
    let required = r * gamma;
    if (grid.weight_exponent() - required).abs() > T::lit(1e-12) * (T::one() + required.abs()) {
        return Err(Error::WeightMismatch {
            grid: grid.weight_exponent().to_f64_lossy(),
            required: required.to_f64_lossy(),
        });
    }
    let s: T = radial
        .map(|i| grid.radial_weights()[i] * angular_norm(field, i, k).powf(r))
        .sum();
    Ok(s.powf(r.recip()))
}

/// Mixed norm with the exponents of `spec`.
pub fn mixed_norm_spec<T: Real>(field: &PolarField<T>, spec: &MixedNormSpec<T>) -> Result<T> {
    mixed_norm(field, spec.r, spec.k, spec.gamma)
}

/// `L^q` norm on `[t_0, t_M]` of uniformly sampled nonnegative values
/// (trapezoid rule); `q = inf` takes the maximum.
pub fn time_norm<T: Real>(samples: &[T], dt: T, q: T) -> Result<T> {
    if samples.is_empty() {
        return Err(Error::EmptyTrajectory);
    }
    if q.is_infinite() {
        return Ok(samples.iter().copied().fold(T::zero(), T::max));
    }
    if !(q >= T::one()) {
        return Err(Error::InvalidParameter(format!("time exponent {q} < 1")));
    }
    let w = time_weights(samples.len() - 1, dt, TimeRule::Trapezoid);
    let s: T = samples.iter().zip(&w).map(|(&v, &w)| w * v.powf(q)).sum();
    Ok(s.powf(q.recip()))
}

/// `|| |x|^{-gamma} u ||_{L_t^q L_rho^r L_omega^k}` over a trajectory, each
/// snapshot resampled on `polar`.
pub fn spacetime_norm<T: Real>(
    trajectory: &Trajectory<T>,
    polar: &Arc<PolarGrid<T>>,
    spec: &MixedNormSpec<T>,
) -> Result<T> {
    check_time_exponent(spec.q)?;
    let inner = trajectory
        .fields()
        .iter()
        .map(|f| mixed_norm_spec(&sample_polar(f, polar)?, spec))
        .collect::<Result<Vec<T>>>()?;
    time_norm(&inner, trajectory.step(), spec.q)
}

pub(crate) fn check_time_exponent<T: Real>(q: T) -> Result<()> {
    if q.is_infinite() || q == T::one() || q == T::lit(2.0) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "time exponent q = {q} not in {{1, 2, inf}}"
        )))
    }
}

/// Sobolev order `(n-1)(1/2 - 1/p)` of the embedding `H^s(S^{n-1}) -> L^p`.
pub fn embedding_order<T: Real>(dim: usize, p: T) -> T {
    T::from_usize_lossy(dim - 1) * (T::lit(0.5) - p.recip())
}

/// `||f||_{L_omega^p} / ||Lambda^{(n-1)(1/2-1/p)} f||_{L_omega^2}` for one
/// angular row whose harmonic content is at most `transform.l_max()`.
pub fn embedding_ratio<T: Real>(
    values: &[Complex<T>],
    transform: &AngularTransform<T>,
    p: T,
) -> Result<T> {
    if !(p >= T::lit(2.0)) || p.is_infinite() {
        return Err(Error::InvalidParameter(format!(
            "embedding exponent p = {p} must lie in [2, inf)"
        )));
    }
    let rule = transform.rule();
    let dim = rule.dim();
    let s = embedding_order(dim, p);
    let coefficients = transform.forward(values);
    let l_max = transform.l_max();
    let denom: T = coefficients
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let l = crate::sphere::degree_of(dim, l_max, i);
            crate::sphere::lambda_sq::<T>(dim, l).powf(s) * c.norm_sqr()
        })
        .sum::<T>()
        .sqrt();
    if denom == T::zero() {
        return Err(Error::ZeroData);
    }
    Ok(angular_lk(values, rule.weights(), p) / denom)
}

/// Largest and median [`embedding_ratio`] over random angular rows.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingSweep<T> {
    pub l_max: usize,
    pub ratios: Vec<T>,
    pub max: T,
    pub median: T,
}

/// Embedding ratios of `samples` random rows of degree at most `l_max`
/// whose degree-`l` coefficients are complex normals scaled by
/// `(1 + l(l+n-2))^{-decay/2}`. Member `i` draws from stream `i` of `seed`,
/// so the rows of two sweeps with different `l_max` share their low modes.
pub fn embedding_sweep<T: Real>(
    dim: usize,
    p: T,
    l_max: usize,
    samples: usize,
    decay: T,
    seed: u64,
) -> Result<EmbeddingSweep<T>> {
    if samples == 0 {
        return Err(Error::InvalidParameter("embedding sweep needs samples".into()));
    }
    let rule = match dim {
        2 => AngularRule::circle(4 * l_max + 4)?,
        3 => AngularRule::sphere(2 * l_max + 2, 4 * l_max + 4)?,
        _ => return Err(Error::UnsupportedDimension(dim)),
    };
    let transform = AngularTransform::new(&rule, l_max)?;
    let count = crate::sphere::coefficient_count(dim, l_max);
    let envelope: Vec<T> = (0..count)
        .map(|i| {
            let l = crate::sphere::degree_of(dim, l_max, i);
            crate::sphere::lambda_sq::<T>(dim, l).powf(-decay / T::lit(2.0))
        })
        .collect();
    let order = draw_order(dim, l_max);
    let ratios = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let mut coefficients = vec![Complex::new(T::zero(), T::zero()); count];
            for &j in &order {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                coefficients[j] = Complex::new(T::lit(re), T::lit(im)) * envelope[j];
            }
            embedding_ratio(&transform.inverse(&coefficients), &transform, p)
        })
        .collect::<Result<Vec<T>>>()?;
    let mut sorted = ratios.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite ratios"));
    let median = sorted[sorted.len() / 2];
    Ok(EmbeddingSweep {
        l_max,
        max: sorted[sorted.len() - 1],
        median,
        ratios,
    })
}

/// Flat coefficient indices in order of increasing degree.
fn draw_order(dim: usize, l_max: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..crate::sphere::coefficient_count(dim, l_max)).collect();
    order.sort_by_key(|&i| (crate::sphere::degree_of(dim, l_max, i), i));
    if dim == 2 {
        // Within each degree, draw m = -l before m = +l regardless of l_max.
        order.sort_by_key(|&i| {
            let m = i as i64 - l_max as i64;
            (m.unsigned_abs(), m)
        });
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{CartesianGrid, Field, RadialLayout};
    use proptest::prelude::*;

    const PI: f64 = std::f64::consts::PI;

    fn sphere_grid(l_max: usize, rg: f64) -> Arc<PolarGrid<f64>> {
        Arc::new(PolarGrid::new(3, 2.0, 12, l_max, rg).unwrap())
    }

    #[test]
    fn angular_norm_of_constants_and_cosine() {
        let grid = sphere_grid(4, 0.0);
        let c = Complex::new(0.6, 0.8);
        let f = PolarField::from_fn(grid.clone(), |_| c);
        for &k in &[1.0, 2.0, 3.5] {
            let want = (4.0 * PI).powf(1.0 / k);
            assert!((angular_norm(&f, 0, k) / want - 1.0).abs() < 1e-12);
        }
        assert!((angular_norm(&f, 0, f64::INFINITY) - 1.0).abs() < 1e-15);
        let g = PolarField::from_fn(grid, |x| {
            let rho = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
            Complex::new(x[2] / rho, 0.0)
        });
        assert!((angular_norm(&g, 3, 2.0) - (4.0 * PI / 3.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn radial_functions_separate() {
        let grid = Arc::new(PolarGrid::<f64>::new(3, 3.0, 24, 2, 0.9).unwrap());
        let f = PolarField::from_fn(grid, |x| {
            let rho2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
            Complex::new((-rho2).exp(), 0.0)
        });
        let (r, k, gamma) = (3.0, 2.0, 0.3);
        // int_0^3 rho^{1.1} e^{-3 rho^2} d rho by fine Simpson.
        let m = 20000;
        let h = 3.0 / m as f64;
        let g = |p: f64| p.powf(1.1) * (-3.0 * p * p).exp();
        let mut radial = g(0.0) + g(3.0);
        for i in 1..m {
            radial += if i % 2 == 1 { 4.0 } else { 2.0 } * g(i as f64 * h);
        }
        radial *= h / 3.0;
        let want = (4.0 * PI).powf(1.0 / k) * radial.powf(1.0 / r);
        assert!((mixed_norm(&f, r, k, gamma).unwrap() / want - 1.0).abs() < 1e-8);
    }

    #[test]
    fn annulus_indicator_value() {
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
            Complex::new(if rho >= 1.0 { 1.0 } else { 0.0 }, 0.0)
        });
        let got = mixed_norm(&f, 3.0, 2.0, 0.5).unwrap();
        let want = (4.0 * PI).sqrt() * ((2.0 / 3.0) * (2f64.powf(1.5) - 1.0)).powf(1.0 / 3.0);
        assert!((got / want - 1.0).abs() < 1e-12);
        assert!((got - 3.7868).abs() < 5e-5);
    }

    #[test]
    fn weight_mismatch_is_reported() {
        let f = PolarField::from_fn(sphere_grid(2, 1.0), |_| Complex::new(1.0, 0.0));
        assert!(matches!(
            mixed_norm(&f, 3.0, 2.0, 0.5),
            Err(Error::WeightMismatch { .. })
        ));
    }

    #[test]
    fn l2_mixed_norm_matches_cartesian_mass() {
        let cart = CartesianGrid::<f64>::new(3, 128, 8.0).unwrap();
        let f = Field::from_fn(cart, |x| {
            Complex::new((-(x[0] * x[0] + 2.0 * x[1] * x[1] + x[2] * x[2])).exp(), 0.0)
        });
        let polar = Arc::new(PolarGrid::new(3, 6.0, 40, 16, 0.0).unwrap());
        let pf = sample_polar(&f, &polar).unwrap();
        let got = mixed_norm(&pf, 2.0, 2.0, 0.0).unwrap();
        assert!((got / f.l2_norm() - 1.0).abs() < 1e-6, "{}", got / f.l2_norm() - 1.0);
    }

    #[test]
    fn time_norm_of_constant_samples() {
        let v = vec![1.5f64; 11];
        assert!((time_norm(&v, 0.1, 2.0).unwrap() - 1.5).abs() < 1e-12);
        assert_eq!(time_norm(&[1.0, 3.0, 2.0], 0.1, f64::INFINITY).unwrap(), 3.0);
        assert!(time_norm::<f64>(&[], 0.1, 2.0).is_err());
        assert!(check_time_exponent(3.0f64).is_err());
    }

    #[test]
    fn embedding_ratio_for_constants_and_p2() {
        let rule = crate::grid::AngularRule::<f64>::sphere(9, 18).unwrap();
        let tr = AngularTransform::new(&rule, 8).unwrap();
        let ones = vec![Complex::new(1.0, 0.0); rule.len()];
        assert!((embedding_ratio(&ones, &tr, 2.0).unwrap() - 1.0).abs() < 1e-12);
        let wavy: Vec<Complex<f64>> = rule
            .directions()
            .iter()
            .map(|d| Complex::new(d[0] * d[1] + 0.3 * d[2], d[2] * d[2]))
            .collect();
        assert!(embedding_ratio(&wavy, &tr, 2.0).unwrap() <= 1.0 + 1e-9);
        assert!(embedding_ratio(&wavy, &tr, f64::INFINITY).is_err());
        let zeros = vec![Complex::new(0.0, 0.0); rule.len()];
        assert!(matches!(embedding_ratio(&zeros, &tr, 4.0), Err(Error::ZeroData)));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn mixed_norm_is_a_norm(
            a in proptest::collection::vec(-1.0f64..1.0, 8),
            b in proptest::collection::vec(-1.0f64..1.0, 8),
            c in -3.0f64..3.0,
            k in 1.0f64..6.0,
        ) {
            let grid = Arc::new(PolarGrid::new(3, 2.0, 6, 3, 1.5).unwrap());
            let make = |coef: &Vec<f64>| PolarField::from_fn(grid.clone(), |x| {
                Complex::new(coef[0] + coef[1] * x[0] + coef[2] * x[1] * x[2] + coef[3] * x[2],
                             coef[4] * x[0] * x[0] + coef[5] + coef[6] * x[1] + coef[7] * x[2])
            });
            let (f, g) = (make(&a), make(&b));
            let sum = PolarField::from_values(
                grid.clone(),
                f.values().iter().zip(g.values()).map(|(x, y)| x + y).collect(),
            ).unwrap();
            let scaled = PolarField::from_values(
                grid.clone(),
                f.values().iter().map(|x| x * c).collect(),
            ).unwrap();
            let (nf, ng) = (mixed_norm(&f, 3.0, k, 0.5).unwrap(), mixed_norm(&g, 3.0, k, 0.5).unwrap());
            let ns = mixed_norm(&sum, 3.0, k, 0.5).unwrap();
            prop_assert!(ns <= (nf + ng) * (1.0 + 1e-9) + 1e-12);
            let nc = mixed_norm(&scaled, 3.0, k, 0.5).unwrap();
            prop_assert!((nc - c.abs() * nf).abs() <= 1e-9 * (1.0 + nf));
        }

        #[test]
        fn angular_norms_nest_on_the_sphere(
            a in proptest::collection::vec(-1.0f64..1.0, 4),
            k1 in 1.0f64..8.0,
            k2 in 1.0f64..8.0,
        ) {
            let (lo, hi) = if k1 <= k2 { (k1, k2) } else { (k2, k1) };
            let grid = sphere_grid(4, 0.0);
            let f = PolarField::from_fn(grid, |x| {
                Complex::new(a[0] + a[1] * x[0] + a[2] * x[1] * x[1], a[3] * x[2])
            });
            let sigma = 4.0 * PI;
            let small = angular_norm(&f, 5, lo);
            let big = angular_norm(&f, 5, hi);
            prop_assert!(small <= sigma.powf(1.0 / lo - 1.0 / hi) * big * (1.0 + 1e-12) + 1e-14);
        }
    }

    #[test]
    fn embedding_sweep_is_deterministic_and_bounded_at_p2() {
        for dim in [2, 3] {
            let a = embedding_sweep(dim, 4.0f64, 6, 12, 2.0, 5).unwrap();
            let b = embedding_sweep(dim, 4.0f64, 6, 12, 2.0, 5).unwrap();
            assert_eq!(a, b);
            assert!(a.max >= a.median && a.median > 0.0);
            let flat = embedding_sweep(dim, 2.0f64, 6, 12, 0.0, 5).unwrap();
            for r in flat.ratios {
                assert!((r - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn embedding_sweep_rows_share_low_modes_across_degrees() {
        // A steep envelope makes the rows nearly independent of l_max.
        let lo = embedding_sweep(3, 4.0f64, 4, 6, 12.0, 1).unwrap();
        let hi = embedding_sweep(3, 4.0f64, 8, 6, 12.0, 1).unwrap();
        for (a, b) in lo.ratios.iter().zip(&hi.ratios) {
            assert!((a / b - 1.0).abs() < 1e-3, "{a} {b}");
        }
        assert!(embedding_sweep(3, 4.0f64, 4, 0, 2.0, 1).is_err());
        assert!(embedding_sweep(4, 4.0f64, 4, 3, 2.0, 1).is_err());
    }

}
