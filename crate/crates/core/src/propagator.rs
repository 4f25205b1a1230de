//! Free Schrödinger evolution `e^{it Delta}` as a Fourier multiplier, the
//! closed-form Gaussian solution, Duhamel integrals and decay experiments.

use std::sync::Arc;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::fft::FftNd;
use crate::fit::{fit_loglog, LineFit};
use crate::grid::{dot, norm, CartesianGrid, Field, Point, PolarField, PolarGrid};
use crate::mixed_norms::mixed_norm;
use crate::scalar::{cpow, from_ratio, Real};
use crate::Rational;

/// Modulated Gaussian `c e^{i xi0 (x - x0)} e^{-a |x - x0|^2}` in `R^dim`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianParams<T> {
    pub dim: usize,
    pub width: T,
    pub center: Point<T>,
    pub momentum: Point<T>,
    pub amplitude: Complex<T>,
}

impl<T: Real> GaussianParams<T> {
    pub fn new(
        dim: usize,
        width: T,
        center: Point<T>,
        momentum: Point<T>,
        amplitude: Complex<T>,
    ) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::UnsupportedDimension(dim));
        }
        if !(width > T::zero()) || !width.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "Gaussian width must be positive, got {width}"
            )));
        }
        Ok(Self {
            dim,
            width,
            center,
            momentum,
            amplitude,
        })
    }

    /// Unit-amplitude centered Gaussian at rest.
    pub fn centered(dim: usize, width: T) -> Result<Self> {
        Self::new(dim, width, [T::zero(); 3], [T::zero(); 3], Complex::new(T::one(), T::zero()))
    }

    /// `u(x, t)` of the free flow.
    pub fn exact(&self, x: &Point<T>, t: T) -> Complex<T> {
        gaussian_exact(self, x, t)
    }

    /// Samples `u(., t)` on a Cartesian grid.
    pub fn sample_at(&self, grid: CartesianGrid<T>, t: T) -> Field<T> {
        Field::from_fn(grid, |x| gaussian_exact(self, x, t))
    }

    pub fn sample(&self, grid: CartesianGrid<T>) -> Field<T> {
        self.sample_at(grid, T::zero())
    }

    /// Exact `L^2` norm, conserved in time.
    pub fn l2_norm(&self) -> T {
        let two = T::lit(2.0);
        self.amplitude.norm() * (T::PI() / (two * self.width)).powf(T::from_usize_lossy(self.dim) / T::lit(4.0))
    }

    /// Per-coordinate variance of `|u(., t)|^2`.
    pub fn variance(&self, t: T) -> T {
        let a = self.width;
        (T::one() + T::lit(16.0) * a * a * t * t) / (T::lit(4.0) * a)
    }

    /// Center of mass at time `t`.
    pub fn center_at(&self, t: T) -> Point<T> {
        let two = T::lit(2.0);
        let mut c = self.center;
        for i in 0..3 {
            c[i] += two * self.momentum[i] * t;
        }
        c
    }

    /// Radius of the ball around the origin holding the dispersed packet out
    /// to eight standard deviations.
    pub fn support_radius(&self, t: T) -> T {
        norm(&self.center_at(t), self.dim) + T::lit(8.0) * self.variance(t).sqrt()
    }
}

/// Closed-form free evolution of a modulated Gaussian:
/// `c (1+4iat)^{-n/2} e^{i xi0 (x-x0) - i|xi0|^2 t} e^{-a|x-x0-2 xi0 t|^2/(1+4iat)}`.
pub fn gaussian_exact<T: Real>(params: &GaussianParams<T>, x: &Point<T>, t: T) -> Complex<T> {
    let n = params.dim;
    let a = params.width;
    let z = Complex::new(T::one(), T::lit(4.0) * a * t);
    let mut shifted = [T::zero(); 3];
    let mut phase = T::zero();
    for i in 0..n {
        shifted[i] = x[i] - params.center[i] - T::lit(2.0) * params.momentum[i] * t;
        phase += params.momentum[i] * (x[i] - params.center[i]);
    }
    phase -= dot(&params.momentum, &params.momentum, n) * t;
    let r2 = dot(&shifted, &shifted, n);
    let envelope = (Complex::new(-a * r2, T::zero()) / z).exp();
    params.amplitude
        * cpow(z, -T::from_usize_lossy(n) / T::lit(2.0))
        * Complex::from_polar(T::one(), phase)
        * envelope
}

/// `C exp(-A |x|^2 + B . x)` with complex `A` (`Re A > 0`), `B` and `C`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexGaussian<T> {
    pub dim: usize,
    pub quadratic: Complex<T>,
    pub linear: [Complex<T>; 3],
    pub coefficient: Complex<T>,
}

impl<T: Real> ComplexGaussian<T> {
    /// The exact free solution of `params` at time `tau`.
    pub fn at_time(params: &GaussianParams<T>, tau: T) -> Self {
        let n = params.dim;
        let a = params.width;
        let two = T::lit(2.0);
        let z = Complex::new(T::one(), T::lit(4.0) * a * tau);
        let az = Complex::new(a, T::zero()) / z;
        let moved = params.center_at(tau);
        let mut linear = [Complex::new(T::zero(), T::zero()); 3];
        for i in 0..n {
            linear[i] = Complex::new(T::zero(), params.momentum[i]) + az * (two * moved[i]);
        }
        let xi2 = dot(&params.momentum, &params.momentum, n);
        let constant = Complex::new(
            T::zero(),
            -dot(&params.momentum, &params.center, n) - xi2 * tau,
        ) - az * dot(&moved, &moved, n);
        let coefficient =
            params.amplitude * cpow(z, -T::from_usize_lossy(n) / two) * constant.exp();
        Self {
            dim: n,
            quadratic: az,
            linear,
            coefficient,
        }
    }

    pub fn eval(&self, x: &Point<T>) -> Complex<T> {
        let mut e = -self.quadratic * dot(x, x, self.dim);
        for i in 0..self.dim {
            e += self.linear[i] * x[i];
        }
        self.coefficient * e.exp()
    }

    /// `int self conj(other) dx` over `R^n`.
    pub fn inner(&self, other: &ComplexGaussian<T>) -> Complex<T> {
        let a = self.quadratic + other.quadratic.conj();
        let mut bb = Complex::new(T::zero(), T::zero());
        for i in 0..self.dim {
            let b = self.linear[i] + other.linear[i].conj();
            bb += b * b;
        }
        let pi = Complex::new(T::PI(), T::zero());
        self.coefficient
            * other.coefficient.conj()
            * cpow(pi / a, T::from_usize_lossy(self.dim) / T::lit(2.0))
            * (bb / (a * T::lit(4.0))).exp()
    }
}

/// `<e^{i tau Delta} e^{-p|x|^2}, e^{-q|x|^2}> = (pi / (p + q + 4ipq tau))^{n/2}`.
pub fn centered_pairing<T: Real>(p: T, q: T, tau: T, dim: usize) -> Complex<T> {
    let denom = Complex::new(p + q, T::lit(4.0) * p * q * tau);
    cpow(
        Complex::new(T::PI(), T::zero()) / denom,
        T::from_usize_lossy(dim) / T::lit(2.0),
    )
}

/// Fourier-multiplier propagator for a fixed grid.
#[derive(Debug, Clone)]
pub struct Propagator<T: Real> {
    grid: CartesianGrid<T>,
    fft: FftNd<T>,
    xi_sq: Vec<T>,
}

impl<T: Real> Propagator<T> {
    pub fn new(grid: CartesianGrid<T>) -> Self {
        let xi_sq = (0..grid.len()).map(|i| grid.wavenumber_sq(i)).collect();
        Self {
            grid,
            fft: FftNd::new(grid.dim(), grid.points()),
            xi_sq,
        }
    }

    pub fn grid(&self) -> &CartesianGrid<T> {
        &self.grid
    }

    pub fn fft(&self) -> &FftNd<T> {
        &self.fft
    }

    /// `|xi|^2` in FFT order.
    pub fn xi_sq(&self) -> &[T] {
        &self.xi_sq
    }

    /// Multiplies a spectrum by `e^{-it|xi|^2}`.
    pub fn apply_multiplier(&self, spectrum: &mut [Complex<T>], t: T) {
        if t == T::zero() {
            return;
        }
        // e^{-it|xi|^2} factors over the axes.
        let n = self.grid.points();
        let axis: Vec<Complex<T>> = (0..n)
            .map(|i| {
                let k = self.grid.wavenumber(i);
                Complex::from_polar(T::one(), -t * k * k)
            })
            .collect();
        if self.grid.dim() == 2 {
            for (row, a) in spectrum.chunks_mut(n).zip(&axis) {
                for (z, b) in row.iter_mut().zip(&axis) {
                    *z *= a * b;
                }
            }
        } else {
            for (plane, a) in spectrum.chunks_mut(n * n).zip(&axis) {
                for (row, b) in plane.chunks_mut(n).zip(&axis) {
                    let ab = a * b;
                    for (z, c) in row.iter_mut().zip(&axis) {
                        *z *= ab * c;
                    }
                }
            }
        }
    }

    pub fn evolve_in_place(&self, values: &mut [Complex<T>], t: T) {
        if t == T::zero() {
            return;
        }
        self.fft.forward(values);
        self.apply_multiplier(values, t);
        self.fft.inverse(values);
    }

    pub fn evolve(&self, field: &Field<T>, t: T) -> Field<T> {
        let mut out = field.clone();
        self.evolve_in_place(out.values_mut(), t);
        out
    }

    /// Evolves a precomputed forward spectrum to time `t` in physical space.
    pub fn evolve_spectrum(&self, spectrum: &[Complex<T>], t: T) -> Field<T> {
        let mut values = spectrum.to_vec();
        self.apply_multiplier(&mut values, t);
        self.fft.inverse(&mut values);
        Field::from_values(self.grid, values).expect("spectrum sized by grid")
    }

    pub fn spectrum(&self, field: &Field<T>) -> Vec<Complex<T>> {
        let mut values = field.values().to_vec();
        self.fft.forward(&mut values);
        values
    }
}

/// `e^{it Delta} f` on the periodic box.
pub fn free_evolve<T: Real>(field: &Field<T>, t: T) -> Field<T> {
    Propagator::new(*field.grid()).evolve(field, t)
}

/// Uniformly sampled fields `u(t0 + i dt)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    grid: CartesianGrid<T>,
    start: T,
    step: T,
    fields: Vec<Field<T>>,
}

impl<T: Real> Trajectory<T> {
    pub fn new(start: T, step: T, fields: Vec<Field<T>>) -> Result<Self> {
        let first = fields.first().ok_or(Error::EmptyTrajectory)?;
        let grid = *first.grid();
        if fields.iter().any(|f| *f.grid() != grid) {
            return Err(Error::InvalidParameter(
                "trajectory fields must share one grid".into(),
            ));
        }
        if !(step > T::zero()) || !step.is_finite() {
            return Err(Error::NonUniformTimes);
        }
        Ok(Self {
            grid,
            start,
            step,
            fields,
        })
    }

    /// Free evolution `e^{it Delta} f` sampled at `t0 + i dt`, `i <= steps`.
    pub fn free(field: &Field<T>, start: T, step: T, steps: usize) -> Result<Self> {
        let prop = Propagator::new(*field.grid());
        let spec = prop.spectrum(field);
        let fields = (0..=steps)
            .map(|i| prop.evolve_spectrum(&spec, start + step * T::from_usize_lossy(i)))
            .collect();
        Self::new(start, step, fields)
    }

    pub fn grid(&self) -> &CartesianGrid<T> {
        &self.grid
    }

    pub fn start(&self) -> T {
        self.start
    }

    pub fn step(&self) -> T {
        self.step
    }

    pub fn end(&self) -> T {
        self.time(self.fields.len() - 1)
    }

    pub fn len(&self) -> usize {
        self.fields.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fields.is_empty()
    }

    pub fn time(&self, i: usize) -> T {
        self.start + self.step * T::from_usize_lossy(i)
    }

    pub fn times(&self) -> Vec<T> {
        (0..self.fields.len()).map(|i| self.time(i)).collect()
    }

    pub fn fields(&self) -> &[Field<T>] {
        &self.fields
    }

    pub fn field(&self, i: usize) -> &Field<T> {
        &self.fields[i]
    }

    pub fn into_fields(self) -> Vec<Field<T>> {
        self.fields
    }

    /// Index of the sample at time `t`, which must lie on the time grid.
    pub fn index_of(&self, t: T) -> Result<usize> {
        let end = self.end();
        let slack = self.step * T::lit(1e-9);
        if t < self.start - slack || t > end + slack {
            return Err(Error::OutsideWindow {
                t: t.to_f64_lossy(),
                start: self.start.to_f64_lossy(),
                end: end.to_f64_lossy(),
            });
        }
        let pos = (t - self.start) / self.step;
        let idx = pos.round();
        if (pos - idx).abs() > T::lit(1e-6) {
            return Err(Error::OffGrid {
                t: t.to_f64_lossy(),
                start: self.start.to_f64_lossy(),
                dt: self.step.to_f64_lossy(),
            });
        }
        Ok(idx.to_f64_lossy() as usize)
    }

    pub fn at(&self, t: T) -> Result<&Field<T>> {
        Ok(&self.fields[self.index_of(t)?])
    }
}

/// Composite time quadrature on uniform samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeRule {
    Trapezoid,
    /// Composite Simpson; an odd interval count closes with Simpson's 3/8.
    Simpson,
}

/// Weights of `rule` for `intervals` uniform steps of size `dt`.
pub fn time_weights<T: Real>(intervals: usize, dt: T, rule: TimeRule) -> Vec<T> {
    let mut w = vec![T::zero(); intervals + 1];
    if intervals == 0 {
        return w;
    }
    let half = dt / T::lit(2.0);
    let trapezoid = |w: &mut [T]| {
        for pair in 0..intervals {
            w[pair] += half;
            w[pair + 1] += half;
        }
    };
    match rule {
        TimeRule::Trapezoid => trapezoid(&mut w),
        TimeRule::Simpson if intervals == 1 => trapezoid(&mut w),
        TimeRule::Simpson => {
            let simpson_end = if intervals.is_multiple_of(2) { intervals } else { intervals - 3 };
            let third = dt / T::lit(3.0);
            for s in (0..simpson_end).step_by(2) {
                w[s] += third;
                w[s + 1] += T::lit(4.0) * third;
                w[s + 2] += third;
            }
            if simpson_end < intervals {
                let e = T::lit(3.0) * dt / T::lit(8.0);
                let s = simpson_end;
                w[s] += e;
                w[s + 1] += T::lit(3.0) * e;
                w[s + 2] += T::lit(3.0) * e;
                w[s + 3] += e;
            }
        }
    }
    w
}

/// `int_{t0}^{t} e^{i(t-s) Delta} F(s) ds` from the samples of `source`.
pub fn duhamel_integral<T: Real>(source: &Trajectory<T>, t: T, rule: TimeRule) -> Result<Field<T>> {
    let m = source.index_of(t)?;
    let prop = Propagator::new(*source.grid());
    duhamel_with(&prop, source, m, rule)
}

pub(crate) fn duhamel_with<T: Real>(
    prop: &Propagator<T>,
    source: &Trajectory<T>,
    m: usize,
    rule: TimeRule,
) -> Result<Field<T>> {
    let grid = *source.grid();
    if m == 0 {
        return Ok(Field::zeros(grid));
    }
    let weights = time_weights(m, source.step(), rule);
    let t = source.time(m);
    let mut acc = vec![Complex::new(T::zero(), T::zero()); grid.len()];
    for (k, &w) in weights.iter().enumerate() {
        let mut spec = prop.spectrum(source.field(k));
        prop.apply_multiplier(&mut spec, t - source.time(k));
        for (a, s) in acc.iter_mut().zip(&spec) {
            *a += s * w;
        }
    }
    prop.fft().inverse(&mut acc);
    Field::from_values(grid, acc)
}

/// Checks the constraints `2 <= a <= b < inf`,
/// `2(n-1)(1/a - 1/b) <= gamma < n/a` of the decay estimate.
pub fn check_decay_exponents(dim: usize, a: Rational, b: Rational, gamma: Rational) -> Result<()> {
    let n = Rational::from_integer(dim as i64);
    let two = Rational::from_integer(2);
    if a < two {
        return Err(Error::ConstraintViolation(format!("a = {a} violates a >= 2")));
    }
    if b < a {
        return Err(Error::ConstraintViolation(format!("b = {b} violates a <= b")));
    }
    if gamma < Rational::from_integer(0) {
        return Err(Error::ConstraintViolation(format!("gamma = {gamma} is negative")));
    }
    let lower = two * (n - 1) * (a.recip() - b.recip());
    if gamma < lower {
        return Err(Error::ConstraintViolation(format!(
            "gamma = {gamma} violates 2(n-1)(1/a - 1/b) = {lower} <= gamma"
        )));
    }
    let upper = n / a;
    if gamma >= upper {
        return Err(Error::ConstraintViolation(format!(
            "gamma = {gamma} violates gamma < n/a = {upper}"
        )));
    }
    Ok(())
}

/// `||e^{it Delta} f||_{L_rho^a L_omega^b(|x|^{-a gamma})}` for each `t`,
/// evaluated from the closed-form Gaussian on `polar`.
pub fn decay_experiment<T: Real>(
    params: &GaussianParams<T>,
    a: Rational,
    b: Rational,
    gamma: Rational,
    times: &[T],
    polar: &Arc<PolarGrid<T>>,
) -> Result<Vec<(T, T)>> {
    let dim = polar.dim();
    if params.dim != dim {
        return Err(Error::InvalidParameter(format!(
            "Gaussian dimension {} differs from grid dimension {dim}",
            params.dim
        )));
    }
    check_decay_exponents(dim, a, b, gamma)?;
    let ag: T = from_ratio(a * gamma);
    let (ar, br, g): (T, T, T) = (from_ratio(a), from_ratio(b), from_ratio(gamma));
    times
        .iter()
        .map(|&t| {
            let required = params.support_radius(t);
            if required > polar.radius() {
                return Err(Error::UnresolvableTime {
                    t: t.to_f64_lossy(),
                    required: required.to_f64_lossy(),
                    available: polar.radius().to_f64_lossy(),
                });
            }
            if (polar.weight_exponent() - ag).abs() > T::lit(1e-12) * (T::one() + ag.abs()) {
                return Err(Error::WeightMismatch {
                    grid: polar.weight_exponent().to_f64_lossy(),
                    required: ag.to_f64_lossy(),
                });
            }
            let pf = PolarField::from_fn(polar.clone(), |x| gaussian_exact(params, x, t));
            Ok((t, mixed_norm(&pf, ar, br, g)?))
        })
        .collect()
}

/// Decay exponent `-n(1/2 - 1/a) - gamma` predicted for the weighted norm.
pub fn predicted_decay_slope(dim: usize, a: Rational, gamma: Rational) -> Rational {
    let n = Rational::from_integer(dim as i64);
    -(n * (Rational::new(1, 2) - a.recip())) - gamma
}

/// Least-squares slope of `decay_experiment` output.
pub fn decay_fit<T: Real>(samples: &[(T, T)]) -> Result<LineFit<T>> {
    fit_loglog(samples)
}
