//! Periodic Cartesian grids, fields, polar grids and polar resampling.

use std::sync::Arc;

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::fft::FftNd;
use crate::propagator::GaussianParams;
use crate::quadrature::{cached_gauss_jacobi, GaussRule};
use crate::scalar::{abs2, Real};

/// Point in `R^n`, `n <= 3`; unused trailing coordinates are zero.
pub type Point<T> = [T; 3];

/// Euclidean norm of the first `dim` coordinates.
#[inline]
pub fn norm<T: Real>(p: &Point<T>, dim: usize) -> T {
    p[..dim].iter().map(|&x| x * x).sum::<T>().sqrt()
}

#[inline]
pub fn dot<T: Real>(a: &Point<T>, b: &Point<T>, dim: usize) -> T {
    (0..dim).map(|i| a[i] * b[i]).sum()
}

/// Uniform periodic grid on `[-L, L)^n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CartesianGrid<T> {
    dim: usize,
    points: usize,
    half_width: T,
    spacing: T,
}

impl<T: Real> CartesianGrid<T> {
    pub fn new(dim: usize, points: usize, half_width: T) -> Result<Self> {
        if !(2..=3).contains(&dim) {
            return Err(Error::UnsupportedDimension(dim));
        }
        if points < 8 || !points.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(points));
        }
        if !(half_width > T::zero()) || !half_width.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "box half-width must be positive, got {half_width}"
            )));
        }
        let spacing = T::lit(2.0) * half_width / T::from_usize_lossy(points);
        Ok(Self {
            dim,
            points,
            half_width,
            spacing,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Points per axis.
    pub fn points(&self) -> usize {
        self.points
    }

    pub fn half_width(&self) -> T {
        self.half_width
    }

    pub fn spacing(&self) -> T {
        self.spacing
    }

    /// Total number of samples, `N^n`.
    pub fn len(&self) -> usize {
        self.points.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn cell_volume(&self) -> T {
        self.spacing.powi(self.dim as i32)
    }

    /// Coordinate of index `i` along any axis.
    #[inline]
    pub fn coordinate(&self, i: usize) -> T {
        -self.half_width + T::from_usize_lossy(i) * self.spacing
    }

    /// Angular wavenumber of FFT index `i` along any axis.
    #[inline]
    pub fn wavenumber(&self, i: usize) -> T {
        let k = if i < self.points / 2 {
            i as f64
        } else {
            i as f64 - self.points as f64
        };
        T::lit(k) * T::PI() / self.half_width
    }

    /// Nyquist wavenumber `pi / h`.
    pub fn nyquist(&self) -> T {
        T::PI() / self.spacing
    }

    #[inline]
    pub fn multi_index(&self, mut flat: usize) -> [usize; 3] {
        let mut out = [0usize; 3];
        for axis in (0..self.dim).rev() {
            out[axis] = flat % self.points;
            flat /= self.points;
        }
        out
    }

    #[inline]
    pub fn flat_index(&self, idx: &[usize; 3]) -> usize {
        idx[..self.dim].iter().fold(0, |acc, &i| acc * self.points + i)
    }

    #[inline]
    pub fn position(&self, flat: usize) -> Point<T> {
        let idx = self.multi_index(flat);
        let mut p = [T::zero(); 3];
        for axis in 0..self.dim {
            p[axis] = self.coordinate(idx[axis]);
        }
        p
    }

    /// `|xi|^2` at FFT index `flat`.
    #[inline]
    pub fn wavenumber_sq(&self, flat: usize) -> T {
        let idx = self.multi_index(flat);
        idx[..self.dim]
            .iter()
            .map(|&i| {
                let k = self.wavenumber(i);
                k * k
            })
            .sum()
    }
}

/// Complex samples on a [`CartesianGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct Field<T> {
    grid: CartesianGrid<T>,
    values: Vec<Complex<T>>,
}

impl<T: Real> Field<T> {
    pub fn zeros(grid: CartesianGrid<T>) -> Self {
        Self {
            grid,
            values: vec![Complex::new(T::zero(), T::zero()); grid.len()],
        }
    }

    pub fn from_values(grid: CartesianGrid<T>, values: Vec<Complex<T>>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidParameter(format!(
                "field has {} values, grid needs {}",
                values.len(),
                grid.len()
            )));
        }
        if values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidParameter("field contains non-finite values".into()));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn<F>(grid: CartesianGrid<T>, f: F) -> Self
    where
        F: Fn(&Point<T>) -> Complex<T>,
    {
        let values = (0..grid.len()).map(|i| f(&grid.position(i))).collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> &CartesianGrid<T> {
        &self.grid
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex<T>> {
        self.values
    }

    /// `||f||_{L^2}` by the (spectrally exact) trapezoid rule.
    pub fn l2_norm(&self) -> T {
        (self.values.iter().map(|z| abs2(*z)).sum::<T>() * self.grid.cell_volume()).sqrt()
    }

    /// `<f, g> = int f conj(g) dx`.
    pub fn inner(&self, other: &Field<T>) -> Complex<T> {
        debug_assert_eq!(self.grid, other.grid);
        let s: Complex<T> = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b.conj())
            .sum();
        s * self.grid.cell_volume()
    }

    /// `||f - g||_{L^2}`.
    pub fn l2_distance(&self, other: &Field<T>) -> T {
        (self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| abs2(a - b))
            .sum::<T>()
            * self.grid.cell_volume())
        .sqrt()
    }

    pub fn scaled(&self, c: Complex<T>) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|z| z * c).collect(),
        }
    }

    /// `self += c * other`.
    pub fn axpy(&mut self, c: Complex<T>, other: &Field<T>) {
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            *a += b * c;
        }
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().map(|z| z.norm()).fold(T::zero(), T::max)
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

/// Samples of `e^{i xi0 (x - x0)} e^{-a |x - x0|^2}` (unit amplitude).
pub fn gaussian_field<T: Real>(
    grid: CartesianGrid<T>,
    width: T,
    center: Point<T>,
    momentum: Point<T>,
) -> Result<Field<T>> {
    let params = GaussianParams::new(
        grid.dim(),
        width,
        center,
        momentum,
        Complex::new(T::one(), T::zero()),
    )?;
    Ok(params.sample(grid))
}

/// Random field whose Fourier coefficients are i.i.d. complex normals inside
/// the ball `|xi| <= band_fraction * pi / h`, normalized to unit `L^2` norm.
pub fn random_bandlimited_field<T: Real>(
    grid: CartesianGrid<T>,
    band_fraction: T,
    seed: u64,
) -> Result<Field<T>> {
    if !(band_fraction > T::zero() && band_fraction <= T::one()) {
        return Err(Error::InvalidParameter(format!(
            "band fraction must lie in (0, 1], got {band_fraction}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cutoff = band_fraction * grid.nyquist();
    let cutoff_sq = cutoff * cutoff;
    let mut values: Vec<Complex<T>> = (0..grid.len())
        .map(|i| {
            if grid.wavenumber_sq(i) <= cutoff_sq {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                Complex::new(T::lit(re), T::lit(im))
            } else {
                Complex::new(T::zero(), T::zero())
            }
        })
        .collect();
    FftNd::new(grid.dim(), grid.points()).inverse(&mut values);
    let mut field = Field::from_values(grid, values)?;
    let norm = field.l2_norm();
    if norm == T::zero() {
        return Err(Error::ZeroData);
    }
    field = field.scaled(Complex::new(T::one() / norm, T::zero()));
    Ok(field)
}

/// How the radial nodes of a [`PolarGrid`] are laid out.
#[derive(Debug, Clone, PartialEq)]
pub enum RadialLayout<T> {
    /// One Gauss–Jacobi panel on `(0, R]`, exact for the singular weight.
    GaussJacobi,
    /// Gauss–Jacobi on `(0, b_1]` followed by Gauss–Legendre panels on
    /// `[b_i, b_{i+1}]`; the breakpoints are fractions of `R` in `(0, 1)`.
    Panels(Vec<T>),
    /// Midpoint nodes; intended for sup-norms where weights are irrelevant.
    Uniform,
}

/// Quadrature on the unit sphere `S^{n-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct AngularRule<T> {
    dim: usize,
    directions: Vec<Point<T>>,
    weights: Vec<T>,
    /// `n = 2`: number of equispaced angles. `n = 3`: Gauss–Legendre nodes in
    /// `cos(theta)`.
    polar_count: usize,
    /// Equispaced azimuths (n = 3 only).
    azimuth_count: usize,
    polar_cos: Vec<T>,
    polar_weights: Vec<T>,
}

impl<T: Real> AngularRule<T> {
    /// Equispaced circle rule with `count` nodes.
    pub fn circle(count: usize) -> Result<Self> {
        if count == 0 {
            return Err(Error::InvalidParameter("empty angular rule".into()));
        }
        let step = T::lit(2.0) * T::PI() / T::from_usize_lossy(count);
        let directions = (0..count)
            .map(|m| {
                let th = step * T::from_usize_lossy(m);
                [th.cos(), th.sin(), T::zero()]
            })
            .collect();
        Ok(Self {
            dim: 2,
            directions,
            weights: vec![step; count],
            polar_count: count,
            azimuth_count: 1,
            polar_cos: Vec::new(),
            polar_weights: Vec::new(),
        })
    }

    /// Gauss–Legendre in `cos(theta)` times equispaced azimuth.
    pub fn sphere(polar_count: usize, azimuth_count: usize) -> Result<Self> {
        if polar_count == 0 || azimuth_count == 0 {
            return Err(Error::InvalidParameter("empty angular rule".into()));
        }
        let rule: Arc<GaussRule<T>> = cached_gauss_jacobi(polar_count, T::zero())?;
        let dphi = T::lit(2.0) * T::PI() / T::from_usize_lossy(azimuth_count);
        let mut directions = Vec::with_capacity(polar_count * azimuth_count);
        let mut weights = Vec::with_capacity(polar_count * azimuth_count);
        for (&c, &w) in rule.nodes.iter().zip(&rule.weights) {
            let s = (T::one() - c * c).max(T::zero()).sqrt();
            for j in 0..azimuth_count {
                let phi = dphi * T::from_usize_lossy(j);
                directions.push([s * phi.cos(), s * phi.sin(), c]);
                weights.push(w * dphi);
            }
        }
        Ok(Self {
            dim: 3,
            directions,
            weights,
            polar_count,
            azimuth_count,
            polar_cos: rule.nodes.clone(),
            polar_weights: rule.weights.clone(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    pub fn directions(&self) -> &[Point<T>] {
        &self.directions
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn polar_count(&self) -> usize {
        self.polar_count
    }

    pub fn azimuth_count(&self) -> usize {
        self.azimuth_count
    }

    pub fn polar_cos(&self) -> &[T] {
        &self.polar_cos
    }

    pub fn polar_weights(&self) -> &[T] {
        &self.polar_weights
    }

    /// Largest degree `l` whose harmonics are transformed exactly.
    pub fn degree_capacity(&self) -> usize {
        match self.dim {
            2 => (self.polar_count - 1) / 2,
            _ => (self.polar_count - 1).min((self.azimuth_count - 1) / 2),
        }
    }

    /// Surface measure `sigma_{n-1}`.
    pub fn surface_measure(&self) -> T {
        match self.dim {
            2 => T::lit(2.0) * T::PI(),
            _ => T::lit(4.0) * T::PI(),
        }
    }
}

/// Tensor grid of radial nodes times sphere nodes.
///
/// The radial weights already contain `rho^(n-1-r*gamma)`, so singular weights
/// are never sampled pointwise.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarGrid<T> {
    dim: usize,
    radius: T,
    weight_exponent: T,
    l_max: usize,
    layout: RadialLayout<T>,
    radial_nodes: Vec<T>,
    radial_weights: Vec<T>,
    angular: AngularRule<T>,
}

impl<T: Real> PolarGrid<T> {
    /// Gauss–Jacobi radial rule for `rho^(n-1-r_gamma) d rho` on `(0, R]` and
    /// an angular rule exact up to degree `2 * l_max`.
    pub fn new(dim: usize, radius: T, radial_count: usize, l_max: usize, r_gamma: T) -> Result<Self> {
        PolarGridBuilder::new(dim, radius)
            .radial_count(radial_count)
            .l_max(l_max)
            .weight_exponent(r_gamma)
            .build()
    }

    pub fn builder(dim: usize, radius: T) -> PolarGridBuilder<T> {
        PolarGridBuilder::new(dim, radius)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn radius(&self) -> T {
        self.radius
    }

    /// The `r * gamma` the radial weights were built for.
    pub fn weight_exponent(&self) -> T {
        self.weight_exponent
    }

    pub fn l_max(&self) -> usize {
        self.l_max
    }

    pub fn radial_nodes(&self) -> &[T] {
        &self.radial_nodes
    }

    pub fn radial_weights(&self) -> &[T] {
        &self.radial_weights
    }

    pub fn radial_len(&self) -> usize {
        self.radial_nodes.len()
    }

    pub fn angular(&self) -> &AngularRule<T> {
        &self.angular
    }

    pub fn layout(&self) -> &RadialLayout<T> {
        &self.layout
    }

    /// Number of nodes `radial x angular`.
    pub fn len(&self) -> usize {
        self.radial_nodes.len() * self.angular.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Cartesian position of node `(i, m)`.
    #[inline]
    pub fn node(&self, radial: usize, angular: usize) -> Point<T> {
        let rho = self.radial_nodes[radial];
        let w = self.angular.directions[angular];
        [rho * w[0], rho * w[1], rho * w[2]]
    }

    /// Same grid with every length multiplied by `radius / self.radius`.
    pub fn rescaled(&self, radius: T) -> Result<Self> {
        if !(radius > T::zero()) {
            return Err(Error::InvalidParameter("radius must be positive".into()));
        }
        let scale = radius / self.radius;
        let c = T::from_usize_lossy(self.dim - 1) - self.weight_exponent;
        let wscale = scale.powf(c + T::one());
        Ok(Self {
            radius,
            radial_nodes: self.radial_nodes.iter().map(|&r| r * scale).collect(),
            radial_weights: self.radial_weights.iter().map(|&w| w * wscale).collect(),
            ..self.clone()
        })
    }
}

/// Builder for [`PolarGrid`] with optional panels, uniform radial nodes and
/// oversampled angular rules.
#[derive(Debug, Clone)]
pub struct PolarGridBuilder<T> {
    dim: usize,
    radius: T,
    radial_count: usize,
    l_max: usize,
    weight_exponent: T,
    layout: RadialLayout<T>,
    angular_min: usize,
}

impl<T: Real> PolarGridBuilder<T> {
    pub fn new(dim: usize, radius: T) -> Self {
        Self {
            dim,
            radius,
            radial_count: 16,
            l_max: 8,
            weight_exponent: T::zero(),
            layout: RadialLayout::GaussJacobi,
            angular_min: 0,
        }
    }

    /// Radial nodes (per panel for [`RadialLayout::Panels`]).
    pub fn radial_count(mut self, count: usize) -> Self {
        self.radial_count = count;
        self
    }

    pub fn l_max(mut self, l_max: usize) -> Self {
        self.l_max = l_max;
        self
    }

    /// The product `r * gamma` defining `rho^(n-1-r*gamma)`.
    pub fn weight_exponent(mut self, r_gamma: T) -> Self {
        self.weight_exponent = r_gamma;
        self
    }

    pub fn layout(mut self, layout: RadialLayout<T>) -> Self {
        self.layout = layout;
        self
    }

    /// Breakpoints as absolute radii in `(0, R)`.
    pub fn breakpoints(mut self, radii: &[T]) -> Self {
        let fractions = radii.iter().map(|&b| b / self.radius).collect();
        self.layout = RadialLayout::Panels(fractions);
        self
    }

    /// Lower bound on the angular node count per direction (circle nodes for
    /// `n = 2`, polar nodes for `n = 3`), for sup-norms and non-polynomial
    /// integrands.
    pub fn angular_min(mut self, count: usize) -> Self {
        self.angular_min = count;
        self
    }

    pub fn build(self) -> Result<PolarGrid<T>> {
        let dim = self.dim;
        if !(2..=3).contains(&dim) {
            return Err(Error::UnsupportedDimension(dim));
        }
        if !(self.radius > T::zero()) || !self.radius.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "polar radius must be positive, got {}",
                self.radius
            )));
        }
        let n = T::from_usize_lossy(dim);
        if !(self.weight_exponent < n) {
            return Err(Error::NonIntegrableWeight {
                exponent: self.weight_exponent.to_f64_lossy(),
                dim,
            });
        }
        if self.radial_count == 0 {
            return Err(Error::InvalidParameter("radial rule needs nodes".into()));
        }
        let c = n - T::one() - self.weight_exponent;
        let radius = self.radius;
        let (radial_nodes, radial_weights) = match &self.layout {
            RadialLayout::GaussJacobi => singular_panel(self.radial_count, c, radius)?,
            RadialLayout::Panels(fractions) => {
                let mut edges: Vec<T> = fractions.iter().map(|&f| f * radius).collect();
                if edges
                    .iter()
                    .zip(edges.iter().skip(1))
                    .any(|(a, b)| !(a < b))
                    || edges.iter().any(|&b| !(b > T::zero() && b < radius))
                {
                    return Err(Error::InvalidParameter(
                        "breakpoints must increase strictly inside (0, R)".into(),
                    ));
                }
                edges.push(radius);
                let (mut nodes, mut weights) = singular_panel(self.radial_count, c, edges[0])?;
                let legendre = cached_gauss_jacobi::<T>(self.radial_count, T::zero())?;
                for pair in edges.windows(2) {
                    let panel = legendre.mapped(pair[0], pair[1]);
                    for (&x, &w) in panel.nodes.iter().zip(&panel.weights) {
                        nodes.push(x);
                        weights.push(w * x.powf(c));
                    }
                }
                (nodes, weights)
            }
            RadialLayout::Uniform => {
                let m = T::from_usize_lossy(self.radial_count);
                let step = radius / m;
                (0..self.radial_count)
                    .map(|i| {
                        let rho = (T::from_usize_lossy(i) + T::lit(0.5)) * step;
                        (rho, step * rho.powf(c))
                    })
                    .unzip()
            }
        };
        let angular = match dim {
            2 => AngularRule::circle((2 * self.l_max + 2).max(self.angular_min))?,
            _ => {
                let polar = (self.l_max + 1).max(self.angular_min);
                AngularRule::sphere(polar, (2 * self.l_max + 2).max(2 * polar))?
            }
        };
        Ok(PolarGrid {
            dim,
            radius,
            weight_exponent: self.weight_exponent,
            l_max: self.l_max,
            layout: self.layout,
            radial_nodes,
            radial_weights,
            angular,
        })
    }
}

fn singular_panel<T: Real>(count: usize, c: T, radius: T) -> Result<(Vec<T>, Vec<T>)> {
    let rule = cached_gauss_jacobi(count, c)?;
    let half = radius / T::lit(2.0);
    let scale = half.powf(c + T::one());
    Ok(rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&x, &w)| (half * (x + T::one()), w * scale))
        .unzip())
}

/// Samples `u(rho_i omega_m)`, stored radial-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarField<T> {
    grid: Arc<PolarGrid<T>>,
    values: Vec<Complex<T>>,
}

impl<T: Real> PolarField<T> {
    pub fn from_values(grid: Arc<PolarGrid<T>>, values: Vec<Complex<T>>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidParameter(format!(
                "polar field has {} values, grid needs {}",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, values })
    }

    /// Evaluates `f` at every node.
    pub fn from_fn<F>(grid: Arc<PolarGrid<T>>, f: F) -> Self
    where
        F: Fn(&Point<T>) -> Complex<T>,
    {
        let na = grid.angular.len();
        let values = (0..grid.len())
            .map(|k| f(&grid.node(k / na, k % na)))
            .collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> &Arc<PolarGrid<T>> {
        &self.grid
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.values
    }

    /// Angular samples at radial node `i`.
    pub fn row(&self, i: usize) -> &[Complex<T>] {
        let na = self.grid.angular.len();
        &self.values[i * na..(i + 1) * na]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [Complex<T>] {
        let na = self.grid.angular.len();
        &mut self.values[i * na..(i + 1) * na]
    }
}

/// Interpolation scheme used by [`sample_polar_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Interpolation {
    /// Tensor-product Lagrange interpolation on `order^n` neighbouring points.
    Local(usize),
    /// Exact trigonometric interpolation, `O(N^n)` per node.
    Spectral,
}

/// Resamples a Cartesian field on a polar grid with order-6 local
/// interpolation.
pub fn sample_polar<T: Real>(field: &Field<T>, polar: &Arc<PolarGrid<T>>) -> Result<PolarField<T>> {
    sample_polar_with(field, polar, Interpolation::Local(6))
}

pub fn sample_polar_with<T: Real>(
    field: &Field<T>,
    polar: &Arc<PolarGrid<T>>,
    scheme: Interpolation,
) -> Result<PolarField<T>> {
    let grid = field.grid();
    if grid.dim() != polar.dim() {
        return Err(Error::InvalidParameter(format!(
            "field dimension {} differs from polar grid dimension {}",
            grid.dim(),
            polar.dim()
        )));
    }
    let limit = grid.half_width() - T::lit(3.0) * grid.spacing();
    let na = polar.angular().len();
    for k in 0..polar.len() {
        let p = polar.node(k / na, k % na);
        if p[..grid.dim()].iter().any(|&x| x.abs() > limit) {
            return Err(Error::NodeOutsideBox {
                index: k,
                position: p[..grid.dim()].iter().map(|x| x.to_f64_lossy()).collect(),
                limit: limit.to_f64_lossy(),
            });
        }
    }
    let values = match scheme {
        Interpolation::Local(order) => {
            if order < 2 || order > grid.points() {
                return Err(Error::InvalidParameter(format!("interpolation order {order}")));
            }
            let interp = LocalInterpolator::new(field, order);
            (0..polar.len())
                .map(|k| interp.eval(&polar.node(k / na, k % na)))
                .collect()
        }
        Interpolation::Spectral => {
            let interp = SpectralInterpolator::new(field);
            (0..polar.len())
                .map(|k| interp.eval(&polar.node(k / na, k % na)))
                .collect()
        }
    };
    PolarField::from_values(polar.clone(), values)
}

/// Tensor Lagrange interpolation on a fixed stencil width.
pub struct LocalInterpolator<'a, T> {
    field: &'a Field<T>,
    order: usize,
}

impl<'a, T: Real> LocalInterpolator<'a, T> {
    pub fn new(field: &'a Field<T>, order: usize) -> Self {
        Self { field, order }
    }

    fn axis_stencil(&self, x: T) -> (usize, Vec<T>) {
        let grid = self.field.grid();
        let n = grid.points();
        let u = (x + grid.half_width()) / grid.spacing();
        let base = u.floor().to_f64_lossy() as i64;
        let half = (self.order as i64 - 1) / 2;
        let start = (base - half).clamp(0, (n - self.order) as i64) as usize;
        let t = u - T::from_usize_lossy(start);
        let weights = (0..self.order)
            .map(|j| {
                let mut w = T::one();
                for k in 0..self.order {
                    if k != j {
                        w *= (t - T::from_usize_lossy(k))
                            / (T::from_usize_lossy(j) - T::from_usize_lossy(k));
                    }
                }
                w
            })
            .collect();
        (start, weights)
    }

    pub fn eval(&self, p: &Point<T>) -> Complex<T> {
        let grid = self.field.grid();
        let n = grid.points();
        let values = self.field.values();
        let sx = self.axis_stencil(p[0]);
        let sy = self.axis_stencil(p[1]);
        let zero = Complex::new(T::zero(), T::zero());
        if grid.dim() == 2 {
            let mut acc = zero;
            for (a, &wx) in sx.1.iter().enumerate() {
                let row = (sx.0 + a) * n;
                let mut inner = zero;
                for (b, &wy) in sy.1.iter().enumerate() {
                    inner += values[row + sy.0 + b] * wy;
                }
                acc += inner * wx;
            }
            acc
        } else {
            let sz = self.axis_stencil(p[2]);
            let mut acc = zero;
            for (a, &wx) in sx.1.iter().enumerate() {
                let plane = (sx.0 + a) * n * n;
                let mut mid = zero;
                for (b, &wy) in sy.1.iter().enumerate() {
                    let row = plane + (sy.0 + b) * n;
                    let mut inner = zero;
                    for (c, &wz) in sz.1.iter().enumerate() {
                        inner += values[row + sz.0 + c] * wz;
                    }
                    mid += inner * wy;
                }
                acc += mid * wx;
            }
            acc
        }
    }
}

/// Evaluates the trigonometric interpolant of a field at arbitrary points.
pub struct SpectralInterpolator<T: Real> {
    grid: CartesianGrid<T>,
    coefficients: Vec<Complex<T>>,
}

impl<T: Real> SpectralInterpolator<T> {
    pub fn new(field: &Field<T>) -> Self {
        let grid = *field.grid();
        let mut coefficients = field.values().to_vec();
        FftNd::new(grid.dim(), grid.points()).forward(&mut coefficients);
        let scale = T::one() / T::from_usize_lossy(grid.len());
        for z in coefficients.iter_mut() {
            *z *= scale;
        }
        Self { grid, coefficients }
    }

    pub fn eval(&self, p: &Point<T>) -> Complex<T> {
        let n = self.grid.points();
        let dim = self.grid.dim();
        let tables: Vec<Vec<Complex<T>>> = (0..dim)
            .map(|axis| {
                let shifted = p[axis] + self.grid.half_width();
                (0..n)
                    .map(|i| {
                        let k = self.grid.wavenumber(i);
                        if i == n / 2 {
                            // Nyquist mode: symmetric cosine interpolant.
                            Complex::new((k * shifted).cos(), T::zero())
                        } else {
                            Complex::from_polar(T::one(), k * shifted)
                        }
                    })
                    .collect()
            })
            .collect();
        // Contract the last axis first.
        let mut current = self.coefficients.clone();
        for axis in (0..dim).rev() {
            let table = &tables[axis];
            current = current
                .chunks(n)
                .map(|line| line.iter().zip(table).map(|(a, b)| a * b).sum())
                .collect();
        }
        current[0]
    }
}
