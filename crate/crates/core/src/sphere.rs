//! Angular harmonic analysis: circle Fourier modes for `n = 2` and real
//! spherical harmonics for `n = 3`.
//!
//! Coefficients are stored flat. For `n = 2` index `m + l_max` holds the
//! mode `e^{i m theta}/sqrt(2 pi)`, `|m| <= l_max`. For `n = 3` index
//! `l^2 + l + m` holds `Y_{l m}`, `|m| <= l`, where
//! `Y_{l0} = P_l^0`, `Y_{lm} = sqrt 2 P_l^m cos(m phi)` and
//! `Y_{l,-m} = sqrt 2 P_l^m sin(m phi)` with orthonormalized Legendre
//! functions `P_l^m`.

use std::sync::Arc;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::grid::{AngularRule, PolarField, PolarGrid};
use crate::scalar::{abs2, Real};

/// Number of coefficients up to degree `l_max`.
pub fn coefficient_count(dim: usize, l_max: usize) -> usize {
    match dim {
        2 => 2 * l_max + 1,
        _ => (l_max + 1) * (l_max + 1),
    }
}

/// Flat index of `(l, m)` for `n = 3`.
#[inline]
pub fn sh_index(l: usize, m: i64) -> usize {
    ((l * l + l) as i64 + m) as usize
}

/// Degree `l` of flat coefficient `index`.
pub fn degree_of(dim: usize, l_max: usize, index: usize) -> usize {
    match dim {
        2 => (index as i64 - l_max as i64).unsigned_abs() as usize,
        _ => {
            let mut l = (index as f64).sqrt() as usize;
            while (l + 1) * (l + 1) <= index {
                l += 1;
            }
            while l * l > index {
                l -= 1;
            }
            l
        }
    }
}

/// Eigenvalue of `1 - Delta_omega` on degree `l` harmonics in `S^{n-1}`.
#[inline]
pub fn lambda_sq<T: Real>(dim: usize, l: usize) -> T {
    let l = T::from_usize_lossy(l);
    T::one() + l * (l + T::from_usize_lossy(dim) - T::lit(2.0))
}

/// Orthonormalized associated Legendre values `P_l^m(x)` for
/// `0 <= m <= l <= l_max`, flat by [`sh_index`] with `m >= 0`.
pub fn legendre_table<T: Real>(l_max: usize, x: T) -> Vec<T> {
    let mut out = vec![T::zero(); coefficient_count(3, l_max)];
    let s = (T::one() - x * x).max(T::zero()).sqrt();
    let mut pmm = T::one() / (T::lit(4.0) * T::PI()).sqrt();
    for m in 0..=l_max {
        if m > 0 {
            let mf = T::from_usize_lossy(m);
            pmm = pmm * s * ((T::lit(2.0) * mf + T::one()) / (T::lit(2.0) * mf)).sqrt();
        }
        out[sh_index(m, m as i64)] = pmm;
        if m == l_max {
            break;
        }
        let mf = T::from_usize_lossy(m);
        let mut prev2 = pmm;
        let mut prev = (T::lit(2.0) * mf + T::lit(3.0)).sqrt() * x * pmm;
        out[sh_index(m + 1, m as i64)] = prev;
        for l in (m + 2)..=l_max {
            let lf = T::from_usize_lossy(l);
            let a = ((T::lit(4.0) * lf * lf - T::one()) / (lf * lf - mf * mf)).sqrt();
            let l1 = lf - T::one();
            let b = ((l1 * l1 - mf * mf) / (T::lit(4.0) * l1 * l1 - T::one())).sqrt();
            let cur = a * (x * prev - b * prev2);
            out[sh_index(l, m as i64)] = cur;
            prev2 = prev;
            prev = cur;
        }
    }
    out
}

/// Real spherical harmonic `Y_{lm}` at polar angle `theta`, azimuth `phi`.
pub fn real_sph_harm<T: Real>(l: usize, m: i64, theta: T, phi: T) -> T {
    let table = legendre_table(l, theta.cos());
    let p = table[sh_index(l, m.abs())];
    let mf = T::lit(m.abs() as f64);
    match m.cmp(&0) {
        std::cmp::Ordering::Equal => p,
        std::cmp::Ordering::Greater => T::SQRT_2() * p * (mf * phi).cos(),
        std::cmp::Ordering::Less => T::SQRT_2() * p * (mf * phi).sin(),
    }
}

/// Precomputed analysis/synthesis for one angular rule and degree bound.
#[derive(Debug, Clone)]
pub struct AngularTransform<T> {
    dim: usize,
    l_max: usize,
    rule: AngularRule<T>,
    /// `n = 2`: `e^{-i m theta_j}` for each node and mode. `n = 3`:
    /// `cos(m phi_j)` and `sin(m phi_j)` for `m <= l_max`.
    cos_table: Vec<T>,
    sin_table: Vec<T>,
    /// Legendre tables per polar node (n = 3).
    legendre: Vec<Vec<T>>,
}

impl<T: Real> AngularTransform<T> {
    pub fn new(rule: &AngularRule<T>, l_max: usize) -> Result<Self> {
        let capacity = rule.degree_capacity();
        if l_max > capacity {
            return Err(Error::InsufficientResolution {
                requested: l_max,
                available: capacity,
            });
        }
        let dim = rule.dim();
        let count = if dim == 2 { rule.polar_count() } else { rule.azimuth_count() };
        let step = T::lit(2.0) * T::PI() / T::from_usize_lossy(count);
        let mut cos_table = Vec::with_capacity((l_max + 1) * count);
        let mut sin_table = Vec::with_capacity((l_max + 1) * count);
        for m in 0..=l_max {
            for j in 0..count {
                let angle = T::from_usize_lossy(m * j % count) * step;
                cos_table.push(angle.cos());
                sin_table.push(angle.sin());
            }
        }
        let legendre = if dim == 3 {
            rule.polar_cos().iter().map(|&x| legendre_table(l_max, x)).collect()
        } else {
            Vec::new()
        };
        Ok(Self {
            dim,
            l_max,
            rule: rule.clone(),
            cos_table,
            sin_table,
            legendre,
        })
    }

    pub fn l_max(&self) -> usize {
        self.l_max
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rule(&self) -> &AngularRule<T> {
        &self.rule
    }

    pub fn coefficient_count(&self) -> usize {
        coefficient_count(self.dim, self.l_max)
    }

    /// Coefficients of one angular row.
    pub fn forward(&self, values: &[Complex<T>]) -> Vec<Complex<T>> {
        let zero = Complex::new(T::zero(), T::zero());
        let mut out = vec![zero; self.coefficient_count()];
        if self.dim == 2 {
            let count = self.rule.polar_count();
            let w = T::lit(2.0) * T::PI() / T::from_usize_lossy(count);
            let norm = w / (T::lit(2.0) * T::PI()).sqrt();
            for m in 0..=self.l_max {
                let (c, s) = self.trig(m, count);
                let mut plus = zero;
                let mut minus = zero;
                for (j, v) in values.iter().enumerate() {
                    plus += v * Complex::new(c[j], -s[j]);
                    minus += v * Complex::new(c[j], s[j]);
                }
                out[self.l_max + m] = plus * norm;
                out[self.l_max - m] = minus * norm;
            }
            return out;
        }
        let n_phi = self.rule.azimuth_count();
        let dphi = T::lit(2.0) * T::PI() / T::from_usize_lossy(n_phi);
        let sqrt2 = T::SQRT_2();
        for (i, (&wt, table)) in self.rule.polar_weights().iter().zip(&self.legendre).enumerate() {
            let row = &values[i * n_phi..(i + 1) * n_phi];
            for m in 0..=self.l_max {
                let (c, s) = self.trig(m, n_phi);
                let mut ac = zero;
                let mut as_ = zero;
                for (j, v) in row.iter().enumerate() {
                    ac += v * c[j];
                    as_ += v * s[j];
                }
                let scale = wt * dphi;
                for l in m..=self.l_max {
                    let p = table[sh_index(l, m as i64)] * scale;
                    if m == 0 {
                        out[sh_index(l, 0)] += ac * p;
                    } else {
                        out[sh_index(l, m as i64)] += ac * (p * sqrt2);
                        out[sh_index(l, -(m as i64))] += as_ * (p * sqrt2);
                    }
                }
            }
        }
        out
    }

    /// Values at the angular nodes from coefficients.
    pub fn inverse(&self, coefficients: &[Complex<T>]) -> Vec<Complex<T>> {
        let zero = Complex::new(T::zero(), T::zero());
        let mut out = vec![zero; self.rule.len()];
        if self.dim == 2 {
            let count = self.rule.polar_count();
            let norm = T::one() / (T::lit(2.0) * T::PI()).sqrt();
            for m in 0..=self.l_max {
                let (c, s) = self.trig(m, count);
                let plus = coefficients[self.l_max + m] * norm;
                let minus = if m == 0 { zero } else { coefficients[self.l_max - m] * norm };
                for (j, v) in out.iter_mut().enumerate() {
                    *v += plus * Complex::new(c[j], s[j]) + minus * Complex::new(c[j], -s[j]);
                }
            }
            return out;
        }
        let n_phi = self.rule.azimuth_count();
        let sqrt2 = T::SQRT_2();
        for (i, table) in self.legendre.iter().enumerate() {
            let row = &mut out[i * n_phi..(i + 1) * n_phi];
            for m in 0..=self.l_max {
                let mut bc = zero;
                let mut bs = zero;
                for l in m..=self.l_max {
                    let p = table[sh_index(l, m as i64)];
                    bc += coefficients[sh_index(l, m as i64)] * p;
                    if m > 0 {
                        bs += coefficients[sh_index(l, -(m as i64))] * p;
                    }
                }
                let (c, s) = self.trig(m, n_phi);
                if m == 0 {
                    for v in row.iter_mut() {
                        *v += bc;
                    }
                } else {
                    for (j, v) in row.iter_mut().enumerate() {
                        *v += (bc * c[j] + bs * s[j]) * sqrt2;
                    }
                }
            }
        }
        out
    }

    fn trig(&self, m: usize, count: usize) -> (&[T], &[T]) {
        let r = m * count..(m + 1) * count;
        (&self.cos_table[r.clone()], &self.sin_table[r])
    }
}

/// Angular coefficients at every radial node of a polar grid.
#[derive(Debug, Clone, PartialEq)]
pub struct AngularSpectrum<T> {
    pub dim: usize,
    pub l_max: usize,
    /// One coefficient vector per radial node.
    pub rows: Vec<Vec<Complex<T>>>,
}

impl<T: Real> AngularSpectrum<T> {
    /// Degree of flat coefficient `index`.
    pub fn degree(&self, index: usize) -> usize {
        degree_of(self.dim, self.l_max, index)
    }

    /// `Lambda^s = (1 - Delta_omega)^{s/2}` applied to every row.
    pub fn lambda_power(&self, s: T) -> Self {
        let factors: Vec<T> = (0..coefficient_count(self.dim, self.l_max))
            .map(|i| lambda_sq::<T>(self.dim, self.degree(i)).powf(s / T::lit(2.0)))
            .collect();
        Self {
            rows: self
                .rows
                .iter()
                .map(|row| row.iter().zip(&factors).map(|(c, &f)| c * f).collect())
                .collect(),
            ..self.clone()
        }
    }

    /// `sum |c|^2` of one row.
    pub fn row_energy(&self, i: usize) -> T {
        self.rows[i].iter().map(|c| abs2(*c)).sum()
    }
}

/// Analysis of every radial row of a polar field.
pub fn angular_transform<T: Real>(field: &PolarField<T>, l_max: usize) -> Result<AngularSpectrum<T>> {
    let grid = field.grid();
    let transform = AngularTransform::new(grid.angular(), l_max)?;
    Ok(AngularSpectrum {
        dim: grid.dim(),
        l_max,
        rows: (0..grid.radial_len())
            .map(|i| transform.forward(field.row(i)))
            .collect(),
    })
}

/// Synthesis of a polar field from its angular spectrum.
pub fn inverse_angular_transform<T: Real>(
    spectrum: &AngularSpectrum<T>,
    grid: &Arc<PolarGrid<T>>,
) -> Result<PolarField<T>> {
    if spectrum.rows.len() != grid.radial_len() || spectrum.dim != grid.dim() {
        return Err(Error::InvalidParameter(
            "spectrum does not match polar grid".into(),
        ));
    }
    let transform = AngularTransform::new(grid.angular(), spectrum.l_max)?;
    let values = spectrum
        .rows
        .iter()
        .flat_map(|row| transform.inverse(row))
        .collect();
    PolarField::from_values(grid.clone(), values)
}
