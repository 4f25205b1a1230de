//! Whitney decomposition of the cone `{(s, t) : s < t}` into dyadic squares
//! and the time-localized bilinear forms
//! `T_{j,Q}(F, G) = int_J int_I <e^{-is Delta} F(s), e^{-it Delta} G(t)> ds dt`.

use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exponents::{beta, k_range, ratio_to_f64, Exponent};
use crate::fit::{fit_line, LineFit};
use crate::grid::{PolarField, PolarGrid};
use crate::mixed_norms::mixed_norm;
use crate::propagator::{centered_pairing, time_weights, Propagator, TimeRule, Trajectory};
use crate::quadrature::cached_gauss_jacobi;
use crate::scalar::Real;
use crate::Rational;

/// `Q = I x J` with `I = [m 2^j, (m+1) 2^j)` and `J = [l 2^j, (l+1) 2^j)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DyadicSquare {
    pub j: i32,
    pub m: i64,
    pub l: i64,
}

impl DyadicSquare {
    pub fn side<T: Real>(&self) -> T {
        T::lit(2.0).powi(self.j)
    }

    /// `dist(I, J) / side = l - m - 1`.
    pub fn separation(&self) -> i64 {
        self.l - self.m - 1
    }

    pub fn distance<T: Real>(&self) -> T {
        T::lit(self.separation() as f64) * self.side::<T>()
    }

    pub fn i_interval<T: Real>(&self) -> (T, T) {
        let h = self.side::<T>();
        (T::lit(self.m as f64) * h, T::lit((self.m + 1) as f64) * h)
    }

    pub fn j_interval<T: Real>(&self) -> (T, T) {
        let h = self.side::<T>();
        (T::lit(self.l as f64) * h, T::lit((self.l + 1) as f64) * h)
    }

    /// Half-open containment of `(s, t)`.
    pub fn contains(&self, s: f64, t: f64) -> bool {
        let h = 2f64.powi(self.j);
        (s / h).floor() as i64 == self.m && (t / h).floor() as i64 == self.l
    }

    fn children(&self) -> [DyadicSquare; 4] {
        let (j, m, l) = (self.j - 1, 2 * self.m, 2 * self.l);
        [
            DyadicSquare { j, m, l },
            DyadicSquare { j, m, l: l + 1 },
            DyadicSquare { j, m: m + 1, l },
            DyadicSquare { j, m: m + 1, l: l + 1 },
        ]
    }
}

/// Whitney squares of `[0, S)^2 ∩ {s < t}` down to scale `2^{j_min}`.
///
/// Emitted squares satisfy `1 <= dist/side < 4`. Points with
/// `t - s >= 2^{j_min + 1}` lie in exactly one square; the rest of the cone
/// is covered by `unresolved`.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub j_top: i32,
    pub j_min: i32,
    pub squares: Vec<DyadicSquare>,
    pub unresolved: Vec<DyadicSquare>,
    /// Comparability constants `c1 <= dist/side < c2`.
    pub c1: i64,
    pub c2: i64,
    index: HashMap<DyadicSquare, usize>,
}

impl Decomposition {
    pub fn window(&self) -> f64 {
        2f64.powi(self.j_top)
    }

    /// Width of the diagonal strip left uncovered.
    pub fn strip_width(&self) -> f64 {
        2f64.powi(self.j_min + 1)
    }

    /// Index of the unique square containing `(s, t)`, found by descending
    /// the quadtree.
    pub fn locate(&self, s: f64, t: f64) -> Option<usize> {
        let top = self.window();
        if !(0.0..top).contains(&s) || !(0.0..top).contains(&t) {
            return None;
        }
        for j in (self.j_min..=self.j_top).rev() {
            let h = 2f64.powi(j);
            let m = (s / h).floor() as i64;
            let l = (t / h).floor() as i64;
            if l < m {
                return None;
            }
            if l - m >= 2 {
                return self.index.get(&DyadicSquare { j, m, l }).copied();
            }
        }
        None
    }

    /// Squares at scale `j`.
    pub fn at_scale(&self, j: i32) -> Vec<DyadicSquare> {
        self.squares.iter().copied().filter(|q| q.j == j).collect()
    }
}

pub fn whitney_decompose(window: f64, j_min: i32) -> Result<Decomposition> {
    if !(window > 0.0) || window.log2().fract() != 0.0 {
        return Err(Error::NotDyadic(window));
    }
    let j_top = window.log2() as i32;
    if j_top <= j_min {
        return Err(Error::InvalidParameter(format!(
            "finest scale {j_min} must lie below the window scale {j_top}"
        )));
    }
    let mut squares = Vec::new();
    let mut unresolved = Vec::new();
    let mut stack = vec![DyadicSquare { j: j_top, m: 0, l: 0 }];
    while let Some(q) = stack.pop() {
        let gap = q.l - q.m;
        if gap < 0 {
            continue;
        }
        if gap >= 2 {
            squares.push(q);
        } else if q.j > j_min {
            stack.extend(q.children());
        } else {
            unresolved.push(q);
        }
    }
    squares.sort();
    unresolved.sort();
    let index = squares.iter().enumerate().map(|(i, q)| (*q, i)).collect();
    Ok(Decomposition {
        j_top,
        j_min,
        squares,
        unresolved,
        c1: 1,
        c2: 4,
        index,
    })
}

/// `int_{s0}^{s1} e^{-is Delta} F(s) ds` in Fourier space.
fn backward_integral<T: Real>(
    prop: &Propagator<T>,
    traj: &Trajectory<T>,
    window: (T, T),
    rule: TimeRule,
) -> Result<Vec<Complex<T>>> {
    let i0 = traj.index_of(window.0)?;
    let i1 = traj.index_of(window.1)?;
    let weights = time_weights(i1.saturating_sub(i0), traj.step(), rule);
    let mut acc = vec![Complex::new(T::zero(), T::zero()); traj.grid().len()];
    for (k, &w) in weights.iter().enumerate() {
        let mut spec = prop.spectrum(traj.field(i0 + k));
        prop.apply_multiplier(&mut spec, -traj.time(i0 + k));
        for (a, s) in acc.iter_mut().zip(&spec) {
            *a += s * w;
        }
    }
    Ok(acc)
}

/// `int_{J} int_{I} <e^{-is Delta} F(s), e^{-it Delta} G(t)> ds dt` for any
/// pair of windows lying on both time grids.
pub fn bilinear_on_rectangle<T: Real>(
    f: &Trajectory<T>,
    i_window: (T, T),
    g: &Trajectory<T>,
    j_window: (T, T),
    rule: TimeRule,
) -> Result<Complex<T>> {
    if f.grid() != g.grid() {
        return Err(Error::InvalidParameter("trajectories live on different grids".into()));
    }
    let prop = Propagator::new(*f.grid());
    let a = backward_integral(&prop, f, i_window, rule)?;
    let b = backward_integral(&prop, g, j_window, rule)?;
    // Parseval for the unnormalized forward transform.
    let grid = f.grid();
    let scale = grid.cell_volume() / T::from_usize_lossy(grid.len());
    let s: Complex<T> = a.iter().zip(&b).map(|(x, y)| x * y.conj()).sum();
    Ok(s * scale)
}

/// `T_{j,Q}(F, G)`.
pub fn localized_bilinear<T: Real>(
    f: &Trajectory<T>,
    g: &Trajectory<T>,
    square: &DyadicSquare,
    rule: TimeRule,
) -> Result<Complex<T>> {
    bilinear_on_rectangle(f, square.i_interval(), g, square.j_interval(), rule)
}

/// `T_{j,Q}` for time-independent `F = e^{-p|x|^2}`, `G = e^{-q|x|^2}`, by
/// tensor Gauss–Legendre quadrature of the closed-form pairing.
pub fn stationary_gaussian_bilinear<T: Real>(
    p: T,
    q: T,
    dim: usize,
    square: &DyadicSquare,
    nodes: usize,
) -> Result<Complex<T>> {
    let rule = cached_gauss_jacobi::<T>(nodes, T::zero())?;
    let (s0, s1) = square.i_interval::<T>();
    let (t0, t1) = square.j_interval::<T>();
    let si = rule.mapped(s0, s1);
    let tj = rule.mapped(t0, t1);
    let mut acc = Complex::new(T::zero(), T::zero());
    for (&t, &wt) in tj.nodes.iter().zip(&tj.weights) {
        for (&s, &ws) in si.nodes.iter().zip(&si.weights) {
            acc += centered_pairing(p, q, t - s, dim) * (wt * ws);
        }
    }
    Ok(acc)
}

/// Inputs of the bilinear decay study.
#[derive(Debug, Clone)]
pub struct BilinearDecaySpec {
    pub dim: usize,
    pub gamma: Rational,
    pub a: Exponent<i64>,
    pub a_tilde: Exponent<i64>,
    pub b: Exponent<i64>,
    pub b_tilde: Exponent<i64>,
    pub j_min: i32,
    pub j_max: i32,
    /// Cap on squares sampled per scale.
    pub max_squares: usize,
    pub seed: u64,
    /// Gauss–Legendre nodes per time interval.
    pub time_nodes: usize,
    /// Gaussian widths `p` of `e^{-p|x|^2}`; `None` picks `2^{k/4}` covering
    /// the scales `2^{-j}` with margin.
    pub widths: Option<Vec<f64>>,
}

impl BilinearDecaySpec {
    pub fn new(
        dim: usize,
        gamma: Rational,
        a: Exponent<i64>,
        a_tilde: Exponent<i64>,
        b: Exponent<i64>,
        b_tilde: Exponent<i64>,
        j_min: i32,
        j_max: i32,
    ) -> Self {
        Self {
            dim,
            gamma,
            a,
            a_tilde,
            b,
            b_tilde,
            j_min,
            j_max,
            max_squares: 64,
            seed: 0,
            time_nodes: 12,
            widths: None,
        }
    }

    fn width_family(&self) -> Vec<f64> {
        match &self.widths {
            Some(w) => w.clone(),
            None => {
                let lo = -4 * self.j_max - 12;
                let hi = -4 * self.j_min + 12;
                (lo..=hi).map(|k| 2f64.powf(k as f64 / 4.0)).collect()
            }
        }
    }

    fn validate(&self) -> Result<()> {
        let n = self.dim as u32;
        if !(2..=3).contains(&self.dim) {
            return Err(Error::UnsupportedDimension(self.dim));
        }
        if self.j_min >= self.j_max {
            return Err(Error::InvalidParameter("empty scale range".into()));
        }
        let half = Rational::new(1, 2);
        for (name, a, b) in [("a", &self.a, &self.b), ("a~", &self.a_tilde, &self.b_tilde)] {
            if a.is_infinite() || *a.recip() > half {
                return Err(Error::ConstraintViolation(format!(
                    "{name} = {a} violates 2 <= {name} < inf"
                )));
            }
            let range = k_range(n, &self.gamma, a.recip());
            if !range.contains(b.recip()) {
                return Err(Error::ConstraintViolation(format!(
                    "1/b = {} for {name} = {a} outside {range}",
                    b.recip()
                )));
            }
        }
        Ok(())
    }
}

/// Largest normalized ratio found at one scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleSample<T> {
    pub j: i32,
    pub squares: usize,
    pub max_ratio: T,
    /// Widths `(p, q)` attaining the maximum.
    pub widths: (T, T),
}

#[derive(Debug, Clone, PartialEq)]
pub struct BilinearDecayReport<T> {
    pub scales: Vec<ScaleSample<T>>,
    /// Fit of `log2(max ratio)` against `j`.
    pub fit: LineFit<T>,
    pub beta: Rational,
    /// The bound predicts a slope of at most `-beta`.
    pub predicted_slope: Rational,
}

/// `|| e^{-p|x|^2} ||_{L_rho^{a'} L_omega^{b'}(|x|^{a' gamma})}` on a polar
/// grid scaled to the packet.
fn dual_norm<T: Real>(base: &PolarGrid<T>, p: T, a_dual: T, b_dual: T, gamma: T) -> Result<T> {
    let radius = (T::lit(40.0) / (a_dual * p)).sqrt();
    let grid = Arc::new(base.rescaled(radius)?);
    let field = PolarField::from_fn(grid, |x| {
        let r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
        Complex::new((-p * r2).exp(), T::zero())
    });
    // Positive weight |x|^{a' gamma} is the exponent -gamma.
    mixed_norm(&field, a_dual, b_dual, -gamma)
}

fn dual(e: &Exponent<i64>) -> f64 {
    1.0 / (1.0 - ratio_to_f64(e.recip()))
}

/// Normalized `max |T_{j,Q}| / (||F||_{L_t^2(I; ...)} ||G||_{L_t^2(J; ...)})`
/// over stationary Gaussian pairs and sampled squares, and its slope in `j`.
pub fn decay_slope_experiment<T: Real>(spec: &BilinearDecaySpec) -> Result<BilinearDecayReport<T>> {
    spec.validate()?;
    let n = spec.dim as u32;
    let gamma: T = T::lit(ratio_to_f64(&spec.gamma));
    let widths: Vec<T> = spec.width_family().into_iter().map(T::lit).collect();
    let (a_d, b_d) = (T::lit(dual(&spec.a)), T::lit(dual(&spec.b)));
    let (at_d, bt_d) = (T::lit(dual(&spec.a_tilde)), T::lit(dual(&spec.b_tilde)));
    let base_f = PolarGrid::builder(spec.dim, T::one())
        .radial_count(48)
        .l_max(0)
        .weight_exponent(-a_d * gamma)
        .build()?;
    let base_g = PolarGrid::builder(spec.dim, T::one())
        .radial_count(48)
        .l_max(0)
        .weight_exponent(-at_d * gamma)
        .build()?;
    let f_norms = widths
        .iter()
        .map(|&p| dual_norm(&base_f, p, a_d, b_d, gamma))
        .collect::<Result<Vec<T>>>()?;
    let g_norms = widths
        .iter()
        .map(|&p| dual_norm(&base_g, p, at_d, bt_d, gamma))
        .collect::<Result<Vec<T>>>()?;
    if f_norms.iter().chain(&g_norms).any(|&x| !(x > T::zero())) {
        return Err(Error::DegenerateNorm("zero data norm".into()));
    }
    let decomposition = whitney_decompose(2f64.powi(spec.j_max + 2), spec.j_min)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut memo: HashMap<(i32, i64), (T, (T, T))> = HashMap::new();
    let mut scales = Vec::new();
    for j in spec.j_min..=spec.j_max {
        let mut level = decomposition.at_scale(j);
        if level.is_empty() {
            return Err(Error::InvalidParameter(format!("no Whitney squares at scale {j}")));
        }
        level.shuffle(&mut rng);
        level.truncate(spec.max_squares);
        let mut best = (T::zero(), (T::zero(), T::zero()));
        for q in &level {
            let key = (q.j, q.l - q.m);
            if let std::collections::hash_map::Entry::Vacant(e) = memo.entry(key) {
                let side = q.side::<T>();
                let mut local = (T::zero(), (T::zero(), T::zero()));
                for (pi, &p) in widths.iter().enumerate() {
                    for (qi, &w) in widths.iter().enumerate() {
                        let t = stationary_gaussian_bilinear(p, w, spec.dim, q, spec.time_nodes)?;
                        // ||F||_{L_t^2(I)} = |I|^{1/2} ||f|| for stationary F.
                        let ratio = t.norm() / (side * f_norms[pi] * g_norms[qi]);
                        if ratio > local.0 {
                            local = (ratio, (p, w));
                        }
                    }
                }
                e.insert(local);
            }
            let v = memo[&key];
            if v.0 > best.0 {
                best = v;
            }
        }
        scales.push(ScaleSample {
            j,
            squares: level.len(),
            max_ratio: best.0,
            widths: best.1,
        });
    }
    let xs: Vec<T> = scales.iter().map(|s| T::lit(s.j as f64)).collect();
    let ys: Vec<T> = scales.iter().map(|s| s.max_ratio.log2()).collect();
    let fit = fit_line(&xs, &ys)?;
    let b = beta(&spec.a, &spec.a_tilde, n, &spec.gamma);
    Ok(BilinearDecayReport {
        scales,
        fit,
        predicted_slope: -b,
        beta: b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{random_bandlimited_field, CartesianGrid};
    use proptest::prelude::*;
    use rand::Rng;

    #[test]
    fn every_square_has_comparable_distance() {
        let d = whitney_decompose(1.0, -3).unwrap();
        assert!(!d.squares.is_empty());
        for q in &d.squares {
            let ratio = q.separation();
            assert!((d.c1..d.c2).contains(&ratio), "{q:?}");
        }
    }

    #[test]
    fn squares_are_interior_disjoint() {
        let d = whitney_decompose(1.0, -4).unwrap();
        for (i, a) in d.squares.iter().enumerate() {
            for b in &d.squares[i + 1..] {
                // Map both to the finer scale and compare index ranges.
                let (fine, coarse) = if a.j <= b.j { (a, b) } else { (b, a) };
                let k = 1i64 << (coarse.j - fine.j);
                let overlap_i = fine.m >= coarse.m * k && fine.m < (coarse.m + 1) * k;
                let overlap_j = fine.l >= coarse.l * k && fine.l < (coarse.l + 1) * k;
                assert!(!(overlap_i && overlap_j), "{a:?} overlaps {b:?}");
            }
        }
    }

    #[test]
    fn random_cone_points_are_located_uniquely() {
        let d = whitney_decompose(1.0, -5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let strip = d.strip_width();
        let mut checked = 0;
        while checked < 2000 {
            let s: f64 = rng.gen();
            let t: f64 = rng.gen();
            if t - s < strip {
                continue;
            }
            let hits: Vec<usize> = (0..d.squares.len()).filter(|&i| d.squares[i].contains(s, t)).collect();
            assert_eq!(hits.len(), 1, "({s}, {t})");
            assert_eq!(d.locate(s, t), Some(hits[0]));
            checked += 1;
        }
        assert_eq!(d.locate(0.7, 0.2), None);
    }

    #[test]
    fn rejects_non_dyadic_windows() {
        assert!(matches!(whitney_decompose(3.0, -2), Err(Error::NotDyadic(_))));
        assert!(whitney_decompose(1.0, 0).is_err());
        assert!(whitney_decompose(0.25, -4).is_ok());
    }

    fn free_pair() -> (Trajectory<f64>, Trajectory<f64>) {
        let g = CartesianGrid::<f64>::new(2, 16, 4.0).unwrap();
        let f0 = random_bandlimited_field(g, 0.5, 1).unwrap();
        let g0 = random_bandlimited_field(g, 0.5, 2).unwrap();
        (
            Trajectory::free(&f0, 0.0, 1.0 / 32.0, 64).unwrap(),
            Trajectory::free(&g0, 0.0, 1.0 / 32.0, 64).unwrap(),
        )
    }

    #[test]
    fn free_evolutions_collapse_to_initial_pairing() {
        let (f, g) = free_pair();
        let q = DyadicSquare { j: -2, m: 0, l: 3 };
        let got = localized_bilinear(&f, &g, &q, TimeRule::Trapezoid).unwrap();
        let want = f.field(0).inner(g.field(0)) * (0.25 * 0.25);
        assert!((got - want).norm() < 1e-12);
    }

    #[test]
    fn zero_source_and_conjugate_symmetry() {
        let (f, g) = free_pair();
        let zero = Trajectory::new(
            0.0,
            f.step(),
            vec![crate::grid::Field::zeros(*f.grid()); f.len()],
        )
        .unwrap();
        let q = DyadicSquare { j: -2, m: 1, l: 3 };
        assert_eq!(localized_bilinear(&f, &zero, &q, TimeRule::Simpson).unwrap().norm(), 0.0);
        let ab = bilinear_on_rectangle(&f, (0.25, 0.5), &g, (0.75, 1.0), TimeRule::Simpson).unwrap();
        let ba = bilinear_on_rectangle(&g, (0.75, 1.0), &f, (0.25, 0.5), TimeRule::Simpson).unwrap();
        assert!((ab - ba.conj()).norm() < 1e-12);
    }

    #[test]
    fn bilinear_in_both_arguments() {
        let (f, g) = free_pair();
        let q = DyadicSquare { j: -2, m: 0, l: 2 };
        let c = Complex::new(0.3, -2.0);
        let scaled = Trajectory::new(0.0, f.step(), f.fields().iter().map(|x| x.scaled(c)).collect()).unwrap();
        let base = localized_bilinear(&f, &g, &q, TimeRule::Simpson).unwrap();
        let left = localized_bilinear(&scaled, &g, &q, TimeRule::Simpson).unwrap();
        let right = localized_bilinear(&f, &scaled, &q, TimeRule::Simpson).unwrap();
        assert!((left - base * c).norm() < 1e-10);
        let fg = localized_bilinear(&f, &f, &q, TimeRule::Simpson).unwrap();
        assert!((right - fg * c.conj()).norm() < 1e-10);
    }

    #[test]
    fn trapezoid_bilinear_converges_at_second_order() {
        // Stationary data make the integrand the nonconstant pairing K(t - s).
        let g = CartesianGrid::<f64>::new(2, 32, 6.0).unwrap();
        let f0 = crate::grid::gaussian_field(g, 1.0, [0.0; 3], [0.0; 3]).unwrap();
        let q = DyadicSquare { j: -1, m: 0, l: 2 };
        let value = |steps: usize| {
            let dt = 2.0 / steps as f64;
            let traj = Trajectory::new(0.0, dt, vec![f0.clone(); steps + 1]).unwrap();
            localized_bilinear(&traj, &traj, &q, TimeRule::Trapezoid).unwrap()
        };
        let (a, b, c) = (value(16), value(32), value(64));
        let ratio = (a - b).norm() / (b - c).norm();
        assert!((ratio - 4.0).abs() < 0.2, "ratio {ratio}");
    }

    #[test]
    fn closed_form_bilinear_matches_grid_evaluation() {
        let g = CartesianGrid::<f64>::new(2, 64, 10.0).unwrap();
        let f0 = crate::grid::gaussian_field(g, 1.0, [0.0; 3], [0.0; 3]).unwrap();
        let g0 = crate::grid::gaussian_field(g, 0.5, [0.0; 3], [0.0; 3]).unwrap();
        let q = DyadicSquare { j: -1, m: 0, l: 2 };
        let steps = 128;
        let dt = 2.0 / steps as f64;
        let ft = Trajectory::new(0.0, dt, vec![f0; steps + 1]).unwrap();
        let gt = Trajectory::new(0.0, dt, vec![g0; steps + 1]).unwrap();
        let grid_value = localized_bilinear(&ft, &gt, &q, TimeRule::Simpson).unwrap();
        let closed = stationary_gaussian_bilinear(1.0, 0.5, 2, &q, 16).unwrap();
        assert!((grid_value - closed).norm() < 1e-8 * closed.norm());
    }

    #[test]
    fn dual_norm_matches_gamma_closed_form() {
        // int rho^{a'gamma} e^{-a' p rho^2} rho^{n-1} d rho
        //   = Gamma(s/2) / (2 (a' p)^{s/2}),  s = n + a' gamma.
        let (n, a_d, b_d, gamma, p) = (3usize, 1.5f64, 1.5f64, 0.5f64, 0.7f64);
        let base = PolarGrid::builder(n, 1.0)
            .radial_count(48)
            .l_max(0)
            .weight_exponent(-a_d * gamma)
            .build()
            .unwrap();
        let got = dual_norm(&base, p, a_d, b_d, gamma).unwrap();
        let s = n as f64 + a_d * gamma;
        let radial = statrs::function::gamma::gamma(s / 2.0) / (2.0 * (a_d * p).powf(s / 2.0));
        let want = (4.0 * std::f64::consts::PI).powf(1.0 / b_d) * radial.powf(1.0 / a_d);
        assert!((got / want - 1.0).abs() < 1e-10);
    }

    #[test]
    fn invalid_exponents_are_rejected() {
        let e = |p| Exponent::integer(p).unwrap();
        let mut spec = BilinearDecaySpec::new(3, Rational::new(1, 2), e(2), e(2), e(9), e(2), -2, 1);
        assert!(matches!(
            decay_slope_experiment::<f64>(&spec),
            Err(Error::ConstraintViolation(_))
        ));
        spec.b = e(2);
        spec.a = Exponent::infinity();
        assert!(decay_slope_experiment::<f64>(&spec).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn decompositions_respect_the_contract(window_exp in -2i32..3, depth in 1i32..6) {
            let d = whitney_decompose(2f64.powi(window_exp), window_exp - depth).unwrap();
            for q in &d.squares {
                prop_assert!((1..4).contains(&q.separation()));
                prop_assert!(q.j >= d.j_min && q.j < d.j_top);
            }
            for q in &d.unresolved {
                prop_assert_eq!(q.j, d.j_min);
                prop_assert!((0..2).contains(&(q.l - q.m)));
            }
        }
    }
}
