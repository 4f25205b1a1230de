//! Small-data solutions of `i u_t + Delta u = lambda |x|^{-alpha} |u|^beta u`
//! on the periodic box: Picard iteration of the Duhamel map, Strang
//! split-step, the scaling symmetry and scattering diagnostics.

use std::sync::Arc;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::exponents::{holder_split, wellposed_exponents, Exponent};
use crate::grid::{sample_polar, CartesianGrid, Field, PolarField, PolarGrid};
use crate::mixed_norms::{mixed_norm, time_norm};
use crate::propagator::{Propagator, Trajectory};
use crate::scalar::{abs2, from_ratio, Real};
use crate::Rational;

/// Sign of the coupling `lambda`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Coupling {
    /// `lambda = +1`.
    Defocusing,
    /// `lambda = -1`.
    Focusing,
}

impl Coupling {
    pub fn from_sign(lambda: i64) -> Result<Self> {
        match lambda {
            1 => Ok(Coupling::Defocusing),
            -1 => Ok(Coupling::Focusing),
            _ => Err(Error::InvalidParameter(format!("lambda = {lambda} must be +1 or -1"))),
        }
    }

    pub fn sign(self) -> i64 {
        match self {
            Coupling::Defocusing => 1,
            Coupling::Focusing => -1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct INLSProblem<T: Real> {
    pub alpha: Rational,
    pub beta_nl: Rational,
    pub coupling: Coupling,
    pub u0: Field<T>,
    /// The weight is evaluated as `max(|x|, sigma_reg)^{-alpha}`.
    pub sigma_reg: T,
}

impl<T: Real> INLSProblem<T> {
    /// Mass-critical problem `beta = (4 - 2 alpha)/n` with `sigma_reg = h/2`.
    pub fn mass_critical(u0: Field<T>, alpha: Rational, coupling: Coupling) -> Result<Self> {
        let n = u0.grid().dim() as i64;
        let beta_nl = (Rational::from_integer(4) - alpha * 2) / n;
        let sigma_reg = u0.grid().spacing() / T::lit(2.0);
        let problem = Self {
            alpha,
            beta_nl,
            coupling,
            u0,
            sigma_reg,
        };
        problem.validate()?;
        Ok(problem)
    }

    pub fn with_beta(mut self, beta_nl: Rational) -> Result<Self> {
        self.beta_nl = beta_nl;
        self.validate()?;
        Ok(self)
    }

    pub fn with_sigma_reg(mut self, sigma_reg: T) -> Result<Self> {
        self.sigma_reg = sigma_reg;
        self.validate()?;
        Ok(self)
    }

    pub fn with_data(mut self, u0: Field<T>) -> Result<Self> {
        self.u0 = u0;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let zero = Rational::from_integer(0);
        if self.alpha <= zero || self.alpha >= Rational::from_integer(2) {
            return Err(Error::ConstraintViolation(format!(
                "alpha = {} violates 0 < alpha < 2",
                self.alpha
            )));
        }
        if self.beta_nl <= zero {
            return Err(Error::ConstraintViolation(format!(
                "beta = {} violates beta > 0",
                self.beta_nl
            )));
        }
        let h = self.grid().spacing();
        if !(self.sigma_reg >= T::zero()) || !(self.sigma_reg < h * T::lit(4.0)) {
            return Err(Error::InvalidParameter(format!(
                "sigma_reg = {} must lie in [0, 4h) with h = {h}",
                self.sigma_reg
            )));
        }
        if self.sigma_reg == T::zero() && self.grid().points().is_multiple_of(2) {
            // The origin is a grid node.
            return Err(Error::InvalidParameter(
                "sigma_reg = 0 leaves |x|^{-alpha} infinite at the origin node".into(),
            ));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.u0.grid().dim()
    }

    pub fn grid(&self) -> &CartesianGrid<T> {
        self.u0.grid()
    }

    pub fn lambda(&self) -> T {
        T::lit(self.coupling.sign() as f64)
    }

    /// Scaling exponent `(2 - alpha)/beta` of `u_delta`.
    pub fn scaling_exponent(&self) -> Rational {
        (Rational::from_integer(2) - self.alpha) / self.beta_nl
    }

    pub fn is_mass_critical(&self) -> bool {
        self.beta_nl * (self.dim() as i64) == Rational::from_integer(4) - self.alpha * 2
    }
}

/// Pointwise `lambda max(|x|, sigma)^{-alpha}` and the power `beta`.
#[derive(Debug, Clone)]
struct Nonlinearity<T> {
    weight: Vec<T>,
    beta: T,
}

impl<T: Real> Nonlinearity<T> {
    fn new(problem: &INLSProblem<T>) -> Self {
        let grid = problem.grid();
        let alpha: T = from_ratio(problem.alpha);
        let lambda = problem.lambda();
        let weight = (0..grid.len())
            .map(|i| {
                let x = grid.position(i);
                let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
                lambda * r.max(problem.sigma_reg).powf(-alpha)
            })
            .collect();
        Self {
            weight,
            beta: from_ratio(problem.beta_nl),
        }
    }

    fn apply(&self, values: &[Complex<T>]) -> Vec<Complex<T>> {
        let half_beta = self.beta / T::lit(2.0);
        values
            .iter()
            .zip(&self.weight)
            .map(|(&u, &w)| u * (w * abs2(u).powf(half_beta)))
            .collect()
    }

    /// `u <- e^{-i tau N(|u|)} u`.
    fn phase(&self, values: &mut [Complex<T>], tau: T) {
        let half_beta = self.beta / T::lit(2.0);
        for (u, &w) in values.iter_mut().zip(&self.weight) {
            let theta = -tau * w * abs2(*u).powf(half_beta);
            *u *= Complex::from_polar(T::one(), theta);
        }
    }
}

/// `lambda max(|x|, sigma_reg)^{-alpha} |u|^beta u`.
pub fn nonlinearity<T: Real>(field: &Field<T>, problem: &INLSProblem<T>) -> Result<Field<T>> {
    if field.grid() != problem.grid() {
        return Err(Error::InvalidParameter("field is not on the problem grid".into()));
    }
    Field::from_values(*field.grid(), Nonlinearity::new(problem).apply(field.values()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig<T> {
    pub horizon: T,
    pub dt: T,
    /// Picard stops once the metric distance falls below `picard_tol ||u0||`.
    pub picard_tol: T,
    pub max_iters: usize,
    /// Budget `N` for `sup_t ||u||_{L^2}`.
    pub n_budget: T,
    /// Budget `M` for the `L_t^2 L_rho^r L_omega^k` part of the metric.
    pub m_budget: T,
    /// Output keeps every `record_every`-th step.
    pub record_every: usize,
    /// The mixed part of the metric samples every `metric_every`-th step.
    pub metric_every: usize,
}

impl<T: Real> SolverConfig<T> {
    pub fn new(horizon: T, dt: T) -> Self {
        Self {
            horizon,
            dt,
            picard_tol: T::lit(1e-10),
            max_iters: 40,
            n_budget: T::one(),
            m_budget: T::one(),
            record_every: 1,
            metric_every: 10,
        }
    }

    /// Number of steps `T/dt`.
    pub fn steps(&self) -> Result<usize> {
        if !(self.dt > T::zero()) || !(self.horizon > T::zero()) {
            return Err(Error::InvalidParameter(format!(
                "horizon {} and dt {} must be positive",
                self.horizon, self.dt
            )));
        }
        let ratio = self.horizon / self.dt;
        let steps = ratio.round();
        if (ratio - steps).abs() > T::lit(1e-9) * ratio {
            return Err(Error::InvalidParameter(format!(
                "T/dt = {ratio} is not an integer"
            )));
        }
        let steps = steps.to_usize().unwrap_or(0);
        for (name, every) in [("record_every", self.record_every), ("metric_every", self.metric_every)] {
            if every == 0 || !steps.is_multiple_of(every) {
                return Err(Error::InvalidParameter(format!(
                    "{name} = {every} must divide the {steps} steps"
                )));
            }
        }
        Ok(steps)
    }

    fn validate(&self) -> Result<usize> {
        if !(self.n_budget > T::zero()) || !(self.m_budget > T::zero()) {
            return Err(Error::InvalidParameter("budgets must be positive".into()));
        }
        if !(self.picard_tol > T::zero()) || self.max_iters == 0 {
            return Err(Error::InvalidParameter(
                "picard_tol and max_iters must be positive".into(),
            ));
        }
        self.steps()
    }
}

/// Discrete analogue of `d(u, v) = sup_t ||u - v||_{L^2} + ||u - v||_{L_t^2 L_rho^r L_omega^k(|x|^{-r gamma})}`.
#[derive(Debug, Clone)]
pub struct PicardMetric<T: Real> {
    /// `None` when no well-posedness exponents exist (n = 2): sup part only.
    pub exponents: Option<MetricExponents<T>>,
    polar: Option<Arc<PolarGrid<T>>>,
    pub stride: usize,
    pub dt: T,
}

/// `(r, k, gamma = alpha/2)` and the dual pair `(r', k~')` of the Hölder step.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricExponents<T> {
    pub r: Exponent<i64>,
    pub k: Exponent<i64>,
    pub gamma: Rational,
    pub r_prime: Exponent<i64>,
    pub k_tilde_prime: Exponent<i64>,
    pub r_value: T,
    pub k_value: T,
    pub gamma_value: T,
}

impl<T: Real> PicardMetric<T> {
    pub fn new(problem: &INLSProblem<T>, config: &SolverConfig<T>) -> Result<Self> {
        let n = problem.dim() as u32;
        let exponents = if n >= 3 && problem.is_mass_critical() {
            let wp = wellposed_exponents(n, &problem.alpha)?;
            let k = Exponent::from_recip(wp.k_window.midpoint())?;
            let split = holder_split(n, &wp.r, &k, &wp.beta_nl)?;
            Some(MetricExponents {
                r_value: T::lit(wp.r.to_f64()),
                k_value: T::lit(k.to_f64()),
                gamma_value: from_ratio(wp.gamma),
                r: wp.r,
                k,
                gamma: wp.gamma,
                r_prime: split.r_prime,
                k_tilde_prime: split.k_tilde_prime,
            })
        } else {
            None
        };
        let polar = match &exponents {
            Some(e) => {
                let grid = problem.grid();
                let radius = (grid.half_width() - grid.spacing() * T::lit(3.0)) * T::lit(0.999);
                Some(Arc::new(
                    PolarGrid::builder(grid.dim(), radius)
                        .radial_count(32)
                        .l_max(8)
                        .weight_exponent(e.r_value * e.gamma_value)
                        .build()?,
                ))
            }
            None => None,
        };
        Ok(Self {
            exponents,
            polar,
            stride: config.metric_every,
            dt: config.dt,
        })
    }

    fn mixed_slice(&self, field: &Field<T>) -> Result<T> {
        match (&self.exponents, &self.polar) {
            (Some(e), Some(p)) => {
                mixed_norm(&sample_polar(field, p)?, e.r_value, e.k_value, e.gamma_value)
            }
            _ => Ok(T::zero()),
        }
    }

    /// `(sup_t ||u||_{L^2}, ||u||_{L_t^2 L_rho^r L_omega^k})` of the samples
    /// `u_i = f(i)`, `i = 0..=steps`.
    fn norms<F>(&self, steps: usize, f: F) -> Result<(T, T)>
    where
        F: Fn(usize) -> Field<T>,
    {
        let mut sup = T::zero();
        let mut mixed = Vec::new();
        for i in 0..=steps {
            let field = f(i);
            sup = sup.max(field.l2_norm());
            if self.exponents.is_some() && i % self.stride == 0 {
                mixed.push(self.mixed_slice(&field)?);
            }
        }
        let mixed = if mixed.is_empty() {
            T::zero()
        } else {
            time_norm(&mixed, self.dt * T::from_usize_lossy(self.stride), T::lit(2.0))?
        };
        Ok((sup, mixed))
    }

    /// Metric norm of a full-resolution trajectory `fields[0..=steps]`.
    pub fn size(&self, fields: &[Field<T>]) -> Result<(T, T)> {
        self.norms(fields.len() - 1, |i| fields[i].clone())
    }

    pub fn distance(&self, u: &[Field<T>], v: &[Field<T>]) -> Result<T> {
        let (sup, mixed) = self.norms(u.len() - 1, |i| {
            let mut d = u[i].clone();
            d.axpy(-Complex::new(T::one(), T::zero()), &v[i]);
            d
        })?;
        Ok(sup + mixed)
    }
}

/// Observed sizes compared with the contraction budgets `(N, M)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BudgetReport<T> {
    pub n_budget: T,
    pub m_budget: T,
    /// `sup_t ||u||_{L^2}` of the fixed point.
    pub sup_l2: T,
    /// `||u||_{L_t^2 L_rho^r L_omega^k(|x|^{-r gamma})}` of the fixed point.
    pub mixed: T,
    /// Same norm of the free evolution `e^{it Delta} u0`.
    pub free_mixed: T,
    /// `|| |x|^{-alpha} |u|^beta u ||_{L_t^2 L_rho^{r'} L_omega^{k~'}(|x|^{r' gamma})}`.
    pub nonlinear_dual: T,
    /// Hölder bound `sup_l2^beta * mixed` for `nonlinear_dual`.
    pub holder_bound: T,
    pub within_budget: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PicardLog<T> {
    /// `d_i = d(u^{(i)}, u^{(i-1)})`, `u^{(0)} = e^{it Delta} u0`.
    pub distances: Vec<T>,
    /// `(sup_t ||u^{(i)}||_{L^2}, mixed norm)` per iterate.
    pub sizes: Vec<(T, T)>,
    pub iterations: usize,
    /// `d(Phi(u), u)` at the returned fixed point.
    pub residual: T,
    pub budget: BudgetReport<T>,
}

impl<T: Real> PicardLog<T> {
    /// `d_{i+1} / d_i`.
    pub fn ratios(&self) -> Vec<T> {
        self.distances.windows(2).map(|w| w[1] / w[0]).collect()
    }
}

/// Discrete Duhamel map with cumulative trapezoid weights.
struct DuhamelMap<T: Real> {
    prop: Propagator<T>,
    nonlinear: Nonlinearity<T>,
    free_hat: Vec<Complex<T>>,
    dt: T,
    steps: usize,
}

impl<T: Real> DuhamelMap<T> {
    fn new(problem: &INLSProblem<T>, dt: T, steps: usize) -> Self {
        let prop = Propagator::new(*problem.grid());
        let free_hat = prop.spectrum(&problem.u0);
        Self {
            nonlinear: Nonlinearity::new(problem),
            prop,
            free_hat,
            dt,
            steps,
        }
    }

    fn time(&self, i: usize) -> T {
        self.dt * T::from_usize_lossy(i)
    }

    fn free(&self) -> Vec<Field<T>> {
        (0..=self.steps)
            .map(|i| self.prop.evolve_spectrum(&self.free_hat, self.time(i)))
            .collect()
    }

    /// `Phi(u)_i = e^{it_i Delta} u0 - i int_0^{t_i} e^{i(t_i - s) Delta} N(u(s)) ds`.
    fn apply(&self, u: &[Field<T>]) -> Vec<Field<T>> {
        let zero = Complex::new(T::zero(), T::zero());
        let half = self.dt / T::lit(2.0);
        let minus_i = Complex::new(T::zero(), -T::one());
        let mut acc = vec![zero; self.free_hat.len()];
        let mut prev: Option<Vec<Complex<T>>> = None;
        let mut out = Vec::with_capacity(u.len());
        for (i, field) in u.iter().enumerate() {
            let t = self.time(i);
            let mut g = self.nonlinear.apply(field.values());
            self.prop.fft().forward(&mut g);
            self.prop.apply_multiplier(&mut g, -t);
            if let Some(p) = &prev {
                for ((a, x), y) in acc.iter_mut().zip(p).zip(&g) {
                    *a += (x + y) * half;
                }
            }
            let hat: Vec<Complex<T>> = self
                .free_hat
                .iter()
                .zip(&acc)
                .map(|(f, a)| f + a * minus_i)
                .collect();
            out.push(self.prop.evolve_spectrum(&hat, t));
            prev = Some(g);
        }
        out
    }
}

fn downsample<T: Real>(fields: Vec<Field<T>>, every: usize, dt: T) -> Result<Trajectory<T>> {
    let kept = fields.into_iter().step_by(every).collect();
    Trajectory::new(T::zero(), dt * T::from_usize_lossy(every), kept)
}

fn nonlinear_dual_norm<T: Real>(
    problem: &INLSProblem<T>,
    metric: &PicardMetric<T>,
    fields: &[Field<T>],
) -> Result<T> {
    let (Some(e), Some(polar)) = (&metric.exponents, &metric.polar) else {
        return Ok(T::zero());
    };
    let r_prime = T::lit(e.r_prime.to_f64());
    let k_prime = T::lit(e.k_tilde_prime.to_f64());
    let gamma = e.gamma_value;
    // Positive weight |x|^{r' gamma} is the weight class -r' gamma.
    let dual_grid = Arc::new(
        PolarGrid::builder(polar.dim(), polar.radius())
            .radial_count(polar.radial_len())
            .l_max(polar.l_max())
            .weight_exponent(-r_prime * gamma)
            .build()?,
    );
    let alpha: T = from_ratio(problem.alpha);
    let half_beta: T = from_ratio::<T>(problem.beta_nl) / T::lit(2.0);
    let mut slices = Vec::new();
    for field in fields.iter().step_by(metric.stride) {
        let sampled = sample_polar(field, &dual_grid)?;
        let na = dual_grid.angular().len();
        let values = sampled
            .values()
            .iter()
            .enumerate()
            .map(|(idx, &u)| {
                let rho = dual_grid.radial_nodes()[idx / na];
                u * (rho.powf(-alpha) * abs2(u).powf(half_beta))
            })
            .collect();
        let f = PolarField::from_values(dual_grid.clone(), values)?;
        slices.push(mixed_norm(&f, r_prime, k_prime, -gamma)?);
    }
    time_norm(&slices, metric.dt * T::from_usize_lossy(metric.stride), T::lit(2.0))
}

/// Fixed point of the discretized Duhamel map.
pub fn picard_solve<T: Real>(
    problem: &INLSProblem<T>,
    config: &SolverConfig<T>,
) -> Result<(Trajectory<T>, PicardLog<T>)> {
    problem.validate()?;
    let steps = config.validate()?;
    let metric = PicardMetric::new(problem, config)?;
    let map = DuhamelMap::new(problem, config.dt, steps);
    let check_budget = |iteration: usize, (sup, mixed): (T, T)| -> Result<()> {
        if sup > config.n_budget || mixed > config.m_budget {
            return Err(Error::BudgetExceeded {
                iteration,
                detail: format!(
                    "sup L2 = {sup} (N = {}), mixed = {mixed} (M = {})",
                    config.n_budget, config.m_budget
                ),
            });
        }
        Ok(())
    };
    let free = map.free();
    let free_size = metric.size(&free)?;
    check_budget(0, free_size)?;
    let scale = problem.u0.l2_norm();
    let mut current = free;
    let mut distances = Vec::new();
    let mut sizes = vec![free_size];
    let mut converged = false;
    for iteration in 1..=config.max_iters {
        let next = map.apply(&current);
        let d = metric.distance(&next, &current)?;
        let size = metric.size(&next)?;
        check_budget(iteration, size)?;
        distances.push(d);
        sizes.push(size);
        current = next;
        if d <= config.picard_tol * scale {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::MaxIterations {
            iterations: config.max_iters,
            tol: (config.picard_tol * scale).to_f64_lossy(),
            last: distances.last().map_or(f64::NAN, |d| d.to_f64_lossy()),
        });
    }
    let residual = metric.distance(&map.apply(&current), &current)?;
    let (sup_l2, mixed) = *sizes.last().expect("at least the free iterate");
    let nonlinear_dual = nonlinear_dual_norm(problem, &metric, &current)?;
    let beta: T = from_ratio(problem.beta_nl);
    let budget = BudgetReport {
        n_budget: config.n_budget,
        m_budget: config.m_budget,
        sup_l2,
        mixed,
        free_mixed: free_size.1,
        nonlinear_dual,
        holder_bound: sup_l2.powf(beta) * mixed,
        within_budget: sup_l2 <= config.n_budget && mixed <= config.m_budget,
    };
    let log = PicardLog {
        iterations: distances.len(),
        distances,
        sizes,
        residual,
        budget,
    };
    Ok((downsample(current, config.record_every, config.dt)?, log))
}

/// Strang splitting: half nonlinear phase, free step, half nonlinear phase.
pub fn splitstep_solve<T: Real>(problem: &INLSProblem<T>, config: &SolverConfig<T>) -> Result<Trajectory<T>> {
    problem.validate()?;
    let steps = config.steps()?;
    let nonlinear = Nonlinearity::new(problem);
    let prop = Propagator::new(*problem.grid());
    let half = config.dt / T::lit(2.0);
    let mut u = problem.u0.values().to_vec();
    let mut kept = vec![problem.u0.clone()];
    for i in 1..=steps {
        nonlinear.phase(&mut u, half);
        prop.evolve_in_place(&mut u, config.dt);
        nonlinear.phase(&mut u, half);
        if i % config.record_every == 0 {
            kept.push(Field::from_values(*problem.grid(), u.clone())?);
        }
    }
    Trajectory::new(T::zero(), config.dt * T::from_usize_lossy(config.record_every), kept)
}

/// `sup_i ||u(t_i) - v(t_i)||_{L^2}` over common samples.
pub fn sup_distance<T: Real>(u: &Trajectory<T>, v: &Trajectory<T>) -> Result<T> {
    if u.len() != v.len() || u.grid() != v.grid() {
        return Err(Error::InvalidParameter("trajectories are not comparable".into()));
    }
    Ok(u
        .fields()
        .iter()
        .zip(v.fields())
        .map(|(a, b)| a.l2_distance(b))
        .fold(T::zero(), T::max))
}

/// `sup_i | ||u(t_i)||_{L^2} / ||u(0)||_{L^2} - 1 |`.
pub fn mass_drift<T: Real>(trajectory: &Trajectory<T>) -> T {
    let m0 = trajectory.field(0).l2_norm();
    trajectory
        .fields()
        .iter()
        .map(|f| (f.l2_norm() / m0 - T::one()).abs())
        .fold(T::zero(), T::max)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingReport<T> {
    pub delta: T,
    /// `(2 - alpha)/beta`.
    pub exponent: Rational,
    pub data_norm: T,
    pub rescaled_data_norm: T,
    /// `||u_{delta,0}|| - delta^{(2-alpha)/beta - n/2} ||u0||`.
    pub norm_defect: T,
    /// `sup_t ||u_delta(., t) - delta^{(2-alpha)/beta} u(delta ., delta^2 t)||_{L^2}`.
    pub symmetry_defect: T,
    /// `sup_t ||u_{dt} - u_{dt/2}||_{L^2}` of the unscaled solve.
    pub refinement_error: T,
}

/// Solves with `u0` and with `u_{delta,0}(x) = delta^{(2-alpha)/beta} u0(delta x)`.
///
/// The rescaled problem lives on the box of half-width `L/delta` with the
/// same node count, so `u0(delta x)` is sampled exactly; its regularization
/// radius, horizon and step are `sigma/delta`, `T/delta^2`, `dt/delta^2`.
pub fn scaling_check<T: Real>(
    problem: &INLSProblem<T>,
    config: &SolverConfig<T>,
    delta: T,
) -> Result<ScalingReport<T>> {
    if !(delta > T::zero()) || !delta.is_finite() {
        return Err(Error::InvalidParameter(format!("delta = {delta} must be positive")));
    }
    problem.validate()?;
    let grid = problem.grid();
    let exponent = problem.scaling_exponent();
    let a: T = from_ratio(exponent);
    let amp = delta.powf(a);
    let scaled_grid = CartesianGrid::new(grid.dim(), grid.points(), grid.half_width() / delta)?;
    let scaled_u0 = Field::from_values(
        scaled_grid,
        problem.u0.values().iter().map(|z| z * amp).collect(),
    )?;
    let scaled = INLSProblem {
        alpha: problem.alpha,
        beta_nl: problem.beta_nl,
        coupling: problem.coupling,
        u0: scaled_u0,
        sigma_reg: problem.sigma_reg / delta,
    };
    let d2 = delta * delta;
    let scaled_config = SolverConfig {
        horizon: config.horizon / d2,
        dt: config.dt / d2,
        ..*config
    };
    let u = splitstep_solve(problem, config)?;
    let u_delta = splitstep_solve(&scaled, &scaled_config)?;
    let symmetry_defect = u
        .fields()
        .iter()
        .zip(u_delta.fields())
        .map(|(orig, sc)| {
            let mapped =
                Field::from_values(scaled_grid, orig.values().iter().map(|z| z * amp).collect())
                    .expect("same node count");
            sc.l2_distance(&mapped)
        })
        .fold(T::zero(), T::max);
    let fine_config = SolverConfig {
        dt: config.dt / T::lit(2.0),
        record_every: config.record_every * 2,
        ..*config
    };
    let fine = splitstep_solve(problem, &fine_config)?;
    let refinement_error = sup_distance(&u, &fine)?;
    let data_norm = problem.u0.l2_norm();
    let rescaled_data_norm = scaled.u0.l2_norm();
    let n_half = T::from_usize_lossy(grid.dim()) / T::lit(2.0);
    Ok(ScalingReport {
        delta,
        exponent,
        data_norm,
        rescaled_data_norm,
        norm_defect: rescaled_data_norm - delta.powf(a - n_half) * data_norm,
        symmetry_defect,
        refinement_error,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScatterReport<T> {
    pub times: Vec<T>,
    /// `||u(t_i) - e^{it_i Delta} phi||_{L^2}`.
    pub deviations: Vec<T>,
    /// `||e^{-it_{i+1} Delta} u(t_{i+1}) - e^{-it_i Delta} u(t_i)||_{L^2}`.
    pub cauchy: Vec<T>,
    /// `phi = e^{-iT Delta} u(T)` at the last sample.
    pub phi: Field<T>,
}

impl<T: Real> ScatterReport<T> {
    pub fn cauchy_strictly_decreasing(&self) -> bool {
        self.cauchy.windows(2).all(|w| w[1] < w[0])
    }
}

pub fn scattering_diagnostic<T: Real>(trajectory: &Trajectory<T>, checkpoints: &[T]) -> Result<ScatterReport<T>> {
    if checkpoints.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidParameter("checkpoints must be increasing".into()));
    }
    let prop = Propagator::new(*trajectory.grid());
    let end = trajectory.end();
    let phi = prop.evolve(trajectory.field(trajectory.len() - 1), -end);
    let pulled = checkpoints
        .iter()
        .map(|&t| Ok(prop.evolve(trajectory.field(trajectory.index_of(t)?), -t)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ScatterReport {
        times: checkpoints.to_vec(),
        deviations: pulled.iter().map(|v| v.l2_distance(&phi)).collect(),
        cauchy: pulled.windows(2).map(|w| w[1].l2_distance(&w[0])).collect(),
        phi,
    })
}
