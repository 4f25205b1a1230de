//! Argument schemas and runners of the nine experiments.

use std::sync::Arc;

use clap::Args;
use dlab_core::estimator::{
    eccentricity_trend, quotient_sweep, resolution_trend, DataFamily, FamilyKind, QuotientSettings, QuotientSpec,
};
use dlab_core::exponents::{endpoint_inv_r, endpoint_region, k_range, region_vertices, Exponent};
use dlab_core::grid::{gaussian_field, CartesianGrid, PolarGrid};
use dlab_core::inls::{
    mass_drift, picard_solve, scaling_check, scattering_diagnostic, splitstep_solve, sup_distance, Coupling,
    INLSProblem, SolverConfig,
};
use dlab_core::mixed_norms::embedding_sweep;
use dlab_core::propagator::{decay_experiment, decay_fit, predicted_decay_slope, GaussianParams, Trajectory};
use dlab_core::whitney::{decay_slope_experiment, whitney_decompose, BilinearDecaySpec};
use dlab_core::{Complex64, Rational};
use serde::{Deserialize, Serialize};

use crate::config::{Ex, Params, Q};
use crate::csv::{Cell, Table};
use crate::CliError;

/// Names accepted on the command line, in listing order.
pub const EXPERIMENTS: [&str; 9] = [
    "region",
    "decay",
    "embedding",
    "whitney",
    "bilinear-decay",
    "quotient",
    "inls",
    "scatter",
    "scaling",
];

/// Output of one experiment.
#[derive(Debug, Default)]
pub struct Run {
    pub params: Params,
    pub tables: Vec<Table>,
    pub summary: Vec<String>,
}

macro_rules! row {
    ($($x:expr),* $(,)?) => { vec![$(Cell::from($x)),*] };
}

fn q(r: Rational) -> Q {
    Q(r)
}

fn ex(e: Exponent<i64>) -> Ex {
    Ex(e)
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct RegionArgs {
    /// Space dimension (>= 3).
    #[arg(long)]
    pub n: Option<u32>,
    /// Weight exponent gamma in [0, 1], as p/q.
    #[arg(long)]
    pub gamma: Option<Q>,
    /// Radial exponent of a point to classify.
    #[arg(long)]
    pub r: Option<Ex>,
    /// Angular exponent of a point to classify.
    #[arg(long)]
    pub k: Option<Ex>,
    /// Time exponent; adds tetrahedron membership.
    #[arg(long)]
    pub q: Option<Ex>,
}

pub fn region(a: &RegionArgs) -> Result<Run, CliError> {
    let mut p = Params::default();
    let n = p.take("n", &a.n, 3);
    let gamma = p.take("gamma", &a.gamma, q(Rational::new(1, 2))).0;
    if gamma < Rational::from_integer(0) || gamma > Rational::from_integer(1) {
        return Err(CliError::Validation(format!(
            "constraint violated: gamma = {gamma} violates 0 <= gamma <= 1"
        )));
    }
    let v = region_vertices::<i64>(n)?;
    let mut vertices = Table::new("region_vertices", &["vertex", "inv_q", "inv_r", "inv_k", "derived"]);
    for vx in v.planar() {
        let inv_q = if matches!(vx.name, 'A' | 'D' | 'E') {
            Cell::from(Rational::new(1, 2))
        } else {
            Cell::from("")
        };
        vertices.push(vec![
            Cell::from(vx.name.to_string()),
            inv_q,
            Cell::from(vx.inv_r),
            Cell::from(vx.inv_k),
            Cell::from(vx.derived),
        ]);
    }
    vertices.push(row!["F", v.f[0], v.f[1], v.f[2], false]);
    let inv_r = endpoint_inv_r(n, &gamma);
    let range = k_range(n, &gamma, &inv_r);
    let mut ranges = Table::new(
        "region_k_range",
        &["gamma", "inv_r", "inv_k_lo", "inv_k_hi", "lo_open", "hi_open"],
    );
    ranges.push(row![gamma, inv_r, range.lo, range.hi, range.lo_open, range.hi_open]);
    let mut run = Run {
        summary: vec![
            format!(
                "n = {n}: A = ({}, {}), D = ({}, {}), E = ({}, {})",
                v.a.inv_r, v.a.inv_k, v.d.inv_r, v.d.inv_k, v.e.inv_r, v.e.inv_k
            ),
            format!("gamma = {gamma}: 1/r = {inv_r}, 1/k in {range}"),
        ],
        ..Run::default()
    };
    match (&a.r, &a.k) {
        (Some(r), Some(k)) => {
            p.record("r", r);
            p.record("k", k);
            let mut report = endpoint_region(n, &gamma, &r.0, &k.0)?;
            if let Some(time) = &a.q {
                p.record("q", time);
                report = report.with_time_exponent(&time.0);
            }
            let join = |cs: &[dlab_core::exponents::Constraint]| {
                cs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join("; ")
            };
            let mut m = Table::new(
                "region_membership",
                &[
                    "inv_r",
                    "inv_k",
                    "in_triangle",
                    "in_data_region",
                    "in_quadrangle",
                    "in_quadrangle_interior_r",
                    "in_tetrahedron",
                    "violated",
                    "active",
                ],
            );
            m.push(vec![
                Cell::from(report.inv_r),
                Cell::from(report.inv_k),
                Cell::from(report.in_triangle),
                Cell::from(report.in_data_region),
                Cell::from(report.in_quadrangle),
                Cell::from(report.in_quadrangle_interior_r),
                report.in_tetrahedron.map_or(Cell::from(""), Cell::from),
                Cell::from(join(&report.violated)),
                Cell::from(join(&report.active)),
            ]);
            run.summary.push(match report.binding() {
                None => "point lies in the closed triangle AED".to_string(),
                Some(c) => format!("point lies outside the triangle; binding constraint: {c}"),
            });
            run.tables.push(m);
        }
        (None, None) => {}
        _ => return Err(CliError::Validation("--r and --k must be given together".into())),
    }
    run.tables.insert(0, vertices);
    run.tables.insert(1, ranges);
    run.params = p;
    Ok(run)
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct DecayArgs {
    #[arg(long)]
    pub n: Option<usize>,
    /// Radial exponent a.
    #[arg(long)]
    pub a: Option<Q>,
    /// Angular exponent b.
    #[arg(long)]
    pub b: Option<Q>,
    #[arg(long)]
    pub gamma: Option<Q>,
    /// Gaussian datum exp(-width |x|^2).
    #[arg(long)]
    pub width: Option<f64>,
    #[arg(long)]
    pub t_min: Option<f64>,
    #[arg(long)]
    pub t_max: Option<f64>,
    /// Number of log-spaced times.
    #[arg(long)]
    pub times: Option<usize>,
    #[arg(long)]
    pub radial: Option<usize>,
    #[arg(long)]
    pub l_max: Option<usize>,
}

pub fn decay(a: &DecayArgs) -> Result<Run, CliError> {
    let mut p = Params::default();
    let n = p.take("n", &a.n, 3);
    let ea = p.take("a", &a.a, q(Rational::from_integer(2))).0;
    let eb = p.take("b", &a.b, q(Rational::from_integer(2))).0;
    let gamma = p.take("gamma", &a.gamma, q(Rational::new(1, 2))).0;
    let width = p.take("width", &a.width, 0.5);
    let t_min = p.take("t-min", &a.t_min, 4.0);
    let t_max = p.take("t-max", &a.t_max, 32.0);
    let count = p.take("times", &a.times, 13);
    let radial = p.take("radial", &a.radial, 64);
    let l_max = p.take("l-max", &a.l_max, 2);
    if !(t_min > 0.0 && t_max > t_min) || count < 2 {
        return Err(CliError::Validation("need 0 < t-min < t-max and at least 2 times".into()));
    }
    dlab_core::propagator::check_decay_exponents(n, ea, eb, gamma)?;
    let params = GaussianParams::centered(n, width)?;
    let times: Vec<f64> = (0..count)
        .map(|i| t_min * (t_max / t_min).powf(i as f64 / (count - 1) as f64))
        .collect();
    let radius = params.support_radius(t_max) * 1.01;
    let weight = dlab_core::exponents::ratio_to_f64(&(ea * gamma));
    let polar = Arc::new(PolarGrid::new(n, radius, radial, l_max, weight)?);
    let samples = decay_experiment(&params, ea, eb, gamma, &times, &polar)?;
    let fit = decay_fit(&samples)?;
    let predicted = predicted_decay_slope(n, ea, gamma);
    let mut t = Table::new("decay", &["t", "norm", "fitted_slope", "predicted_slope", "r_squared"]);
    for (time, norm) in &samples {
        t.push(row![*time, *norm, fit.slope, predicted, fit.r_squared]);
    }
    Ok(Run {
        params: p,
        tables: vec![t],
        summary: vec![format!(
            "fitted slope {:.6} (predicted {predicted}), R^2 = {:.6}",
            fit.slope, fit.r_squared
        )],
    })
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct EmbeddingArgs {
    #[arg(long)]
    pub n: Option<usize>,
    /// Lebesgue exponent p in [2, inf).
    #[arg(long)]
    pub p: Option<f64>,
    /// Harmonic degree caps, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub l_max: Option<Vec<usize>>,
    #[arg(long)]
    pub samples: Option<usize>,
    /// Coefficient envelope (1 + l(l+n-2))^{-decay/2}.
    #[arg(long)]
    pub decay: Option<f64>,
}

pub fn embedding(a: &EmbeddingArgs, seed: u64) -> Result<Run, CliError> {
    let mut p = Params::default();
    let n = p.take("n", &a.n, 3);
    let pe = p.take("p", &a.p, 4.0);
    let caps = p.take("l-max", &a.l_max, vec![16, 32]);
    let samples = p.take("samples", &a.samples, 200);
    let envelope = p.take("decay", &a.decay, 2.0);
    let mut all = Table::new("embedding", &["l_max", "sample", "ratio"]);
    let mut summary = Table::new("embedding_summary", &["l_max", "max", "median", "relative_change"]);
    let mut lines = Vec::new();
    let mut previous: Option<f64> = None;
    for &l in &caps {
        let sweep = embedding_sweep(n, pe, l, samples, envelope, seed)?;
        for (i, r) in sweep.ratios.iter().enumerate() {
            all.push(row![l, i, *r]);
        }
        let change = previous.map_or(f64::NAN, |m| sweep.max / m - 1.0);
        summary.push(row![l, sweep.max, sweep.median, change]);
        lines.push(format!("l_max {l}: max {:.6}, median {:.6}", sweep.max, sweep.median));
        previous = Some(sweep.max);
    }
    Ok(Run {
        params: p,
        tables: vec![all, summary],
        summary: lines,
    })
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct WhitneyArgs {
    /// Window S, a power of two.
    #[arg(long)]
    pub window: Option<f64>,
    /// Finest scale exponent.
    #[arg(long, allow_hyphen_values = true)]
    pub j_min: Option<i32>,
}

pub fn whitney(a: &WhitneyArgs) -> Result<Run, CliError> {
    let mut p = Params::default();
    let window = p.take("window", &a.window, 1.0);
    let j_min = p.take("j-min", &a.j_min, -6);
    let d = whitney_decompose(window, j_min)?;
    let mut t = Table::new(
        "whitney",
        &["kind", "j", "m", "l", "side", "s_lo", "s_hi", "t_lo", "t_hi", "dist_over_side"],
    );
    for (kind, squares) in [("whitney", &d.squares), ("strip", &d.unresolved)] {
        for sq in squares.iter() {
            let (s0, s1) = sq.i_interval::<f64>();
            let (t0, t1) = sq.j_interval::<f64>();
            t.push(row![kind, sq.j, sq.m, sq.l, sq.side::<f64>(), s0, s1, t0, t1, sq.separation()]);
        }
    }
    let ok = d.squares.iter().all(|s| (d.c1..d.c2).contains(&s.separation()));
    Ok(Run {
        params: p,
        tables: vec![t],
        summary: vec![format!(
            "{} squares, {} strip squares of side 2^{j_min}; {} <= dist/side < {}: {ok}",
            d.squares.len(),
            d.unresolved.len(),
            d.c1,
            d.c2
        )],
    })
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct BilinearDecayArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub gamma: Option<Q>,
    /// Defaults to the endpoint exponent r.
    #[arg(long)]
    pub a: Option<Ex>,
    /// Defaults to a.
    #[arg(long)]
    pub a_tilde: Option<Ex>,
    /// Defaults to the midpoint of the k range of a.
    #[arg(long)]
    pub b: Option<Ex>,
    #[arg(long)]
    pub b_tilde: Option<Ex>,
    #[arg(long, allow_hyphen_values = true)]
    pub j_min: Option<i32>,
    #[arg(long, allow_hyphen_values = true)]
    pub j_max: Option<i32>,
    /// Squares sampled per scale.
    #[arg(long)]
    pub max_squares: Option<usize>,
    /// Gauss-Legendre nodes per time interval.
    #[arg(long)]
    pub time_nodes: Option<usize>,
}

pub fn bilinear_decay(a: &BilinearDecayArgs, seed: u64) -> Result<Run, CliError> {
    let mut p = Params::default();
    let n = p.take("n", &a.n, 3);
    let gamma = p.take("gamma", &a.gamma, q(Rational::new(1, 2))).0;
    let endpoint = Exponent::from_recip(endpoint_inv_r(n as u32, &gamma))?;
    let ea = p.take("a", &a.a, ex(endpoint)).0;
    let eat = p.take("a-tilde", &a.a_tilde, ex(ea.clone())).0;
    let mid = |e: &Exponent<i64>| Exponent::from_recip(k_range(n as u32, &gamma, e.recip()).midpoint());
    let eb = p.take("b", &a.b, ex(mid(&ea)?)).0;
    let ebt = p.take("b-tilde", &a.b_tilde, ex(mid(&eat)?)).0;
    let mut spec = BilinearDecaySpec::new(
        n,
        gamma,
        ea,
        eat,
        eb,
        ebt,
        p.take("j-min", &a.j_min, -4),
        p.take("j-max", &a.j_max, 2),
    );
    spec.max_squares = p.take("max-squares", &a.max_squares, spec.max_squares);
    spec.time_nodes = p.take("time-nodes", &a.time_nodes, spec.time_nodes);
    spec.seed = seed;
    let report = decay_slope_experiment::<f64>(&spec)?;
    let mut scales = Table::new("bilinear_decay", &["j", "squares", "max_ratio", "width_p", "width_q"]);
    for s in &report.scales {
        scales.push(row![s.j, s.squares, s.max_ratio, s.widths.0, s.widths.1]);
    }
    let mut fit = Table::new(
        "bilinear_decay_fit",
        &["beta", "predicted_slope", "fitted_slope", "intercept", "r_squared"],
    );
    fit.push(row![
        report.beta,
        report.predicted_slope,
        report.fit.slope,
        report.fit.intercept,
        report.fit.r_squared
    ]);
    Ok(Run {
        params: p,
        tables: vec![scales, fit],
        summary: vec![format!(
            "beta = {}, fitted slope of log2 max ratio in j: {:.6} (bound {})",
            report.beta, report.fit.slope, report.predicted_slope
        )],
    })
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct QuotientArgs {
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub r: Option<Ex>,
    #[arg(long)]
    pub k: Option<Ex>,
    #[arg(long)]
    pub gamma: Option<Q>,
    /// Allow exponents outside the admissible triangle.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub probe: Option<bool>,
    /// gaussian, random-bandlimited or knapp.
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long, value_delimiter = ',')]
    pub widths: Option<Vec<f64>>,
    #[arg(long)]
    pub band_limit: Option<f64>,
    #[arg(long)]
    pub packets: Option<usize>,
    #[arg(long)]
    pub samples: Option<usize>,
    /// Band-limit doublings of the random family.
    #[arg(long)]
    pub doublings: Option<usize>,
    /// Knapp train lengths.
    #[arg(long, value_delimiter = ',')]
    pub lengths: Option<Vec<usize>>,
    #[arg(long)]
    pub horizon: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub radial: Option<usize>,
    #[arg(long)]
    pub l_max: Option<usize>,
}

pub fn quotient(a: &QuotientArgs, seed: u64) -> Result<Run, CliError> {
    let mut p = Params::default();
    let n = p.take("n", &a.n, 3);
    let r = p.take("r", &a.r, ex(Exponent::integer(3)?)).0;
    let k = p.take("k", &a.k, ex(Exponent::from_recip(Rational::new(2, 7))?)).0;
    let gamma = p.take("gamma", &a.gamma, q(Rational::new(1, 2))).0;
    let probe = p.take("probe", &a.probe, false);
    let spec = QuotientSpec::new(n, r, k, gamma, probe)?;
    let family = p.take("family", &a.family, "random-bandlimited".to_string());
    let dim = n as usize;
    let mut values = Table::new("quotient", &["family", "parameter", "sample", "quotient"]);
    let mut summary = Table::new("quotient_summary", &["family", "parameter", "max", "median", "relative_change"]);
    let mut lines = Vec::new();
    let settings = |p: &mut Params| {
        let mut s = QuotientSettings::new(p.take("horizon", &a.horizon, 32.0), p.take("dt", &a.dt, 0.25));
        s.radial_count = p.take("radial", &a.radial, 32);
        s.l_max = p.take("l-max", &a.l_max, 6);
        s
    };
    match family.as_str() {
        "gaussian" => {
            let widths = p.take("widths", &a.widths, vec![0.125, 0.25, 0.5, 1.0, 2.0]);
            let s = settings(&mut p);
            let fam = DataFamily::new(dim, FamilyKind::Gaussian { widths: widths.clone() }, 0, seed)?;
            let sweep = quotient_sweep(&fam, &spec, &s)?;
            for (i, v) in sweep.values.iter().enumerate() {
                values.push(row!["gaussian", widths[i], i, *v]);
            }
            summary.push(row!["gaussian", f64::NAN, sweep.max, sweep.median, f64::NAN]);
            lines.push(format!("max quotient {:.6} at width {}", sweep.max, widths[sweep.argmax]));
        }
        "random-bandlimited" => {
            let band = p.take("band-limit", &a.band_limit, 1.0);
            let packets = p.take("packets", &a.packets, 4);
            let samples = p.take("samples", &a.samples, 100);
            let doublings = p.take("doublings", &a.doublings, 1);
            let s = settings(&mut p);
            let fam = DataFamily::new(dim, FamilyKind::RandomBandlimited { band_limit: band, packets }, samples, seed)?;
            let trend = resolution_trend(&fam, &spec, &s, doublings)?;
            let mut previous: Option<f64> = None;
            for (b, sw) in trend.band_limits.iter().zip(&trend.summaries) {
                for (i, v) in sw.values.iter().enumerate() {
                    values.push(row!["random-bandlimited", *b, i, *v]);
                }
                let change = previous.map_or(f64::NAN, |m| sw.max / m - 1.0);
                summary.push(row!["random-bandlimited", *b, sw.max, sw.median, change]);
                previous = Some(sw.max);
                lines.push(format!("band limit {b}: max {:.6}, median {:.6}", sw.max, sw.median));
            }
            lines.push(format!(
                "largest relative change under doubling: {:.4}",
                trend.max_relative_change()
            ));
        }
        "knapp" => {
            let lengths = p.take("lengths", &a.lengths, vec![2, 4, 8, 16, 32]);
            let samples = p.take("samples", &a.samples, 3);
            let trend = eccentricity_trend::<f64>(dim, &lengths, samples, seed, &spec)?;
            let mut previous: Option<f64> = None;
            for (len, sw) in trend.lengths.iter().zip(&trend.summaries) {
                for (i, v) in sw.values.iter().enumerate() {
                    values.push(row!["knapp", *len as f64, i, *v]);
                }
                let change = previous.map_or(f64::NAN, |m| sw.max / m - 1.0);
                summary.push(row!["knapp", *len as f64, sw.max, sw.median, change]);
                previous = Some(sw.max);
                lines.push(format!("train length {len}: max {:.6}", sw.max));
            }
            lines.push(format!("strictly increasing: {}", trend.strictly_increasing()));
        }
        other => {
            return Err(CliError::Validation(format!(
                "unknown family '{other}'; expected gaussian, random-bandlimited or knapp"
            )))
        }
    }
    Ok(Run {
        params: p,
        tables: vec![values, summary],
        summary: lines,
    })
}

/// Gaussian datum, nonlinearity and time stepping shared by the INLS
/// experiments.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct ProblemArgs {
    #[arg(long)]
    pub n: Option<usize>,
    /// Grid points per axis.
    #[arg(long)]
    pub points: Option<usize>,
    /// Box half-width L.
    #[arg(long)]
    pub half_width: Option<f64>,
    #[arg(long)]
    pub alpha: Option<Q>,
    /// Coupling sign, +1 or -1.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<i64>,
    /// Nonlinearity power; defaults to the mass-critical (4 - 2 alpha)/n.
    #[arg(long)]
    pub beta: Option<Q>,
    /// Regularization radius of |x|^{-alpha}; defaults to h/2.
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub amplitude: Option<f64>,
    /// Gaussian datum amplitude * exp(-width |x|^2).
    #[arg(long)]
    pub width: Option<f64>,
    #[arg(long)]
    pub horizon: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub record_every: Option<usize>,
}

struct ProblemDefaults {
    points: usize,
    half_width: f64,
    amplitude: f64,
    width: f64,
    horizon: f64,
    dt: f64,
    record_every: usize,
}

impl ProblemArgs {
    fn build(&self, p: &mut Params, d: ProblemDefaults) -> Result<(INLSProblem<f64>, SolverConfig<f64>), CliError> {
        let n = p.take("n", &self.n, 3);
        let points = p.take("points", &self.points, d.points);
        let half_width = p.take("half-width", &self.half_width, d.half_width);
        let alpha = p.take("alpha", &self.alpha, q(Rational::from_integer(1))).0;
        let coupling = Coupling::from_sign(p.take("lambda", &self.lambda, 1))?;
        let amplitude = p.take("amplitude", &self.amplitude, d.amplitude);
        let width = p.take("width", &self.width, d.width);
        let grid = CartesianGrid::new(n, points, half_width)?;
        let u0 = gaussian_field(grid, width, [0.0; 3], [0.0; 3])?.scaled(Complex64::new(amplitude, 0.0));
        let mut problem = INLSProblem::mass_critical(u0, alpha, coupling)?;
        if let Some(b) = &self.beta {
            p.record("beta", b);
            problem = problem.with_beta(b.0)?;
        }
        if let Some(s) = self.sigma {
            p.record("sigma", &s);
            problem = problem.with_sigma_reg(s)?;
        }
        let mut config = SolverConfig::new(p.take("horizon", &self.horizon, d.horizon), p.take("dt", &self.dt, d.dt));
        config.record_every = p.take("record-every", &self.record_every, d.record_every);
        Ok((problem, config))
    }
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct InlsArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub problem: ProblemArgs,
    /// picard, split-step or both.
    #[arg(long)]
    pub solver: Option<String>,
    /// Picard stopping tolerance relative to ||u0||.
    #[arg(long)]
    pub picard_tol: Option<f64>,
    #[arg(long)]
    pub max_iters: Option<usize>,
    /// Budget N for sup_t ||u||_{L^2}.
    #[arg(long)]
    pub n_budget: Option<f64>,
    /// Budget M for the mixed space-time norm.
    #[arg(long)]
    pub m_budget: Option<f64>,
    #[arg(long)]
    pub metric_every: Option<usize>,
}

fn l2_rows(traj: &Trajectory<f64>) -> Vec<(f64, f64)> {
    (0..traj.len()).map(|i| (traj.time(i), traj.field(i).l2_norm())).collect()
}

pub fn inls(a: &InlsArgs) -> Result<Run, CliError> {
    let mut p = Params::default();
    let defaults = ProblemDefaults {
        points: 32,
        half_width: 12.0,
        amplitude: 1e-3,
        width: 1.0,
        horizon: 1.0,
        dt: 1e-3,
        record_every: 1,
    };
    let (problem, mut config) = a.problem.build(&mut p, defaults)?;
    let solver = p.take("solver", &a.solver, "both".to_string());
    config.picard_tol = p.take("picard-tol", &a.picard_tol, config.picard_tol);
    config.max_iters = p.take("max-iters", &a.max_iters, config.max_iters);
    config.n_budget = p.take("n-budget", &a.n_budget, config.n_budget);
    config.m_budget = p.take("m-budget", &a.m_budget, config.m_budget);
    config.metric_every = p.take("metric-every", &a.metric_every, config.metric_every);
    let (want_picard, want_split) = match solver.as_str() {
        "picard" => (true, false),
        "split-step" => (false, true),
        "both" => (true, true),
        other => {
            return Err(CliError::Validation(format!(
                "unknown solver '{other}'; expected picard, split-step or both"
            )))
        }
    };
    let mut run = Run::default();
    let picard = if want_picard { Some(picard_solve(&problem, &config)?) } else { None };
    let split = if want_split { Some(splitstep_solve(&problem, &config)?) } else { None };
    if let Some((_, log)) = &picard {
        let mut t = Table::new("inls_picard", &["iteration", "distance", "ratio", "sup_l2", "mixed"]);
        for (i, d) in log.distances.iter().enumerate() {
            let ratio = if i == 0 { f64::NAN } else { d / log.distances[i - 1] };
            let (sup, mixed) = log.sizes.get(i + 1).copied().unwrap_or((f64::NAN, f64::NAN));
            t.push(row![i + 1, *d, ratio, sup, mixed]);
        }
        run.tables.push(t);
        let b = &log.budget;
        let mut t = Table::new(
            "inls_budget",
            &[
                "iterations",
                "residual",
                "n_budget",
                "m_budget",
                "sup_l2",
                "mixed",
                "free_mixed",
                "nonlinear_dual",
                "holder_bound",
                "within_budget",
            ],
        );
        t.push(row![
            log.iterations,
            log.residual,
            b.n_budget,
            b.m_budget,
            b.sup_l2,
            b.mixed,
            b.free_mixed,
            b.nonlinear_dual,
            b.holder_bound,
            b.within_budget
        ]);
        run.tables.push(t);
        let worst = log.ratios().into_iter().fold(0.0f64, f64::max);
        run.summary.push(format!(
            "Picard: {} iterations, largest contraction ratio {worst:.3e}, residual {:.3e}",
            log.iterations, log.residual
        ));
    }
    let mut t = Table::new("inls_trajectory", &["t", "l2_picard", "l2_split_step", "difference"]);
    match (&picard, &split) {
        (Some((u, _)), Some(v)) => {
            for i in 0..u.len() {
                t.push(row![
                    u.time(i),
                    u.field(i).l2_norm(),
                    v.field(i).l2_norm(),
                    u.field(i).l2_distance(v.field(i))
                ]);
            }
            run.summary.push(format!("sup_t ||picard - split-step||_2 = {:.3e}", sup_distance(u, v)?));
        }
        (Some((u, _)), None) => {
            for (time, m) in l2_rows(u) {
                t.push(row![time, m, f64::NAN, f64::NAN]);
            }
        }
        (None, Some(v)) => {
            for (time, m) in l2_rows(v) {
                t.push(row![time, f64::NAN, m, f64::NAN]);
            }
        }
        (None, None) => {}
    }
    if let Some(v) = &split {
        run.summary.push(format!("split-step mass drift {:.3e}", mass_drift(v)));
    }
    run.tables.push(t);
    run.params = p;
    Ok(run)
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct ScatterArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub problem: ProblemArgs,
    /// Increasing checkpoint times on the recorded grid.
    #[arg(long, value_delimiter = ',')]
    pub checkpoints: Option<Vec<f64>>,
}

pub fn scatter(a: &ScatterArgs) -> Result<Run, CliError> {
    let mut p = Params::default();
    let defaults = ProblemDefaults {
        points: 64,
        half_width: 24.0,
        amplitude: 1e-2,
        width: 0.25,
        horizon: 8.0,
        dt: 1e-2,
        record_every: 25,
    };
    let (problem, config) = a.problem.build(&mut p, defaults)?;
    let checkpoints = p.take("checkpoints", &a.checkpoints, vec![1.0, 2.0, 4.0, 8.0]);
    let traj = splitstep_solve(&problem, &config)?;
    let report = scattering_diagnostic(&traj, &checkpoints)?;
    let mut t = Table::new(
        "scatter",
        &["t_from", "t_to", "cauchy", "deviation_from", "deviation_to"],
    );
    for i in 0..report.cauchy.len() {
        t.push(row![
            report.times[i],
            report.times[i + 1],
            report.cauchy[i],
            report.deviations[i],
            report.deviations[i + 1]
        ]);
    }
    Ok(Run {
        params: p,
        tables: vec![t],
        summary: vec![
            format!("Cauchy differences: {:?}", report.cauchy),
            format!("strictly decreasing: {}", report.cauchy_strictly_decreasing()),
        ],
    })
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct ScalingArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub problem: ProblemArgs,
    /// Scaling factors, comma separated rationals.
    #[arg(long, value_delimiter = ',')]
    pub deltas: Option<Vec<Q>>,
}

pub fn scaling(a: &ScalingArgs) -> Result<Run, CliError> {
    let mut p = Params::default();
    let defaults = ProblemDefaults {
        points: 32,
        half_width: 12.0,
        amplitude: 0.1,
        width: 1.0,
        horizon: 0.5,
        dt: 1e-2,
        record_every: 5,
    };
    let (problem, config) = a.problem.build(&mut p, defaults)?;
    let deltas = p.take("deltas", &a.deltas, vec![q(Rational::new(1, 2)), q(Rational::from_integer(2))]);
    let mut t = Table::new(
        "scaling",
        &[
            "delta",
            "exponent",
            "data_norm",
            "rescaled_data_norm",
            "norm_defect",
            "symmetry_defect",
            "refinement_error",
            "within_bound",
        ],
    );
    let mut lines = Vec::new();
    for d in deltas {
        let r = scaling_check(&problem, &config, dlab_core::exponents::ratio_to_f64(&d.0))?;
        let ok = r.symmetry_defect <= 10.0 * r.refinement_error;
        t.push(row![
            d.0,
            r.exponent,
            r.data_norm,
            r.rescaled_data_norm,
            r.norm_defect,
            r.symmetry_defect,
            r.refinement_error,
            ok
        ]);
        lines.push(format!(
            "delta {}: norm defect {:.3e}, symmetry defect {:.3e}, dt-refinement error {:.3e}",
            d, r.norm_defect, r.symmetry_defect, r.refinement_error
        ));
    }
    Ok(Run {
        params: p,
        tables: vec![t],
        summary: lines,
    })
}
