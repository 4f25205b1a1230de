//! Empirical Strichartz quotients
//! `|| |x|^{-gamma} e^{it Delta} f ||_{L_t^2([0,T]; L_rho^r L_omega^k)} / ||f||_{L^2}`
//! over deterministic families of Gaussian packet superpositions.
//!
//! Every family member is a finite sum `f = sum_j e^{-i tau_j Delta} g_j` of
//! modulated Gaussians, so `e^{it Delta} f` is evaluated in closed form at the
//! polar nodes and no periodic box is involved.

use std::sync::Arc;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, UnitBall, UnitSphere, UnitDisc, UnitCircle};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exponents::{endpoint_region, ExponentPoint, Exponent};
use crate::grid::{norm, Point, PolarField, PolarGrid, RadialLayout};
use crate::mixed_norms::{mixed_norm, time_norm};
use crate::propagator::{ComplexGaussian, GaussianParams};
use crate::scalar::{from_ratio, Real};

/// `e^{-i tau Delta} g` for a modulated Gaussian `g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Packet<T> {
    pub gaussian: GaussianParams<T>,
    /// `g` refocuses at `t = tau` under `e^{it Delta}`.
    pub focus_time: T,
}

/// Finite superposition of packets.
#[derive(Debug, Clone, PartialEq)]
pub struct PacketSum<T> {
    pub dim: usize,
    pub packets: Vec<Packet<T>>,
}

impl<T: Real> PacketSum<T> {
    pub fn new(dim: usize, packets: Vec<Packet<T>>) -> Result<Self> {
        if packets.iter().any(|p| p.gaussian.dim != dim) {
            return Err(Error::InvalidParameter("packet dimension mismatch".into()));
        }
        Ok(Self { dim, packets })
    }

    pub fn gaussian(params: GaussianParams<T>) -> Self {
        Self {
            dim: params.dim,
            packets: vec![Packet {
                gaussian: params,
                focus_time: T::zero(),
            }],
        }
    }

    /// Closed forms of the packets of `e^{it Delta} f`.
    pub fn state(&self, t: T) -> Vec<ComplexGaussian<T>> {
        self.packets
            .iter()
            .map(|p| ComplexGaussian::at_time(&p.gaussian, t - p.focus_time))
            .collect()
    }

    pub fn eval(&self, x: &Point<T>, t: T) -> Complex<T> {
        self.state(t).iter().map(|g| g.eval(x)).sum()
    }

    /// Exact `||f||_{L^2}` from the pairwise Gaussian integrals.
    pub fn l2_norm(&self) -> T {
        let s = self.state(T::zero());
        let mut acc = T::zero();
        for (i, a) in s.iter().enumerate() {
            acc += a.inner(a).re;
            for b in &s[i + 1..] {
                acc += T::lit(2.0) * a.inner(b).re;
            }
        }
        acc.max(T::zero()).sqrt()
    }

    pub fn scaled(&self, c: Complex<T>) -> Self {
        let mut out = self.clone();
        for p in &mut out.packets {
            p.gaussian.amplitude *= c;
        }
        out
    }

    pub fn translated(&self, shift: &Point<T>) -> Self {
        let mut out = self.clone();
        for p in &mut out.packets {
            for i in 0..3 {
                p.gaussian.center[i] += shift[i];
            }
        }
        out
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.l2_norm();
        if !(n > T::zero()) {
            return Err(Error::ZeroData);
        }
        Ok(self.scaled(Complex::new(n.recip(), T::zero())))
    }

    /// Radius holding every packet of `e^{it Delta} f` to eight standard
    /// deviations.
    pub fn support_radius(&self, t: T) -> T {
        self.packets
            .iter()
            .map(|p| p.gaussian.support_radius(t - p.focus_time))
            .fold(T::zero(), T::max)
    }
}

/// Generator of a family of packet sums.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilyKind<T> {
    /// One centered `e^{-a|x|^2}` per width `a`.
    Gaussian { widths: Vec<T> },
    /// Random superpositions of `packets` Gaussians whose momenta lie in the
    /// ball of radius `band_limit / 2` and whose inverse widths and centers
    /// scale with `band_limit`; doubling the band limit dilates each member.
    RandomBandlimited { band_limit: T, packets: usize },
    /// Train of `length` unit packets refocusing at times `spacing_t, 2 spacing_t, ...`
    /// along a random walk with step `step`.
    Knapp { length: usize, step: T, spacing_t: T },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DataFamily<T> {
    pub dim: usize,
    pub kind: FamilyKind<T>,
    pub samples: usize,
    pub seed: u64,
}

fn random_direction<T: Real>(rng: &mut ChaCha8Rng, dim: usize) -> Point<T> {
    let mut p = [T::zero(); 3];
    if dim == 2 {
        let v: [f64; 2] = UnitCircle.sample(rng);
        p[0] = T::lit(v[0]);
        p[1] = T::lit(v[1]);
    } else {
        let v: [f64; 3] = UnitSphere.sample(rng);
        for i in 0..3 {
            p[i] = T::lit(v[i]);
        }
    }
    p
}

fn random_in_ball<T: Real>(rng: &mut ChaCha8Rng, dim: usize) -> Point<T> {
    let mut p = [T::zero(); 3];
    if dim == 2 {
        let v: [f64; 2] = UnitDisc.sample(rng);
        p[0] = T::lit(v[0]);
        p[1] = T::lit(v[1]);
    } else {
        let v: [f64; 3] = UnitBall.sample(rng);
        for i in 0..3 {
            p[i] = T::lit(v[i]);
        }
    }
    p
}

impl<T: Real> DataFamily<T> {
    pub fn new(dim: usize, kind: FamilyKind<T>, samples: usize, seed: u64) -> Result<Self> {
        if !(2..=3).contains(&dim) {
            return Err(Error::UnsupportedDimension(dim));
        }
        match &kind {
            FamilyKind::Gaussian { widths } => {
                if widths.is_empty() || widths.iter().any(|&w| !(w > T::zero())) {
                    return Err(Error::InvalidParameter("Gaussian widths must be positive".into()));
                }
            }
            FamilyKind::RandomBandlimited { band_limit, packets } => {
                if !(*band_limit > T::zero()) || *packets == 0 {
                    return Err(Error::InvalidParameter(
                        "band limit and packet count must be positive".into(),
                    ));
                }
            }
            FamilyKind::Knapp { length, step, spacing_t } => {
                if *length == 0 || !(*step >= T::zero()) || !(*spacing_t > T::zero()) {
                    return Err(Error::InvalidParameter("invalid Knapp train".into()));
                }
            }
        }
        if samples == 0 && !matches!(kind, FamilyKind::Gaussian { .. }) {
            return Err(Error::InvalidParameter("family needs at least one sample".into()));
        }
        Ok(Self {
            dim,
            kind,
            samples,
            seed,
        })
    }

    /// Same family with the band limit replaced.
    pub fn with_band_limit(&self, band: T) -> Result<Self> {
        match &self.kind {
            FamilyKind::RandomBandlimited { packets, .. } => Self::new(
                self.dim,
                FamilyKind::RandomBandlimited {
                    band_limit: band,
                    packets: *packets,
                },
                self.samples,
                self.seed,
            ),
            _ => Err(Error::InvalidParameter("only random families carry a band limit".into())),
        }
    }

    pub fn len(&self) -> usize {
        match &self.kind {
            FamilyKind::Gaussian { widths } => widths.len(),
            _ => self.samples,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn rng(&self, member: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(member as u64);
        rng
    }

    /// Member `i`, normalized to unit `L^2` norm.
    pub fn member(&self, i: usize) -> Result<PacketSum<T>> {
        let n = self.dim;
        let one = Complex::new(T::one(), T::zero());
        let raw = match &self.kind {
            FamilyKind::Gaussian { widths } => {
                PacketSum::gaussian(GaussianParams::centered(n, widths[i])?)
            }
            FamilyKind::RandomBandlimited { band_limit, packets } => {
                let b = *band_limit;
                let mut rng = self.rng(i);
                let mut out = Vec::with_capacity(*packets);
                for _ in 0..*packets {
                    let a = T::lit(rng.gen_range(0.125..0.5)) * b * b;
                    let mut center = random_in_ball::<T>(&mut rng, n);
                    let mut momentum = random_in_ball::<T>(&mut rng, n);
                    for k in 0..3 {
                        center[k] = center[k] * T::lit(2.0) / b;
                        momentum[k] = momentum[k] * b / T::lit(2.0);
                    }
                    let re: f64 = StandardNormal.sample(&mut rng);
                    let im: f64 = StandardNormal.sample(&mut rng);
                    let amp = Complex::new(T::lit(re), T::lit(im));
                    out.push(Packet {
                        gaussian: GaussianParams::new(n, a, center, momentum, amp)?,
                        focus_time: T::zero(),
                    });
                }
                PacketSum::new(n, out)?
            }
            FamilyKind::Knapp { length, step, spacing_t } => {
                let mut rng = self.rng(i);
                let mut centers = vec![[T::zero(); 3]; *length];
                let mut pos = [T::zero(); 3];
                for c in centers.iter_mut() {
                    let d = random_direction::<T>(&mut rng, n);
                    for k in 0..3 {
                        pos[k] += *step * d[k];
                    }
                    *c = pos;
                }
                let len = T::from_usize_lossy(*length);
                let mut mean = [T::zero(); 3];
                for c in &centers {
                    for k in 0..3 {
                        mean[k] += c[k] / len;
                    }
                }
                let mut out = Vec::with_capacity(*length);
                for (m, c) in centers.iter().enumerate() {
                    let mut x = *c;
                    for k in 0..3 {
                        x[k] -= mean[k];
                    }
                    out.push(Packet {
                        gaussian: GaussianParams::new(n, T::lit(0.5), x, [T::zero(); 3], one)?,
                        focus_time: *spacing_t * T::from_usize_lossy(m + 1),
                    });
                }
                PacketSum::new(n, out)?
            }
        };
        raw.normalized()
    }

    pub fn members(&self) -> Result<Vec<PacketSum<T>>> {
        (0..self.len()).map(|i| self.member(i)).collect()
    }
}

/// Exponents `(r, k, gamma)` of the `L_t^2` quotient, with a flag allowing
/// points outside the triangle of admissible exponents.
#[derive(Debug, Clone, PartialEq)]
pub struct QuotientSpec {
    pub point: ExponentPoint<i64>,
    /// Explicitly requested counterexample or substitute probe.
    pub probe: bool,
}

impl QuotientSpec {
    pub fn new(n: u32, r: Exponent<i64>, k: Exponent<i64>, gamma: crate::Rational, probe: bool) -> Result<Self> {
        let point = ExponentPoint::new(n, Exponent::integer(2)?, r, k, gamma)?;
        let spec = Self { point, probe };
        spec.check()?;
        Ok(spec)
    }

    /// Closed triangle of the weighted endpoint estimate (`n >= 3`).
    pub fn is_admissible(&self) -> bool {
        self.point.n >= 3
            && endpoint_region(self.point.n, &self.point.gamma, &self.point.r, &self.point.k)
                .map(|r| r.in_triangle)
                .unwrap_or(false)
    }

    pub fn check(&self) -> Result<()> {
        if self.probe || self.is_admissible() {
            return Ok(());
        }
        let reason = if self.point.n < 3 {
            "no endpoint estimate in dimension 2".to_string()
        } else {
            endpoint_region(self.point.n, &self.point.gamma, &self.point.r, &self.point.k)?
                .binding()
                .map_or_else(|| "outside the triangle".to_string(), |c| c.to_string())
        };
        Err(Error::ConstraintViolation(format!(
            "(n, r, k, gamma) = ({}, {}, {}, {}) is not admissible: {reason}; flag it as a probe",
            self.point.n, self.point.r, self.point.k, self.point.gamma
        )))
    }
}

/// Radius of the polar grid at each time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadiusPolicy<T> {
    /// `max(min, support radius of e^{it Delta} f)`.
    Adaptive { min: T },
    /// Fixed radius; sup norms then bound the true norm from below.
    Fixed(T),
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuotientSettings<T> {
    pub horizon: T,
    pub dt: T,
    pub radius: RadiusPolicy<T>,
    pub radial_count: usize,
    pub layout: RadialLayout<T>,
    pub l_max: usize,
    pub angular_min: usize,
}

impl<T: Real> QuotientSettings<T> {
    pub fn new(horizon: T, dt: T) -> Self {
        Self {
            horizon,
            dt,
            radius: RadiusPolicy::Adaptive { min: T::one() },
            radial_count: 64,
            layout: RadialLayout::GaussJacobi,
            l_max: 12,
            angular_min: 0,
        }
    }

    /// Uniform nodes of spacing about `spacing` on the disc or ball of
    /// radius `radius`, for sup norms.
    pub fn sup_probe(horizon: T, dt: T, radius: T, spacing: T) -> Self {
        let radial = (radius / spacing).ceil().to_usize().unwrap_or(1).max(1);
        let around = (T::lit(2.0) * T::PI() * radius / spacing)
            .ceil()
            .to_usize()
            .unwrap_or(8)
            .max(8);
        Self {
            horizon,
            dt,
            radius: RadiusPolicy::Fixed(radius),
            radial_count: radial,
            layout: RadialLayout::Uniform,
            l_max: around / 2,
            angular_min: around,
        }
    }

    fn samples(&self) -> Result<usize> {
        if !(self.horizon > T::zero()) || !(self.dt > T::zero()) {
            return Err(Error::InvalidParameter("horizon and dt must be positive".into()));
        }
        let ratio = self.horizon / self.dt;
        let steps = ratio.round();
        if (ratio - steps).abs() > T::lit(1e-9) * ratio {
            return Err(Error::InvalidParameter(format!("T/dt = {ratio} is not an integer")));
        }
        Ok(steps.to_usize().unwrap_or(0))
    }
}

struct Evaluator<T: Real> {
    template: PolarGrid<T>,
    r: T,
    k: T,
    gamma: T,
}

impl<T: Real> Evaluator<T> {
    fn new(spec: &QuotientSpec, settings: &QuotientSettings<T>) -> Result<Self> {
        let r = T::lit(spec.point.r.to_f64());
        let k = T::lit(spec.point.k.to_f64());
        let gamma: T = from_ratio(spec.point.gamma);
        let weight = if r.is_infinite() { T::zero() } else { r * gamma };
        let template = PolarGrid::builder(spec.point.n as usize, T::one())
            .radial_count(settings.radial_count)
            .layout(settings.layout.clone())
            .l_max(settings.l_max)
            .angular_min(settings.angular_min)
            .weight_exponent(weight)
            .build()?;
        Ok(Self {
            template,
            r,
            k,
            gamma,
        })
    }

    fn slice(&self, f: &PacketSum<T>, t: T, policy: RadiusPolicy<T>) -> Result<T> {
        let radius = match policy {
            RadiusPolicy::Adaptive { min } => f.support_radius(t).max(min),
            RadiusPolicy::Fixed(r) => r,
        };
        let grid = Arc::new(self.template.rescaled(radius)?);
        let state = f.state(t);
        let field = PolarField::from_fn(grid, |x| state.iter().map(|g| g.eval(x)).sum());
        mixed_norm(&field, self.r, self.k, self.gamma)
    }
}

/// `|| |x|^{-gamma} e^{it Delta} f ||_{L_t^2([0,T]; L_rho^r L_omega^k)}` by
/// the trapezoid rule in time.
pub fn strichartz_norm<T: Real>(
    f: &PacketSum<T>,
    spec: &QuotientSpec,
    settings: &QuotientSettings<T>,
) -> Result<T> {
    spec.check()?;
    if spec.point.n as usize != f.dim {
        return Err(Error::InvalidParameter("data and exponent dimensions differ".into()));
    }
    let steps = settings.samples()?;
    let eval = Evaluator::new(spec, settings)?;
    let slices = (0..=steps)
        .map(|i| eval.slice(f, settings.dt * T::from_usize_lossy(i), settings.radius))
        .collect::<Result<Vec<T>>>()?;
    time_norm(&slices, settings.dt, T::lit(2.0))
}

/// Space-time norm of `e^{it Delta} f` over `[0, T]` divided by `||f||_{L^2}`.
pub fn strichartz_quotient<T: Real>(
    f: &PacketSum<T>,
    spec: &QuotientSpec,
    settings: &QuotientSettings<T>,
) -> Result<T> {
    let mass = f.l2_norm();
    if !(mass > T::zero()) {
        return Err(Error::ZeroData);
    }
    Ok(strichartz_norm(f, spec, settings)? / mass)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSummary<T> {
    pub values: Vec<T>,
    pub max: T,
    pub median: T,
    pub argmax: usize,
}

impl<T: Real> SweepSummary<T> {
    fn from_values(values: Vec<T>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidParameter("empty family".into()));
        }
        let (argmax, max) = values
            .iter()
            .copied()
            .enumerate()
            .fold((0, T::neg_infinity()), |b, (i, v)| if v > b.1 { (i, v) } else { b });
        let mut sorted = values.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite quotients"));
        let m = sorted.len();
        let median = if m % 2 == 1 {
            sorted[m / 2]
        } else {
            (sorted[m / 2 - 1] + sorted[m / 2]) / T::lit(2.0)
        };
        Ok(Self {
            values,
            max,
            median,
            argmax,
        })
    }
}

/// Quotients of every family member, computed in parallel.
pub fn quotient_sweep<T: Real>(
    family: &DataFamily<T>,
    spec: &QuotientSpec,
    settings: &QuotientSettings<T>,
) -> Result<SweepSummary<T>> {
    spec.check()?;
    let values = (0..family.len())
        .into_par_iter()
        .map(|i| strichartz_quotient(&family.member(i)?, spec, settings))
        .collect::<Result<Vec<T>>>()?;
    SweepSummary::from_values(values)
}

/// Max quotient of a random family at successive band-limit doublings.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolutionTrend<T> {
    pub band_limits: Vec<T>,
    pub summaries: Vec<SweepSummary<T>>,
}

impl<T: Real> ResolutionTrend<T> {
    pub fn max_values(&self) -> Vec<T> {
        self.summaries.iter().map(|s| s.max).collect()
    }

    /// Largest `|max_{i+1} / max_i - 1|` between consecutive doublings.
    pub fn max_relative_change(&self) -> T {
        self.max_values()
            .windows(2)
            .map(|w| (w[1] / w[0] - T::one()).abs())
            .fold(T::zero(), T::max)
    }
}

/// The time step of `settings` applies to the initial band limit and is
/// divided by four at each doubling, so every sweep samples the data on
/// its own time scale.
pub fn resolution_trend<T: Real>(
    family: &DataFamily<T>,
    spec: &QuotientSpec,
    settings: &QuotientSettings<T>,
    doublings: usize,
) -> Result<ResolutionTrend<T>> {
    let FamilyKind::RandomBandlimited { band_limit, .. } = family.kind else {
        return Err(Error::InvalidParameter("resolution trend needs a random family".into()));
    };
    let mut band_limits = Vec::new();
    let mut summaries = Vec::new();
    let mut b = band_limit;
    let mut current = settings.clone();
    for _ in 0..=doublings {
        summaries.push(quotient_sweep(&family.with_band_limit(b)?, spec, &current)?);
        band_limits.push(b);
        b *= T::lit(2.0);
        current.dt /= T::lit(4.0);
    }
    Ok(ResolutionTrend {
        band_limits,
        summaries,
    })
}

/// Max quotient over seeds for Knapp trains of increasing length.
#[derive(Debug, Clone, PartialEq)]
pub struct EccentricityTrend<T> {
    pub lengths: Vec<usize>,
    pub max: Vec<T>,
    pub summaries: Vec<SweepSummary<T>>,
}

impl<T: Real> EccentricityTrend<T> {
    pub fn strictly_increasing(&self) -> bool {
        self.max.windows(2).all(|w| w[1] > w[0])
    }
}

/// Grid spacing of the sup probe used for Knapp trains.
pub const KNAPP_SPACING: f64 = 0.25;
/// Time step of the sup probe used for Knapp trains.
pub const KNAPP_DT: f64 = 0.1;

/// Sup-probe settings adapted to one Knapp train: the disc covers every
/// refocusing point and the window extends two time units past the last.
pub fn knapp_settings<T: Real>(train: &PacketSum<T>) -> QuotientSettings<T> {
    let reach = train
        .packets
        .iter()
        .map(|p| norm(&p.gaussian.center, train.dim))
        .fold(T::zero(), T::max);
    let last = train
        .packets
        .iter()
        .map(|p| p.focus_time)
        .fold(T::zero(), T::max);
    let dt = T::lit(KNAPP_DT);
    let horizon = ((last + T::lit(2.0)) / dt).ceil() * dt;
    QuotientSettings::sup_probe(horizon, dt, reach + T::lit(6.0), T::lit(KNAPP_SPACING))
}

pub fn eccentricity_trend<T: Real>(
    dim: usize,
    lengths: &[usize],
    seeds: usize,
    seed: u64,
    spec: &QuotientSpec,
) -> Result<EccentricityTrend<T>> {
    spec.check()?;
    let mut summaries = Vec::with_capacity(lengths.len());
    for &length in lengths {
        let family = DataFamily::new(
            dim,
            FamilyKind::Knapp {
                length,
                step: T::lit(1.5),
                spacing_t: T::one(),
            },
            seeds,
            seed,
        )?;
        let values = (0..seeds)
            .into_par_iter()
            .map(|i| {
                let train = family.member(i)?;
                strichartz_quotient(&train, spec, &knapp_settings(&train))
            })
            .collect::<Result<Vec<T>>>()?;
        summaries.push(SweepSummary::from_values(values)?);
    }
    Ok(EccentricityTrend {
        lengths: lengths.to_vec(),
        max: summaries.iter().map(|s| s.max).collect(),
        summaries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::rat;

    fn e(p: i64) -> Exponent<i64> {
        Exponent::integer(p).unwrap()
    }

    fn triangle_point() -> QuotientSpec {
        QuotientSpec::new(3, e(3), "7/2".parse().unwrap(), rat(1, 2), false).unwrap()
    }

    #[test]
    fn packet_sum_norm_matches_gaussian_formula() {
        let p = GaussianParams::new(3, 0.7f64, [0.1, -0.3, 0.2], [1.0, 0.0, -0.5], Complex::new(0.6, 0.8)).unwrap();
        let f = PacketSum::gaussian(p);
        assert!((f.l2_norm() - p.l2_norm()).abs() < 1e-13);
        // Group law: evaluating the refocused packet at its focus time
        // returns the original Gaussian.
        let moved = PacketSum::new(3, vec![Packet { gaussian: p, focus_time: 1.3 }]).unwrap();
        let x = [0.4, 0.2, -0.1];
        assert!((moved.eval(&x, 1.3) - p.exact(&x, 0.0)).norm() < 1e-14);
        assert!((moved.eval(&x, 2.0) - p.exact(&x, 0.7)).norm() < 1e-14);
    }

    #[test]
    fn families_are_deterministic_and_normalized() {
        let fam = DataFamily::new(2, FamilyKind::RandomBandlimited { band_limit: 1.0f64, packets: 5 }, 4, 9).unwrap();
        let again = fam.clone();
        for i in 0..4 {
            let m = fam.member(i).unwrap();
            assert_eq!(m, again.member(i).unwrap());
            assert!((m.l2_norm() - 1.0).abs() < 1e-12);
        }
        let knapp = DataFamily::new(2, FamilyKind::Knapp { length: 6, step: 1.5f64, spacing_t: 1.0 }, 2, 1).unwrap();
        assert!((knapp.member(1).unwrap().l2_norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn doubling_the_band_dilates_members() {
        let fam = DataFamily::new(3, FamilyKind::RandomBandlimited { band_limit: 1.0, packets: 3 }, 2, 4).unwrap();
        let wide = fam.member(1).unwrap();
        let narrow = fam.with_band_limit(2.0).unwrap().member(1).unwrap();
        // f_2(x) = 2^{n/2} f_1(2x).
        let x = [0.3, -0.2, 0.5];
        let y = [0.6, -0.4, 1.0];
        let lhs = narrow.eval(&x, 0.0);
        let rhs = wide.eval(&y, 0.0) * 2f64.powf(1.5);
        assert!((lhs - rhs).norm() < 1e-12 * rhs.norm().max(1.0));
    }

    #[test]
    fn zero_data_and_inadmissible_specs_are_rejected() {
        let spec = triangle_point();
        let p = GaussianParams::centered(3, 0.5).unwrap();
        let zero = PacketSum::gaussian(p).scaled(Complex::new(0.0, 0.0));
        let settings = QuotientSettings::new(1.0, 0.5);
        assert_eq!(strichartz_quotient(&zero, &spec, &settings), Err(Error::ZeroData));
        assert!(QuotientSpec::new(2, Exponent::infinity(), Exponent::infinity(), rat(0, 1), false).is_err());
        assert!(QuotientSpec::new(2, Exponent::infinity(), Exponent::infinity(), rat(0, 1), true).is_ok());
        assert!(QuotientSpec::new(3, e(4), e(4), rat(1, 2), false).is_err());
    }

    #[test]
    fn centered_gaussian_quotient_matches_gamma_closed_form() {
        // |e^{it Delta} e^{-a|x|^2}| = s^{-n/4} e^{-a|x|^2/s}, s = 1 + 16a^2t^2.
        let (n, a, r, k, gamma) = (3.0f64, 0.5f64, 3.0f64, 3.5f64, 0.5f64);
        let spec = triangle_point();
        let mut settings = QuotientSettings::new(2.0, 0.125);
        settings.radial_count = 48;
        settings.l_max = 2;
        let f = PacketSum::gaussian(GaussianParams::centered(3, a).unwrap());
        let got = strichartz_quotient(&f, &spec, &settings).unwrap();
        let c = n - r * gamma;
        let sphere = 4.0 * std::f64::consts::PI;
        let slice = |t: f64| {
            let s = 1.0 + 16.0 * a * a * t * t;
            let b = a / s;
            let radial = statrs::function::gamma::gamma(c / 2.0) / (2.0 * (r * b).powf(c / 2.0));
            s.powf(-n / 4.0) * sphere.powf(1.0 / k) * radial.powf(1.0 / r)
        };
        let samples: Vec<f64> = (0..=16).map(|i| slice(0.125 * i as f64).powi(2)).collect();
        let integral = 0.125 * (samples.iter().sum::<f64>() - 0.5 * (samples[0] + samples[16]));
        let want = integral.sqrt() / f.l2_norm();
        assert!((got / want - 1.0).abs() < 1e-8, "{got} vs {want}");
    }

    #[test]
    fn quotient_is_monotone_in_the_window_and_homogeneous() {
        let spec = triangle_point();
        let f = DataFamily::new(3, FamilyKind::RandomBandlimited { band_limit: 1.0f64, packets: 2 }, 1, 3)
            .unwrap()
            .member(0)
            .unwrap();
        let mut short = QuotientSettings::new(1.0, 0.25);
        short.l_max = 8;
        let long = QuotientSettings { horizon: 2.0, ..short.clone() };
        let q1 = strichartz_quotient(&f, &spec, &short).unwrap();
        let q2 = strichartz_quotient(&f, &spec, &long).unwrap();
        assert!(q2 >= q1);
        let c = Complex::new(-1.5, 2.0);
        let n1 = strichartz_norm(&f, &spec, &short).unwrap();
        let nc = strichartz_norm(&f.scaled(c), &spec, &short).unwrap();
        assert!((nc / (c.norm() * n1) - 1.0).abs() < 1e-12);
        let u = Complex::from_polar(1.0, 2.1);
        let qu = strichartz_quotient(&f.scaled(u), &spec, &short).unwrap();
        assert!((qu / q1 - 1.0).abs() < 1e-10);
    }

    #[test]
    fn unweighted_diagonal_norms_are_translation_invariant() {
        // Only r = k with gamma = 0 is invariant under translation.
        let spec = QuotientSpec::new(2, e(4), e(4), rat(0, 1), true).unwrap();
        let f = PacketSum::gaussian(GaussianParams::new(2, 0.5f64, [0.0; 3], [0.5, 0.0, 0.0], Complex::new(1.0, 0.0)).unwrap());
        let mut settings = QuotientSettings::new(1.0, 0.125);
        settings.radial_count = 96;
        settings.l_max = 48;
        let base = strichartz_quotient(&f, &spec, &settings).unwrap();
        let moved = strichartz_quotient(&f.translated(&[0.7, -0.4, 0.0]), &spec, &settings).unwrap();
        assert!((moved / base - 1.0).abs() < 1e-8, "{base} {moved}");
    }

    #[test]
    fn sweep_summary_statistics() {
        let s = SweepSummary::from_values(vec![3.0, 1.0, 2.0, 5.0]).unwrap();
        assert_eq!((s.max, s.median, s.argmax), (5.0, 2.5, 3));
        assert!(SweepSummary::<f64>::from_values(vec![]).is_err());
    }
}
