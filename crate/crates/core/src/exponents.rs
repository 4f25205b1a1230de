//! Exact rational bookkeeping for admissible exponents.
//!
//! Every condition is linear in reciprocals, so an [`Exponent`] is stored as
//! `1/p` with `1/inf = 0`. Nothing in this module uses floating point.

use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Integer types usable inside the exact rationals.
pub trait ExactInt:
    Integer + Signed + Clone + FromPrimitive + ToPrimitive + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static
{
}

impl<I> ExactInt for I where
    I: Integer + Signed + Clone + FromPrimitive + ToPrimitive + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static
{
}

/// `num / den` in `Ratio<I>`.
pub fn rat<I: ExactInt>(num: i64, den: i64) -> Ratio<I> {
    Ratio::new(
        I::from_i64(num).expect("numerator fits"),
        I::from_i64(den).expect("denominator fits"),
    )
}

fn int<I: ExactInt>(n: u32) -> Ratio<I> {
    rat(n as i64, 1)
}

/// An exponent `p` in `[1, inf]`, stored as `1/p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Exponent<I: ExactInt> {
    recip: Ratio<I>,
}

impl<I: ExactInt> Exponent<I> {
    /// Finite `p >= 1`.
    pub fn finite(p: Ratio<I>) -> Result<Self> {
        if p < Ratio::from_integer(I::one()) {
            return Err(Error::InvalidParameter(format!("exponent {p} is below 1")));
        }
        Ok(Self { recip: p.recip() })
    }

    pub fn infinity() -> Self {
        Self {
            recip: Ratio::zero(),
        }
    }

    /// The exponent with reciprocal `1/p` in `[0, 1]`.
    pub fn from_recip(recip: Ratio<I>) -> Result<Self> {
        if recip < Ratio::zero() || recip > Ratio::from_integer(I::one()) {
            return Err(Error::InvalidParameter(format!(
                "reciprocal exponent {recip} outside [0, 1]"
            )));
        }
        Ok(Self { recip })
    }

    pub fn integer(p: i64) -> Result<Self> {
        Self::finite(rat(p, 1))
    }

    /// `1/p`.
    pub fn recip(&self) -> &Ratio<I> {
        &self.recip
    }

    pub fn is_infinite(&self) -> bool {
        self.recip.is_zero()
    }

    /// `p`, or `None` for infinity.
    pub fn value(&self) -> Option<Ratio<I>> {
        if self.is_infinite() {
            None
        } else {
            Some(self.recip.recip())
        }
    }

    /// Nearest `f64`, with `inf` for infinity.
    pub fn to_f64(&self) -> f64 {
        match self.value() {
            None => f64::INFINITY,
            Some(v) => ratio_to_f64(&v),
        }
    }
}

impl<I: ExactInt> fmt::Display for Exponent<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value() {
            None => write!(f, "inf"),
            Some(v) => write!(f, "{v}"),
        }
    }
}

impl<I: ExactInt + FromStr> FromStr for Exponent<I> {
    type Err = Error;

    /// Accepts `p`, `p/q` and `inf`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if matches!(t, "inf" | "infinity" | "∞") {
            return Ok(Self::infinity());
        }
        Self::finite(parse_ratio(t)?)
    }
}

/// Parses `p` or `p/q` exactly.
pub fn parse_ratio<I: ExactInt + FromStr>(s: &str) -> Result<Ratio<I>> {
    let bad = || Error::InvalidParameter(format!("'{s}' is not a rational of the form p/q"));
    let t = s.trim();
    match t.split_once('/') {
        None => Ok(Ratio::from_integer(t.parse().map_err(|_| bad())?)),
        Some((a, b)) => {
            let num: I = a.trim().parse().map_err(|_| bad())?;
            let den: I = b.trim().parse().map_err(|_| bad())?;
            if den.is_zero() {
                return Err(bad());
            }
            Ok(Ratio::new(num, den))
        }
    }
}

pub fn ratio_to_f64<I: ExactInt>(r: &Ratio<I>) -> f64 {
    let n = r.numer().to_f64().unwrap_or(f64::NAN);
    let d = r.denom().to_f64().unwrap_or(f64::NAN);
    n / d
}

/// Interval of reciprocal exponents with open or closed ends.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval<I: ExactInt> {
    pub lo: Ratio<I>,
    pub hi: Ratio<I>,
    pub lo_open: bool,
    pub hi_open: bool,
}

impl<I: ExactInt> Interval<I> {
    pub fn closed(lo: Ratio<I>, hi: Ratio<I>) -> Self {
        Self {
            lo,
            hi,
            lo_open: false,
            hi_open: false,
        }
    }

    pub fn open(lo: Ratio<I>, hi: Ratio<I>) -> Self {
        Self {
            lo,
            hi,
            lo_open: true,
            hi_open: true,
        }
    }

    pub fn contains(&self, x: &Ratio<I>) -> bool {
        let above = if self.lo_open { *x > self.lo } else { *x >= self.lo };
        let below = if self.hi_open { *x < self.hi } else { *x <= self.hi };
        above && below
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi || (self.lo == self.hi && (self.lo_open || self.hi_open))
    }

    pub fn length(&self) -> Ratio<I> {
        if self.lo > self.hi {
            Ratio::zero()
        } else {
            self.hi.clone() - self.lo.clone()
        }
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let (lo, lo_open) = match self.lo.cmp(&other.lo) {
            std::cmp::Ordering::Greater => (self.lo.clone(), self.lo_open),
            std::cmp::Ordering::Less => (other.lo.clone(), other.lo_open),
            std::cmp::Ordering::Equal => (self.lo.clone(), self.lo_open || other.lo_open),
        };
        let (hi, hi_open) = match self.hi.cmp(&other.hi) {
            std::cmp::Ordering::Less => (self.hi.clone(), self.hi_open),
            std::cmp::Ordering::Greater => (other.hi.clone(), other.hi_open),
            std::cmp::Ordering::Equal => (self.hi.clone(), self.hi_open || other.hi_open),
        };
        Self {
            lo,
            hi,
            lo_open,
            hi_open,
        }
    }

    /// Midpoint, always inside a nonempty interval.
    pub fn midpoint(&self) -> Ratio<I> {
        (self.lo.clone() + self.hi.clone()) / rat(2, 1)
    }
}

impl<I: ExactInt> fmt::Display for Interval<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_open { '(' } else { '[' },
            self.lo,
            self.hi,
            if self.hi_open { ')' } else { ']' }
        )
    }
}

/// `(q, r, n)` with `q >= 2`, `2/q + n/r = n/2` and `(q, r, n) != (2, inf, 2)`.
pub fn schrodinger_admissible<I: ExactInt>(q: &Exponent<I>, r: &Exponent<I>, n: u32) -> bool {
    let half = rat::<I>(1, 2);
    if *q.recip() > half || *r.recip() > half {
        return false;
    }
    let lhs = q.recip().clone() * rat(2, 1) + r.recip().clone() * int(n);
    if lhs != int::<I>(n) * half.clone() {
        return false;
    }
    !(n == 2 && *q.recip() == half && r.is_infinite())
}

/// `gamma = 2/q - n(1/2 - 1/r)`.
pub fn gamma_of<I: ExactInt>(q: &Exponent<I>, r: &Exponent<I>, n: u32) -> Ratio<I> {
    q.recip().clone() * rat(2, 1) - int::<I>(n) * (rat::<I>(1, 2) - r.recip().clone())
}

/// `beta(a, a~) = -1 + n/2 - n/(2a) - n/(2a~) + gamma`.
pub fn beta<I: ExactInt>(a: &Exponent<I>, a_tilde: &Exponent<I>, n: u32, gamma: &Ratio<I>) -> Ratio<I> {
    let nn = int::<I>(n);
    let half = rat::<I>(1, 2);
    -Ratio::from_integer(I::one()) + nn.clone() * half.clone()
        - nn.clone() * half.clone() * a.recip().clone()
        - nn * half * a_tilde.recip().clone()
        + gamma.clone()
}

/// `1/r = (n-2)/(2n) + gamma/n`, the endpoint radial exponent.
pub fn endpoint_inv_r<I: ExactInt>(n: u32, gamma: &Ratio<I>) -> Ratio<I> {
    let nn = int::<I>(n);
    (nn.clone() - int(2)) / (nn.clone() * int(2)) + gamma.clone() / nn
}

/// Closed range `1/r - gamma/(2(n-1)) <= 1/k <= 1/r`.
pub fn k_range<I: ExactInt>(n: u32, gamma: &Ratio<I>, inv_r: &Ratio<I>) -> Interval<I> {
    let width = gamma.clone() / (int::<I>(n - 1) * int(2));
    Interval::closed(inv_r.clone() - width, inv_r.clone())
}

/// One of the inequalities defining the regions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Constraint {
    /// `n >= 3`.
    Dimension,
    /// `0 <= gamma <= 1`.
    GammaRange,
    /// `1/r = (n-2)/(2n) + gamma/n`.
    EndpointEquality,
    /// `1/r - gamma/(2(n-1)) <= 1/k`.
    KLower,
    /// `1/k <= 1/r`.
    KUpper,
    /// `(n-2)/(2n) <= 1/r <= 1/2`.
    QuadrangleR,
    /// `1/r <= 1/k <= 1`.
    QuadrangleK,
    /// `(1/q, 1/r, 1/k)` outside the convex hull of A, E, D, F.
    Tetrahedron,
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Constraint::Dimension => "n >= 3",
            Constraint::GammaRange => "0 <= gamma <= 1",
            Constraint::EndpointEquality => "1/r = (n-2)/(2n) + gamma/n",
            Constraint::KLower => "1/r - gamma/(2(n-1)) <= 1/k",
            Constraint::KUpper => "1/k <= 1/r",
            Constraint::QuadrangleR => "(n-2)/(2n) <= 1/r <= 1/2",
            Constraint::QuadrangleK => "1/r <= 1/k <= 1",
            Constraint::Tetrahedron => "(1/q, 1/r, 1/k) in hull(A, E, D, F)",
        };
        f.write_str(s)
    }
}

/// A point of the `(1/r, 1/k)` plane.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex<I: ExactInt> {
    pub name: char,
    pub inv_r: Ratio<I>,
    pub inv_k: Ratio<I>,
    /// Inferred from inclusion arguments rather than stated directly.
    pub derived: bool,
}

/// Named vertices A–F. F lives in `(1/q, 1/r, 1/k)` space at `(0, 1/2, 1/2)`;
/// A, E, D sit at `1/q = 1/2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionVertices<I: ExactInt> {
    pub a: Vertex<I>,
    pub b: Vertex<I>,
    pub c: Vertex<I>,
    pub d: Vertex<I>,
    pub e: Vertex<I>,
    pub f: [Ratio<I>; 3],
}

impl<I: ExactInt> RegionVertices<I> {
    /// A, B, C, D, E in that order.
    pub fn planar(&self) -> [&Vertex<I>; 5] {
        [&self.a, &self.b, &self.c, &self.d, &self.e]
    }
}

pub fn region_vertices<I: ExactInt>(n: u32) -> Result<RegionVertices<I>> {
    if n < 3 {
        return Err(Error::UnsupportedDimension(n as usize));
    }
    let nn = int::<I>(n);
    let low = (nn.clone() - int(2)) / (nn.clone() * int(2));
    let half = rat::<I>(1, 2);
    let one = int::<I>(1);
    let vertex = |name, inv_r: Ratio<I>, inv_k: Ratio<I>, derived| Vertex {
        name,
        inv_r,
        inv_k,
        derived,
    };
    Ok(RegionVertices {
        a: vertex('A', low.clone(), low.clone(), false),
        b: vertex('B', low, one.clone(), true),
        c: vertex('C', half.clone(), one, true),
        d: vertex('D', half.clone(), half.clone(), false),
        e: vertex(
            'E',
            half.clone(),
            (nn.clone() - int(2)) / ((nn - int(1)) * int(2)),
            false,
        ),
        f: [Ratio::zero(), half.clone(), half],
    })
}

/// Membership of `(n, gamma, 1/r, 1/k)` in the named regions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionReport<I: ExactInt> {
    pub n: u32,
    pub gamma: Ratio<I>,
    pub inv_r: Ratio<I>,
    pub inv_k: Ratio<I>,
    /// Closed triangle AED: the endpoint equality and the closed `k` range.
    pub in_triangle: bool,
    /// Data region: endpoint equality with `0 < gamma < 1` and the open `k`
    /// range.
    pub in_data_region: bool,
    /// Closed quadrangle ADCB, reading `k` as `k~`.
    pub in_quadrangle: bool,
    /// Quadrangle without the edges `[A, B]` and `[D, C]`.
    pub in_quadrangle_interior_r: bool,
    /// Tetrahedron AEDF, when a time exponent was supplied.
    pub in_tetrahedron: Option<bool>,
    /// Closed `k` range allowed by `gamma` and `r`.
    pub k_range: Interval<I>,
    /// Constraints that fail for the triangle.
    pub violated: Vec<Constraint>,
    /// Triangle constraints that hold with equality.
    pub active: Vec<Constraint>,
    pub vertices: RegionVertices<I>,
}

impl<I: ExactInt> RegionReport<I> {
    /// First violated constraint, if any.
    pub fn binding(&self) -> Option<Constraint> {
        self.violated.first().copied()
    }

    /// Adds tetrahedron membership for time exponent `q`.
    pub fn with_time_exponent(mut self, q: &Exponent<I>) -> Self {
        self.in_tetrahedron = Some(in_tetrahedron(
            &self.vertices,
            q.recip(),
            &self.inv_r,
            &self.inv_k,
        ));
        self
    }
}

pub fn endpoint_region<I: ExactInt>(
    n: u32,
    gamma: &Ratio<I>,
    r: &Exponent<I>,
    k: &Exponent<I>,
) -> Result<RegionReport<I>> {
    let vertices = region_vertices::<I>(n)?;
    let zero = Ratio::<I>::zero();
    let one = int::<I>(1);
    let inv_r = r.recip().clone();
    let inv_k = k.recip().clone();
    let range = k_range(n, gamma, &inv_r);
    let mut violated = Vec::new();
    let mut active = Vec::new();
    if *gamma < zero || *gamma > one {
        violated.push(Constraint::GammaRange);
    }
    if inv_r != endpoint_inv_r(n, gamma) {
        violated.push(Constraint::EndpointEquality);
    }
    match inv_k.cmp(&range.lo) {
        std::cmp::Ordering::Less => violated.push(Constraint::KLower),
        std::cmp::Ordering::Equal => active.push(Constraint::KLower),
        _ => {}
    }
    match inv_k.cmp(&range.hi) {
        std::cmp::Ordering::Greater => violated.push(Constraint::KUpper),
        std::cmp::Ordering::Equal => active.push(Constraint::KUpper),
        _ => {}
    }
    let in_triangle = violated.is_empty();
    let in_data_region = in_triangle
        && *gamma > zero
        && *gamma < one
        && active.is_empty();
    let low = vertices.a.inv_r.clone();
    let half = rat::<I>(1, 2);
    let r_closed = inv_r >= low && inv_r <= half;
    let k_closed = inv_k >= inv_r && inv_k <= one;
    let in_quadrangle = r_closed && k_closed;
    let in_quadrangle_interior_r = in_quadrangle && inv_r > low && inv_r < half;
    Ok(RegionReport {
        n,
        gamma: gamma.clone(),
        inv_r,
        inv_k,
        in_triangle,
        in_data_region,
        in_quadrangle,
        in_quadrangle_interior_r,
        in_tetrahedron: None,
        k_range: range,
        violated,
        active,
        vertices,
    })
}

/// Barycentric membership in the tetrahedron with vertices A, E, D at
/// `1/q = 1/2` and F.
fn in_tetrahedron<I: ExactInt>(
    v: &RegionVertices<I>,
    inv_q: &Ratio<I>,
    inv_r: &Ratio<I>,
    inv_k: &Ratio<I>,
) -> bool {
    let half = rat::<I>(1, 2);
    let lift = |p: &Vertex<I>| [half.clone(), p.inv_r.clone(), p.inv_k.clone()];
    let pts = [lift(&v.a), lift(&v.e), lift(&v.d), v.f.clone()];
    let x = [inv_q.clone(), inv_r.clone(), inv_k.clone()];
    // Solve x - P3 = sum_{i<3} l_i (P_i - P3) by Cramer's rule.
    let col = |i: usize| -> [Ratio<I>; 3] {
        [
            pts[i][0].clone() - pts[3][0].clone(),
            pts[i][1].clone() - pts[3][1].clone(),
            pts[i][2].clone() - pts[3][2].clone(),
        ]
    };
    let rhs = [
        x[0].clone() - pts[3][0].clone(),
        x[1].clone() - pts[3][1].clone(),
        x[2].clone() - pts[3][2].clone(),
    ];
    let m = [col(0), col(1), col(2)];
    let det = det3(&m[0], &m[1], &m[2]);
    if det.is_zero() {
        return false;
    }
    let l0 = det3(&rhs, &m[1], &m[2]) / det.clone();
    let l1 = det3(&m[0], &rhs, &m[2]) / det.clone();
    let l2 = det3(&m[0], &m[1], &rhs) / det;
    let l3 = int::<I>(1) - l0.clone() - l1.clone() - l2.clone();
    [l0, l1, l2, l3].iter().all(|l| *l >= Ratio::zero())
}

/// Determinant of the matrix with the given columns.
fn det3<I: ExactInt>(a: &[Ratio<I>; 3], b: &[Ratio<I>; 3], c: &[Ratio<I>; 3]) -> Ratio<I> {
    a[0].clone() * (b[1].clone() * c[2].clone() - b[2].clone() * c[1].clone())
        - b[0].clone() * (a[1].clone() * c[2].clone() - a[2].clone() * c[1].clone())
        + c[0].clone() * (a[1].clone() * b[2].clone() - a[2].clone() * b[1].clone())
}

/// Exponent families used to localize the bilinear form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalizationExponents<I: ExactInt> {
    pub n: u32,
    pub gamma: Ratio<I>,
    /// `lambda = 8/(3 gamma)`; case (a) is `a = a~ = lambda`.
    pub lambda: Exponent<I>,
    /// Endpoint `r = 2n/(n-2+2 gamma)`.
    pub r: Exponent<I>,
    /// Allowed `1/b` for case (a).
    pub case_a_b: Interval<I>,
    /// Allowed `1/a` for case (b), `2 <= a < r`, with `a~ = 2`; case (c)
    /// swaps the roles of `a` and `a~`.
    pub case_b_a: Interval<I>,
    /// `gamma < n/lambda`, needed for the decay estimate at `a = lambda`.
    pub decay_admissible_at_lambda: bool,
}

impl<I: ExactInt> LocalizationExponents<I> {
    /// Allowed `1/b` for a given `a`: `1/a - gamma/(2(n-1)) <= 1/b <= 1/a`.
    pub fn b_range(&self, a: &Exponent<I>) -> Interval<I> {
        k_range(self.n, &self.gamma, a.recip())
    }
}

pub fn localization_exponents<I: ExactInt>(n: u32, gamma: &Ratio<I>) -> Result<LocalizationExponents<I>> {
    if n < 3 {
        return Err(Error::UnsupportedDimension(n as usize));
    }
    if *gamma <= Ratio::zero() || *gamma >= int(1) {
        return Err(Error::ConstraintViolation(format!(
            "gamma = {gamma} violates 0 < gamma < 1"
        )));
    }
    let lambda = Exponent::finite(rat::<I>(8, 3) / gamma.clone())?;
    let r = Exponent::from_recip(endpoint_inv_r(n, gamma))?;
    let case_a_b = k_range(n, gamma, lambda.recip());
    let case_b_a = Interval {
        lo: r.recip().clone(),
        hi: rat(1, 2),
        lo_open: true,
        hi_open: false,
    };
    let decay_admissible_at_lambda = *gamma < int::<I>(n) * lambda.recip().clone();
    Ok(LocalizationExponents {
        n,
        gamma: gamma.clone(),
        lambda,
        r,
        case_a_b,
        case_b_a,
        decay_admissible_at_lambda,
    })
}

/// Exponents of the small-data theory for `|x|^{-alpha}|u|^beta u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WellPosedExponents<I: ExactInt> {
    pub n: u32,
    pub alpha: Ratio<I>,
    /// `1/r = (n-2)/(2n) + alpha/(2n)`.
    pub r: Exponent<I>,
    /// Open range `1/r - alpha/(4(n-1)) < 1/k < 1/r`.
    pub k_window: Interval<I>,
    /// Mass-critical power `(4 - 2 alpha)/n`.
    pub beta_nl: Ratio<I>,
    /// `gamma = alpha/2`.
    pub gamma: Ratio<I>,
}

pub fn wellposed_exponents<I: ExactInt>(n: u32, alpha: &Ratio<I>) -> Result<WellPosedExponents<I>> {
    if n < 3 {
        return Err(Error::UnsupportedDimension(n as usize));
    }
    if *alpha <= Ratio::zero() || *alpha >= int(2) {
        return Err(Error::ConstraintViolation(format!(
            "alpha = {alpha} violates 0 < alpha < 2"
        )));
    }
    let nn = int::<I>(n);
    let inv_r = (nn.clone() - int(2)) / (nn.clone() * int(2)) + alpha.clone() / (nn.clone() * int(2));
    let width = alpha.clone() / ((nn.clone() - int(1)) * int(4));
    Ok(WellPosedExponents {
        n,
        alpha: alpha.clone(),
        r: Exponent::from_recip(inv_r.clone())?,
        k_window: Interval::open(inv_r.clone() - width, inv_r),
        beta_nl: (int::<I>(4) - alpha.clone() * int(2)) / nn,
        gamma: alpha.clone() / int(2),
    })
}

/// Dual exponents of the Hölder step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HolderSplit<I: ExactInt> {
    /// `1/r' = beta/2 + 1/r`.
    pub r_prime: Exponent<I>,
    /// `1/k~' = beta/2 + 1/k`.
    pub k_tilde_prime: Exponent<I>,
    /// Conjugate of `k~'`.
    pub k_tilde: Exponent<I>,
    /// `(1/r, 1/k~)` with `1/r < 1/k~` and `1/r` strictly between the
    /// edges `[A, B]` and `[D, C]`.
    pub in_open_quadrangle: bool,
    /// `1/r = 1/k~`: the excluded limit of the open `k` window.
    pub on_boundary: bool,
}

pub fn holder_split<I: ExactInt>(
    n: u32,
    r: &Exponent<I>,
    k: &Exponent<I>,
    beta_nl: &Ratio<I>,
) -> Result<HolderSplit<I>> {
    let one = int::<I>(1);
    let half_beta = beta_nl.clone() / int(2);
    let inv_r_prime = half_beta.clone() + r.recip().clone();
    if r.recip().clone() + inv_r_prime.clone() != one {
        return Err(Error::Inconsistent(format!(
            "1/r + 1/r' = {} differs from 1 for r = {r}, beta = {beta_nl}",
            r.recip().clone() + inv_r_prime.clone()
        )));
    }
    let inv_kp = half_beta + k.recip().clone();
    if inv_kp > one {
        return Err(Error::Inconsistent(format!("1/k~' = {inv_kp} exceeds 1")));
    }
    let inv_kt = one - inv_kp.clone();
    let nn = int::<I>(n);
    let low = (nn.clone() - int(2)) / (nn * int(2));
    let inv_r = r.recip().clone();
    let in_open_quadrangle =
        inv_r > low && inv_r < rat(1, 2) && inv_r < inv_kt && inv_kt <= int(1);
    Ok(HolderSplit {
        r_prime: Exponent::from_recip(inv_r_prime)?,
        k_tilde_prime: Exponent::from_recip(inv_kp)?,
        on_boundary: inv_kt == inv_r,
        k_tilde: Exponent::from_recip(inv_kt)?,
        in_open_quadrangle,
    })
}

/// Perturbed endpoint exponents for the interpolation step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterpolationPoints<I: ExactInt> {
    /// `1/r0 = 1/r - eps`.
    pub r0: Exponent<I>,
    /// `1/r1 = 1/r + 2 eps`.
    pub r1: Exponent<I>,
    /// Common `1/k` allowed at both points.
    pub k_window: Interval<I>,
    /// `beta(r0, r0)`.
    pub beta0: Ratio<I>,
    /// `beta(r0, r1)`.
    pub beta1: Ratio<I>,
}

pub fn interpolation_points<I: ExactInt>(
    n: u32,
    gamma: &Ratio<I>,
    eps: &Ratio<I>,
) -> Result<InterpolationPoints<I>> {
    if n < 3 {
        return Err(Error::UnsupportedDimension(n as usize));
    }
    if *eps <= Ratio::zero() {
        return Err(Error::InvalidParameter(format!("eps = {eps} must be positive")));
    }
    let inv_r = endpoint_inv_r(n, gamma);
    let inv_r0 = inv_r.clone() - eps.clone();
    let inv_r1 = inv_r + eps.clone() * int(2);
    let admissible = Interval::open(Ratio::zero(), rat(1, 2));
    if !admissible.contains(&inv_r0) || !admissible.contains(&inv_r1) {
        return Err(Error::ConstraintViolation(format!(
            "eps = {eps} pushes r0 or r1 outside (2, inf)"
        )));
    }
    let window = k_range(n, gamma, &inv_r0).intersect(&k_range(n, gamma, &inv_r1));
    if window.is_empty() {
        return Err(Error::ConstraintViolation(format!(
            "eps = {eps} leaves no common k: window {window} is empty"
        )));
    }
    let r0 = Exponent::from_recip(inv_r0)?;
    let r1 = Exponent::from_recip(inv_r1)?;
    Ok(InterpolationPoints {
        beta0: beta(&r0, &r0, n, gamma),
        beta1: beta(&r0, &r1, n, gamma),
        r0,
        r1,
        k_window: window,
    })
}

/// A full exponent tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentPoint<I: ExactInt> {
    pub n: u32,
    pub q: Exponent<I>,
    pub r: Exponent<I>,
    pub k: Exponent<I>,
    pub k_tilde: Option<Exponent<I>>,
    pub gamma: Ratio<I>,
}

impl<I: ExactInt> ExponentPoint<I> {
    pub fn new(
        n: u32,
        q: Exponent<I>,
        r: Exponent<I>,
        k: Exponent<I>,
        gamma: Ratio<I>,
    ) -> Result<Self> {
        if n < 2 {
            return Err(Error::UnsupportedDimension(n as usize));
        }
        if gamma < Ratio::zero() || gamma > int(1) {
            return Err(Error::ConstraintViolation(format!(
                "gamma = {gamma} violates 0 <= gamma <= 1"
            )));
        }
        Ok(Self {
            n,
            q,
            r,
            k,
            k_tilde: None,
            gamma,
        })
    }

    /// Region membership including the tetrahedron.
    pub fn report(&self) -> Result<RegionReport<I>> {
        Ok(endpoint_region(self.n, &self.gamma, &self.r, &self.k)?.with_time_exponent(&self.q))
    }
}
