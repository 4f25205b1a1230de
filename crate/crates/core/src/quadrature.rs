//! Gauss rules on `[-1, 1]` built with the Golub–Welsch method.
//!
//! Only the Jacobi family with weight `(1 + x)^beta` is needed here: the
//! radial measure `rho^(n-1-r*gamma) d rho` on `(0, R]` maps onto it, and
//! `beta = 0` gives Gauss–Legendre for the polar angle on the sphere.

use std::any::{Any, TypeId};
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use once_cell::sync::Lazy;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Nodes (ascending) and weights of a Gauss rule on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Real> GaussRule<T> {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Applies the rule to `f` (weight already built into the rule).
    pub fn integrate<F: FnMut(T) -> T>(&self, mut f: F) -> T {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// Affine map of the rule onto `[lo, hi]`. Weights scale by the Jacobian
    /// only, so a rule built for `(1+x)^beta` becomes one for
    /// `((x - lo) * 2 / (hi - lo))^beta`.
    pub fn mapped(&self, lo: T, hi: T) -> GaussRule<T> {
        let half = (hi - lo) / T::lit(2.0);
        GaussRule {
            nodes: self.nodes.iter().map(|&x| lo + half * (x + T::one())).collect(),
            weights: self.weights.iter().map(|&w| w * half).collect(),
        }
    }
}

/// Gauss–Jacobi rule with `count` nodes for the weight `(1 + x)^beta`,
/// `beta > -1`. Exact for polynomials of degree `2 * count - 1`.
pub fn gauss_jacobi<T: Real>(count: usize, beta: T) -> Result<GaussRule<T>> {
    if count == 0 {
        return Err(Error::InvalidParameter("Gauss rule needs at least one node".into()));
    }
    if !(beta > -T::one()) || !beta.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "Jacobi exponent beta = {beta} must exceed -1"
        )));
    }
    let one = T::one();
    let two = T::lit(2.0);
    let four = T::lit(4.0);

    let mut diag = vec![T::zero(); count];
    let mut off = vec![T::zero(); count];
    diag[0] = beta / (beta + two);
    for k in 1..count {
        let kf = T::from_usize_lossy(k);
        let s = two * kf + beta;
        diag[k] = beta * beta / (s * (s + two));
        let num = four * kf * kf * (kf + beta) * (kf + beta);
        let den = s * s * (s + one) * (s - one);
        off[k - 1] = (num / den).sqrt();
    }
    let mut first_row = vec![T::zero(); count];
    first_row[0] = one;
    symmetric_tridiagonal_ql(&mut diag, &mut off, &mut first_row)?;

    let mu0 = two.powf(beta + one) / (beta + one);
    let mut pairs: Vec<(T, T)> = diag
        .into_iter()
        .zip(first_row)
        .map(|(x, z)| (x, mu0 * z * z))
        .collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite nodes"));
    Ok(GaussRule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
    })
}

/// Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre<T: Real>(count: usize) -> Result<GaussRule<T>> {
    gauss_jacobi(count, T::zero())
}

type CacheKey = (TypeId, usize, u64);
static RULE_CACHE: Lazy<Mutex<HashMap<CacheKey, Arc<dyn Any + Send + Sync>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// Memoized [`gauss_jacobi`]; rules are shared across threads.
pub fn cached_gauss_jacobi<T: Real>(count: usize, beta: T) -> Result<Arc<GaussRule<T>>> {
    let key = (TypeId::of::<T>(), count, beta.to_f64_lossy().to_bits());
    if let Some(hit) = RULE_CACHE.lock().expect("rule cache poisoned").get(&key) {
        if let Ok(rule) = hit.clone().downcast::<GaussRule<T>>() {
            return Ok(rule);
        }
    }
    let rule = Arc::new(gauss_jacobi(count, beta)?);
    RULE_CACHE
        .lock()
        .expect("rule cache poisoned")
        .insert(key, rule.clone() as Arc<dyn Any + Send + Sync>);
    Ok(rule)
}

/// Implicit QL eigen-solver for a symmetric tridiagonal matrix.
///
/// `diag` is overwritten with the eigenvalues, `off[i]` couples rows `i` and
/// `i + 1` and is destroyed. Only one row of the eigenvector matrix is
/// propagated (`row` starts as that row of the identity), which is all
/// Golub–Welsch needs.
fn symmetric_tridiagonal_ql<T: Real>(diag: &mut [T], off: &mut [T], row: &mut [T]) -> Result<()> {
    let n = diag.len();
    if n == 1 {
        return Ok(());
    }
    off[n - 1] = T::zero();
    let two = T::lit(2.0);
    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                let scale = diag[m].abs() + diag[m + 1].abs();
                if off[m].abs() <= T::epsilon() * scale {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > 100 {
                return Err(Error::InvalidParameter(
                    "tridiagonal eigen-solver failed to converge".into(),
                ));
            }
            let mut g = (diag[l + 1] - diag[l]) / (two * off[l]);
            let mut r = g.hypot(T::one());
            let signed_r = if g >= T::zero() { r.abs() } else { -r.abs() };
            g = diag[m] - diag[l] + off[l] / (g + signed_r);
            let (mut s, mut c, mut p) = (T::one(), T::one(), T::zero());
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * off[i];
                let b = c * off[i];
                r = f.hypot(g);
                off[i + 1] = r;
                if r == T::zero() {
                    diag[i + 1] -= p;
                    off[m] = T::zero();
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + two * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
                let z = row[i + 1];
                row[i + 1] = s * row[i] + c * z;
                row[i] = c * row[i] - s * z;
            }
            if deflated {
                continue;
            }
            diag[l] -= p;
            off[l] = g;
            off[m] = T::zero();
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `int_{-1}^{1} (1+x)^{beta+p} dx`.
    fn moment(beta: f64, p: i32) -> f64 {
        2f64.powf(beta + p as f64 + 1.0) / (beta + p as f64 + 1.0)
    }

    #[test]
    fn legendre_small_rules_match_tabulated_nodes() {
        let rule = gauss_legendre::<f64>(2).unwrap();
        let x = 1.0 / 3f64.sqrt();
        assert!((rule.nodes[0] + x).abs() < 1e-15);
        assert!((rule.nodes[1] - x).abs() < 1e-15);
        assert!((rule.weights[0] - 1.0).abs() < 1e-15);

        let rule = gauss_legendre::<f64>(3).unwrap();
        assert!((rule.nodes[2] - 0.6f64.sqrt()).abs() < 1e-15);
        assert!((rule.weights[1] - 8.0 / 9.0).abs() < 1e-14);
    }

    #[test]
    fn jacobi_integrates_monomials_exactly() {
        for &beta in &[-0.5, 0.0, 0.5, 1.0, 2.7] {
            let count = 8;
            let rule = gauss_jacobi::<f64>(count, beta).unwrap();
            for p in 0..(2 * count as i32) {
                let got = rule.integrate(|x| (1.0 + x).powi(p));
                let want = moment(beta, p);
                assert!(
                    (got - want).abs() <= 1e-12 * want.abs().max(1.0),
                    "beta={beta} p={p}: {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn rejects_nonintegrable_exponent() {
        assert!(gauss_jacobi::<f64>(4, -1.0).is_err());
        assert!(gauss_jacobi::<f64>(0, 0.0).is_err());
    }

    #[test]
    fn cache_returns_identical_rule() {
        let a = cached_gauss_jacobi::<f64>(12, 0.25).unwrap();
        let b = cached_gauss_jacobi::<f64>(12, 0.25).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
        let c = cached_gauss_jacobi::<f32>(12, 0.25).unwrap();
        assert_eq!(c.len(), 12);
    }

    #[test]
    fn large_rules_stay_positive_and_sum_to_mass() {
        let rule = gauss_jacobi::<f64>(200, 0.5).unwrap();
        assert!(rule.weights.iter().all(|&w| w > 0.0));
        let mass: f64 = rule.weights.iter().sum();
        let want = 2f64.powf(1.5) / 1.5;
        assert!((mass - want).abs() < 1e-12 * want);
    }
}
