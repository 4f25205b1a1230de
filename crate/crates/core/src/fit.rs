//! Least-squares line fits used by the rate experiments.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// `y ~ slope * x + intercept` with coefficient of determination.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit<T> {
    pub slope: T,
    pub intercept: T,
    pub r_squared: T,
}

pub fn fit_line<T: Real>(xs: &[T], ys: &[T]) -> Result<LineFit<T>> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::InvalidParameter(
            "line fit needs at least two paired samples".into(),
        ));
    }
    let m = T::from_usize_lossy(xs.len());
    let mx = xs.iter().copied().sum::<T>() / m;
    let my = ys.iter().copied().sum::<T>() / m;
    let sxx: T = xs.iter().map(|&x| (x - mx) * (x - mx)).sum();
    let sxy: T = xs.iter().zip(ys).map(|(&x, &y)| (x - mx) * (y - my)).sum();
    let syy: T = ys.iter().map(|&y| (y - my) * (y - my)).sum();
    if sxx == T::zero() {
        return Err(Error::InvalidParameter("line fit needs distinct abscissae".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == T::zero() {
        T::one()
    } else {
        sxy * sxy / (sxx * syy)
    };
    Ok(LineFit {
        slope,
        intercept,
        r_squared,
    })
}

/// Fit of `ln y` against `ln x`; all samples must be positive.
pub fn fit_loglog<T: Real>(points: &[(T, T)]) -> Result<LineFit<T>> {
    if points.iter().any(|&(x, y)| !(x > T::zero() && y > T::zero())) {
        return Err(Error::InvalidParameter(
            "log-log fit needs positive samples".into(),
        ));
    }
    let xs: Vec<T> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<T> = points.iter().map(|p| p.1.ln()).collect();
    fit_line(&xs, &ys)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law_has_unit_r_squared() {
        let pts: Vec<(f64, f64)> = (1..10).map(|i| (i as f64, 3.0 * (i as f64).powf(-0.75))).collect();
        let fit = fit_loglog(&pts).unwrap();
        assert!((fit.slope + 0.75).abs() < 1e-12);
        assert!((fit.intercept - 3f64.ln()).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_degenerate_input() {
        assert!(fit_line(&[1.0f64], &[2.0]).is_err());
        assert!(fit_line(&[1.0f64, 1.0], &[2.0, 3.0]).is_err());
        assert!(fit_loglog(&[(1.0f64, 0.0), (2.0, 1.0)]).is_err());
    }
}
