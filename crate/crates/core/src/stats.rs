//! Estimates with confidence intervals, and power-law fits.

use serde::Serialize;

use crate::scalar::Scalar;

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// A point estimate with a 95% interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate<S> {
    pub estimate: S,
    pub ci_low: S,
    pub ci_high: S,
    /// Successes for proportions, sample size for means.
    pub count: u64,
    pub trials: u64,
}

impl<S: Scalar> Estimate<S> {
    /// Wilson score interval for `successes` out of `trials`.
    pub fn wilson(successes: u64, trials: u64) -> Self {
        assert!(trials > 0, "Wilson interval needs at least one trial");
        assert!(successes <= trials);
        let n = S::of_count(trials);
        let p = S::of_count(successes) / n;
        let z = S::of(Z95);
        let z2 = z * z;
        let two = S::of(2.0);
        let four = S::of(4.0);
        let denom = S::one() + z2 / n;
        let centre = (p + z2 / (two * n)) / denom;
        let half = z * (p * (S::one() - p) / n + z2 / (four * n * n)).sqrt() / denom;
        // the interval always contains p; clamp rounding at the ends
        Estimate {
            estimate: p,
            ci_low: (centre - half).max(S::zero()).min(p),
            ci_high: (centre + half).min(S::one()).max(p),
            count: successes,
            trials,
        }
    }

    /// Sample mean with a normal-approximation interval.
    pub fn mean_of(values: &[S]) -> Self {
        let n = values.len() as u64;
        assert!(n > 0, "mean of no samples");
        let (mean, sd) = mean_and_sd(values);
        let half = S::of(Z95) * sd / S::of_count(n).sqrt();
        Estimate {
            estimate: mean,
            ci_low: mean - half,
            ci_high: mean + half,
            count: n,
            trials: n,
        }
    }

    /// Standard error implied by the interval width.
    pub fn std_error(&self) -> S {
        (self.ci_high - self.ci_low) / (S::of(2.0 * Z95))
    }

    pub fn contains(&self, value: S) -> bool {
        self.ci_low <= value && value <= self.ci_high
    }
}

/// Mean and sample standard deviation (`n - 1` denominator; zero for one sample).
pub fn mean_and_sd<S: Scalar>(values: &[S]) -> (S, S) {
    let n = S::of_count(values.len() as u64);
    let mean = values.iter().fold(S::zero(), |a, &v| a + v) / n;
    if values.len() < 2 {
        return (mean, S::zero());
    }
    let ss = values.iter().fold(S::zero(), |a, &v| a + (v - mean) * (v - mean));
    (mean, (ss / (n - S::one())).sqrt())
}

/// Least-squares line through `(ln x, ln y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogLogFit<S> {
    pub slope: S,
    pub intercept: S,
    /// Weighted residual sum of squares.
    pub residual: S,
    /// Standard error of the slope propagated from the per-point uncertainties
    /// (zero when none were supplied).
    pub slope_std_error: S,
    pub points: usize,
}

/// Fits `ln y = intercept + slope * ln x`. Points with `y <= 0` must be filtered out by the
/// caller. `log_sd`, when given, holds the standard deviation of each `ln y` and turns the
/// fit into weighted least squares.
pub fn fit_power_law<S: Scalar>(x: &[S], y: &[S], log_sd: Option<&[S]>) -> Option<LogLogFit<S>> {
    assert_eq!(x.len(), y.len());
    if x.len() < 2 || x.iter().chain(y).any(|&v| v <= S::zero()) {
        return None;
    }
    let lx: Vec<S> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<S> = y.iter().map(|v| v.ln()).collect();
    let w: Vec<S> = match log_sd {
        Some(sd) => sd
            .iter()
            .map(|&s| if s > S::zero() { S::one() / (s * s) } else { S::one() })
            .collect(),
        None => vec![S::one(); x.len()],
    };
    let sum = |f: &dyn Fn(usize) -> S| (0..x.len()).fold(S::zero(), |a, i| a + f(i));
    let sw = sum(&|i| w[i]);
    let mx = sum(&|i| w[i] * lx[i]) / sw;
    let my = sum(&|i| w[i] * ly[i]) / sw;
    let sxx = sum(&|i| w[i] * (lx[i] - mx) * (lx[i] - mx));
    if sxx <= S::zero() {
        return None;
    }
    let sxy = sum(&|i| w[i] * (lx[i] - mx) * (ly[i] - my));
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = sum(&|i| {
        let r = ly[i] - intercept - slope * lx[i];
        w[i] * r * r
    });
    let slope_std_error = if log_sd.is_some() {
        (S::one() / sxx).sqrt()
    } else {
        S::zero()
    };
    Some(LogLogFit {
        slope,
        intercept,
        residual,
        slope_std_error,
        points: x.len(),
    })
}

/// Delta-method standard deviation of `ln p_hat` for a binomial proportion.
pub fn log_proportion_sd<S: Scalar>(successes: u64, trials: u64) -> S {
    let p = S::of_count(successes) / S::of_count(trials);
    ((S::one() - p) / (S::of_count(trials) * p)).sqrt()
}
