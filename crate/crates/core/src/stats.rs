//! Estimates with standard errors, binomial score intervals and the
//! one-sample Kolmogorov–Smirnov test.

use serde::{Deserialize, Serialize};

/// A point estimate with its standard error (zero for exact values).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Self { value, stderr: 0.0 }
    }

    /// Sample mean and its standard error.
    pub fn from_samples(samples: &[f64]) -> Self {
        let n = samples.len();
        assert!(n > 0, "no samples");
        let mean = samples.iter().sum::<f64>() / n as f64;
        if n == 1 {
            return Self {
                value: mean,
                stderr: 0.0,
            };
        }
        let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        Self {
            value: mean,
            stderr: (var / n as f64).sqrt(),
        }
    }

    /// Hit-or-miss proportion scaled by `scale`.
    pub fn from_hits(hits: u64, n: u64, scale: f64) -> Self {
        let p = hits as f64 / n as f64;
        Self {
            value: scale * p,
            stderr: scale * (p * (1.0 - p) / n as f64).sqrt(),
        }
    }
}

/// Wilson score interval for `successes` out of `trials` at normal quantile
/// `z`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    assert!(trials > 0, "wilson interval needs at least one trial");
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Standard error of a proportion under the null value `p0`. The score
/// statistic `(p̂ − p0)/score_stderr(p0, n)` lies within `±z` exactly when
/// `p0` is inside the Wilson interval at `z`.
pub fn score_stderr(p0: f64, trials: u64) -> f64 {
    (p0 * (1.0 - p0) / trials as f64).sqrt()
}

/// Kolmogorov–Smirnov statistic `sup |F_n − F|` of `samples` against `cdf`.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    for (i, x) in xs.iter().enumerate() {
        let f = cdf(*x);
        d = d.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n);
    }
    d
}

/// Complementary Kolmogorov distribution `P(K > λ)`.
pub fn kolmogorov_sf(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * lambda * lambda).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-17 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

fn effective_sqrt_n(n: usize) -> f64 {
    let s = (n as f64).sqrt();
    s + 0.12 + 0.11 / s
}

/// Asymptotic p-value of a one-sample KS statistic `d` on `n` samples,
/// with Stephens' small-sample correction.
pub fn ks_p_value(d: f64, n: usize) -> f64 {
    kolmogorov_sf(effective_sqrt_n(n) * d)
}

/// Critical value `D` with `ks_p_value(D, n) = alpha`.
pub fn ks_critical_value(alpha: f64, n: usize) -> f64 {
    let (mut lo, mut hi) = (0.2, 5.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if kolmogorov_sf(mid) > alpha {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi) / effective_sqrt_n(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_single_success() {
        let (lo, hi) = wilson_interval(1, 1, 1.96);
        assert!((lo - 0.2065).abs() < 1e-3, "{lo}");
        assert_eq!(hi, 1.0);
    }

    #[test]
    fn wilson_matches_score_inversion() {
        let (succ, n, z) = (37u64, 100u64, 2.0);
        let (lo, hi) = wilson_interval(succ, n, z);
        let p = succ as f64 / n as f64;
        for p0 in [lo, hi] {
            let zs = (p - p0) / score_stderr(p0, n);
            assert!((zs.abs() - z).abs() < 1e-9);
        }
    }

    #[test]
    fn kolmogorov_known_quantiles() {
        // classical critical values: 1.358 at 5 %, 1.628 at 1 %
        assert!((kolmogorov_sf(1.358) - 0.05).abs() < 1e-3);
        assert!((kolmogorov_sf(1.628) - 0.01).abs() < 1e-3);
        let d = ks_critical_value(0.01, 100_000);
        assert!((ks_p_value(d, 100_000) - 0.01).abs() < 1e-9);
    }

    #[test]
    fn ks_statistic_of_exact_grid() {
        let xs: Vec<f64> = (0..10).map(|i| (i as f64 + 0.5) / 10.0).collect();
        let d = ks_statistic(&xs, |x| x.clamp(0.0, 1.0));
        assert!((d - 0.05).abs() < 1e-12);
    }
}
