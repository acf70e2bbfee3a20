use serde::{Deserialize, Serialize};

/// Two-sided 99% normal quantile.
pub const Z99: f64 = 2.575_829_303_548_901;

/// Wilson score interval for `successes` out of `trials`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Binomial rate with its 99% Wilson interval.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateEstimate {
    pub successes: u64,
    pub trials: u64,
    pub rate: f64,
    pub lower: f64,
    pub upper: f64,
}

impl RateEstimate {
    pub fn new(successes: u64, trials: u64) -> Self {
        let (lower, upper) = wilson_interval(successes, trials, Z99);
        let rate = if trials == 0 {
            0.0
        } else {
            successes as f64 / trials as f64
        };
        RateEstimate {
            successes,
            trials,
            rate,
            lower,
            upper,
        }
    }

    /// Binomial standard error of the rate.
    pub fn sigma(&self) -> f64 {
        if self.trials == 0 {
            return 0.0;
        }
        (self.rate * (1.0 - self.rate) / self.trials as f64).sqrt()
    }
}

/// `|p1 - p2| / sigma` under the pooled null hypothesis (0 when both are 0 or 1).
pub fn two_proportion_z(a: &RateEstimate, b: &RateEstimate) -> f64 {
    let pooled = (a.successes + b.successes) as f64 / (a.trials + b.trials) as f64;
    let var = pooled * (1.0 - pooled) * (1.0 / a.trials as f64 + 1.0 / b.trials as f64);
    if var == 0.0 {
        return 0.0;
    }
    (a.rate - b.rate).abs() / var.sqrt()
}

/// Least-squares `y = a x^2 + b` with the coefficient of determination.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadraticFit {
    pub a: f64,
    pub b: f64,
    pub r_squared: f64,
}

pub fn fit_quadratic(points: &[(f64, f64)]) -> QuadraticFit {
    let m = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|(x, _)| x * x).collect();
    let mx = xs.iter().sum::<f64>() / m;
    let my = points.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = xs
        .iter()
        .zip(points)
        .map(|(x, p)| (x - mx) * (p.1 - my))
        .sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let a = if sxx == 0.0 { 0.0 } else { sxy / sxx };
    let b = my - a * mx;
    let ss_tot: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    let ss_res: f64 = xs
        .iter()
        .zip(points)
        .map(|(x, p)| (p.1 - a * x - b).powi(2))
        .sum();
    let r_squared = if ss_tot == 0.0 {
        1.0
    } else {
        1.0 - ss_res / ss_tot
    };
    QuadraticFit { a, b, r_squared }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_reference_values() {
        // 10 of 100 at 95%: (0.0552, 0.1744) by the closed form.
        let (lo, hi) = wilson_interval(10, 100, 1.959963984540054);
        assert!(
            (lo - 0.055229).abs() < 1e-5 && (hi - 0.174366).abs() < 1e-5,
            "{lo} {hi}"
        );
        let (lo, hi) = wilson_interval(0, 100_000, Z99);
        assert_eq!(lo, 0.0);
        assert!((hi - Z99 * Z99 / (100_000.0 + Z99 * Z99)).abs() < 1e-12);
    }

    #[test]
    fn exact_quadratic_fit() {
        let pts: Vec<_> = (1..10)
            .map(|n| (n as f64, 3.0 * (n * n) as f64 + 2.0))
            .collect();
        let f = fit_quadratic(&pts);
        assert!((f.a - 3.0).abs() < 1e-12 && (f.b - 2.0).abs() < 1e-9 && f.r_squared > 0.999_999);
    }

    #[test]
    fn z_statistic_is_zero_for_equal_rates() {
        let a = RateEstimate::new(30, 100);
        assert_eq!(two_proportion_z(&a, &a), 0.0);
        assert!(two_proportion_z(&a, &RateEstimate::new(60, 100)) > 4.0);
    }
}
