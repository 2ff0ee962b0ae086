//! Sample summaries, confidence intervals and power-law fits.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF, StudentsT};

use crate::error::{LcsError, Result};

/// Count, mean and unbiased variance of a sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleSummary {
    pub count: u64,
    pub mean: f64,
    /// Divisor `count - 1`.
    pub variance: f64,
}

impl SampleSummary {
    pub fn from_samples(samples: &[f64]) -> Result<Self> {
        let count = samples.len() as u64;
        if count < 2 {
            return Err(LcsError::invalid(
                "a sample summary needs at least 2 samples",
            ));
        }
        let mean = samples.iter().sum::<f64>() / count as f64;
        let ss: f64 = samples.iter().map(|x| (x - mean) * (x - mean)).sum();
        Ok(SampleSummary {
            count,
            mean,
            variance: ss / (count - 1) as f64,
        })
    }

    /// From integer moments `sum x` and `sum x^2`, which keeps the result
    /// independent of summation order.
    pub fn from_moments(count: u64, sum: u128, sum_sq: u128) -> Self {
        let mean = sum as f64 / count as f64;
        let variance = if count < 2 {
            f64::NAN
        } else {
            // count * sum_sq - sum^2 is exact in integers
            let num = count as u128 * sum_sq - sum * sum;
            num as f64 / (count as f64 * (count - 1) as f64)
        };
        SampleSummary {
            count,
            mean,
            variance,
        }
    }
}

fn check_level(level: f64) -> Result<()> {
    if !(level > 0.0 && level < 1.0) {
        return Err(LcsError::invalid(format!(
            "confidence level must be in (0,1), got {level}"
        )));
    }
    Ok(())
}

/// Student-t interval `mean ± t_{(1+level)/2, count-1} * sqrt(s^2 / count)`.
pub fn mean_ci_t(summary: &SampleSummary, level: f64) -> Result<(f64, f64)> {
    check_level(level)?;
    if summary.count < 2 {
        return Err(LcsError::invalid("t interval needs at least 2 samples"));
    }
    let dof = (summary.count - 1) as f64;
    let t = StudentsT::new(0.0, 1.0, dof)
        .map_err(|e| LcsError::invalid(e.to_string()))?
        .inverse_cdf((1.0 + level) / 2.0);
    let half = t * (summary.variance / summary.count as f64).sqrt();
    Ok((summary.mean - half, summary.mean + half))
}

/// χ² interval `[(m-1)s^2 / χ²_{(1+level)/2}, (m-1)s^2 / χ²_{(1-level)/2}]`
/// with `m - 1` degrees of freedom. Assumes roughly normal samples.
pub fn variance_ci_chi2(summary: &SampleSummary, level: f64) -> Result<(f64, f64)> {
    check_level(level)?;
    if summary.count < 2 {
        return Err(LcsError::invalid(
            "chi-square interval needs at least 2 samples",
        ));
    }
    let dof = (summary.count - 1) as f64;
    let chi = ChiSquared::new(dof).map_err(|e| LcsError::invalid(e.to_string()))?;
    let upper_q = chi.inverse_cdf((1.0 + level) / 2.0);
    let lower_q = chi.inverse_cdf((1.0 - level) / 2.0);
    let scaled = dof * summary.variance;
    Ok((scaled / upper_q, scaled / lower_q))
}

/// Result of fitting `y = coefficient * x^exponent` by least squares on logs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerFit {
    pub exponent: f64,
    pub coefficient: f64,
    pub r_squared: f64,
}

pub fn fit_power_law(points: &[(f64, f64)]) -> Result<PowerFit> {
    if points.len() < 3 {
        return Err(LcsError::invalid(format!(
            "power-law fit needs at least 3 points, got {}",
            points.len()
        )));
    }
    if let Some(p) = points.iter().find(|(x, y)| !(*x > 0.0 && *y > 0.0)) {
        return Err(LcsError::invalid(format!(
            "power-law fit needs positive values, got {p:?}"
        )));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|(x, y)| (x.ln(), y.ln())).collect();
    let m = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / m;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = logs.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(LcsError::invalid("power-law fit needs distinct x values"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        (sxy * sxy) / (sxx * syy)
    };
    Ok(PowerFit {
        exponent: slope,
        coefficient: intercept.exp(),
        r_squared,
    })
}

/// Sample skewness `m3 / m2^(3/2)` from integer moments; 0 for a constant sample.
pub fn skewness(count: u64, sum: u128, sum_sq: u128, sum_cu: u128) -> f64 {
    let n = count as f64;
    let mean = sum as f64 / n;
    let m2 = sum_sq as f64 / n - mean * mean;
    let m3 = sum_cu as f64 / n - 3.0 * mean * (sum_sq as f64 / n) + 2.0 * mean.powi(3);
    if m2 <= 1e-12 {
        0.0
    } else {
        m3 / m2.powf(1.5)
    }
}
