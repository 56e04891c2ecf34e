//! Scaling of the Sharpe ratio from one period to `q` periods when returns
//! are autocorrelated, with the square-root rule as the uncorrelated case.
//!
//! q-period returns are simple sums of the per-period returns.

use crate::error::{ensure_finite, Error, Result};

/// Below this |ρ| the AR(1) formulas return the uncorrelated answer directly.
const AR1_ZERO_RHO: f64 = 1e-12;

/// Return dynamics behind a q-period aggregation.
#[derive(Debug, Clone, PartialEq)]
pub enum CorrelationModel {
    /// Per-period volatilities and a full correlation matrix. Only the leading
    /// `q` entries are used. `sigma_inf` is the per-period reference volatility
    /// in the numerator of the ratio; `None` means the root mean square of the
    /// leading `q` volatilities.
    General {
        sigmas: Vec<f64>,
        correlation: Vec<Vec<f64>>,
        sigma_inf: Option<f64>,
    },
    /// Constant volatility with autocorrelations `ρ_k`, `k = 1..q-1`.
    Stationary { sigma: f64, autocorr: Vec<f64> },
    /// AR(1) with stationary per-period volatility `sigma`.
    Ar1 { sigma: f64, rho: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregationSpec {
    q: u32,
    model: CorrelationModel,
}

impl AggregationSpec {
    pub fn new(q: u32, model: CorrelationModel) -> Result<Self> {
        if q == 0 {
            return Err(Error::domain("q", 0.0, "horizon must be at least 1"));
        }
        validate_model(q as usize, &model)?;
        Ok(AggregationSpec { q, model })
    }

    /// AR(1) with unit volatility, which is all the ratios depend on.
    pub fn ar1(q: u32, rho: f64) -> Result<Self> {
        Self::new(q, CorrelationModel::Ar1 { sigma: 1.0, rho })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn model(&self) -> &CorrelationModel {
        &self.model
    }
}

fn check_sigma(name: &'static str, s: f64) -> Result<()> {
    ensure_finite(name, s)?;
    if s <= 0.0 {
        return Err(Error::domain(name, s, "volatility must be positive"));
    }
    Ok(())
}

fn check_corr(name: &'static str, r: f64) -> Result<()> {
    ensure_finite(name, r)?;
    if r.abs() > 1.0 {
        return Err(Error::domain(name, r, "correlation must lie in [-1, 1]"));
    }
    Ok(())
}

#[allow(clippy::needless_range_loop)]
fn validate_model(q: usize, model: &CorrelationModel) -> Result<()> {
    match model {
        CorrelationModel::Ar1 { sigma, rho } => {
            check_sigma("sigma", *sigma)?;
            ensure_finite("rho", *rho)?;
            if rho.abs() >= 1.0 {
                return Err(Error::domain("rho", *rho, "AR(1) needs |rho| < 1"));
            }
        }
        CorrelationModel::Stationary { sigma, autocorr } => {
            check_sigma("sigma", *sigma)?;
            if autocorr.len() + 1 < q {
                return Err(Error::domain(
                    "autocorr",
                    autocorr.len() as f64,
                    "need autocorrelations for lags 1..q-1",
                ));
            }
            for &r in &autocorr[..q - 1] {
                check_corr("autocorr", r)?;
            }
        }
        CorrelationModel::General {
            sigmas,
            correlation,
            sigma_inf,
        } => {
            if sigmas.len() < q {
                return Err(Error::domain(
                    "sigmas",
                    sigmas.len() as f64,
                    "need at least q per-period volatilities",
                ));
            }
            for &s in &sigmas[..q] {
                check_sigma("sigmas", s)?;
            }
            if let Some(s) = sigma_inf {
                check_sigma("sigma_inf", *s)?;
            }
            if correlation.len() < q || correlation[..q].iter().any(|row| row.len() < q) {
                return Err(Error::domain(
                    "correlation",
                    correlation.len() as f64,
                    "correlation matrix must be at least q x q",
                ));
            }
            for i in 0..q {
                if correlation[i][i] != 1.0 {
                    return Err(Error::domain(
                        "correlation",
                        correlation[i][i],
                        "diagonal entries must equal 1",
                    ));
                }
                for j in 0..i {
                    check_corr("correlation", correlation[i][j])?;
                    if (correlation[i][j] - correlation[j][i]).abs() > 1e-12 {
                        return Err(Error::domain(
                            "correlation",
                            correlation[i][j],
                            "matrix must be symmetric",
                        ));
                    }
                }
            }
            if !is_positive_semidefinite(correlation, q) {
                return Err(Error::domain(
                    "correlation",
                    f64::NAN,
                    "matrix must be positive semidefinite",
                ));
            }
        }
    }
    Ok(())
}

/// LDLᵀ on the leading `q` block, allowing zero pivots up to rounding.
fn is_positive_semidefinite(m: &[Vec<f64>], q: usize) -> bool {
    const TOL: f64 = 1e-10;
    let mut l = vec![vec![0.0; q]; q];
    let mut d = vec![0.0; q];
    for j in 0..q {
        let mut dj = m[j][j];
        for k in 0..j {
            dj -= l[j][k] * l[j][k] * d[k];
        }
        if dj < -TOL {
            return false;
        }
        d[j] = dj;
        for i in j + 1..q {
            let mut v = m[i][j];
            for k in 0..j {
                v -= l[i][k] * l[j][k] * d[k];
            }
            if dj.abs() <= TOL {
                // a zero pivot forces the rest of the column to vanish
                if v.abs() > 1e-8 {
                    return false;
                }
                l[i][j] = 0.0;
            } else {
                l[i][j] = v / dj;
            }
        }
    }
    true
}

/// AR(1) inflation factor `1 + 2ρ/(1-ρ) (1 - (1-ρ^q)/(q(1-ρ)))`.
fn ar1_factor(q: u32, rho: f64) -> f64 {
    if rho.abs() < AR1_ZERO_RHO {
        return 1.0;
    }
    let qf = q as f64;
    let geometric = (1.0 - rho.powi(q as i32)) / (qf * (1.0 - rho));
    1.0 + 2.0 * rho / (1.0 - rho) * (1.0 - geometric)
}

/// Variance of the sum of `q` consecutive returns.
pub fn q_period_variance(spec: &AggregationSpec) -> Result<f64> {
    let q = spec.q as usize;
    let var = match &spec.model {
        CorrelationModel::Ar1 { sigma, rho } => {
            spec.q as f64 * sigma * sigma * ar1_factor(spec.q, *rho)
        }
        CorrelationModel::Stationary { sigma, autocorr } => {
            let weighted: f64 = autocorr[..q - 1]
                .iter()
                .enumerate()
                .map(|(i, r)| (q - i - 1) as f64 * r)
                .sum();
            sigma * sigma * (q as f64 + 2.0 * weighted)
        }
        CorrelationModel::General {
            sigmas,
            correlation,
            ..
        } => {
            let mut v = 0.0;
            for i in 0..q {
                v += sigmas[i] * sigmas[i];
                for j in 0..i {
                    v += 2.0 * correlation[i][j] * sigmas[i] * sigmas[j];
                }
            }
            v
        }
    };
    if var.is_nan() || var <= 0.0 {
        return Err(Error::Degenerate(format!(
            "q-period variance {var} is not positive; the correlations are inconsistent"
        )));
    }
    Ok(var)
}

fn reference_sigma(spec: &AggregationSpec) -> f64 {
    let q = spec.q as usize;
    match &spec.model {
        CorrelationModel::Ar1 { sigma, .. } | CorrelationModel::Stationary { sigma, .. } => *sigma,
        CorrelationModel::General {
            sigmas, sigma_inf, ..
        } => sigma_inf
            .unwrap_or_else(|| (sigmas[..q].iter().map(|s| s * s).sum::<f64>() / q as f64).sqrt()),
    }
}

/// `SR(q) / SR = q σ_∞ / sqrt(Var[R(q)])`; `sqrt(q)` without autocorrelation.
pub fn sr_scaling_ratio(spec: &AggregationSpec) -> Result<f64> {
    if let CorrelationModel::Ar1 { rho, .. } = spec.model {
        let q = spec.q as f64;
        return Ok((q / ar1_factor(spec.q, rho)).sqrt());
    }
    let var = q_period_variance(spec)?;
    Ok(spec.q as f64 * reference_sigma(spec) / var.sqrt())
}

/// `sqrt(q) / sr_scaling_ratio`: how far the square-root rule overstates
/// the q-period Sharpe ratio.
pub fn sqrt_rule_deviation(spec: &AggregationSpec) -> Result<f64> {
    if let CorrelationModel::Ar1 { rho, .. } = spec.model {
        return Ok(ar1_factor(spec.q, rho).sqrt());
    }
    Ok((spec.q as f64).sqrt() / sr_scaling_ratio(spec)?)
}

/// Per-period Sharpe ratio of an AR(1) process measured against its
/// stationary volatility `sigma / sqrt(1 - ρ²)`, where `sigma` is the
/// innovation scale.
pub fn ar1_limit_sharpe(mu: f64, rf: f64, sigma: f64, rho: f64) -> Result<f64> {
    ensure_finite("mu", mu)?;
    ensure_finite("rf", rf)?;
    check_sigma("sigma", sigma)?;
    ensure_finite("rho", rho)?;
    if rho.abs() >= 1.0 {
        return Err(Error::domain("rho", rho, "AR(1) needs |rho| < 1"));
    }
    Ok((mu - rf) * (1.0 - rho * rho).sqrt() / sigma)
}

/// Sample autocorrelation at `lag`, normalized by the full-sample variance.
pub fn sample_autocorrelation(x: &[f64], lag: usize) -> Result<f64> {
    if x.len() <= lag + 1 {
        return Err(Error::domain(
            "lag",
            lag as f64,
            "series must be longer than lag + 1",
        ));
    }
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    let denom: f64 = x.iter().map(|v| (v - mean) * (v - mean)).sum();
    if denom <= 0.0 {
        return Err(Error::Degenerate("series has zero variance".to_string()));
    }
    let num: f64 = x
        .iter()
        .zip(&x[lag..])
        .map(|(a, b)| (a - mean) * (b - mean))
        .sum();
    Ok(num / denom)
}
