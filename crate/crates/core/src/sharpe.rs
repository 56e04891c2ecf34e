//! Sharpe ratio estimation and inference under iid normal returns.
//!
//! `sqrt(n) * SR_hat` follows a non-central t with `n - 1` degrees of freedom
//! and non-centrality `sqrt(n) * SR`, which gives the exact moments, the bias
//! factor `k_n` and exact confidence intervals. The three asymptotic standard
//! deviations and the Cramér–Rao bound sit alongside for comparison.

use crate::error::{ensure_finite, Error, Result};
use crate::nct::NctParams;
use crate::specfun::{check_probability, k_n, std_normal_quantile, SampleSize};

/// Ordered per-period simple returns and the per-period risk-free rate.
#[derive(Debug, Clone, PartialEq)]
pub struct ReturnSeries {
    returns: Vec<f64>,
    rf: f64,
}

impl ReturnSeries {
    pub fn new(returns: Vec<f64>, rf: f64) -> Result<Self> {
        if returns.len() < 2 {
            return Err(Error::domain(
                "n",
                returns.len() as f64,
                "a return series needs at least 2 observations",
            ));
        }
        for &r in &returns {
            ensure_finite("return", r)?;
        }
        ensure_finite("rf", rf)?;
        Ok(ReturnSeries { returns, rf })
    }

    pub fn returns(&self) -> &[f64] {
        &self.returns
    }

    pub fn rf(&self) -> f64 {
        self.rf
    }

    pub fn len(&self) -> usize {
        self.returns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.returns.is_empty()
    }

    pub fn sample_size(&self) -> SampleSize {
        let n = u32::try_from(self.returns.len()).unwrap_or(u32::MAX);
        SampleSize::new(n).expect("length checked at construction")
    }
}

/// Point estimate of the per-period Sharpe ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SharpeEstimate {
    pub sr_hat: f64,
    pub n: SampleSize,
    pub mean_hat: f64,
    /// Sample standard deviation with the `n - 1` divisor.
    pub sigma_hat: f64,
    pub rf: f64,
}

fn mean_and_sum_sq(returns: &[f64]) -> (f64, f64) {
    let n = returns.len() as f64;
    let mean = returns.iter().sum::<f64>() / n;
    let ss = returns.iter().map(|r| (r - mean) * (r - mean)).sum();
    (mean, ss)
}

fn check_dispersion(returns: &[f64], ss: f64) -> Result<()> {
    let scale = returns.iter().fold(0.0f64, |m, r| m.max(r.abs()));
    let sd_floor = 1e-12 * scale;
    if ss <= 0.0 || ss.sqrt() <= sd_floor * (returns.len() as f64).sqrt() {
        return Err(Error::Degenerate(
            "return series has zero sample variance".to_string(),
        ));
    }
    Ok(())
}

/// Empirical Sharpe ratio `(mean - rf) / sigma_hat` (two-pass form).
pub fn estimate_sharpe(series: &ReturnSeries) -> Result<SharpeEstimate> {
    let n = series.sample_size();
    let (mean, ss) = mean_and_sum_sq(series.returns());
    check_dispersion(series.returns(), ss)?;
    let sigma = (ss / (n.as_f64() - 1.0)).sqrt();
    Ok(SharpeEstimate {
        sr_hat: (mean - series.rf()) / sigma,
        n,
        mean_hat: mean,
        sigma_hat: sigma,
        rf: series.rf(),
    })
}

/// The same estimator written as a single expression in the returns,
/// `sqrt(n-1) Σ(R_i - R_f) / (n sqrt(Σ(R_i - mean)²))`.
pub fn sharpe_single_expression(series: &ReturnSeries) -> Result<f64> {
    let n = series.len() as f64;
    let (_, ss) = mean_and_sum_sq(series.returns());
    check_dispersion(series.returns(), ss)?;
    let excess: f64 = series.returns().iter().map(|r| r - series.rf()).sum();
    Ok((n - 1.0).sqrt() * excess / (n * ss.sqrt()))
}

/// `E[SR_hat] / SR`, i.e. `k_n`.
pub fn sr_bias_factor(n: SampleSize) -> Result<f64> {
    k_n(n)
}

/// Bias-corrected Sharpe ratio `SR_hat / k_n`.
pub fn debias(est: &SharpeEstimate) -> Result<f64> {
    Ok(est.sr_hat / k_n(est.n)?)
}

/// Exact mean and variance of the empirical Sharpe ratio for a population
/// Sharpe ratio `sr_inf` and `n >= 4` observations.
pub fn sr_exact_moments(sr_inf: f64, n: SampleSize) -> Result<(f64, f64)> {
    ensure_finite("sr_inf", sr_inf)?;
    if n.get() < 4 {
        return Err(Error::MomentUndefined {
            order: 2,
            dof: n.dof(),
        });
    }
    let nf = n.as_f64();
    let k = k_n(n)?;
    let mean = sr_inf * k;
    let variance = (nf - 1.0) * (1.0 / nf + sr_inf * sr_inf) / (nf - 3.0) - mean * mean;
    Ok((mean, variance))
}

/// Asymptotic standard deviation formulas for `sqrt(n) * SR_hat`.
///
/// [`sr_asymptotic_sd`] divides by `sqrt(n)` to give the per-estimate scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SdFormula {
    /// `sqrt(1 + SR²/2)`
    Iid1,
    /// `sqrt((1 + SR²/2) / (1 - 1/n))`
    Iid2,
    /// `sqrt(1 + n SR² / (2(n-1)))`, i.e. `sqrt(1/n + SR²/(2(n-1)))` per estimate.
    ///
    /// This is the form behind the usual σ_IID,3 reference table (0.359 at
    /// SR = 1, n = 12).
    Iid3,
    /// [`SdFormula::Iid3`] divided by `1 - 1/(4(n-1))`, the Walck-type
    /// correction as it is usually displayed. It is 0.367 at SR = 1, n = 12
    /// and does not reproduce the reference table.
    Iid3Corrected,
}

impl SdFormula {
    pub const TABULATED: [SdFormula; 3] = [SdFormula::Iid1, SdFormula::Iid2, SdFormula::Iid3];

    /// 1, 2 or 3 (the corrected variant also reports 3).
    pub fn index(self) -> u8 {
        match self {
            SdFormula::Iid1 => 1,
            SdFormula::Iid2 => 2,
            SdFormula::Iid3 | SdFormula::Iid3Corrected => 3,
        }
    }

    pub fn from_index(i: u8) -> Option<Self> {
        match i {
            1 => Some(SdFormula::Iid1),
            2 => Some(SdFormula::Iid2),
            3 => Some(SdFormula::Iid3),
            _ => None,
        }
    }
}

/// Asymptotic standard deviation of `SR_hat`, i.e. `σ_IID,i / sqrt(n)`.
pub fn sr_asymptotic_sd(sr: f64, n: SampleSize, formula: SdFormula) -> Result<f64> {
    ensure_finite("sr", sr)?;
    let nf = n.as_f64();
    let s2 = sr * sr;
    let sigma = match formula {
        SdFormula::Iid1 => (1.0 + s2 / 2.0).sqrt(),
        SdFormula::Iid2 => ((1.0 + s2 / 2.0) / (1.0 - 1.0 / nf)).sqrt(),
        SdFormula::Iid3 => (1.0 + nf * s2 / (2.0 * (nf - 1.0))).sqrt(),
        SdFormula::Iid3Corrected => {
            (1.0 + s2 / (2.0 * (1.0 - 1.0 / nf))).sqrt() / (1.0 - 1.0 / (4.0 * (nf - 1.0)))
        }
    };
    Ok(sigma / nf.sqrt())
}

/// Where the asymptotic interval takes its critical value from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum QuantileSource {
    /// Central Student t with `n - 1` degrees of freedom.
    #[default]
    StudentT,
    Normal,
}

/// Which Sharpe ratio is substituted for the unknown population value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PlugIn {
    #[default]
    Raw,
    Debiased,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CiMethod {
    /// Inversion of the non-central t family over the non-centrality.
    Exact,
    Asymptotic {
        formula: SdFormula,
        quantile: QuantileSource,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

/// `center ± quantile * sd`.
pub fn asymptotic_interval(center: f64, sd: f64, quantile: f64) -> Interval {
    Interval {
        lower: center - quantile * sd,
        upper: center + quantile * sd,
    }
}

/// Two-sided `1 - alpha/2` critical value.
pub fn critical_value(n: SampleSize, alpha: f64, source: QuantileSource) -> Result<f64> {
    check_probability("alpha", alpha)?;
    let p = 1.0 - alpha / 2.0;
    match source {
        QuantileSource::Normal => std_normal_quantile(p),
        QuantileSource::StudentT => NctParams::new(n.dof(), 0.0)?.quantile(p),
    }
}

fn plug_in_value(est: &SharpeEstimate, plug_in: PlugIn) -> Result<f64> {
    match plug_in {
        PlugIn::Raw => Ok(est.sr_hat),
        PlugIn::Debiased => debias(est),
    }
}

/// Confidence interval of level `1 - alpha` for the population Sharpe ratio.
///
/// Asymptotic intervals are centred on `SR_hat`; `plug_in` only selects the
/// value fed to the standard deviation formula. Exact intervals ignore it.
pub fn sr_confidence_interval(
    est: &SharpeEstimate,
    alpha: f64,
    method: CiMethod,
    plug_in: PlugIn,
) -> Result<Interval> {
    check_probability("alpha", alpha)?;
    match method {
        CiMethod::Exact => exact_interval(est, alpha),
        CiMethod::Asymptotic { formula, quantile } => {
            let sd = sr_asymptotic_sd(plug_in_value(est, plug_in)?, est.n, formula)?;
            let q = critical_value(est.n, alpha, quantile)?;
            Ok(asymptotic_interval(est.sr_hat, sd, q))
        }
    }
}

/// Tolerance on the Sharpe ratio scale for exact interval endpoints.
const EXACT_CI_TOL: f64 = 1e-8;

/// Exact interval: the Sharpe ratios at which the observed `sqrt(n) SR_hat`
/// sits at the `1 - alpha/2` and `alpha/2` quantiles.
pub fn exact_interval(est: &SharpeEstimate, alpha: f64) -> Result<Interval> {
    check_probability("alpha", alpha)?;
    let n = est.n;
    let root_n = n.as_f64().sqrt();
    let t_obs = root_n * est.sr_hat;
    // decreasing in s
    let g = |s: f64| NctParams::new(n.dof(), root_n * s)?.cdf(t_obs);
    let half_width = 10.0 * sr_asymptotic_sd(est.sr_hat, n, SdFormula::Iid1)?;
    let lower = invert_decreasing(&g, 1.0 - alpha / 2.0, est.sr_hat, half_width)?;
    let upper = invert_decreasing(&g, alpha / 2.0, est.sr_hat, half_width)?;
    Ok(Interval { lower, upper })
}

fn invert_decreasing(
    g: &dyn Fn(f64) -> Result<f64>,
    target: f64,
    center: f64,
    half_width: f64,
) -> Result<f64> {
    let (mut lo, mut hi) = (center - half_width, center + half_width);
    let mut step = half_width;
    let mut tries = 0;
    while g(lo)? < target {
        hi = lo;
        lo -= step;
        step *= 2.0;
        tries += 1;
        if tries > 60 {
            return Err(bracket_failure(target, lo, hi, g(lo).ok()));
        }
    }
    step = half_width;
    while g(hi)? > target {
        lo = hi;
        hi += step;
        step *= 2.0;
        tries += 1;
        if tries > 120 {
            return Err(bracket_failure(target, lo, hi, g(hi).ok()));
        }
    }
    while hi - lo > EXACT_CI_TOL {
        let mid = 0.5 * (lo + hi);
        if g(mid)? > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn bracket_failure(target: f64, lo: f64, hi: f64, value: Option<f64>) -> Error {
    Error::Numeric {
        routine: "exact confidence interval",
        detail: format!(
            "could not bracket cdf = {target} in s ∈ [{lo}, {hi}] (cdf at edge: {value:?})"
        ),
    }
}

/// 2×2 symmetric matrix over (Sharpe ratio, variance).
pub type Matrix2 = [[f64; 2]; 2];

/// Fisher information of n iid normal observations parametrized by
/// Sharpe ratio `s` and variance `v`.
pub fn fisher_information(s: f64, v: f64, n: u32) -> Result<Matrix2> {
    check_crb_args(s, v, n)?;
    let nf = n as f64;
    let off = nf * s / (2.0 * v);
    Ok([[nf, off], [off, nf * (2.0 + s * s) / (4.0 * v * v)]])
}

fn check_crb_args(s: f64, v: f64, n: u32) -> Result<()> {
    ensure_finite("s", s)?;
    ensure_finite("v", v)?;
    if v <= 0.0 {
        return Err(Error::domain("v", v, "variance must be positive"));
    }
    if n == 0 {
        return Err(Error::domain("n", 0.0, "need at least one observation"));
    }
    Ok(())
}

/// Cramér–Rao bound for (Sharpe ratio, variance) with its Fisher information.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrbMatrix {
    pub n: u32,
    pub crb: Matrix2,
    pub fisher: Matrix2,
}

/// `CRB = (1/n) [[1 + s²/2, -s v], [-s v, 2 v²]]`.
pub fn crb(s: f64, v: f64, n: u32) -> Result<CrbMatrix> {
    let fisher = fisher_information(s, v, n)?;
    let nf = n as f64;
    let off = -s * v / nf;
    Ok(CrbMatrix {
        n,
        crb: [[(1.0 + s * s / 2.0) / nf, off], [off, 2.0 * v * v / nf]],
        fisher,
    })
}

/// Settings for [`analyze`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReportOptions {
    pub alpha: f64,
    /// Formula behind the asymptotic interval.
    pub formula: SdFormula,
    pub quantile: QuantileSource,
    /// Value fed to the asymptotic standard deviations.
    pub plug_in: PlugIn,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            alpha: 0.05,
            formula: SdFormula::Iid3,
            quantile: QuantileSource::StudentT,
            plug_in: PlugIn::Raw,
        }
    }
}

/// Everything [`analyze`] knows about one return series.
#[derive(Debug, Clone, PartialEq)]
pub struct SharpeReport {
    pub estimate: SharpeEstimate,
    /// `SR_hat / k_n`; absent for `n < 3`.
    pub sr_debiased: Option<f64>,
    /// Exact standard deviation at the debiased Sharpe ratio; absent for `n < 4`.
    pub sd_exact: Option<f64>,
    /// `σ_IID,1..3 / sqrt(n)` at the plug-in value.
    pub sd_iid: [f64; 3],
    pub ci_exact: Interval,
    pub ci_asymptotic: Interval,
    pub alpha: f64,
    pub options: ReportOptions,
}

pub fn analyze(series: &ReturnSeries, options: ReportOptions) -> Result<SharpeReport> {
    check_probability("alpha", options.alpha)?;
    let estimate = estimate_sharpe(series)?;
    let sr_debiased = if estimate.n.get() >= 3 {
        Some(debias(&estimate)?)
    } else {
        None
    };
    let sd_exact = match sr_debiased {
        Some(d) if estimate.n.get() >= 4 => Some(sr_exact_moments(d, estimate.n)?.1.sqrt()),
        _ => None,
    };
    let plug = plug_in_value(&estimate, options.plug_in)?;
    let mut sd_iid = [0.0; 3];
    for (slot, formula) in sd_iid.iter_mut().zip(SdFormula::TABULATED) {
        *slot = sr_asymptotic_sd(plug, estimate.n, formula)?;
    }
    let ci_exact = exact_interval(&estimate, options.alpha)?;
    let ci_asymptotic = sr_confidence_interval(
        &estimate,
        options.alpha,
        CiMethod::Asymptotic {
            formula: options.formula,
            quantile: options.quantile,
        },
        options.plug_in,
    )?;
    Ok(SharpeReport {
        estimate,
        sr_debiased,
        sd_exact,
        sd_iid,
        ci_exact,
        ci_asymptotic,
        alpha: options.alpha,
        options,
    })
}
