//! Seeded Monte Carlo checks of the closed forms.
//!
//! Replication `r` draws from its own ChaCha stream `(seed, r)`, and
//! per-replication results are collected in index order, so every statistic
//! is bit-for-bit identical whatever the size of the rayon pool.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::aggregation::{sr_scaling_ratio, AggregationSpec};
use crate::error::{ensure_finite, Error, Result};
use crate::nct::NctParams;
use crate::sharpe::{crb, sr_exact_moments, Matrix2, ReturnSeries};
use crate::specfun::{k_n, SampleSize};

/// Simulation settings. `sigma` is the innovation scale; for AR(1) paths the
/// stationary per-period volatility is `sigma / sqrt(1 - rho²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub n: u32,
    pub reps: u32,
    pub mu: f64,
    pub sigma: f64,
    pub rf: f64,
    pub rho: Option<f64>,
    pub seed: u64,
}

impl SimConfig {
    /// iid normal returns with per-period Sharpe ratio `sr` (unit volatility, rf = 0).
    pub fn iid(n: u32, reps: u32, sr: f64, seed: u64) -> Self {
        SimConfig {
            n,
            reps,
            mu: sr,
            sigma: 1.0,
            rf: 0.0,
            rho: None,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::domain(
                "n",
                self.n as f64,
                "paths need at least 2 points",
            ));
        }
        if self.reps < 1 {
            return Err(Error::domain("reps", 0.0, "need at least one replication"));
        }
        ensure_finite("mu", self.mu)?;
        ensure_finite("rf", self.rf)?;
        ensure_finite("sigma", self.sigma)?;
        if self.sigma <= 0.0 {
            return Err(Error::domain("sigma", self.sigma, "must be positive"));
        }
        if let Some(rho) = self.rho {
            ensure_finite("rho", rho)?;
            if rho.abs() >= 1.0 {
                return Err(Error::domain("rho", rho, "AR(1) needs |rho| < 1"));
            }
        }
        Ok(())
    }

    /// Population Sharpe ratio against the stationary volatility.
    pub fn sr_inf(&self) -> f64 {
        let rho = self.rho.unwrap_or(0.0);
        (self.mu - self.rf) * (1.0 - rho * rho).sqrt() / self.sigma
    }

    fn rng(&self, stream: u64) -> ChaCha12Rng {
        let mut rng = ChaCha12Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }
}

fn iid_path(config: &SimConfig, stream: u64) -> Vec<f64> {
    let mut rng = config.rng(stream);
    (0..config.n)
        .map(|_| config.mu + config.sigma * rng.sample::<f64, _>(StandardNormal))
        .collect()
}

fn ar1_path(config: &SimConfig, rho: f64, stream: u64) -> Vec<f64> {
    let mut rng = config.rng(stream);
    let mut eps = config.sigma / (1.0 - rho * rho).sqrt() * rng.sample::<f64, _>(StandardNormal);
    let mut path = Vec::with_capacity(config.n as usize);
    path.push(config.mu + eps);
    for _ in 1..config.n {
        eps = rho * eps + config.sigma * rng.sample::<f64, _>(StandardNormal);
        path.push(config.mu + eps);
    }
    path
}

/// One iid normal path from stream 0 of the seed.
pub fn simulate_iid(config: &SimConfig) -> Result<ReturnSeries> {
    config.validate()?;
    if config.rho.is_some() {
        return Err(Error::domain(
            "rho",
            config.rho.unwrap_or(f64::NAN),
            "iid simulation takes no AR(1) coefficient",
        ));
    }
    ReturnSeries::new(iid_path(config, 0), config.rf)
}

/// One AR(1) path `R_t = mu + eps_t`, `eps_t = rho eps_{t-1} + sigma v_t`,
/// started from the stationary law.
pub fn simulate_ar1(config: &SimConfig) -> Result<ReturnSeries> {
    config.validate()?;
    let rho = config
        .rho
        .ok_or(Error::domain("rho", f64::NAN, "AR(1) simulation needs rho"))?;
    ReturnSeries::new(ar1_path(config, rho, 0), config.rf)
}

/// One comparison between a simulated statistic and its closed form.
#[derive(Debug, Clone, PartialEq)]
pub struct McCheck {
    pub name: String,
    pub estimate: f64,
    pub target: f64,
    /// Monte Carlo standard error of `estimate` (NaN when not meaningful).
    pub std_error: f64,
    /// Largest accepted `|estimate - target|`.
    pub tolerance: f64,
    pub passed: bool,
}

impl McCheck {
    fn new(
        name: impl Into<String>,
        estimate: f64,
        target: f64,
        std_error: f64,
        tolerance: f64,
    ) -> Self {
        McCheck {
            name: name.into(),
            estimate,
            target,
            std_error,
            tolerance,
            passed: estimate.is_finite() && (estimate - target).abs() <= tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct McReport {
    pub reps: u32,
    pub n: u32,
    pub sr_mean: f64,
    pub sr_variance: f64,
    pub ks_distance: Option<f64>,
    /// Covariance of (SR_hat, v_hat) when requested.
    pub covariance: Option<Matrix2>,
    pub checks: Vec<McCheck>,
}

impl McReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Kolmogorov–Smirnov distance between a sample and a continuous CDF.
pub fn ks_distance(sample: &[f64], cdf: impl Fn(f64) -> f64 + Sync) -> f64 {
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    let m = sorted.len() as f64;
    let probs: Vec<f64> = sorted.par_iter().map(|&x| cdf(x)).collect();
    probs
        .iter()
        .enumerate()
        .map(|(i, &f)| (f - i as f64 / m).max((i + 1) as f64 / m - f))
        .fold(0.0, f64::max)
}

/// KS threshold used for the distributional check; 0.005 at 1e5 draws,
/// widened like 1/sqrt(reps) for smaller runs.
pub fn ks_threshold(reps: u32) -> f64 {
    0.005 * (1e5 / reps as f64).sqrt().max(1.0)
}

fn mean_var(x: &[f64]) -> (f64, f64) {
    let m = x.len() as f64;
    let mean = x.iter().sum::<f64>() / m;
    let var = x.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (m - 1.0);
    (mean, var)
}

/// (SR_hat, v_hat) for one path, with the n-1 divisor.
fn sr_and_var(path: &[f64], rf: f64) -> (f64, f64) {
    let (mean, var) = mean_var(path);
    ((mean - rf) / var.sqrt(), var)
}

fn iid_replications(config: &SimConfig) -> Result<Vec<(f64, f64)>> {
    config.validate()?;
    if config.rho.is_some() {
        return Err(Error::domain(
            "rho",
            config.rho.unwrap_or(f64::NAN),
            "this check needs iid returns",
        ));
    }
    Ok((0..config.reps as u64)
        .into_par_iter()
        .map(|r| sr_and_var(&iid_path(config, r), config.rf))
        .collect())
}

/// Empirical law of `sqrt(n) SR_hat` against the non-central t, plus the
/// bias factor and the exact variance.
pub fn validate_sr_distribution(config: &SimConfig) -> Result<McReport> {
    let reps = iid_replications(config)?;
    let sr: Vec<f64> = reps.iter().map(|p| p.0).collect();
    let n = SampleSize::new(config.n)?;
    let sr_inf = config.sr_inf();
    let root_n = (config.n as f64).sqrt();
    let (mean, var) = mean_var(&sr);
    let m = sr.len() as f64;
    let se_mean = (var / m).sqrt();
    let mut checks = Vec::new();

    let law = NctParams::new(n.dof(), root_n * sr_inf)?;
    let t: Vec<f64> = sr.iter().map(|s| root_n * s).collect();
    let ks = ks_distance(&t, |x| law.cdf(x).unwrap_or(f64::NAN));
    checks.push(McCheck::new(
        "ks distance to non-central t",
        ks,
        0.0,
        f64::NAN,
        ks_threshold(config.reps),
    ));

    if config.n >= 3 {
        let k = k_n(n)?;
        if sr_inf != 0.0 {
            let se = se_mean / sr_inf.abs();
            checks.push(McCheck::new(
                "bias ratio vs k_n",
                mean / sr_inf,
                k,
                se,
                3.0 * se,
            ));
        } else {
            checks.push(McCheck::new(
                "mean of SR_hat",
                mean,
                0.0,
                se_mean,
                3.0 * se_mean,
            ));
        }
    }
    if config.n >= 4 {
        let (_, exact_var) = sr_exact_moments(sr_inf, n)?;
        let m4 = sr.iter().map(|s| (s - mean).powi(4)).sum::<f64>() / m;
        let se = ((m4 - var * var) / m).max(0.0).sqrt();
        checks.push(McCheck::new(
            "variance vs exact",
            var,
            exact_var,
            se,
            3.0 * se,
        ));
    }
    Ok(McReport {
        reps: config.reps,
        n: config.n,
        sr_mean: mean,
        sr_variance: var,
        ks_distance: Some(ks),
        covariance: None,
        checks,
    })
}

/// Covariance of (SR_hat, v_hat) against the Cramér–Rao bound.
pub fn validate_crb(config: &SimConfig) -> Result<McReport> {
    let pairs = iid_replications(config)?;
    let s = config.sr_inf();
    let v = config.sigma * config.sigma;
    let bound = crb(s, v, config.n)?.crb;
    let m = pairs.len() as f64;
    let (ms, mv) = pairs
        .iter()
        .fold((0.0, 0.0), |(a, b), p| (a + p.0 / m, b + p.1 / m));
    // per-replication centred products, their means and standard errors
    let entry = |f: &dyn Fn(&(f64, f64)) -> f64| {
        let prods: Vec<f64> = pairs.iter().map(f).collect();
        let (mean, var) = mean_var(&prods);
        (mean * m / (m - 1.0), (var / m).sqrt())
    };
    let (css, se_ss) = entry(&|p| (p.0 - ms) * (p.0 - ms));
    let (csv, se_sv) = entry(&|p| (p.0 - ms) * (p.1 - mv));
    let (cvv, se_vv) = entry(&|p| (p.1 - mv) * (p.1 - mv));

    let mut checks = vec![McCheck::new(
        "var(SR_hat) vs CRB",
        css,
        bound[0][0],
        se_ss,
        0.05 * bound[0][0],
    )];
    if s == 0.0 {
        checks.push(McCheck::new(
            "cov(SR_hat, v_hat) vs 0",
            csv,
            0.0,
            se_sv,
            3.0 * se_sv,
        ));
    } else {
        checks.push(McCheck::new(
            "cov(SR_hat, v_hat) vs CRB",
            csv,
            bound[0][1],
            se_sv,
            0.05 * bound[0][1].abs(),
        ));
        checks.push(McCheck::new(
            "sign of cov(SR_hat, v_hat)",
            csv.signum(),
            -s.signum(),
            f64::NAN,
            0.0,
        ));
    }
    checks.push(McCheck::new(
        "var(v_hat) vs CRB",
        cvv,
        bound[1][1],
        se_vv,
        0.05 * bound[1][1],
    ));
    let classic = 2.0 * v * v / (config.n as f64 - 1.0);
    checks.push(McCheck::new(
        "var(v_hat) vs 2 sigma^4/(n-1)",
        cvv,
        classic,
        se_vv,
        0.02 * classic,
    ));

    let srs: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let (sr_mean, sr_variance) = mean_var(&srs);
    Ok(McReport {
        reps: config.reps,
        n: config.n,
        sr_mean,
        sr_variance,
        ks_distance: None,
        covariance: Some([[css, csv], [csv, cvv]]),
        checks,
    })
}

/// Empirical q-period over one-period Sharpe ratio on long AR(1) paths
/// (non-overlapping sums), averaged over `reps` paths.
pub fn validate_aggregation(config: &SimConfig, q: u32) -> Result<McReport> {
    config.validate()?;
    let rho = config.rho.ok_or(Error::domain(
        "rho",
        f64::NAN,
        "aggregation check needs rho",
    ))?;
    let target = sr_scaling_ratio(&AggregationSpec::ar1(q, rho)?)?;
    if q == 0 || config.n / q < 2 {
        return Err(Error::domain(
            "q",
            q as f64,
            "path must hold at least two q-period blocks",
        ));
    }
    let per_rep: Vec<(f64, f64)> = (0..config.reps as u64)
        .into_par_iter()
        .map(|r| {
            let path = ar1_path(config, rho, r);
            let (sr1, _) = sr_and_var(&path, config.rf);
            let blocks: Vec<f64> = path
                .chunks_exact(q as usize)
                .map(|c| c.iter().sum())
                .collect();
            let (srq, _) = sr_and_var(&blocks, config.rf * q as f64);
            (sr1, srq)
        })
        .collect();
    let m = per_rep.len() as f64;
    let ratios: Vec<f64> = per_rep.iter().map(|p| p.1 / p.0).collect();
    let estimate = ratios.iter().sum::<f64>() / m;
    let sr1: Vec<f64> = per_rep.iter().map(|p| p.0).collect();
    let (sr_mean, sr_variance) = if sr1.len() > 1 {
        mean_var(&sr1)
    } else {
        (sr1[0], f64::NAN)
    };
    // SR_hat on the blocks dominates the noise
    let blocks = (config.n / q) as f64;
    let srq = target * config.sr_inf();
    let se = ((1.0 + srq * srq / 2.0) / blocks).sqrt() / config.sr_inf().abs() / m.sqrt();
    let checks = vec![McCheck::new(
        format!("SR({q})/SR vs closed form"),
        estimate,
        target,
        se,
        0.05 * target,
    )];
    Ok(McReport {
        reps: config.reps,
        n: config.n,
        sr_mean,
        sr_variance,
        ks_distance: None,
        covariance: None,
        checks,
    })
}
