//! The non-central Student t distribution with integer degrees of freedom.
//!
//! The CDF uses the Poisson-mixture series of incomplete beta functions
//!
//! ```text
//! F(x) = Φ(-η) + ½ Σ_j [ p_j I_y(j + ½, ν/2) + q_j I_y(j + 1, ν/2) ],  y = x² / (x² + ν)
//! ```
//!
//! for `x >= 0`, and the reflection `F_{ν,η}(x) = 1 - F_{ν,-η}(-x)` for
//! `x < 0`. Summation starts at the mode of the Poisson weights and sweeps
//! outwards; the incomplete beta values are carried between neighbouring
//! terms by the recurrence `I_y(a+1, b) = I_y(a, b) - y^a (1-y)^b / (a B(a, b))`
//! so only two continued fractions are evaluated per call.

use std::f64::consts::{LN_2, PI};

use crate::error::{ensure_finite, Error, Result};
use crate::specfun::{beta_kernel, check_probability, inc_beta, ln_gamma_pos, phi};

/// Relative size below which a series term is considered negligible.
const SERIES_REL_EPS: f64 = 1e-15;
/// Maximum number of terms summed in each direction from the mode.
const SERIES_MAX_TERMS: usize = 100_000;
/// Below this |x| the density uses its closed form at the origin.
const PDF_ORIGIN_SWITCH: f64 = 1e-12;
/// Absolute bisection tolerance on x for quantiles.
const QUANTILE_X_TOL: f64 = 1e-10;

/// Degrees of freedom `nu` and non-centrality `eta` of a non-central t.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NctParams {
    nu: u32,
    eta: f64,
}

/// Mean, variance and the raw moments `E[T^k]` that exist (at most k = 4).
#[derive(Debug, Clone, PartialEq)]
pub struct NctMoments {
    pub mean: f64,
    pub variance: f64,
    /// `raw[k - 1] = E[T^k]`, for every `k <= 4` with `k < nu`.
    pub raw: Vec<f64>,
}

/// Normal approximations to the non-central t CDF.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormalApprox {
    /// N(mean, variance) using the exact first two moments.
    Plain,
    /// `(t (1 - 1/(4ν)) - η) / sqrt(1 + t²/(2ν))` treated as standard normal.
    Walck,
}

impl NctParams {
    pub fn new(nu: u32, eta: f64) -> Result<Self> {
        if nu == 0 {
            return Err(Error::domain(
                "nu",
                0.0,
                "degrees of freedom must be at least 1",
            ));
        }
        ensure_finite("eta", eta)?;
        Ok(NctParams { nu, eta })
    }

    pub fn nu(&self) -> u32 {
        self.nu
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    fn nu_f64(&self) -> f64 {
        self.nu as f64
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        if x.is_nan() {
            return Err(Error::domain("x", x, "must not be NaN"));
        }
        if x == f64::INFINITY {
            return Ok(1.0);
        }
        if x == f64::NEG_INFINITY {
            return Ok(0.0);
        }
        let nu = self.nu_f64();
        let value = if x >= 0.0 {
            phi(-self.eta) + half_series(nu, self.eta, x)?
        } else {
            1.0 - (phi(self.eta) + half_series(nu, -self.eta, -x)?)
        };
        Ok(value.clamp(0.0, 1.0))
    }

    pub fn pdf(&self, x: f64) -> Result<f64> {
        ensure_finite("x", x)?;
        let nu = self.nu_f64();
        if x.abs() < PDF_ORIGIN_SWITCH {
            let ln = ln_gamma_pos((nu + 1.0) / 2.0)
                - ln_gamma_pos(nu / 2.0)
                - 0.5 * (PI * nu).ln()
                - 0.5 * self.eta * self.eta;
            return Ok(ln.exp());
        }
        // The Φ(±η) terms of the two CDFs cancel, so only the series parts
        // are differenced; that keeps full accuracy for small |x|.
        let eta = if x > 0.0 { self.eta } else { -self.eta };
        let ax = x.abs();
        let stretched = ax * (1.0 + 2.0 / nu).sqrt();
        let wide = half_series(nu + 2.0, eta, stretched)?;
        let base = half_series(nu, eta, ax)?;
        Ok((nu / ax * (wide - base)).max(0.0))
    }

    /// Raw moment `E[T^k]` for `k` in 1..=4. Requires `nu > k`.
    pub fn raw_moment(&self, k: u32) -> Result<f64> {
        if !(1..=4).contains(&k) {
            return Err(Error::domain(
                "k",
                k as f64,
                "raw moments are implemented for orders 1 to 4",
            ));
        }
        if self.nu <= k {
            return Err(Error::MomentUndefined {
                order: k,
                dof: self.nu,
            });
        }
        let nu = self.nu_f64();
        let kf = k as f64;
        let scale = (0.5 * kf * (nu / 2.0).ln() + ln_gamma_pos((nu - kf) / 2.0)
            - ln_gamma_pos(nu / 2.0))
        .exp();
        let e = self.eta;
        let e2 = e * e;
        // exp(-η²/2) dᵏ/dηᵏ exp(η²/2)
        let poly = match k {
            1 => e,
            2 => 1.0 + e2,
            3 => e * (3.0 + e2),
            _ => 3.0 + 6.0 * e2 + e2 * e2,
        };
        Ok(scale * poly)
    }

    /// `E[T] = η k_{ν+1}`. Requires `nu >= 2`.
    pub fn mean(&self) -> Result<f64> {
        if self.nu < 2 {
            return Err(Error::MomentUndefined {
                order: 1,
                dof: self.nu,
            });
        }
        let nu = self.nu_f64();
        let k = (nu / 2.0).sqrt() * (ln_gamma_pos((nu - 1.0) / 2.0) - ln_gamma_pos(nu / 2.0)).exp();
        Ok(self.eta * k)
    }

    /// Mean, variance and existing raw moments. Requires `nu >= 3`.
    pub fn mean_var(&self) -> Result<NctMoments> {
        if self.nu < 3 {
            return Err(Error::MomentUndefined {
                order: 2,
                dof: self.nu,
            });
        }
        let nu = self.nu_f64();
        let mean = self.mean()?;
        let variance = nu * (1.0 + self.eta * self.eta) / (nu - 2.0) - mean * mean;
        let raw = (1..=4u32.min(self.nu - 1))
            .map(|k| self.raw_moment(k))
            .collect::<Result<Vec<_>>>()?;
        Ok(NctMoments {
            mean,
            variance,
            raw,
        })
    }

    /// Inverse CDF by bisection on a bracket around the mean.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        check_probability("p", p)?;
        let (center, spread) = match self.mean_var() {
            Ok(m) => (m.mean, 12.0 * m.variance.sqrt()),
            Err(_) => (self.eta, 12.0 * (1.0 + self.eta.abs())),
        };
        let (mut lo, mut hi) = (center - spread, center + spread);
        let mut width = spread;
        let mut expansions = 0;
        while self.cdf(lo)? > p {
            hi = hi.min(lo);
            lo -= width;
            width *= 2.0;
            expansions += 1;
            if expansions > 200 || !lo.is_finite() {
                return Err(self.bracket_error(p, lo, hi));
            }
        }
        width = spread;
        while self.cdf(hi)? < p {
            lo = lo.max(hi);
            hi += width;
            width *= 2.0;
            expansions += 1;
            if expansions > 400 || !hi.is_finite() {
                return Err(self.bracket_error(p, lo, hi));
            }
        }
        loop {
            let mid = 0.5 * (lo + hi);
            if hi - lo <= QUANTILE_X_TOL || mid <= lo || mid >= hi {
                return Ok(mid);
            }
            if self.cdf(mid)? < p {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }

    fn bracket_error(&self, p: f64, lo: f64, hi: f64) -> Error {
        Error::Numeric {
            routine: "nct quantile",
            detail: format!(
                "could not bracket p={p} for nu={}, eta={} (last bracket [{lo}, {hi}])",
                self.nu, self.eta
            ),
        }
    }

    pub fn normal_approx_cdf(&self, x: f64, variant: NormalApprox) -> Result<f64> {
        ensure_finite("x", x)?;
        let z = match variant {
            NormalApprox::Plain => {
                let m = self.mean_var()?;
                (x - m.mean) / m.variance.sqrt()
            }
            NormalApprox::Walck => {
                let nu = self.nu_f64();
                (x * (1.0 - 1.0 / (4.0 * nu)) - self.eta) / (1.0 + x * x / (2.0 * nu)).sqrt()
            }
        };
        Ok(phi(z))
    }
}

/// ½ Σ_j [p_j I_y(j+½, ν/2) + q_j I_y(j+1, ν/2)] for `x >= 0`.
fn half_series(nu: f64, eta: f64, x: f64) -> Result<f64> {
    let x2 = x * x;
    let y = x2 / (x2 + nu);
    let y_comp = nu / (x2 + nu);
    if y <= 0.0 {
        return Ok(0.0);
    }
    let b = nu / 2.0;
    let lambda = 0.5 * eta * eta;
    let mode = lambda.floor();

    // Poisson-type weights at the mode, in log space.
    let (p_mode, q_mode) = if lambda == 0.0 {
        (1.0, 0.0)
    } else {
        let common = -lambda + mode * lambda.ln();
        let p = (common - ln_gamma_pos(mode + 1.0)).exp();
        let q = (common - ln_gamma_pos(mode + 1.5) + eta.abs().ln() - 0.5 * LN_2).exp();
        (p, q.copysign(eta))
    };

    let ap0 = mode + 0.5;
    let aq0 = mode + 1.0;
    let ip_mode = inc_beta(y, y_comp, ap0, b)?;
    let iq_mode = inc_beta(y, y_comp, aq0, b)?;
    // g(a) = y^a (1-y)^b / (a B(a, b)), so that I(a+1) = I(a) - g(a)
    let gp_mode = beta_kernel(y, y_comp, ap0, b) / ap0;
    let gq_mode = beta_kernel(y, y_comp, aq0, b) / aq0;

    let mut sum = p_mode * ip_mode + q_mode * iq_mode;
    let floor = phi(-eta);
    let negligible = |term: f64, sum: f64| term <= SERIES_REL_EPS * sum.abs().max(floor);

    // Forward sweep: j = mode+1, mode+2, ...
    let (mut p, mut q) = (p_mode, q_mode);
    let (mut ip, mut iq) = (ip_mode, iq_mode);
    let (mut gp, mut gq) = (gp_mode, gq_mode);
    let mut converged = false;
    for i in 0..SERIES_MAX_TERMS {
        let j = mode + i as f64;
        let (ap, aq) = (j + 0.5, j + 1.0);
        ip -= gp;
        iq -= gq;
        gp *= y * (ap + b) / (ap + 1.0);
        gq *= y * (aq + b) / (aq + 1.0);
        p *= lambda / (j + 1.0);
        q *= lambda / (j + 1.5);
        let term = p * ip.max(0.0) + q * iq.max(0.0);
        sum += term;
        if negligible(p * ip.abs() + q.abs() * iq.abs(), sum) {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(series_error(nu, eta, x));
    }

    // Backward sweep: j = mode-1, ..., 0. I(a-1) = I(a) + g(a-1),
    // g(a-1) = g(a) a / (y (a - 1 + b)).
    let (mut p, mut q) = (p_mode, q_mode);
    let (mut ip, mut iq) = (ip_mode, iq_mode);
    let (mut gp, mut gq) = (gp_mode, gq_mode);
    let mut j = mode;
    let mut steps = 0;
    while j >= 1.0 {
        let (ap, aq) = (j + 0.5, j + 1.0);
        gp *= ap / (y * (ap - 1.0 + b));
        gq *= aq / (y * (aq - 1.0 + b));
        ip = (ip + gp).min(1.0);
        iq = (iq + gq).min(1.0);
        p *= j / lambda;
        q *= (j + 0.5) / lambda;
        j -= 1.0;
        sum += p * ip + q * iq;
        // I <= 1, and the weights keep shrinking below the mode.
        if negligible(p + q.abs(), sum) {
            break;
        }
        steps += 1;
        if steps >= SERIES_MAX_TERMS {
            return Err(series_error(nu, eta, x));
        }
    }
    Ok(0.5 * sum)
}

fn series_error(nu: f64, eta: f64, x: f64) -> Error {
    Error::Numeric {
        routine: "nct cdf series",
        detail: format!(
            "no convergence within {SERIES_MAX_TERMS} terms for nu={nu}, eta={eta}, x={x}"
        ),
    }
}
