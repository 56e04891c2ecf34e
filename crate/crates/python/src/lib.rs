use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;

use sharpe_core::aggregation::{
    sqrt_rule_deviation as sqrt_dev, sr_scaling_ratio as scaling, AggregationSpec,
};
use sharpe_core::mc::{self, McReport, SimConfig};
use sharpe_core::sharpe::{
    self, CiMethod, PlugIn, QuantileSource, ReportOptions, SdFormula, SharpeEstimate,
};
use sharpe_core::{specfun, NormalApprox, SampleSize};

fn to_py(e: sharpe_core::Error) -> PyErr {
    match e {
        sharpe_core::Error::Numeric { .. } => PyArithmeticError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn size(n: u32) -> PyResult<SampleSize> {
    SampleSize::new(n).map_err(to_py)
}

fn formula(variant: &str) -> PyResult<SdFormula> {
    match variant {
        "1" => Ok(SdFormula::Iid1),
        "2" => Ok(SdFormula::Iid2),
        "3" => Ok(SdFormula::Iid3),
        "3c" => Ok(SdFormula::Iid3Corrected),
        other => Err(PyValueError::new_err(format!(
            "unknown variant {other:?}, expected '1', '2', '3' or '3c'"
        ))),
    }
}

/// Non-central t distribution with `nu` degrees of freedom and non-centrality `eta`.
#[pyclass(frozen, name = "NctParams")]
struct PyNct {
    inner: sharpe_core::NctParams,
}

#[pymethods]
impl PyNct {
    #[new]
    fn new(nu: u32, eta: f64) -> PyResult<Self> {
        Ok(PyNct {
            inner: sharpe_core::NctParams::new(nu, eta).map_err(to_py)?,
        })
    }

    #[getter]
    fn nu(&self) -> u32 {
        self.inner.nu()
    }

    #[getter]
    fn eta(&self) -> f64 {
        self.inner.eta()
    }

    fn cdf(&self, x: f64) -> PyResult<f64> {
        self.inner.cdf(x).map_err(to_py)
    }

    fn pdf(&self, x: f64) -> PyResult<f64> {
        self.inner.pdf(x).map_err(to_py)
    }

    fn quantile(&self, p: f64) -> PyResult<f64> {
        self.inner.quantile(p).map_err(to_py)
    }

    fn raw_moment(&self, k: u32) -> PyResult<f64> {
        self.inner.raw_moment(k).map_err(to_py)
    }

    /// `(mean, variance)`
    fn mean_var(&self) -> PyResult<(f64, f64)> {
        let m = self.inner.mean_var().map_err(to_py)?;
        Ok((m.mean, m.variance))
    }

    #[pyo3(signature = (x, variant = "walck"))]
    fn normal_approx_cdf(&self, x: f64, variant: &str) -> PyResult<f64> {
        let v = match variant {
            "plain" => NormalApprox::Plain,
            "walck" => NormalApprox::Walck,
            other => {
                return Err(PyValueError::new_err(format!(
                    "unknown variant {other:?}, expected 'plain' or 'walck'"
                )))
            }
        };
        self.inner.normal_approx_cdf(x, v).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!(
            "NctParams(nu={}, eta={})",
            self.inner.nu(),
            self.inner.eta()
        )
    }
}

/// Result of `analyze`. Intervals are `(lower, upper)` tuples.
#[pyclass(frozen, name = "SharpeReport")]
struct PyReport {
    inner: sharpe_core::SharpeReport,
}

#[pymethods]
impl PyReport {
    #[getter]
    fn sr(&self) -> f64 {
        self.inner.estimate.sr_hat
    }

    #[getter]
    fn n(&self) -> u32 {
        self.inner.estimate.n.get()
    }

    #[getter]
    fn mean(&self) -> f64 {
        self.inner.estimate.mean_hat
    }

    #[getter]
    fn sigma(&self) -> f64 {
        self.inner.estimate.sigma_hat
    }

    #[getter]
    fn rf(&self) -> f64 {
        self.inner.estimate.rf
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.alpha
    }

    #[getter]
    fn sr_debiased(&self) -> Option<f64> {
        self.inner.sr_debiased
    }

    #[getter]
    fn sd_exact(&self) -> Option<f64> {
        self.inner.sd_exact
    }

    #[getter]
    fn sd_iid(&self) -> (f64, f64, f64) {
        let [a, b, c] = self.inner.sd_iid;
        (a, b, c)
    }

    #[getter]
    fn ci_exact(&self) -> (f64, f64) {
        (self.inner.ci_exact.lower, self.inner.ci_exact.upper)
    }

    #[getter]
    fn ci_asymptotic(&self) -> (f64, f64) {
        (
            self.inner.ci_asymptotic.lower,
            self.inner.ci_asymptotic.upper,
        )
    }

    fn __repr__(&self) -> String {
        let e = &self.inner.estimate;
        format!(
            "SharpeReport(n={}, sr={:.6}, ci_exact=({:.6}, {:.6}))",
            e.n, e.sr_hat, self.inner.ci_exact.lower, self.inner.ci_exact.upper
        )
    }
}

/// Sharpe ratio, bias correction, standard deviations and intervals for a return series.
#[pyfunction]
#[pyo3(signature = (returns, rf = 0.0, alpha = 0.05, variant = "3", quantile = "t", plug_in = "raw"))]
fn analyze(
    returns: Vec<f64>,
    rf: f64,
    alpha: f64,
    variant: &str,
    quantile: &str,
    plug_in: &str,
) -> PyResult<PyReport> {
    let series = sharpe_core::ReturnSeries::new(returns, rf).map_err(to_py)?;
    let options = ReportOptions {
        alpha,
        formula: formula(variant)?,
        quantile: match quantile {
            "t" => QuantileSource::StudentT,
            "normal" => QuantileSource::Normal,
            other => return Err(PyValueError::new_err(format!("unknown quantile {other:?}"))),
        },
        plug_in: match plug_in {
            "raw" => PlugIn::Raw,
            "debiased" => PlugIn::Debiased,
            other => return Err(PyValueError::new_err(format!("unknown plug_in {other:?}"))),
        },
    };
    Ok(PyReport {
        inner: sharpe::analyze(&series, options).map_err(to_py)?,
    })
}

#[pyfunction]
fn ln_gamma(x: f64) -> PyResult<f64> {
    specfun::ln_gamma(x).map_err(to_py)
}

#[pyfunction]
fn reg_inc_beta(y: f64, a: f64, b: f64) -> PyResult<f64> {
    specfun::reg_inc_beta(y, a, b).map_err(to_py)
}

#[pyfunction]
fn k_n(n: u32) -> PyResult<f64> {
    specfun::k_n(size(n)?).map_err(to_py)
}

#[pyfunction]
fn c4(n: u32) -> PyResult<f64> {
    Ok(specfun::c4(size(n)?))
}

#[pyfunction]
fn sr_exact_moments(sr: f64, n: u32) -> PyResult<(f64, f64)> {
    sharpe::sr_exact_moments(sr, size(n)?).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (sr, n, variant = "3"))]
fn sr_asymptotic_sd(sr: f64, n: u32, variant: &str) -> PyResult<f64> {
    sharpe::sr_asymptotic_sd(sr, size(n)?, formula(variant)?).map_err(to_py)
}

/// Interval from an estimate alone. `method` is "exact" or "asym1".."asym3".
#[pyfunction]
#[pyo3(signature = (sr, n, alpha = 0.05, method = "exact", quantile = "t"))]
fn confidence_interval(
    sr: f64,
    n: u32,
    alpha: f64,
    method: &str,
    quantile: &str,
) -> PyResult<(f64, f64)> {
    let est = SharpeEstimate {
        sr_hat: sr,
        n: size(n)?,
        mean_hat: f64::NAN,
        sigma_hat: f64::NAN,
        rf: f64::NAN,
    };
    let quantile = match quantile {
        "t" => QuantileSource::StudentT,
        "normal" => QuantileSource::Normal,
        other => return Err(PyValueError::new_err(format!("unknown quantile {other:?}"))),
    };
    let method = match method {
        "exact" => CiMethod::Exact,
        m if m.starts_with("asym") => CiMethod::Asymptotic {
            formula: formula(&m[4..])?,
            quantile,
        },
        other => return Err(PyValueError::new_err(format!("unknown method {other:?}"))),
    };
    let ci = sharpe::sr_confidence_interval(&est, alpha, method, PlugIn::Raw).map_err(to_py)?;
    Ok((ci.lower, ci.upper))
}

/// Cramér–Rao bound over (Sharpe ratio, variance) as a nested list.
#[pyfunction]
fn crb(s: f64, v: f64, n: u32) -> PyResult<[[f64; 2]; 2]> {
    Ok(sharpe::crb(s, v, n).map_err(to_py)?.crb)
}

#[pyfunction]
fn sr_scaling_ratio(q: u32, rho: f64) -> PyResult<f64> {
    scaling(&AggregationSpec::ar1(q, rho).map_err(to_py)?).map_err(to_py)
}

#[pyfunction]
fn sqrt_rule_deviation(q: u32, rho: f64) -> PyResult<f64> {
    sqrt_dev(&AggregationSpec::ar1(q, rho).map_err(to_py)?).map_err(to_py)
}

type CheckRow = (String, f64, f64, f64, f64, bool);

fn checks(r: McReport) -> Vec<CheckRow> {
    r.checks
        .into_iter()
        .map(|c| {
            (
                c.name,
                c.estimate,
                c.target,
                c.std_error,
                c.tolerance,
                c.passed,
            )
        })
        .collect()
}

/// Simulated law of sqrt(n) SR_hat against the non-central t.
/// Returns `(name, estimate, target, std_error, tolerance, passed)` rows.
#[pyfunction]
#[pyo3(signature = (n, sr, reps = 100_000, seed = 7))]
fn mc_distribution(
    py: Python<'_>,
    n: u32,
    sr: f64,
    reps: u32,
    seed: u64,
) -> PyResult<Vec<CheckRow>> {
    let config = SimConfig::iid(n, reps, sr, seed);
    let report = py
        .detach(|| mc::validate_sr_distribution(&config))
        .map_err(to_py)?;
    Ok(checks(report))
}

#[pymodule]
fn sharpe_nct(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyNct>()?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(ln_gamma, m)?)?;
    m.add_function(wrap_pyfunction!(reg_inc_beta, m)?)?;
    m.add_function(wrap_pyfunction!(k_n, m)?)?;
    m.add_function(wrap_pyfunction!(c4, m)?)?;
    m.add_function(wrap_pyfunction!(sr_exact_moments, m)?)?;
    m.add_function(wrap_pyfunction!(sr_asymptotic_sd, m)?)?;
    m.add_function(wrap_pyfunction!(confidence_interval, m)?)?;
    m.add_function(wrap_pyfunction!(crb, m)?)?;
    m.add_function(wrap_pyfunction!(sr_scaling_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(sqrt_rule_deviation, m)?)?;
    m.add_function(wrap_pyfunction!(mc_distribution, m)?)?;
    Ok(())
}
