//! Exact finite-sample inference for the Sharpe ratio.
//!
//! Under iid normal returns, `sqrt(n)` times the empirical Sharpe ratio is
//! distributed as a non-central Student t with `n - 1` degrees of freedom and
//! non-centrality `sqrt(n) * SR`. This crate builds on that identity:
//!
//! * [`specfun`]: log-gamma, regularized incomplete beta, normal CDF and
//!   quantile, and the bias constants `k_n` and `c4(n)`.
//! * [`nct`]: CDF, density, moments and quantiles of the non-central t.
//! * [`sharpe`]: estimation, bias correction, exact and asymptotic standard
//!   deviations, confidence intervals and the Cramér–Rao bound.
//! * [`aggregation`]: how the Sharpe ratio scales with the return horizon
//!   under autocorrelation, including the AR(1) case.
//! * [`mc`]: a seeded, parallel Monte Carlo harness that checks the closed
//!   forms above against simulation.
//! * [`tables`]: generators for the standard reference tables.

pub mod aggregation;
mod error;
pub mod mc;
pub mod nct;
pub mod sharpe;
pub mod specfun;
pub mod tables;

pub use error::{Error, Result};
pub use nct::{NctMoments, NctParams, NormalApprox};
pub use sharpe::{ReturnSeries, SharpeEstimate, SharpeReport};
pub use specfun::SampleSize;
