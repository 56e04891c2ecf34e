//! Grids of the closed forms laid out as reference tables.

use crate::aggregation::{sqrt_rule_deviation, sr_scaling_ratio, AggregationSpec};
use crate::error::{Error, Result};
use crate::sharpe::{sr_asymptotic_sd, SdFormula};
use crate::specfun::{k_n, SampleSize};

pub const BIAS_N: [u32; 8] = [3, 6, 12, 24, 36, 48, 60, 120];
pub const VARIANCE_N: [u32; 8] = [12, 24, 36, 48, 60, 125, 250, 500];
pub const HORIZONS: [u32; 10] = [2, 3, 4, 6, 12, 24, 36, 48, 125, 250];

/// 0.5, 0.75, ..., 3.
pub fn default_sr_grid() -> Vec<f64> {
    (2..=12).map(|i| i as f64 / 4.0).collect()
}

/// 0.9 down to -0.9 in steps of 0.1.
pub fn default_rho_grid() -> Vec<f64> {
    (-9..=9).rev().map(|i| i as f64 / 10.0).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellUnit {
    Plain,
    /// Differences of per-estimate standard deviations times 100.
    PercentPoints,
}

/// Row-major table with labelled rows and columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub title: String,
    /// Header of the label column, e.g. `SR\n`.
    pub corner: String,
    pub row_labels: Vec<String>,
    pub col_keys: Vec<f64>,
    pub cells: Vec<Vec<f64>>,
    pub unit: CellUnit,
}

impl Table {
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.cells[row][col]
    }
}

fn label(x: f64) -> String {
    format!("{x}")
}

fn sizes(ns: &[u32], min: u32) -> Result<Vec<SampleSize>> {
    ns.iter()
        .map(|&n| {
            if n < min {
                Err(Error::domain(
                    "n",
                    n as f64,
                    "sample size too small for this table",
                ))
            } else {
                SampleSize::new(n)
            }
        })
        .collect()
}

/// One row of `k_n`.
pub fn bias_table(ns: &[u32]) -> Result<Table> {
    let row = sizes(ns, 3)?
        .into_iter()
        .map(k_n)
        .collect::<Result<Vec<_>>>()?;
    Ok(Table {
        title: "Bias factor k_n of the empirical Sharpe ratio".into(),
        corner: "n".into(),
        row_labels: vec!["bias".into()],
        col_keys: ns.iter().map(|&n| n as f64).collect(),
        cells: vec![row],
        unit: CellUnit::Plain,
    })
}

fn formula_name(f: SdFormula) -> &'static str {
    match f {
        SdFormula::Iid1 => "sigma_IID,1",
        SdFormula::Iid2 => "sigma_IID,2",
        SdFormula::Iid3 => "sigma_IID,3",
        SdFormula::Iid3Corrected => "sigma_IID,3 (corrected)",
    }
}

fn sd_grid(srs: &[f64], ns: &[SampleSize], formula: SdFormula) -> Result<Vec<Vec<f64>>> {
    srs.iter()
        .map(|&s| {
            ns.iter()
                .map(|&n| sr_asymptotic_sd(s, n, formula))
                .collect()
        })
        .collect()
}

/// `sigma_IID,i / sqrt(n)` over Sharpe ratios (rows) and sample sizes (columns).
pub fn variance_table(formula: SdFormula, srs: &[f64], ns: &[u32]) -> Result<Table> {
    let sizes = sizes(ns, 2)?;
    Ok(Table {
        title: format!(
            "Asymptotic standard deviation of SR_hat, {}",
            formula_name(formula)
        ),
        corner: "SR\\n".into(),
        row_labels: srs.iter().copied().map(label).collect(),
        col_keys: ns.iter().map(|&n| n as f64).collect(),
        cells: sd_grid(srs, &sizes, formula)?,
        unit: CellUnit::Plain,
    })
}

/// `100 (sd_a - sd_b)` in percentage points.
pub fn variance_diff_table(pair: (SdFormula, SdFormula), srs: &[f64], ns: &[u32]) -> Result<Table> {
    let sizes = sizes(ns, 2)?;
    let a = sd_grid(srs, &sizes, pair.0)?;
    let b = sd_grid(srs, &sizes, pair.1)?;
    let cells = a
        .iter()
        .zip(&b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| 100.0 * (x - y)).collect())
        .collect();
    Ok(Table {
        title: format!(
            "Difference between {} and {}",
            formula_name(pair.0),
            formula_name(pair.1)
        ),
        corner: "SR\\n".into(),
        row_labels: srs.iter().copied().map(label).collect(),
        col_keys: ns.iter().map(|&n| n as f64).collect(),
        cells,
        unit: CellUnit::PercentPoints,
    })
}

fn ar1_grid(
    rhos: &[f64],
    qs: &[u32],
    f: fn(&AggregationSpec) -> Result<f64>,
) -> Result<Vec<Vec<f64>>> {
    rhos.iter()
        .map(|&rho| {
            qs.iter()
                .map(|&q| f(&AggregationSpec::ar1(q, rho)?))
                .collect()
        })
        .collect()
}

/// `SR(q) / SR` for AR(1) returns over ρ (rows) and horizons (columns).
pub fn compounding_table(rhos: &[f64], qs: &[u32]) -> Result<Table> {
    Ok(Table {
        title: "Sharpe ratio scaling SR(q)/SR for AR(1) returns".into(),
        corner: "rho\\q".into(),
        row_labels: rhos.iter().copied().map(label).collect(),
        col_keys: qs.iter().map(|&q| q as f64).collect(),
        cells: ar1_grid(rhos, qs, sr_scaling_ratio)?,
        unit: CellUnit::Plain,
    })
}

/// `sqrt(q)` over the true scaling factor for AR(1) returns.
pub fn sqrt_deviation_table(rhos: &[f64], qs: &[u32]) -> Result<Table> {
    Ok(Table {
        title: "Square-root rule over the AR(1) scaling factor".into(),
        corner: "rho\\q".into(),
        row_labels: rhos.iter().copied().map(label).collect(),
        col_keys: qs.iter().map(|&q| q as f64).collect(),
        cells: ar1_grid(rhos, qs, sqrt_rule_deviation)?,
        unit: CellUnit::Plain,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grids() {
        let sr = default_sr_grid();
        assert_eq!(sr.len(), 11);
        assert_eq!((sr[0], sr[10]), (0.5, 3.0));
        let rho = default_rho_grid();
        assert_eq!(rho.len(), 19);
        assert_eq!((rho[0], rho[9], rho[18]), (0.9, 0.0, -0.9));
    }

    #[test]
    fn shapes_and_spot_values() {
        let b = bias_table(&BIAS_N).unwrap();
        assert_eq!(b.cells[0].len(), 8);
        assert!((b.get(0, 2) - 1.075).abs() < 5e-4);
        assert!(bias_table(&[2]).is_err());

        let d = variance_diff_table(
            (SdFormula::Iid2, SdFormula::Iid3),
            &default_sr_grid(),
            &VARIANCE_N,
        )
        .unwrap();
        assert_eq!(d.unit, CellUnit::PercentPoints);
        assert!((d.get(0, 0) - 1.21).abs() < 5e-3);

        let c = compounding_table(&default_rho_grid(), &HORIZONS).unwrap();
        assert_eq!((c.cells.len(), c.cells[0].len()), (19, 10));
        assert!(compounding_table(&[1.0], &[2]).is_err());
    }
}
