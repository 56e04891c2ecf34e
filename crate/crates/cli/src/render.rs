//! Text and CSV rendering. Text rounds for reading; CSV keeps every digit.

use std::fmt::Write as _;

use sharpe_core::mc::McReport;
use sharpe_core::sharpe::Interval;
use sharpe_core::tables::{CellUnit, Table};

use crate::Analysis;

fn csv_string(rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.write_record(row).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("utf-8 input")
}

pub fn table_csv(t: &Table) -> String {
    let mut rows = vec![std::iter::once(t.corner.clone())
        .chain(t.col_keys.iter().map(|k| k.to_string()))
        .collect::<Vec<_>>()];
    for (label, cells) in t.row_labels.iter().zip(&t.cells) {
        rows.push(
            std::iter::once(label.clone())
                .chain(cells.iter().map(|v| v.to_string()))
                .collect(),
        );
    }
    csv_string(&rows)
}

pub fn table_text(t: &Table) -> String {
    let cell = |v: f64| match t.unit {
        CellUnit::Plain => format!("{v:.3}"),
        CellUnit::PercentPoints => format!("{v:.2}%"),
    };
    let width = t
        .cells
        .iter()
        .flatten()
        .map(|&v| cell(v).len())
        .chain(t.col_keys.iter().map(|k| k.to_string().len()))
        .max()
        .unwrap_or(0)
        + 2;
    let label_width = t
        .row_labels
        .iter()
        .map(String::len)
        .chain([t.corner.len()])
        .max()
        .unwrap_or(0);
    let mut out = String::new();
    let _ = writeln!(out, "{}", t.title);
    let _ = write!(out, "{:<label_width$}", t.corner);
    for k in &t.col_keys {
        let _ = write!(out, "{:>width$}", k.to_string());
    }
    out.push('\n');
    for (label, cells) in t.row_labels.iter().zip(&t.cells) {
        let _ = write!(out, "{label:<label_width$}");
        for &v in cells {
            let _ = write!(out, "{:>width$}", cell(v));
        }
        out.push('\n');
    }
    out
}

fn level(alpha: f64) -> String {
    format!("{}%", ((1.0 - alpha) * 1e6).round() / 1e4)
}

fn interval3(ci: &Interval) -> String {
    format!("[{:.3}, {:.3}]", ci.lower, ci.upper)
}

fn opt3(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".to_string(), |x| format!("{x:.3}"))
}

pub fn analysis_text(a: &Analysis) -> String {
    let r = &a.report;
    let e = &r.estimate;
    let mut lines: Vec<(String, String)> = vec![("observations".into(), e.n.to_string())];
    if let Some((first, last)) = a.span {
        lines.push(("period".into(), format!("{first} .. {last}")));
    }
    lines.extend([
        ("mean return".into(), format!("{:.6}", e.mean_hat)),
        ("std deviation".into(), format!("{:.6}", e.sigma_hat)),
        ("risk-free rate".into(), format!("{:.6}", e.rf)),
        ("sharpe ratio".into(), format!("{:.3}", e.sr_hat)),
        ("bias factor k_n".into(), opt3(a.k_n)),
        ("debiased sharpe ratio".into(), opt3(r.sr_debiased)),
        ("sd exact".into(), opt3(r.sd_exact)),
    ]);
    for (i, sd) in r.sd_iid.iter().enumerate() {
        lines.push((format!("sd sigma_IID,{}", i + 1), format!("{sd:.3}")));
    }
    let mark = |selected: bool| if selected { " *" } else { "" };
    lines.push((
        format!(
            "{} CI exact{}",
            level(r.alpha),
            mark(a.method_label == "exact")
        ),
        interval3(&r.ci_exact),
    ));
    lines.push((
        format!(
            "{} CI {} ({}){}",
            level(r.alpha),
            a.asymptotic_label,
            a.quantile_label,
            mark(a.method_label != "exact")
        ),
        interval3(&r.ci_asymptotic),
    ));
    lines.push(("lag-1 autocorrelation".into(), opt3(a.lag1)));
    let width = lines.iter().map(|l| l.0.chars().count()).max().unwrap_or(0) + 2;
    let mut out = String::new();
    for (k, v) in lines {
        let pad = width - k.chars().count();
        let _ = writeln!(out, "{k}{}{v}", " ".repeat(pad));
    }
    out
}

pub fn analysis_csv(a: &Analysis) -> String {
    let r = &a.report;
    let e = &r.estimate;
    let opt = |v: Option<f64>| v.map_or_else(String::new, |x| x.to_string());
    let mut rows = vec![
        vec!["field".to_string(), "value".to_string()],
        vec!["n".into(), e.n.to_string()],
        vec!["mean".into(), e.mean_hat.to_string()],
        vec!["sigma".into(), e.sigma_hat.to_string()],
        vec!["rf".into(), e.rf.to_string()],
        vec!["alpha".into(), r.alpha.to_string()],
        vec!["sr".into(), e.sr_hat.to_string()],
        vec!["k_n".into(), opt(a.k_n)],
        vec!["sr_debiased".into(), opt(r.sr_debiased)],
        vec!["sd_exact".into(), opt(r.sd_exact)],
    ];
    for (i, sd) in r.sd_iid.iter().enumerate() {
        rows.push(vec![format!("sd_iid{}", i + 1), sd.to_string()]);
    }
    rows.extend([
        vec!["ci_exact_lower".into(), r.ci_exact.lower.to_string()],
        vec!["ci_exact_upper".into(), r.ci_exact.upper.to_string()],
        vec![
            "ci_asymptotic_method".into(),
            a.asymptotic_label.to_string(),
        ],
        vec![
            "ci_asymptotic_lower".into(),
            r.ci_asymptotic.lower.to_string(),
        ],
        vec![
            "ci_asymptotic_upper".into(),
            r.ci_asymptotic.upper.to_string(),
        ],
        vec!["lag1_autocorrelation".into(), opt(a.lag1)],
    ]);
    csv_string(&rows)
}

fn fmt_num(v: f64) -> String {
    if v.is_nan() {
        "-".into()
    } else {
        format!("{v:.6}")
    }
}

pub fn mc_text(title: &str, r: &McReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{title}");
    let name_width = r
        .checks
        .iter()
        .map(|c| c.name.len())
        .max()
        .unwrap_or(5)
        .max(5)
        + 2;
    let _ = writeln!(
        out,
        "{:<name_width$}{:>12}{:>12}{:>12}{:>12}  result",
        "check", "estimate", "target", "std err", "tolerance"
    );
    for c in &r.checks {
        let _ = writeln!(
            out,
            "{:<name_width$}{:>12}{:>12}{:>12}{:>12}  {}",
            c.name,
            fmt_num(c.estimate),
            fmt_num(c.target),
            fmt_num(c.std_error),
            fmt_num(c.tolerance),
            if c.passed { "PASS" } else { "FAIL" }
        );
    }
    let _ = writeln!(out, "overall: {}", if r.passed() { "PASS" } else { "FAIL" });
    out
}

pub fn mc_csv(r: &McReport) -> String {
    let mut rows = vec![[
        "check",
        "estimate",
        "target",
        "std_error",
        "tolerance",
        "passed",
    ]
    .map(String::from)
    .to_vec()];
    for c in &r.checks {
        rows.push(vec![
            c.name.clone(),
            c.estimate.to_string(),
            c.target.to_string(),
            c.std_error.to_string(),
            c.tolerance.to_string(),
            c.passed.to_string(),
        ]);
    }
    csv_string(&rows)
}
