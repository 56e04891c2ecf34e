//! Returns files: a `return` column, optionally preceded by an ISO `date`.

use std::path::Path;

use chrono::NaiveDate;

use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct ReturnsFile {
    pub dates: Option<Vec<NaiveDate>>,
    pub returns: Vec<f64>,
}

fn parse_err(line: u64, message: impl Into<String>) -> CliError {
    CliError::Parse {
        line,
        message: message.into(),
    }
}

pub fn read_returns(path: &Path) -> Result<ReturnsFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    parse_returns(&text)
}

pub fn parse_returns(text: &str) -> Result<ReturnsFile, CliError> {
    // line by line so that errors point at physical lines, comments included
    let mut rows = text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.trim();
        (!l.is_empty() && !l.starts_with('#')).then_some((i as u64 + 1, l))
    });

    let (header_line, header) = match rows.next() {
        Some((line, l)) => (line, split_fields(line, l)?),
        None => return Err(parse_err(1, "file is empty, expected a header")),
    };
    let cols: Vec<String> = header.iter().map(|c| c.to_ascii_lowercase()).collect();
    let dated = match cols.iter().map(String::as_str).collect::<Vec<_>>()[..] {
        ["return"] => false,
        ["date", "return"] => true,
        _ => {
            return Err(parse_err(
                header_line,
                format!(
                    "expected header `return` or `date,return`, found `{}`",
                    header.join(",")
                ),
            ))
        }
    };

    let mut returns = Vec::new();
    let mut dates = Vec::new();
    for (line, l) in rows {
        let fields = split_fields(line, l)?;
        if fields.len() != cols.len() {
            return Err(parse_err(
                line,
                format!("expected {} fields, found {}", cols.len(), fields.len()),
            ));
        }
        let value = &fields[usize::from(dated)];
        let r: f64 = value
            .parse()
            .map_err(|_| parse_err(line, format!("`{value}` is not a number")))?;
        if !r.is_finite() {
            return Err(parse_err(line, format!("`{value}` is not a finite return")));
        }
        if dated {
            let raw = &fields[0];
            let d = NaiveDate::parse_from_str(raw, "%Y-%m-%d")
                .map_err(|_| parse_err(line, format!("`{raw}` is not an ISO date (YYYY-MM-DD)")))?;
            if let Some(prev) = dates.last() {
                if d <= *prev {
                    return Err(parse_err(
                        line,
                        format!("date {d} does not come after {prev}"),
                    ));
                }
            }
            dates.push(d);
        }
        returns.push(r);
    }
    Ok(ReturnsFile {
        dates: dated.then_some(dates),
        returns,
    })
}

fn split_fields(line: u64, text: &str) -> Result<Vec<String>, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    match reader.records().next() {
        Some(Ok(rec)) => Ok(rec.iter().map(str::to_string).collect()),
        Some(Err(e)) => Err(parse_err(line, e.to_string())),
        None => Ok(Vec::new()),
    }
}
