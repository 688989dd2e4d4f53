//! Data file formats.
//!
//! Fuzzy data: one record per observation with the trapezoid knots
//! `(xi, omega, delta, theta)` — either a CSV file with exactly that header,
//! or a JSON array of 4-element arrays. Triangular numbers carry
//! `omega == delta`, crisp values all four equal.
//!
//! Crisp data (input to `fuzzify`): a single-column CSV of values in (0, 1),
//! with an optional non-numeric header row.
//!
//! Study reports: one CSV row per `(method, n)` cell plus text tables.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use fuzzykuma_core::sim::{Method, StudyReport};
use fuzzykuma_core::{FuzzyObservation, FuzzySample, MembershipFunction};

use crate::CliError;

fn input_err(msg: String) -> CliError {
    CliError::Input(msg)
}

/// Reads a fuzzy sample, dispatching on the `.json` extension (anything else
/// is treated as CSV).
pub fn read_fuzzy_file(path: &Path) -> Result<FuzzySample, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| input_err(format!("{}: {e}", path.display())))?;
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
        parse_fuzzy_json(&text)
    } else {
        parse_fuzzy_csv(&text)
    }
}

fn observation(knots: [f64; 4], what: &str) -> Result<FuzzyObservation, CliError> {
    let m = MembershipFunction::trapezoidal(knots[0], knots[1], knots[2], knots[3])
        .map_err(|e| input_err(format!("{what}: {e}")))?;
    FuzzyObservation::new(m).map_err(|e| input_err(format!("{what}: {e}")))
}

pub fn parse_fuzzy_csv(text: &str) -> Result<FuzzySample, CliError> {
    let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(text.as_bytes());
    let headers = rdr.headers().map_err(|e| input_err(format!("line 1: {e}")))?.clone();
    let expected = ["xi", "omega", "delta", "theta"];
    let names: Vec<String> = headers.iter().map(|h| h.trim().to_ascii_lowercase()).collect();
    if names != expected {
        return Err(input_err(format!(
            "line 1: expected header 'xi,omega,delta,theta', found '{}'",
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut obs = Vec::new();
    for (idx, record) in rdr.records().enumerate() {
        let line = idx + 2; // header occupies line 1
        let record = record.map_err(|e| input_err(format!("line {line}: {e}")))?;
        if record.len() != 4 {
            return Err(input_err(format!(
                "line {line}: expected 4 columns, found {}",
                record.len()
            )));
        }
        let mut knots = [0.0; 4];
        for (k, field) in record.iter().enumerate() {
            knots[k] = field.trim().parse::<f64>().map_err(|_| {
                input_err(format!("line {line}: column {} is not a number: '{field}'", k + 1))
            })?;
        }
        obs.push(observation(knots, &format!("line {line}"))?);
    }
    FuzzySample::new(obs).map_err(|e| input_err(e.to_string()))
}

pub fn parse_fuzzy_json(text: &str) -> Result<FuzzySample, CliError> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| input_err(format!("invalid JSON: {e}")))?;
    let rows = value
        .as_array()
        .ok_or_else(|| input_err("expected a JSON array of 4-element arrays".into()))?;
    let mut obs = Vec::new();
    for (idx, row) in rows.iter().enumerate() {
        let what = format!("record {}", idx + 1);
        let fields = row
            .as_array()
            .ok_or_else(|| input_err(format!("{what}: expected a 4-element array")))?;
        if fields.len() != 4 {
            return Err(input_err(format!(
                "{what}: expected 4 numbers, found {}",
                fields.len()
            )));
        }
        let mut knots = [0.0; 4];
        for (k, f) in fields.iter().enumerate() {
            knots[k] = f
                .as_f64()
                .ok_or_else(|| input_err(format!("{what}: entry {} is not a number", k + 1)))?;
        }
        obs.push(observation(knots, &what)?);
    }
    FuzzySample::new(obs).map_err(|e| input_err(e.to_string()))
}

/// Serializes membership rows as the 4-column CSV format.
pub fn fuzzy_rows_to_csv(rows: &[MembershipFunction]) -> String {
    let mut out = String::from("xi,omega,delta,theta\n");
    for m in rows {
        let _ = writeln!(out, "{},{},{},{}", m.xi(), m.omega(), m.delta(), m.theta());
    }
    out
}

/// Serializes membership rows as the JSON format.
pub fn fuzzy_rows_to_json(rows: &[MembershipFunction]) -> String {
    let value: Vec<[f64; 4]> =
        rows.iter().map(|m| [m.xi(), m.omega(), m.delta(), m.theta()]).collect();
    let mut s = serde_json::to_string_pretty(&value).expect("plain arrays always serialize");
    s.push('\n');
    s
}

/// Reads a single-column CSV of crisp values in (0, 1). A leading non-numeric
/// row is treated as a header.
pub fn read_crisp_csv(path: &Path) -> Result<Vec<f64>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| input_err(format!("{}: {e}", path.display())))?;
    let mut values = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let field = raw.split(',').next().unwrap_or("").trim();
        if field.is_empty() {
            continue;
        }
        match field.parse::<f64>() {
            Ok(x) => {
                if !(x > 0.0 && x < 1.0) {
                    return Err(input_err(format!(
                        "line {line}: value {x} outside the open interval (0, 1)"
                    )));
                }
                values.push(x);
            }
            Err(_) if idx == 0 => continue, // header row
            Err(_) => {
                return Err(input_err(format!("line {line}: not a number: '{field}'")));
            }
        }
    }
    if values.is_empty() {
        return Err(input_err("no crisp values found in input".into()));
    }
    Ok(values)
}

fn opt(v: Option<f64>) -> String {
    match v {
        Some(x) => format!("{x}"),
        None => "NA".into(),
    }
}

/// One CSV row per `(method, n)` cell; optional fields print as `NA`.
pub fn study_report_to_csv(report: &StudyReport) -> String {
    let mut out = String::from(
        "method,n,bias_a,bias_b,mse_a,mse_b,coverage_a,coverage_b,mean_width_a,mean_width_b,failure_count\n",
    );
    for c in &report.cells {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            c.method.label(),
            c.n,
            c.bias_a,
            c.bias_b,
            c.mse_a,
            c.mse_b,
            opt(c.coverage_a),
            opt(c.coverage_b),
            opt(c.mean_width_a),
            opt(c.mean_width_b),
            c.failure_count
        );
    }
    out
}

fn pair(x: f64, y: Option<f64>) -> String {
    match y {
        Some(y) => format!("{x:.4} ({y:.4})"),
        None => format!("{x:.4}"),
    }
}

fn opt_pair(x: Option<f64>, y: Option<f64>) -> String {
    match (x, y) {
        (Some(x), Some(y)) => format!("{x:.4} ({y:.4})"),
        (Some(x), None) => format!("{x:.4}"),
        _ => "NA".into(),
    }
}

/// Human-readable tables: maximum-likelihood methods first, Bayes methods
/// second, in the bias-(MSE) / coverage-(width) layout.
pub fn study_tables(report: &StudyReport) -> String {
    let mut out = String::new();
    let mut sizes: Vec<usize> = report.cells.iter().map(|c| c.n).collect();
    sizes.dedup();

    let ml: Vec<_> = report
        .cells
        .iter()
        .filter(|c| matches!(c.method, Method::NewtonRaphson | Method::Em))
        .collect();
    if !ml.is_empty() {
        out.push_str("Maximum likelihood estimates: bias (MSE) and CI coverage (width)\n");
        let _ = writeln!(
            out,
            "{:>5}  {:<6}  {:>18}  {:>18}  {:>18}  {:>18}  {:>8}",
            "n", "method", "a-hat", "b-hat", "cover a", "cover b", "failed"
        );
        for c in &ml {
            let _ = writeln!(
                out,
                "{:>5}  {:<6}  {:>18}  {:>18}  {:>18}  {:>18}  {:>8}",
                c.n,
                c.method.label(),
                pair(c.bias_a, Some(c.mse_a)),
                pair(c.bias_b, Some(c.mse_b)),
                opt_pair(c.coverage_a, c.mean_width_a),
                opt_pair(c.coverage_b, c.mean_width_b),
                c.failure_count
            );
        }
        out.push('\n');
    }

    let bayes: Vec<_> = report
        .cells
        .iter()
        .filter(|c| matches!(c.method, Method::Mcmc | Method::TierneyKadane))
        .collect();
    if !bayes.is_empty() {
        out.push_str("Bayes estimates: bias (MSE) and HPD coverage (width)\n");
        let _ = writeln!(
            out,
            "{:>5}  {:<6}  {:>18}  {:>18}  {:>18}  {:>18}  {:>8}",
            "n", "method", "a-hat", "b-hat", "cover a", "cover b", "failed"
        );
        for c in &bayes {
            let _ = writeln!(
                out,
                "{:>5}  {:<6}  {:>18}  {:>18}  {:>18}  {:>18}  {:>8}",
                c.n,
                c.method.label(),
                pair(c.bias_a, Some(c.mse_a)),
                pair(c.bias_b, Some(c.mse_b)),
                opt_pair(c.coverage_a, c.mean_width_a),
                opt_pair(c.coverage_b, c.mean_width_b),
                c.failure_count
            );
        }
    }
    out
}
