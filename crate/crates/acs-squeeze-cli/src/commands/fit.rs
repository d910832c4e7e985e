//! `fit`: unweighted least squares in powers of 1/J over tabulated points,
//! reading CSV produced by `sweep`/`reproduce-tables` or bare two-column data.

use crate::config::{require_all, ConfigMap};
use crate::output::{deliver, fmt_f64, json_text, Csv};
use crate::{CliError, CliResult, FitArgs};
use acs_squeeze::fit_inverse_j;
use serde_json::json;
use std::path::Path;

pub fn run(args: FitArgs) -> CliResult<()> {
    let mut cfg = ConfigMap::load(&args.config)?;
    let input = args.input.clone().or(cfg.take_path("input")?);
    let degrees_text = args.degrees.clone().or(cfg.take_string("degrees")?);
    let output = args.output.clone().or(cfg.take_path("output")?);
    let residuals = args.residuals.clone().or(cfg.take_path("residuals")?);
    cfg.finish()?;

    require_all(&[
        ("input", input.is_some()),
        ("degrees", degrees_text.is_some()),
    ])?;
    let degrees = parse_degrees(&degrees_text.unwrap())?;
    let points = read_points(&input.unwrap())?;
    let fit = fit_inverse_j(&points, &degrees)?;

    let doc = json!({
        "command": "fit",
        "seed": null,
        "config": { "degrees": degrees },
        "fit": fit,
    });
    deliver(&output, &json_text(&doc))?;

    if let Some(path) = residuals {
        let mut csv = Csv::new("fit");
        csv.comment(
            "degrees",
            degrees
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(","),
        );
        for (d, c) in degrees.iter().zip(&fit.coefficients) {
            csv.comment(&format!("coefficient_{d}"), fmt_f64(*c));
        }
        csv.comment("residual_rms", fmt_f64(fit.residual_rms))
            .header(&["j", "value", "fitted_value", "residual"]);
        for &(j, value) in &points {
            let fitted = fit.evaluate_at_j(j);
            csv.row(&[
                fmt_f64(j),
                fmt_f64(value),
                fmt_f64(fitted),
                fmt_f64(value - fitted),
            ]);
        }
        crate::output::atomic_write(&path, csv.into_string().as_bytes())?;
    }
    Ok(())
}

fn parse_degrees(text: &str) -> CliResult<Vec<u32>> {
    let bad = || {
        CliError(format!(
            "degrees must be a comma-separated list of non-negative integers, got '{text}'"
        ))
    };
    let degrees: Vec<u32> = text
        .split(',')
        .map(|tok| tok.trim().parse().map_err(|_| bad()))
        .collect::<CliResult<_>>()?;
    if degrees.is_empty() {
        return Err(bad());
    }
    Ok(degrees)
}

/// Reads (J, value) points. With a header row, the J column may be named
/// `j` or `two_j` (the latter halved) and the value column `value` or
/// `best_value`; without one, the first two columns are taken as (J, value).
fn read_points(path: &Path) -> CliResult<Vec<(f64, f64)>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError(format!("cannot read input '{}': {e}", path.display())))?;
    let mut rows = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        rows.push((lineno + 1, fields));
    }
    let Some((_, first)) = rows.first() else {
        return Err(CliError(format!(
            "input '{}' contains no data rows",
            path.display()
        )));
    };

    // A header row is any first row that does not parse as numbers.
    let headerless = first.iter().all(|f| f.parse::<f64>().is_ok());
    let (j_col, val_col, j_is_two_j, data_start) = if headerless {
        if first.len() < 2 {
            return Err(CliError(format!(
                "input '{}' needs at least two columns (J, value)",
                path.display()
            )));
        }
        (0, 1, false, 0)
    } else {
        let find = |names: [&str; 2]| first.iter().position(|f| *f == names[0] || *f == names[1]);
        let j_col = find(["j", "two_j"]).ok_or_else(|| {
            CliError(format!(
                "input '{}' header must name a 'j' or 'two_j' column",
                path.display()
            ))
        })?;
        let val_col = find(["value", "best_value"]).ok_or_else(|| {
            CliError(format!(
                "input '{}' header must name a 'value' or 'best_value' column",
                path.display()
            ))
        })?;
        (j_col, val_col, first[j_col] == "two_j", 1)
    };

    let mut points = Vec::new();
    for (lineno, fields) in rows.into_iter().skip(data_start) {
        let cell = |col: usize| -> CliResult<f64> {
            fields
                .get(col)
                .and_then(|f| f.parse::<f64>().ok())
                .ok_or_else(|| {
                    CliError(format!(
                        "input '{}' line {}: cannot read a number in column {}",
                        path.display(),
                        lineno,
                        col + 1
                    ))
                })
        };
        let j_raw = cell(j_col)?;
        let j = if j_is_two_j { j_raw / 2.0 } else { j_raw };
        points.push((j, cell(val_col)?));
    }
    Ok(points)
}
