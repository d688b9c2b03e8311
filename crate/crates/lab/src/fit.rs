//! Exponential-rate fits of CSV time series.

use std::path::Path;

use serde::Serialize;

use crate::LabError;

pub const MIN_ROWS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitReport {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub rows: usize,
    pub window: (f64, f64),
}

/// Weighted least squares of `log norm` against `τ` on `window`. Missing
/// weights mean uniform ones.
pub fn fit_report(
    taus: &[f64],
    norms: &[f64],
    weights: Option<&[f64]>,
    window: (f64, f64),
) -> Result<FitReport, LabError> {
    let degenerate = |m: String| Err(LabError::Degenerate(m));
    if taus.len() != norms.len() || weights.is_some_and(|w| w.len() != taus.len()) {
        return degenerate("columns differ in length".to_string());
    }
    let mut rows = Vec::new();
    for (k, (&t, &n)) in taus.iter().zip(norms).enumerate() {
        if !(t >= window.0 - 1e-12 && t <= window.1 + 1e-12) {
            continue;
        }
        if !(n > 0.0 && n.is_finite()) {
            return degenerate(format!("row {k}: norm {n} is not positive"));
        }
        let w = weights.map_or(1.0, |w| w[k]);
        if !(w > 0.0 && w.is_finite()) {
            return degenerate(format!("row {k}: weight {w} is not positive"));
        }
        rows.push((t, n.ln(), w));
    }
    if rows.len() < MIN_ROWS {
        return degenerate(format!("{} rows in [{}, {}], need {MIN_ROWS}", rows.len(), window.0, window.1));
    }
    let sw: f64 = rows.iter().map(|r| r.2).sum();
    let mx = rows.iter().map(|r| r.2 * r.0).sum::<f64>() / sw;
    let my = rows.iter().map(|r| r.2 * r.1).sum::<f64>() / sw;
    let sxx: f64 = rows.iter().map(|r| r.2 * (r.0 - mx).powi(2)).sum();
    let sxy: f64 = rows.iter().map(|r| r.2 * (r.0 - mx) * (r.1 - my)).sum();
    let syy: f64 = rows.iter().map(|r| r.2 * (r.1 - my).powi(2)).sum();
    if !(sxx > 0.0) {
        return degenerate("all τ in the window coincide".to_string());
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = rows.iter().map(|r| r.2 * (r.1 - slope * r.0 - intercept).powi(2)).sum();
    // Constant series: syy is rounding noise and the fit is exact.
    let level = 1e-24 * sw * (1.0 + my * my);
    let r_squared = if syy > level { 1.0 - sse / syy } else { 1.0 };
    Ok(FitReport { slope, intercept, r_squared, rows: rows.len(), window })
}

/// Reads `tau` and `column` from a CSV file with a header row.
pub fn read_series(path: &Path, column: &str) -> Result<(Vec<f64>, Vec<f64>), LabError> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| LabError::Csv { path: path.to_path_buf(), source: e })?;
    let headers = reader.headers().map_err(|e| LabError::Csv { path: path.to_path_buf(), source: e })?.clone();
    let index = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| LabError::Degenerate(format!("{} has no `{name}` column", path.display())))
    };
    let (ti, ci) = (index("tau")?, index(column)?);
    let (mut taus, mut values) = (Vec::new(), Vec::new());
    for (k, record) in reader.records().enumerate() {
        let record = record.map_err(|e| LabError::Csv { path: path.to_path_buf(), source: e })?;
        let field = |i: usize| -> Result<f64, LabError> {
            let s = record.get(i).unwrap_or("").trim();
            s.parse().map_err(|_| LabError::Degenerate(format!("row {k}: `{s}` is not a number")))
        };
        taus.push(field(ti)?);
        values.push(field(ci)?);
    }
    Ok((taus, values))
}
