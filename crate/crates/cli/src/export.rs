use std::path::Path;

use dynex_core::planar::{sample_curve, InvariantCurve};
use serde::Serialize;

use crate::error::{CliError, Result};

#[derive(Serialize)]
struct Row<'a> {
    family: &'a str,
    mu: f64,
    a: f64,
    branch: &'a str,
    x: f64,
    y: f64,
}

/// `n + 1` evenly spaced ordinates in `[0, y_max]`.
pub fn uniform_y_grid(y_max: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|i| y_max * i as f64 / n as f64).collect()
}

/// Curve samples as CSV with header `family,mu,a,branch,x,y`.
pub fn curves_to_csv<W: std::io::Write>(curves: &[InvariantCurve], y_grid: &[f64], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for c in curves {
        for p in sample_curve(c, y_grid) {
            w.serialize(Row {
                family: c.family().name(),
                mu: c.mu(),
                a: c.a(),
                branch: p.branch.name(),
                x: p.x,
                y: p.y,
            })?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn export_curves(curves: &[InvariantCurve], y_grid: &[f64], path: &Path) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    curves_to_csv(curves, y_grid, file).map_err(|source| CliError::Csv { path: path.to_path_buf(), source })
}
