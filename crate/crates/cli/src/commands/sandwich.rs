use std::f64::consts::PI;

use fracwave_core::norm::{band_constants, sandwich_exact, sandwich_numerical};
use serde_json::json;

use crate::config::RunConfig;
use crate::error::Result;
use crate::report::{Outcome, Table};
use crate::row;

pub fn run(c: &RunConfig) -> Result<Outcome> {
    let spec = c.spec()?;
    let lambdas = c.lambdas_or(&[0.1, 1.0, 2.0, 10.0])?;
    let times = c.times_or(&[0.5, 1.0, 2.0])?;
    let mut table = Table::new("sandwich", &["lambda", "t", "closed_form", "quadrature", "relative_error", "holds"]);
    let mut holds = true;
    for &t in &times {
        for &lambda in &lambdas {
            let exact = sandwich_exact(lambda, t)?;
            let numerical = sandwich_numerical(lambda, t, &spec)?;
            let rel = (numerical - exact).abs() / exact.abs();
            let ok = rel <= spec.relative_tolerance;
            holds &= ok;
            table.push(row![lambda, t, exact, numerical, rel, ok]);
        }
    }
    let mut bands = Table::new("sandwich_band", &["t", "c_lo", "c_hi", "argmin", "argmax", "limit", "stable"]);
    for &t in &times {
        let b = band_constants(t)?;
        bands.push(row![t, b.c_lo, b.c_hi, b.argmin, b.argmax, PI * t, b.stable]);
    }
    Ok(Outcome {
        holds,
        summary: json!({ "tolerance": spec.relative_tolerance }),
        tables: vec![table, bands],
        blobs: vec![],
    })
}
