use fracwave_core::norm::{continuity_modulus_with, domination_check, spatial_increment, variance_with, NormEngine};
use fracwave_core::Operator;
use rayon::prelude::*;
use serde_json::json;

use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::report::{Outcome, Table};
use crate::row;

/// Increments at `k = steps` must fall below this fraction of the variance.
pub const FINAL_FRACTION: f64 = 0.05;

const DOMINATION_RADII: [f64; 6] = [0.1, 0.5, 1.0, 2.0, 10.0, 100.0];

pub fn run(c: &RunConfig) -> Result<Outcome> {
    let spec = c.spec()?;
    let model = c.model()?;
    let mu = c.measure()?;
    let t = c.times_or(&[1.0])?[0];
    if !(1..=40).contains(&c.steps) {
        return Err(CliError::config(format!("steps = {} must lie in 1..=40", c.steps)));
    }
    let op = Operator::from(c.operator);
    let engine = NormEngine::new(&model, &spec)?;
    let v = variance_with(&engine, op, t, &mu)?.value;
    let d = mu.dim();
    let isotropic = mu.is_isotropic();

    let rows = (1..=c.steps)
        .into_par_iter()
        .map(|k| {
            let h = 0.5f64.powi(k as i32);
            let time = continuity_modulus_with(&engine, op, t, h, &mu)?;
            let space = if isotropic {
                let mut y = vec![0.0; d];
                y[0] = h;
                Some(spatial_increment(op, t, &vec![0.0; d], &y, &mu, &model, &spec)?)
            } else {
                None
            };
            Ok((k, h, time, space))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut table = Table::new(
        "continuity",
        &["k", "h", "time_increment", "time_fraction", "space_increment", "space_fraction", "backend"],
    );
    for &(k, h, time, space) in &rows {
        table.push(row![k as i64, h, time, time / v, space, space.map(|s| s / v), "lag"]);
    }
    let decreasing = |xs: Vec<f64>| xs.windows(2).all(|w| w[1] < w[0]);
    let time_ok = decreasing(rows.iter().map(|r| r.2).collect()) && rows.last().is_some_and(|r| r.2 < FINAL_FRACTION * v);
    let space_ok = !isotropic
        || decreasing(rows.iter().filter_map(|r| r.3).collect()) && rows.last().and_then(|r| r.3).is_some_and(|s| s < FINAL_FRACTION * v);

    let hs: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let dom = domination_check(op, t, &model, c.b_h()?, &DOMINATION_RADII, &hs, &spec)?;
    let mut domination = Table::new("continuity_domination", &["r", "h", "k", "k_bar", "holds"]);
    for p in &dom.points {
        domination.push(row![p.r, p.h, p.k, p.k_bar, p.k <= p.k_bar]);
    }
    Ok(Outcome {
        holds: time_ok && space_ok && dom.holds,
        summary: json!({
            "operator": op.name(),
            "t": t,
            "variance": v,
            "time_increments_decrease": time_ok,
            "space_increments_decrease": if isotropic { json!(space_ok) } else { json!(null) },
            "domination_holds": dom.holds,
        }),
        tables: vec![table, domination],
        blobs: vec![],
    })
}
