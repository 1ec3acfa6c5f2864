use fracwave_core::norm::{variance_with, NormEngine};
use fracwave_core::Operator;
use serde_json::json;

use super::coarse;
use crate::config::RunConfig;
use crate::error::Result;
use crate::report::{Outcome, Table};
use crate::row;

pub fn run(c: &RunConfig) -> Result<Outcome> {
    let spec = c.spec()?;
    let model = c.model()?;
    let mu = c.measure()?;
    let times = c.times_or(&[1.0])?;
    let op = Operator::from(c.operator);
    let fine = NormEngine::new(&model, &spec)?;
    let rough = NormEngine::new(&model, &coarse(&spec))?;
    let mut table = Table::new(
        "variance",
        &["t", "value", "inner", "outer", "tail", "cutoff", "error_estimate", "backend", "existence"],
    );
    for &t in &times {
        let v = variance_with(&fine, op, t, &mu)?;
        let w = variance_with(&rough, op, t, &mu)?;
        table.push(row![t, v.value, v.inner, v.outer, v.tail, v.cutoff, (v.value - w.value).abs(), "lag", v.verdict.label()]);
    }
    Ok(Outcome {
        holds: true,
        summary: json!({ "operator": op.name(), "measure": mu.describe(), "hurst": model.h() }),
        tables: vec![table],
        blobs: vec![],
    })
}
