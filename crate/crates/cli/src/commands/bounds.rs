use fracwave_core::norm::{bounds_heat, bounds_wave};
use fracwave_core::Operator;
use serde_json::json;

use crate::config::RunConfig;
use crate::error::Result;
use crate::report::{Outcome, Table};
use crate::row;

pub const DEFAULT_RADII: [f64; 8] = [0.0, 0.25, 0.5, 1.0, 2.0, 5.0, 10.0, 100.0];

pub fn run(c: &RunConfig) -> Result<Outcome> {
    let spec = c.spec()?;
    let model = c.model()?;
    let times = c.times_or(&[1.0])?;
    let radii = c.radii_or(&DEFAULT_RADII)?;
    let b_h = c.b_h()?;
    let op = Operator::from(c.operator);
    let mut points = Table::new("bounds", &["t", "region", "r", "kernel", "upper", "lower", "holds", "backend"]);
    let mut regions = Table::new("bounds_regions", &["t", "region", "constant_used", "sup_witness", "holds", "first_offending_r"]);
    let mut holds = true;
    for &t in &times {
        let reports = match op {
            Operator::Wave => bounds_wave(t, &model, b_h, &radii, &spec)?,
            Operator::Heat => bounds_heat(t, &model, b_h, &radii, &spec)?,
        };
        for rep in reports {
            holds &= rep.holds;
            for p in &rep.points {
                points.push(row![t, rep.region.name(), p.r, p.lhs, p.rhs, p.lower, p.holds, "lag"]);
            }
            regions.push(row![t, rep.region.name(), rep.constant_used, rep.sup_witness, rep.holds, rep.offending().map(|p| p.r)]);
        }
    }
    Ok(Outcome {
        holds,
        summary: json!({ "operator": op.name(), "hurst": model.h(), "b_h": b_h }),
        tables: vec![points, regions],
        blobs: vec![],
    })
}
