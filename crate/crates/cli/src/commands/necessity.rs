use fracwave_core::norm::necessity_chain;
use fracwave_core::spectral::is_tempered;
use serde_json::json;

use crate::config::RunConfig;
use crate::error::Result;
use crate::report::{Outcome, Table};
use crate::row;

pub fn run(c: &RunConfig) -> Result<Outcome> {
    let spec = c.spec()?;
    let model = c.model()?;
    let mu = c.measure()?;
    let t = c.times_or(&[1.0])?[0];
    let l = match c.order {
        Some(l) => l,
        None => is_tempered(&mu, &spec)?.order.unwrap_or(2).max(1),
    };
    let rep = necessity_chain(t, &mu, &model, l, &spec)?;
    let mut table = Table::new(
        "necessity",
        &["k", "a", "a_near", "a_far", "near_bound", "far_bound", "lower_bound", "near_ok", "far_ok", "lower_ok", "combined_ok"],
    );
    for r in &rep.rows {
        table.push(row![
            r.k as i64,
            r.a,
            r.a_near,
            r.a_far,
            r.near_bound,
            r.far_bound,
            r.lower_bound,
            r.near_ok,
            r.far_ok,
            r.lower_ok,
            r.combined_ok
        ]);
    }
    let mut integrals = Table::new("necessity_integrals", &["k", "value"]);
    for &(k, v) in &rep.integrals {
        integrals.push(row![k as i64, v]);
    }
    let holds = rep.vacuous || (rep.inequalities_hold && rep.chain_closes && rep.inner.holds);
    let summary = json!({
        "t": rep.t,
        "l": rep.l,
        "m": rep.m,
        "outer_variance": rep.outer_variance,
        "vacuous": rep.vacuous,
        "c_tail": rep.c_tail,
        "c_lo": rep.c_lo,
        "a_coef": rep.a_coef,
        "b_coef": rep.b_coef,
        "chain_bound": rep.chain_bound,
        "inequalities_hold": rep.inequalities_hold,
        "chain_closes": rep.chain_closes,
        "inner": { "lhs": rep.inner.lhs, "rhs": rep.inner.rhs, "ball_mass": rep.inner.ball_mass, "holds": rep.inner.holds },
    });
    Ok(Outcome {
        holds,
        summary,
        tables: vec![table, integrals],
        blobs: vec![],
    })
}
