use fracwave_core::spectral::{check_condition, is_tempered, numerical_condition, Condition, Verdict};
use fracwave_core::Operator;
use serde_json::json;

use crate::config::RunConfig;
use crate::error::Result;
use crate::report::{Outcome, Table};
use crate::row;

pub fn run(c: &RunConfig) -> Result<Outcome> {
    let spec = c.spec()?;
    let model = c.model()?;
    let mu = c.measure()?;
    let h = model.h();

    let tempered = is_tempered(&mu, &spec)?;
    let l = tempered.order.unwrap_or(1);
    let conditions = [
        ("tempered", Condition::Tempered(l)),
        ("dalang", Condition::Dalang),
        ("wave", Condition::Wave(h)),
        ("heat", Condition::Heat(h)),
    ];
    let mut table = Table::new(
        "check",
        &["condition", "exponent", "threshold", "tail_exponent", "margin", "closed_form", "numerical", "last_partial_integral"],
    );
    let mut verdicts = Vec::new();
    for (name, cond) in conditions {
        let closed = if name == "tempered" { tempered.clone() } else { check_condition(&mu, cond, &spec)? };
        let numerical = numerical_condition(&mu, cond, &spec)?;
        table.push(row![
            name,
            cond.exponent(),
            cond.threshold(mu.dim()),
            mu.tail_exponent(),
            closed.margin,
            closed.label(),
            numerical.label(),
            numerical.trace.last().copied(),
        ]);
        verdicts.push((name, closed, numerical));
    }
    let holds = |name: &str| verdicts.iter().find(|v| v.0 == name).map(|v| v.1.holds && v.1.conclusive).unwrap_or(false);
    let agree = verdicts.iter().all(|(_, a, b)| !b.conclusive || a.holds == b.holds);
    // the conditions get weaker from left to right
    let chain = (!holds("dalang") || holds("wave")) && (!holds("wave") || holds("heat"));
    let op = Operator::from(c.operator);
    let label = |v: &Verdict| v.label();
    let summary = json!({
        "measure": mu.describe(),
        "operator": op.name(),
        "tempered_order": tempered.order,
        "verdicts": verdicts.iter().map(|(n, a, b)| (n.to_string(), json!({"closed_form": label(a), "numerical": label(b)}))).collect::<serde_json::Map<_, _>>(),
        "closed_and_numerical_agree": agree,
        "implication_chain_consistent": chain,
    });
    Ok(Outcome {
        holds: holds(op.name()),
        summary,
        tables: vec![table],
        blobs: vec![],
    })
}
