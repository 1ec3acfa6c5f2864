use fracwave_core::sampler::{
    factorize_spd, point_variances, sample_one, validate_batch, CovariancePlan, SampleBatch, ValidationReport,
    DEFAULT_JITTER_LADDER, GENERATOR,
};
use fracwave_core::Operator;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::report::{Blob, Cell, Outcome, Table};
use crate::row;

pub fn run(c: &RunConfig) -> Result<Outcome> {
    let spec = c.spec()?;
    let model = c.model()?;
    let mu = c.measure()?;
    let grid = c.grid(mu.dim())?;
    if c.samples == 0 {
        return Err(CliError::config("samples must be at least 1"));
    }
    let seed = c.seed.unwrap_or(0);
    let op = Operator::from(c.operator);

    let plan = CovariancePlan::new(&grid, &mu, &model, op, &spec)?;
    let n = plan.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..=i).map(move |j| (i, j))).collect();
    let entries: Vec<_> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (v, e) = plan.entry(i, j);
            (i, j, v, e)
        })
        .collect();
    let cov = plan.finish(entries);
    let factor = factorize_spd(&cov, &DEFAULT_JITTER_LADDER)?;

    let mut values = vec![0.0; c.samples * n];
    values
        .par_chunks_mut(n)
        .enumerate()
        .for_each(|(k, row)| sample_one(&factor, seed, k as u64, row));
    let batch = SampleBatch {
        n_samples: c.samples,
        dim: n,
        values,
        seed,
        generator: GENERATOR,
    };

    let labels: Vec<String> = grid.points().iter().map(|p| p.label.clone()).collect();
    let mut tables = vec![matrix_table("covariance", &labels, &cov.data, n), matrix_table("covariance_error", &labels, &cov.error, n)];
    let mut s = sample_csv(&batch, &labels);
    s.in_report = false;
    tables.push(s);

    let mut holds = true;
    let mut validation_summary = Value::Null;
    if c.validate {
        let variances = point_variances(&grid, &mu, &model, op, &spec)?;
        let report = validate_batch(&batch, &cov, &variances, factor.jitter);
        holds = report.holds;
        validation_summary = json!({
            "holds": report.holds,
            "offending": report.offending().map(|k| json!([k.i, k.j])).collect::<Vec<_>>(),
        });
        tables.push(validation_table(&report, &labels));
    }

    let trace = cov.trace();
    let hash = c.hash();
    let mut blobs = Vec::new();
    if c.binary {
        blobs.push(Blob {
            name: "samples.bin".into(),
            bytes: column_major_bytes(&batch),
        });
        blobs.push(Blob {
            name: "samples.json".into(),
            bytes: serde_json::to_vec_pretty(&sidecar(&batch, &labels, &hash)).expect("sidecar serializes"),
        });
    }
    Ok(Outcome {
        holds,
        summary: json!({
            "operator": op.name(),
            "measure": mu.describe(),
            "points": n,
            "samples": c.samples,
            "seed": seed,
            "generator": GENERATOR,
            "jitter": factor.jitter,
            "jitter_relative": factor.jitter / (trace / n as f64),
            "max_entry_error": cov.error.iter().cloned().fold(0.0, f64::max),
            "validation": validation_summary,
        }),
        tables,
        blobs,
    })
}

fn matrix_table(name: &str, labels: &[String], data: &[f64], n: usize) -> Table {
    let mut header = vec!["point"];
    header.extend(labels.iter().map(String::as_str));
    let mut t = Table::new(name, &header);
    for i in 0..n {
        let mut r = vec![Cell::Text(labels[i].clone())];
        r.extend(data[i * n..(i + 1) * n].iter().map(|&v| Cell::Num(v)));
        t.push(r);
    }
    t
}

/// One row per sample, one column per grid point.
pub fn sample_csv(batch: &SampleBatch, labels: &[String]) -> Table {
    let header: Vec<&str> = labels.iter().map(String::as_str).collect();
    let mut t = Table::new("samples", &header);
    for k in 0..batch.n_samples {
        t.push(batch.sample(k).iter().map(|&v| Cell::Num(v)).collect());
    }
    t
}

fn validation_table(report: &ValidationReport, labels: &[String]) -> Table {
    let mut t = Table::new("validation", &["kind", "point_i", "point_j", "expected", "observed", "band", "holds"]);
    let groups = [("variance", &report.variances), ("covariance", &report.covariances), ("mean", &report.means)];
    for (kind, checks) in groups {
        for k in checks.iter() {
            t.push(row![kind, labels[k.i].clone(), labels[k.j].clone(), k.expected, k.observed, k.band, k.holds]);
        }
    }
    t
}

/// Little-endian f64, column by column (all samples of the first point
/// first).
fn column_major_bytes(batch: &SampleBatch) -> Vec<u8> {
    let mut out = Vec::with_capacity(batch.values.len() * 8);
    for j in 0..batch.dim {
        for k in 0..batch.n_samples {
            out.extend_from_slice(&batch.values[k * batch.dim + j].to_le_bytes());
        }
    }
    out
}

pub fn sidecar(batch: &SampleBatch, labels: &[String], config_hash: &str) -> Value {
    json!({
        "file": "samples.bin",
        "shape": [batch.n_samples, batch.dim],
        "order": "column-major",
        "dtype": "float64, little-endian",
        "columns": labels,
        "seed": batch.seed,
        "generator": batch.generator,
        "config_hash": config_hash,
    })
}

