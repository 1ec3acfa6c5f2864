use std::f64::consts::PI;

use fracwave_core::frac_time::{inner_product_time, TimeBackend};
use fracwave_core::norm::{NormBackend, NormEngine};
use fracwave_core::time_fn::TimeFunction;
use fracwave_core::{Complex64, HurstModel, Operator, QuadratureSpec};
use rayon::prelude::*;
use serde_json::json;

use crate::config::RunConfig;
use crate::error::Result;
use crate::report::{Cell, Outcome, Table};
use crate::row;

pub const HURST_GRID: [f64; 5] = [0.55, 0.65, 0.75, 0.85, 0.95];
pub const HORIZONS: [f64; 3] = [1.0, PI, 5.0];
const RADII: [f64; 4] = [0.0, 0.5, 2.0, 10.0];

/// The test family on `[0, T]`: an indicator, the identity, a sine and a
/// decaying exponential.
pub fn family(horizon: f64) -> [(&'static str, TimeFunction); 4] {
    [
        ("indicator", TimeFunction::indicator(0.5 * horizon)),
        ("identity", TimeFunction::identity()),
        ("sine", TimeFunction::sine(1.0)),
        ("exp_decay", TimeFunction::exp_decay(1.0)),
    ]
}

/// Inner products of every family pair by all three backends.
pub fn backend_rows(model: &HurstModel, horizon: f64, spec: &QuadratureSpec) -> Result<Vec<Vec<Cell>>> {
    let fam = family(horizon);
    let mut pairs = Vec::new();
    for i in 0..fam.len() {
        for j in i..fam.len() {
            pairs.push((i, j));
        }
    }
    pairs
        .par_iter()
        .map(|&(i, j)| {
            let (f, g) = (&fam[i].1, &fam[j].1);
            let vals = TimeBackend::ALL
                .iter()
                .map(|&b| inner_product_time(f, g, model, horizon, b, spec))
                .collect::<fracwave_core::Result<Vec<Complex64>>>()?;
            let spread = spread(&vals);
            Ok(row![
                model.h(),
                horizon,
                fam[i].0,
                fam[j].0,
                vals[0].re,
                vals[1].re,
                vals[2].re,
                vals.iter().map(|v| v.im.abs()).fold(0.0, f64::max),
                spread,
            ])
        })
        .collect()
}

fn spread(vals: &[Complex64]) -> f64 {
    let mut s = 0.0f64;
    for (k, a) in vals.iter().enumerate() {
        for b in &vals[k + 1..] {
            let scale = a.norm().max(b.norm());
            if scale > 0.0 {
                s = s.max((a - b).norm() / scale);
            }
        }
    }
    s
}

/// `(name, H, backend, value, exact)` for the closed-form anchors.
pub fn anchors(model: &HurstModel, horizon: f64, spec: &QuadratureSpec) -> Result<Vec<(&'static str, TimeBackend, f64, f64)>> {
    let h = model.h();
    let ind = TimeFunction::indicator(horizon);
    let id = TimeFunction::identity();
    let mut out = Vec::new();
    for b in TimeBackend::ALL {
        let v = inner_product_time(&ind, &ind, model, horizon, b, spec)?.re;
        out.push(("indicator_norm", b, v, horizon.powf(2.0 * h)));
        let v = inner_product_time(&id, &id, model, 1.0, b, spec)?.re;
        out.push(("identity_norm_unit_horizon", b, v, 1.0 / (2.0 * h + 2.0)));
    }
    Ok(out)
}

pub fn run(c: &RunConfig) -> Result<Outcome> {
    let spec = c.spec()?;
    let hs = match c.hurst {
        Some(_) => vec![c.model()?.h()],
        None => HURST_GRID.to_vec(),
    };
    let horizons = c.times_or(&HORIZONS)?;
    let models = hs.iter().map(|&h| HurstModel::new(h)).collect::<fracwave_core::Result<Vec<_>>>()?;
    let tol = spec.relative_tolerance;

    let mut inner = Table::new(
        "identity_backends",
        &["hurst", "horizon", "f", "g", "direct", "transfer", "spectral", "max_imaginary", "spread"],
    );
    let mut anchor = Table::new("identity_anchors", &["name", "hurst", "backend", "value", "exact", "relative_error", "holds"]);
    let mut kernels = Table::new(
        "identity_kernels",
        &["operator", "hurst", "t", "r", "time_domain", "lag", "spectral", "transfer", "spread", "holds"],
    );
    let mut holds = true;
    for m in &models {
        for &horizon in &horizons {
            for r in backend_rows(m, horizon, &spec)? {
                let s = match r[8] {
                    Cell::Num(s) => s,
                    _ => f64::NAN,
                };
                holds &= s <= tol;
                inner.push(r);
            }
            for (name, b, v, exact) in anchors(m, horizon, &spec)? {
                let rel = (v - exact).abs() / exact;
                let ok = rel <= tol;
                holds &= ok;
                anchor.push(row![name, m.h(), b.name(), v, exact, rel, ok]);
            }
        }
        let two_pi_c = 2.0 * PI * m.c_h;
        let rel = (m.d_h - two_pi_c).abs() / two_pi_c;
        holds &= rel <= 1e-10;
        anchor.push(row!["d_h_equals_2pi_c_h", m.h(), "closed_form", m.d_h, two_pi_c, rel, rel <= 1e-10]);

        let engine = NormEngine::new(m, &spec)?;
        let rows = [Operator::Wave, Operator::Heat]
            .into_par_iter()
            .flat_map(|op| horizons.par_iter().flat_map(move |&t| RADII.par_iter().map(move |&r| (op, t, r))))
            .map(|(op, t, r)| {
                let vals = NormBackend::ALL
                    .iter()
                    .map(|&b| engine.kernel_with(op, t, r, b))
                    .collect::<fracwave_core::Result<Vec<f64>>>()?;
                let hi = vals.iter().cloned().fold(f64::MIN, f64::max);
                let lo = vals.iter().cloned().fold(f64::MAX, f64::min);
                let s = (hi - lo) / hi.abs();
                Ok(row![op.name(), m.h(), t, r, vals[0], vals[1], vals[2], vals[3], s, s <= tol])
            })
            .collect::<Result<Vec<_>>>()?;
        for r in rows {
            holds &= r[9] == Cell::Bool(true);
            kernels.push(r);
        }
    }
    Ok(Outcome {
        holds,
        summary: json!({ "tolerance": tol, "hurst": hs, "horizons": horizons }),
        tables: vec![inner, anchor, kernels],
        blobs: vec![],
    })
}
