//! `E|u(t, x)|² = ∫ N_t(|ξ|) μ(dξ)` (wave) or `∫ A_t(|ξ|) μ(dξ)` (heat).

use alloc::format;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use super::{pairwise_sum, NormEngine};
use crate::error::{check_domain, Error, Result};
use crate::frac_time::osc_width;
use crate::hurst::HurstModel;
use crate::quadrature::QuadratureSpec;
use crate::spectral::{check_condition, radial_grid, Condition, RadialOptions, SpectralMeasure, Verdict};
use crate::Operator;

#[derive(Debug, Clone, PartialEq)]
pub struct VarianceReport {
    pub op: Operator,
    pub t: f64,
    pub value: f64,
    /// Contribution of `|ξ| ≤ 1`.
    pub inner: f64,
    /// Contribution of `|ξ| ≥ 1`, tail included.
    pub outer: f64,
    /// Power-law estimate beyond `cutoff`.
    pub tail: f64,
    pub cutoff: f64,
    pub verdict: Verdict,
}

/// A measure integral split at `|ξ| = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Split {
    pub value: f64,
    pub inner: f64,
    pub outer: f64,
    pub tail: f64,
    pub cutoff: f64,
}

/// Decay exponent of `N_t` (wave) or `A_t` (heat) in `r`.
pub(crate) fn kernel_decay(op: Operator, model: &HurstModel) -> f64 {
    match op {
        Operator::Wave => 2.0 * model.h() + 1.0,
        Operator::Heat => 4.0 * model.h(),
    }
}

/// `∫ g(|ξ|) μ(dξ)`, with `g_tail` standing in for `g` at the tail node
/// (for integrands whose oscillating factor averages out).
pub(crate) fn measure_integral<G, T>(
    mu: &SpectralMeasure,
    g: G,
    g_tail: T,
    decay: f64,
    max_width: Option<f64>,
    spec: &QuadratureSpec,
) -> Result<Split>
where
    G: Fn(f64) -> Result<f64>,
    T: Fn(f64) -> Result<f64>,
{
    let opts = RadialOptions {
        decay,
        max_width,
        breakpoints: alloc::vec![1.0],
        ..RadialOptions::default()
    };
    let grid = radial_grid(mu, &opts, spec)?;
    let mut inner = Vec::new();
    let mut outer = Vec::new();
    let mut tail = 0.0;
    for (i, (&r, &w)) in grid.nodes.iter().zip(&grid.weights).enumerate() {
        if Some(i) == grid.tail_index {
            tail = w * g_tail(r)?;
        } else if r <= 1.0 {
            inner.push(w * g(r)?);
        } else {
            outer.push(w * g(r)?);
        }
    }
    let inner = pairwise_sum(&inner);
    let outer = pairwise_sum(&outer) + tail;
    let value = inner + outer;
    if !value.is_finite() {
        return Err(Error::Divergence {
            reason: "measure integral is not finite".into(),
            trace: alloc::vec![inner, outer],
        });
    }
    Ok(Split {
        value,
        inner,
        outer,
        tail,
        cutoff: grid.cutoff,
    })
}

/// The existence condition for `op`, as an error when it fails or cannot
/// be decided.
pub(crate) fn require_existence(op: Operator, mu: &SpectralMeasure, model: &HurstModel, spec: &QuadratureSpec) -> Result<Verdict> {
    let cond = match op {
        Operator::Wave => Condition::Wave(model.h()),
        Operator::Heat => Condition::Heat(model.h()),
    };
    let v = check_condition(mu, cond, spec)?;
    if v.holds && v.conclusive {
        return Ok(v);
    }
    let margin = v.margin.map(|m| format!(" (margin {m:.4})")).unwrap_or_default();
    Err(Error::Divergence {
        reason: format!(
            "the {} existence condition {} for {}{}: ∫ (1+|ξ|²)^-{:.4} μ(dξ) is not shown finite",
            op.name(),
            v.label(),
            mu.describe(),
            margin,
            cond.exponent()
        ),
        trace: v.trace.clone(),
    })
}

pub fn variance(op: Operator, t: f64, mu: &SpectralMeasure, model: &HurstModel, spec: &QuadratureSpec) -> Result<VarianceReport> {
    let engine = NormEngine::new(model, spec)?;
    variance_with(&engine, op, t, mu)
}

/// [`variance`] reusing an engine.
pub fn variance_with(engine: &NormEngine, op: Operator, t: f64, mu: &SpectralMeasure) -> Result<VarianceReport> {
    check_domain("t", t, t >= 0.0 && t.is_finite(), "[0, inf)")?;
    let model = engine.model();
    let spec = engine.spec();
    let verdict = require_existence(op, mu, model, spec)?;
    let width = match op {
        Operator::Wave => Some(osc_width(2.0 * t, spec)),
        Operator::Heat => None,
    };
    let k = |r: f64| engine.kernel(op, t, r);
    let s = measure_integral(mu, k, k, kernel_decay(op, model), width, spec)?;
    Ok(VarianceReport {
        op,
        t,
        value: s.value,
        inner: s.inner,
        outer: s.outer,
        tail: s.tail,
        cutoff: s.cutoff,
        verdict,
    })
}
