//! Mean-square increments of the solution in time and space, and the
//! domination check behind their continuity.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use super::sandwich::band_constants;
use super::variance::{kernel_decay, measure_integral, require_existence};
use super::NormEngine;
use crate::error::{check_domain, Error, Result};
use crate::frac_time::{inner_product_time, osc_width, TimeBackend};
use crate::hurst::HurstModel;
use crate::quadrature::QuadratureSpec;
use crate::special::isotropic_cos;
use crate::spectral::SpectralMeasure;
use crate::time_fn::TimeFunction;
use crate::Operator;

/// `E|u(t + h, x) - u(t, x)|² = ∫ [K_{t+h} + K_t - 2 Cross(t+h, t)] μ`,
/// exact rather than bounded. Negative `h` is allowed down to `h = -t`.
pub fn continuity_modulus(
    op: Operator,
    t: f64,
    h: f64,
    mu: &SpectralMeasure,
    model: &HurstModel,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let engine = NormEngine::new(model, spec)?;
    continuity_modulus_with(&engine, op, t, h, mu)
}

pub fn continuity_modulus_with(engine: &NormEngine, op: Operator, t: f64, h: f64, mu: &SpectralMeasure) -> Result<f64> {
    check_domain("t", t, t >= 0.0 && t.is_finite(), "[0, inf)")?;
    check_domain("h", h, h.is_finite() && t + h >= 0.0, "[-t, inf)")?;
    let model = engine.model();
    let spec = engine.spec();
    require_existence(op, mu, model, spec)?;
    if h == 0.0 {
        return Ok(0.0);
    }
    let (a, b) = if h > 0.0 { (t, t + h) } else { (t + h, t) };
    let g = |r: f64| -> Result<f64> {
        let v = engine.kernel(op, b, r)? + engine.kernel(op, a, r)? - 2.0 * engine.cross_time(op, b, a, r)?;
        Ok(v.max(0.0))
    };
    let width = match op {
        Operator::Wave => Some(osc_width(2.0 * b, spec)),
        Operator::Heat => None,
    };
    Ok(measure_integral(mu, g, g, kernel_decay(op, model), width, spec)?.value)
}

/// `E|u(t, x) - u(t, y)|² = ∫ 2(1 - cos ξ·(x - y)) K_t(|ξ|) μ(dξ)`. Needs
/// an isotropic measure so that the angular average of the cosine is
/// known in closed form.
pub fn spatial_increment(
    op: Operator,
    t: f64,
    x: &[f64],
    y: &[f64],
    mu: &SpectralMeasure,
    model: &HurstModel,
    spec: &QuadratureSpec,
) -> Result<f64> {
    check_domain("t", t, t >= 0.0 && t.is_finite(), "[0, inf)")?;
    let d = mu.dim();
    if x.len() != d || y.len() != d {
        return Err(Error::Config(alloc::format!(
            "points must have {d} coordinates, got {} and {}",
            x.len(),
            y.len()
        )));
    }
    if !mu.is_isotropic() {
        return Err(Error::Unsupported(alloc::format!(
            "spatial increments need an isotropic measure; {} is not",
            mu.describe()
        )));
    }
    let engine = NormEngine::new(model, spec)?;
    require_existence(op, mu, model, spec)?;
    let z = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
    if z == 0.0 || t == 0.0 {
        return Ok(0.0);
    }
    let g = |r: f64| Ok(2.0 * (1.0 - isotropic_cos(d, r * z)) * engine.kernel(op, t, r)?);
    // the cosine averages out beyond the cutoff
    let g_tail = |r: f64| Ok(2.0 * engine.kernel(op, t, r)?);
    let mut width = osc_width(z, spec);
    if op == Operator::Wave {
        width = width.min(osc_width(2.0 * t, spec));
    }
    Ok(measure_integral(mu, g, g_tail, kernel_decay(op, model), Some(width), spec)?.value)
}

/// One point of [`domination_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DominationPoint {
    pub r: f64,
    pub h: f64,
    /// `k_t(h, r)`, the `H(0,t)` norm of the time increment of the symbol.
    pub k: f64,
    /// The `h`-free dominating function `k̄_t(r)`.
    pub k_bar: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DominationReport {
    pub op: Operator,
    pub t: f64,
    pub points: Vec<DominationPoint>,
    pub holds: bool,
}

/// `(100/9)`: bound of `(1 - τ²)^{-2}[(1+|τ|)² + 4]` on `|τ| ≤ 1/2`.
pub(crate) const NEAR_ORIGIN_C: f64 = 100.0 / 9.0;

/// `c⁽⁴⁾_t = (2C/(1-H)) (1/2)^{2-2H} + (1/2)^{1-2H} c⁽²⁾_t`.
fn c4(t: f64, model: &HurstModel) -> Result<f64> {
    let h = model.h();
    let c2 = band_constants(t)?.c_hi;
    Ok(2.0 * NEAR_ORIGIN_C / (1.0 - h) * 0.5f64.powf(2.0 - 2.0 * h) + 0.5f64.powf(1.0 - 2.0 * h) * c2)
}

/// Checks `k_t(h, r) ≤ k̄_t(r)` for every `h` and `r` given.
///
/// Wave: `k_t(h, r) = ‖sin((·+h) r) - sin(· r)‖²` with
/// `k̄ = 2 b_H² t^{2H-1} r² (t³ + 2t)` on `r ≤ 1` and
/// `k̄ = 2 c_H r^{1-2H} (c⁽⁴⁾_{t+1} + c⁽⁴⁾_1 + c⁽⁴⁾_t)` on `r > 1`.
/// Heat: `k_t(h, r) = ‖e^{-(·+h) r²/2} - e^{-· r²/2}‖²` with `k̄ = 4 A_t(r)`,
/// which follows from monotonicity of the norm on positive functions.
pub fn domination_check(
    op: Operator,
    t: f64,
    model: &HurstModel,
    b_h: f64,
    radii: &[f64],
    hs: &[f64],
    spec: &QuadratureSpec,
) -> Result<DominationReport> {
    check_domain("t", t, t > 0.0 && t.is_finite(), "(0, inf)")?;
    check_domain("b_H", b_h, b_h > 0.0, "(0, inf)")?;
    for &h in hs {
        check_domain("h", h, (0.0..=1.0).contains(&h), "[0, 1]")?;
    }
    let hh = model.h();
    let engine = NormEngine::new(model, spec)?;
    let outer = match op {
        Operator::Wave => 2.0 * model.c_h * (c4(t + 1.0, model)? + c4(1.0, model)? + c4(t, model)?),
        Operator::Heat => 0.0,
    };
    let mut points = Vec::with_capacity(radii.len() * hs.len());
    for &r in radii {
        check_domain("r", r, r >= 0.0 && r.is_finite(), "[0, inf)")?;
        // the norm of e^{-a·} on [0, t] equals A_t(r) by time reversal
        let a_t = match op {
            Operator::Heat => engine.a_heat(t, r)?,
            Operator::Wave => 0.0,
        };
        let k_bar = match op {
            Operator::Wave if r <= 1.0 => 2.0 * b_h * b_h * t.powf(2.0 * hh - 1.0) * r * r * (t.powi(3) + 2.0 * t),
            Operator::Wave => outer * r.powf(1.0 - 2.0 * hh),
            Operator::Heat => 4.0 * a_t,
        };
        for &h in hs {
            let k = match op {
                Operator::Wave => {
                    let f = TimeFunction::sine_increment(r, h);
                    inner_product_time(&f, &f, model, t, TimeBackend::Direct, spec)?.re
                }
                Operator::Heat => {
                    let scale = libm::expm1(-0.5 * h * r * r);
                    scale * scale * a_t
                }
            };
            points.push(DominationPoint { r, h, k, k_bar });
        }
    }
    let holds = points.iter().all(|p| p.k <= p.k_bar);
    Ok(DominationReport { op, t, points, holds })
}
