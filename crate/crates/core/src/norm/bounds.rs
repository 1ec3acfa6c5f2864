//! Two-sided bounds on `N_t` and `A_t` in terms of `(1 + r²)`.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use super::continuity::NEAR_ORIGIN_C;
use super::sandwich::band_constants;
use super::NormEngine;
use crate::error::{check_domain, Error, Result};
use crate::hurst::HurstModel;
use crate::quadrature::QuadratureSpec;
use crate::Operator;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    /// `r ≤ 1`.
    Inner,
    /// `r ≥ 1`.
    Outer,
}

impl Region {
    pub fn name(self) -> &'static str {
        match self {
            Region::Inner => "inner",
            Region::Outer => "outer",
        }
    }

    fn contains(self, r: f64) -> bool {
        match self {
            Region::Inner => r <= 1.0,
            Region::Outer => r >= 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundPoint {
    pub r: f64,
    pub t: f64,
    /// The kernel value.
    pub lhs: f64,
    /// The upper bound.
    pub rhs: f64,
    /// The lower bound, where one is proven.
    pub lower: Option<f64>,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub op: Operator,
    pub region: Region,
    pub points: Vec<BoundPoint>,
    pub holds: bool,
    /// The constant multiplying the profile in the upper bound.
    pub constant_used: f64,
    /// `sup` over the points of `kernel · (1 + r²)^{p}`, which is finite
    /// whatever `b_H` is.
    pub sup_witness: f64,
}

impl BoundReport {
    /// The first point where a bound fails.
    pub fn offending(&self) -> Option<&BoundPoint> {
        self.points.iter().find(|p| !p.holds)
    }
}

fn check_inputs(t: f64, b_h: f64, radii: &[f64]) -> Result<()> {
    check_domain("t", t, t >= 0.0 && t.is_finite(), "[0, inf)")?;
    check_domain("b_H", b_h, b_h > 0.0 && b_h.is_finite(), "(0, inf)")?;
    if radii.is_empty() {
        return Err(Error::Config("the radius grid is empty".into()));
    }
    for &r in radii {
        check_domain("r", r, r >= 0.0 && r.is_finite(), "[0, inf)")?;
    }
    Ok(())
}

fn report<F>(op: Operator, region: Region, radii: &[f64], constant: f64, power: f64, point: F) -> Result<Option<BoundReport>>
where
    F: Fn(f64) -> Result<BoundPoint>,
{
    let mut points = Vec::new();
    let mut sup = 0.0f64;
    for &r in radii.iter().filter(|&&r| region.contains(r)) {
        let p = point(r)?;
        sup = sup.max(p.lhs * (1.0 + r * r).powf(power));
        points.push(p);
    }
    if points.is_empty() {
        return Ok(None);
    }
    Ok(Some(BoundReport {
        op,
        region,
        holds: points.iter().all(|p| p.holds),
        points,
        constant_used: constant,
        sup_witness: sup,
    }))
}

/// `N_t(r) ≤ C_H t^{2H+2} (1+r²)^{-(H+1/2)}` on `r ≤ 1`, with
/// `C_H = b_H² 2^{H+1/2} / 3`, and `N_t(r) ≤ c⁽³⁾ (1+r²)^{-(H+1/2)}` on
/// `r ≥ 1`, with `c⁽³⁾ = c_H (C/(1-H) + c⁽²⁾_t) 2^{3H-1/2}`, `C = 100/9` and
/// `c⁽²⁾_t` the fitted upper band constant. One report per region that
/// contains grid points.
pub fn bounds_wave(t: f64, model: &HurstModel, b_h: f64, radii: &[f64], spec: &QuadratureSpec) -> Result<Vec<BoundReport>> {
    check_inputs(t, b_h, radii)?;
    let engine = NormEngine::new(model, spec)?;
    let h = model.h();
    let p = h + 0.5;
    let c_inner = b_h * b_h * 2f64.powf(p) / 3.0;
    let c_outer = if t > 0.0 {
        let c2 = band_constants(t)?.c_hi;
        model.c_h * (NEAR_ORIGIN_C / (1.0 - h) + c2) * 2f64.powf(3.0 * h - 0.5)
    } else {
        0.0
    };
    let point = |r: f64, rhs: f64| -> Result<BoundPoint> {
        let lhs = engine.n_wave(t, r)?;
        Ok(BoundPoint {
            r,
            t,
            lhs,
            rhs,
            lower: None,
            holds: lhs <= rhs,
        })
    };
    let mut out = Vec::new();
    let inner = report(Operator::Wave, Region::Inner, radii, c_inner, p, |r| {
        point(r, c_inner * t.powf(2.0 * h + 2.0) * (1.0 + r * r).powf(-p))
    })?;
    let outer = report(Operator::Wave, Region::Outer, radii, c_outer, p, |r| point(r, c_outer * (1.0 + r * r).powf(-p)))?;
    out.extend(inner);
    out.extend(outer);
    Ok(out)
}

/// `¼ (t^{2H} ∧ 1) (1+r²)^{-2H} ≤ A_t(r) ≤ C_H (t^{2H} + 1) (1+r²)^{-2H}`
/// with `C_H = b_H² (4H)^{2H}`. The lower bound has no free constant.
pub fn bounds_heat(t: f64, model: &HurstModel, b_h: f64, radii: &[f64], spec: &QuadratureSpec) -> Result<Vec<BoundReport>> {
    check_inputs(t, b_h, radii)?;
    let engine = NormEngine::new(model, spec)?;
    let h = model.h();
    let p = 2.0 * h;
    let t2h = t.powf(2.0 * h);
    let c_h = b_h * b_h * (4.0 * h).powf(2.0 * h);
    let point = |r: f64| -> Result<BoundPoint> {
        let lhs = engine.a_heat(t, r)?;
        let profile = (1.0 + r * r).powf(-p);
        let lower = 0.25 * t2h.min(1.0) * profile;
        let rhs = c_h * (t2h + 1.0) * profile;
        Ok(BoundPoint {
            r,
            t,
            lhs,
            rhs,
            lower: Some(lower),
            holds: lower <= lhs && lhs <= rhs,
        })
    };
    let mut out = Vec::new();
    out.extend(report(Operator::Heat, Region::Inner, radii, c_h, p, point)?);
    out.extend(report(Operator::Heat, Region::Outer, radii, c_h, p, point)?);
    Ok(out)
}
