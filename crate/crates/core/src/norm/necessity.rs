//! The recursion showing that a finite `∫_{|ξ|≥1} N_t μ` forces
//! `∫_{|ξ|≥1} |ξ|^{-(2H+1)} μ < ∞`.
//!
//! With `I(k) = ∫_{|ξ|≥1} |ξ|^{-(2H+2+k)} μ(dξ)`, `S(λ, t)` the exact
//! `τ`-integral of [`sandwich_exact`](super::sandwich_exact) and
//! `A_t(k) = ∫_{|ξ|≥1} |ξ|^{-(2H+2+k)} S(|ξ|, t) μ(dξ)` split into the parts
//! `A'` (`|τ| ≤ 2`) and `A''` (`|τ| ≥ 2`):
//!
//! ```text
//! A'_t(k)  ≤ 2^{2H-1} c_H^{-1} I_t^{(2)}
//! A''_t(k) ≤ C_tail I(k)
//! A_t(k)   ≥ ½ c_lo I(k-1)
//! ```
//!
//! so `I(k-1) ≤ a I_t^{(2)} + b I(k)` with `a = 2^{2H}/(c_H c_lo)`,
//! `b = 2 C_tail / c_lo`, and unrolling down from `k = m = 2l - 2` bounds
//! `I(-1)`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cell::RefCell;
#[allow(unused_imports)]
use num_traits::Float;

use super::sandwich::{band_constants, tau_integral};
use super::variance::measure_integral;
use super::{two_pi_int_sin_sq, NormEngine};
use crate::error::{check_domain, Error, Result};
use crate::frac_time::osc_width;
use crate::hurst::HurstModel;
use crate::quadrature::{QuadratureSpec, Rule};
use crate::spectral::{check_condition, Condition, SpectralMeasure};

/// `∫_{|τ|≥2} [(1+|τ|)² + 4] / (τ² - 1)² dτ`, after `τ = 1/u`:
/// `2 ∫_0^{1/2} [(1+u)² + 4u²] / (1-u²)² du`.
pub fn c_tail() -> f64 {
    2.0 * Rule::legendre(24).integrate(0.0, 0.5, |u| ((1.0 + u) * (1.0 + u) + 4.0 * u * u) / (1.0 - u * u).powi(2))
}

/// One step `k` of the recursion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainRow {
    pub k: i32,
    pub a: f64,
    pub a_near: f64,
    pub a_far: f64,
    /// `2^{2H-1} c_H^{-1} I_t^{(2)}`.
    pub near_bound: f64,
    /// `C_tail I(k)`.
    pub far_bound: f64,
    /// `½ c_lo I(k-1)`.
    pub lower_bound: f64,
    pub near_ok: bool,
    pub far_ok: bool,
    pub lower_ok: bool,
    /// `½ c_lo I(k-1) ≤ near_bound + far_bound`.
    pub combined_ok: bool,
}

impl ChainRow {
    pub fn holds(&self) -> bool {
        self.near_ok && self.far_ok && self.lower_ok && self.combined_ok
    }
}

/// `I_1^{(1)} ≥ sin²(1) ‖id‖²_{H(0,1)} μ(|ξ| ≤ 1)`, from `sin x / x ≥ sin 1`
/// on `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnerLowerBound {
    pub lhs: f64,
    pub rhs: f64,
    pub ball_mass: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NecessityChainReport {
    pub t: f64,
    pub l: u32,
    /// `2l - 2`.
    pub m: u32,
    /// `I(k)` for `k = -1..=m`; `None` where the integral diverges.
    pub integrals: Vec<(i32, Option<f64>)>,
    /// `∫_{|ξ|≥1} N_t μ`; `None` when it diverges.
    pub outer_variance: Option<f64>,
    /// Nothing to prove: the outer variance diverges.
    pub vacuous: bool,
    pub rows: Vec<ChainRow>,
    pub c_tail: f64,
    /// The fitted lower band constant used for `c⁽¹⁾_t`.
    pub c_lo: f64,
    pub a_coef: f64,
    pub b_coef: f64,
    /// `a Σ_{i=0}^{m} b^i I_t^{(2)} + b^{m+1} I(m)`.
    pub chain_bound: f64,
    pub inequalities_hold: bool,
    pub chain_closes: bool,
    pub inner: InnerLowerBound,
}

impl NecessityChainReport {
    pub fn integral(&self, k: i32) -> Option<f64> {
        self.integrals.iter().find(|p| p.0 == k).and_then(|p| p.1)
    }
}

fn divergent_to_none(r: Result<f64>) -> Result<Option<f64>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::Divergence { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

pub fn necessity_chain(t: f64, mu: &SpectralMeasure, model: &HurstModel, l: u32, spec: &QuadratureSpec) -> Result<NecessityChainReport> {
    check_domain("t", t, t > 0.0 && t.is_finite(), "(0, inf)")?;
    check_domain("l", l as f64, l >= 1, "{1, 2, ...}")?;
    let tempered = check_condition(mu, Condition::Tempered(l), spec)?;
    if !tempered.holds {
        return Err(Error::Domain {
            name: "l",
            value: l as f64,
            domain: "orders for which the measure is tempered",
        });
    }
    let engine = NormEngine::new(model, spec)?;
    let h = model.h();
    let m = 2 * l - 2;
    let c_tail = c_tail();
    let band = band_constants(t)?;
    let c_lo = band.c_lo;
    let width = Some(osc_width(2.0 * t, spec));

    let outer_only = |f: &dyn Fn(f64) -> Result<f64>, decay: f64| -> Result<f64> {
        let g = |r: f64| if r > 1.0 { f(r) } else { Ok(0.0) };
        Ok(measure_integral(mu, g, g, decay, width, spec)?.outer)
    };
    let i_of = |k: i32| -> Result<Option<f64>> {
        let p = 2.0 * h + 2.0 + k as f64;
        divergent_to_none(outer_only(&|r| Ok(r.powf(-p)), p))
    };
    let integrals = (-1..=m as i32).map(|k| Ok((k, i_of(k)?))).collect::<Result<Vec<_>>>()?;
    let outer_variance = divergent_to_none(outer_only(&|r| engine.n_wave(t, r), 2.0 * h + 1.0))?;
    let inner = inner_lower_bound(mu, &engine, spec)?;

    let a_coef = 2f64.powf(2.0 * h) / (model.c_h * c_lo);
    let b_coef = 2.0 * c_tail / c_lo;
    let mut report = NecessityChainReport {
        t,
        l,
        m,
        integrals,
        outer_variance,
        vacuous: outer_variance.is_none(),
        rows: Vec::new(),
        c_tail,
        c_lo,
        a_coef,
        b_coef,
        chain_bound: f64::INFINITY,
        inequalities_hold: false,
        chain_closes: false,
        inner,
    };
    let Some(i2) = outer_variance else {
        return Ok(report);
    };

    // S and its |τ| ≤ 2 part, shared by every k
    let near_cache: RefCell<BTreeMap<u64, f64>> = RefCell::new(BTreeMap::new());
    let near = |r: f64| -> f64 {
        *near_cache
            .borrow_mut()
            .entry(r.to_bits())
            .or_insert_with(|| tau_integral(r * t, 0.0, 2.0, spec))
    };
    let near_bound = 2f64.powf(2.0 * h - 1.0) / model.c_h * i2;
    for k in 0..=m as i32 {
        let p = 2.0 * h + 2.0 + k as f64;
        let decay = p - 1.0;
        let a = outer_only(&|r| Ok(r.powf(-p) * two_pi_int_sin_sq(r * t)), decay)?;
        let a_near = outer_only(&|r| Ok(r.powf(-p) * near(r)), decay)?;
        let a_far = a - a_near;
        let i_k = report.integral(k).unwrap_or(f64::INFINITY);
        let i_prev = report.integral(k - 1).unwrap_or(f64::INFINITY);
        let far_bound = c_tail * i_k;
        let lower_bound = 0.5 * c_lo * i_prev;
        report.rows.push(ChainRow {
            k,
            a,
            a_near,
            a_far,
            near_bound,
            far_bound,
            lower_bound,
            near_ok: a_near <= near_bound,
            far_ok: a_far <= far_bound,
            lower_ok: a >= lower_bound,
            combined_ok: lower_bound <= near_bound + far_bound,
        });
    }
    report.inequalities_hold = report.rows.iter().all(ChainRow::holds);
    if let Some(i_m) = report.integral(m as i32) {
        let geometric: f64 = (0..=m).map(|i| b_coef.powi(i as i32)).sum();
        report.chain_bound = a_coef * geometric * i2 + b_coef.powi(m as i32 + 1) * i_m;
    }
    let i_minus = report.integral(-1).unwrap_or(f64::INFINITY);
    report.chain_closes = report.inequalities_hold && report.chain_bound.is_finite() && i_minus <= report.chain_bound;
    Ok(report)
}

fn inner_lower_bound(mu: &SpectralMeasure, engine: &NormEngine, spec: &QuadratureSpec) -> Result<InnerLowerBound> {
    let h = engine.model().h();
    let d = mu.dim() as f64;
    let ball = |r: f64| Ok(if r <= 1.0 { 1.0 } else { 0.0 });
    let ball_mass = measure_integral(mu, ball, ball, d + 2.0, None, spec)?.inner;
    let n1 = |r: f64| if r <= 1.0 { engine.n_wave(1.0, r) } else { Ok(0.0) };
    let lhs = measure_integral(mu, n1, n1, d + 2.0, None, spec)?.inner;
    let rhs = 1f64.sin().powi(2) / (2.0 * h + 2.0) * ball_mass;
    Ok(InnerLowerBound {
        lhs,
        rhs,
        ball_mass,
        holds: lhs >= rhs,
    })
}
