//! Variance kernels and the estimates built on them.
//!
//! * `N_t(r) = ‖sin(r·)/r‖²_{H(0,t)}` (wave) and
//!   `A_t(r) = ‖exp(-r²·/2)‖²_{H(0,t)}` (heat), plus the two-time kernel
//!   [`NormEngine::cross_time`].
//! * [`sandwich`]: the exact `τ`-integral identity and its band constants.
//! * [`variance`], [`bounds`], [`necessity`], [`continuity`]: integrals
//!   against a spectral measure and the checks built on them.

use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{check_domain, Error, Result};
use crate::frac_time::{exp_tail, inner_product_time, osc_width, relative_spread, TimeBackend};
use crate::green::restricted_fourier_sin;
use crate::hurst::HurstModel;
use crate::quadrature::{uniform_panels, with_breakpoints, QuadratureSpec, Rule};
use crate::time_fn::TimeFunction;
use crate::Operator;

pub mod bounds;
pub mod continuity;
mod lag;
pub mod necessity;
pub mod sandwich;
pub mod variance;

pub use bounds::{bounds_heat, bounds_wave, BoundPoint, BoundReport, Region};
pub use continuity::{continuity_modulus, continuity_modulus_with, domination_check, spatial_increment, DominationReport};
pub use necessity::{c_tail, necessity_chain, NecessityChainReport};
pub use sandwich::{band_constants, sandwich_exact, sandwich_numerical, Band};
pub use variance::{variance, variance_with, VarianceReport};

use lag::LagKernel;

/// How `N_t(r)` is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NormBackend {
    /// Singular double integral in time.
    TimeDomain,
    /// Single integral over the lag `u - v`, in closed form for `r t ≥ 2`.
    Lag,
    /// `c_H ∫ |τ|^{1-2H} |F_{0,t} G(τ)|² dτ`.
    Spectral,
    /// `‖K_H^* G‖²_{L²}`.
    Transfer,
}

impl NormBackend {
    pub const ALL: [NormBackend; 4] = [NormBackend::TimeDomain, NormBackend::Lag, NormBackend::Spectral, NormBackend::Transfer];

    pub fn name(self) -> &'static str {
        match self {
            NormBackend::TimeDomain => "time_domain",
            NormBackend::Lag => "lag",
            NormBackend::Spectral => "spectral",
            NormBackend::Transfer => "transfer",
        }
    }
}

impl core::str::FromStr for NormBackend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NormBackend::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| Error::Config(alloc::format!("unknown norm backend `{s}`")))
    }
}

/// Precomputed rules for repeated kernel evaluations with one Hurst index.
#[derive(Debug, Clone)]
pub struct NormEngine {
    model: HurstModel,
    spec: QuadratureSpec,
    lag: LagKernel,
}

impl NormEngine {
    pub fn new(model: &HurstModel, spec: &QuadratureSpec) -> Result<Self> {
        spec.validate()?;
        Ok(NormEngine {
            model: *model,
            spec: *spec,
            lag: LagKernel::new(model, spec),
        })
    }

    pub fn model(&self) -> &HurstModel {
        &self.model
    }

    pub fn spec(&self) -> &QuadratureSpec {
        &self.spec
    }

    /// `N_t(r)` by the lag route.
    pub fn n_wave(&self, t: f64, r: f64) -> Result<f64> {
        self.kernel(Operator::Wave, t, r)
    }

    /// `A_t(r)` by the lag route.
    pub fn a_heat(&self, t: f64, r: f64) -> Result<f64> {
        self.kernel(Operator::Heat, t, r)
    }

    /// `N_t(r)` or `A_t(r)`.
    pub fn kernel(&self, op: Operator, t: f64, r: f64) -> Result<f64> {
        self.cross_time(op, t, t, r)
    }

    /// `α_H ∫_0^{t1} ∫_0^{t2} FG(t1 - u) FG(t2 - v) |u - v|^{2H-2} du dv` at
    /// `|ξ| = r`. Zero when either time is zero.
    pub fn cross_time(&self, op: Operator, t1: f64, t2: f64, r: f64) -> Result<f64> {
        check_domain("t1", t1, t1 >= 0.0 && t1.is_finite(), "[0, inf)")?;
        check_domain("t2", t2, t2 >= 0.0 && t2.is_finite(), "[0, inf)")?;
        check_domain("r", r, r >= 0.0 && r.is_finite(), "[0, inf)")?;
        Ok(self.lag.cross(op, t1, t2, r))
    }

    pub fn kernel_with(&self, op: Operator, t: f64, r: f64, backend: NormBackend) -> Result<f64> {
        check_domain("t", t, t >= 0.0 && t.is_finite(), "[0, inf)")?;
        check_domain("r", r, r >= 0.0 && r.is_finite(), "[0, inf)")?;
        if t == 0.0 {
            return Ok(0.0);
        }
        let green = || match op {
            Operator::Wave => TimeFunction::wave_green(t, r),
            Operator::Heat => TimeFunction::heat_green(t, r),
        };
        let time = |b: TimeBackend| -> Result<f64> {
            let g = green();
            Ok(inner_product_time(&g, &g, &self.model, t, b, &self.spec)?.re)
        };
        match backend {
            NormBackend::Lag => self.kernel(op, t, r),
            NormBackend::TimeDomain => time(TimeBackend::Direct),
            NormBackend::Transfer => time(TimeBackend::Transfer),
            NormBackend::Spectral => match op {
                Operator::Wave => self.n_wave_spectral(t, r),
                Operator::Heat => {
                    // A_t(r) = a^{-2H} ‖e^{-s}‖²_{H(0, at)}, a = r²/2, keeps the
                    // spectral content at unit scale
                    let a = 0.5 * r * r;
                    if a <= 1.0 {
                        return time(TimeBackend::Spectral);
                    }
                    let g = TimeFunction::exp_decay(1.0);
                    let v = inner_product_time(&g, &g, &self.model, a * t, TimeBackend::Spectral, &self.spec)?.re;
                    Ok(v * a.powf(-2.0 * self.model.h()))
                }
            },
        }
    }

    pub fn n_wave_with(&self, t: f64, r: f64, backend: NormBackend) -> Result<f64> {
        self.kernel_with(Operator::Wave, t, r, backend)
    }

    /// Every backend, failing with [`Error::Consistency`] if any two
    /// disagree by more than `spec.relative_tolerance`.
    pub fn kernel_checked(&self, op: Operator, t: f64, r: f64) -> Result<[(NormBackend, f64); 4]> {
        let mut out = [(NormBackend::Lag, 0.0); 4];
        for (slot, b) in out.iter_mut().zip(NormBackend::ALL) {
            *slot = (b, self.kernel_with(op, t, r, b)?);
        }
        let values: Vec<_> = out.iter().map(|p| crate::Complex64::new(p.1, 0.0)).collect();
        let spread = relative_spread(&values);
        if spread > self.spec.relative_tolerance {
            return Err(Error::Consistency {
                what: "norm backends",
                values: out.iter().map(|p| p.1).collect(),
                spread,
                tolerance: self.spec.relative_tolerance,
            });
        }
        Ok(out)
    }

    /// `N = 2 c_H r^{-(2H+2)} ∫_0^∞ σ^{1-2H} |∫_0^{rt} e^{-iσs} sin s ds|² dσ`.
    fn n_wave_spectral(&self, t: f64, r: f64) -> Result<f64> {
        let h = self.model.h();
        let big_t = r * t;
        if big_t < 1e-6 {
            // the leading term of the small-r expansion
            return Ok(t.powf(2.0 * h + 2.0) / (2.0 * h + 2.0));
        }
        let e = 1.0 - 2.0 * h;
        let lambda = self.spec.tail_cutoff.max(4.0);
        let width = osc_width(big_t, &self.spec).min(1.0);
        let pts = with_breakpoints(uniform_panels(0.0, lambda, width), &[1.0]);
        let n = self.spec.node_count;
        let jac = Rule::jacobi(n, 0.0, e);
        let leg = Rule::legendre(n);
        let mut parts = Vec::with_capacity(pts.len());
        for (k, w) in pts.windows(2).enumerate() {
            let mut acc = 0.0;
            if k == 0 {
                for (s, wt) in jac.mapped(w[0], w[1]) {
                    acc += wt * restricted_fourier_sin(0.0, big_t, s)?.norm_sqr();
                }
            } else {
                for (s, wt) in leg.mapped(w[0], w[1]) {
                    acc += wt * s.powf(e) * restricted_fourier_sin(0.0, big_t, s)?.norm_sqr();
                }
            }
            parts.push(acc);
        }
        parts.push(sq_tail(big_t, e, lambda));
        Ok(2.0 * self.model.c_h * r.powf(-(2.0 * h + 2.0)) * pairwise_sum(&parts))
    }
}

/// `N_t(r)` with a freshly built engine.
pub fn n_wave(t: f64, r: f64, model: &HurstModel, backend: NormBackend, spec: &QuadratureSpec) -> Result<f64> {
    NormEngine::new(model, spec)?.n_wave_with(t, r, backend)
}

/// `A_t(r)` with a freshly built engine.
pub fn a_heat(t: f64, r: f64, model: &HurstModel, spec: &QuadratureSpec) -> Result<f64> {
    NormEngine::new(model, spec)?.a_heat(t, r)
}

pub fn cross_time(op: Operator, t1: f64, t2: f64, r: f64, model: &HurstModel, spec: &QuadratureSpec) -> Result<f64> {
    NormEngine::new(model, spec)?.cross_time(op, t1, t2, r)
}

/// `∫_Λ^∞ σ^e |∫_0^T e^{-iσs} sin s ds|² dσ` for `Λ > 1`, from
///
/// ```text
/// (σ² - 1)² |F|² = 1 + cos²T + σ² sin²T - 2 (cos T cos σT + σ sin T sin σT)
/// ```
///
/// and the expansion `(σ² - 1)^{-2} = Σ_k (k + 1) σ^{-4-2k}`.
pub(crate) fn sq_tail(big_t: f64, e: f64, lambda: f64) -> f64 {
    let (s, c) = big_t.sin_cos();
    let mut total = 0.0;
    for k in 0..60 {
        let kf = k as f64;
        let w = kf + 1.0;
        let p_even = 4.0 + 2.0 * kf - e;
        let p_odd = 3.0 + 2.0 * kf - e;
        let p_sin = 2.0 + 2.0 * kf - e;
        let smooth = (1.0 + c * c) * lambda.powf(1.0 - p_even) / (p_even - 1.0) + s * s * lambda.powf(1.0 - p_sin) / (p_sin - 1.0);
        let osc = -2.0 * (c * exp_tail(big_t, p_even, lambda).re + s * exp_tail(big_t, p_odd, lambda).im);
        let term = w * (smooth + osc);
        total += term;
        if term.abs() <= 1e-17 * total.abs() {
            break;
        }
    }
    total
}

/// Pairwise (tree) summation, so results do not depend on how callers
/// chunk the terms.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        n if n <= 8 => xs.iter().sum(),
        n => pairwise_sum(&xs[..n / 2]) + pairwise_sum(&xs[n / 2..]),
    }
}

/// `2π ∫_0^x sin² = π(2x - sin 2x)/2`, accurate for small `x`.
pub(crate) fn two_pi_int_sin_sq(x: f64) -> f64 {
    if x.abs() < 0.1 {
        // y - sin y = Σ_{k≥1} (-1)^{k+1} y^{2k+1} / (2k+1)!, y = 2x
        let y = 2.0 * x;
        let y2 = y * y;
        let mut term = y * y2 / 6.0;
        let mut sum = term;
        let mut k = 1.0;
        while term.abs() > 1e-18 * sum.abs() {
            term *= -y2 / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
            sum += term;
            k += 1.0;
        }
        PI * sum / 2.0
    } else {
        PI * (2.0 * x - (2.0 * x).sin()) / 2.0
    }
}

#[cfg(test)]
mod tests;
