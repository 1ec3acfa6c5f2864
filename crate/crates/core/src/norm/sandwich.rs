//! The identity
//!
//! ```text
//! ∫_R (τ² - 1)^{-2} [f_t(λ,τ)² + g_t(λ,τ)²] dτ = 2π ∫_0^{λt} sin² x dx
//! ```
//!
//! with `f_t = sin τλt - τ sin λt` and `g_t = cos τλt - cos λt`, and the
//! band `c_lo λ³/(1+λ²) ≤ · ≤ c_hi λ³/(1+λ²)` for `λ ≥ 1`.

use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use super::{pairwise_sum, sq_tail, two_pi_int_sin_sq};
use crate::error::{check_domain, Result};
use crate::frac_time::osc_width;
use crate::quadrature::{uniform_panels, with_breakpoints, QuadratureSpec, Rule};
use crate::special::sinc;

/// `πλt - (π/2) sin 2λt`.
pub fn sandwich_exact(lambda: f64, t: f64) -> Result<f64> {
    check_domain("lambda", lambda, lambda > 0.0 && lambda.is_finite(), "(0, inf)")?;
    check_domain("t", t, t > 0.0 && t.is_finite(), "(0, inf)")?;
    Ok(two_pi_int_sin_sq(lambda * t))
}

/// `(τ² - 1)^{-2} (f² + g²)` in a form without the removable singularity at
/// `τ = 1` (the one at `τ = -1` is handled by evenness).
pub(crate) fn integrand(x: f64, tau: f64) -> f64 {
    let d = tau - 1.0;
    let p = tau + 1.0;
    let sc = sinc(0.5 * d * x);
    let f = x * (0.5 * p * x).cos() * sc - x.sin();
    let g = -x * (0.5 * p * x).sin() * sc;
    (f * f + g * g) / (p * p)
}

/// `2 ∫_lo^hi integrand(λt, τ) dτ` over `0 ≤ lo < hi ≤ ∞`.
pub(crate) fn tau_integral(x: f64, lo: f64, hi: f64, spec: &QuadratureSpec) -> f64 {
    let lambda = spec.tail_cutoff.max(4.0);
    let top = hi.min(lambda);
    let mut parts = Vec::new();
    if top > lo {
        let width = osc_width(x, spec).min(1.0);
        let pts = with_breakpoints(uniform_panels(lo, top, width), &[1.0]);
        let leg = Rule::legendre(spec.node_count);
        for w in pts.windows(2) {
            parts.push(leg.integrate(w[0], w[1], |tau| integrand(x, tau)));
        }
    }
    if hi > lambda {
        parts.push(sq_tail(x, 0.0, lambda));
    }
    2.0 * pairwise_sum(&parts)
}

/// The `τ`-integral evaluated by quadrature, for cross-checking
/// [`sandwich_exact`].
pub fn sandwich_numerical(lambda: f64, t: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_domain("lambda", lambda, lambda > 0.0 && lambda.is_finite(), "(0, inf)")?;
    check_domain("t", t, t > 0.0 && t.is_finite(), "(0, inf)")?;
    spec.validate()?;
    Ok(tau_integral(lambda * t, 0.0, f64::INFINITY, spec))
}

/// Range of `sandwich(λ, t) / (λ³/(1+λ²))` over `λ ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Band {
    pub t: f64,
    pub c_lo: f64,
    pub c_hi: f64,
    pub argmin: f64,
    pub argmax: f64,
    /// The fit did not move when the search grid was halved.
    pub stable: bool,
}

/// Upper end of the fitted range; beyond it the ratio is within
/// `π/(2·FIT_MAX)` of its limit `πt` and is bounded analytically.
const FIT_MAX: f64 = 1e3;

fn ratio(lambda: f64, t: f64) -> f64 {
    (1.0 + 1.0 / (lambda * lambda)) * two_pi_int_sin_sq(lambda * t) / lambda
}

fn golden<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..80 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

fn scan(t: f64, steps_per_period: f64) -> (f64, f64, f64, f64) {
    // uniform in λ with a fixed number of points per oscillation, and
    // logarithmic near λ = 1 where the ratio changes on a different scale
    let period = PI / t;
    let step = (period / steps_per_period).min(0.01);
    let count = (((FIT_MAX - 1.0) / step).ceil() as usize).min(2_000_000);
    let step = (FIT_MAX - 1.0) / count as f64;
    let (mut lo, mut hi) = ((f64::INFINITY, 1.0), (f64::NEG_INFINITY, 1.0));
    for k in 0..=count {
        let l = 1.0 + k as f64 * step;
        let v = ratio(l, t);
        if v < lo.0 {
            lo = (v, l);
        }
        if v > hi.0 {
            hi = (v, l);
        }
    }
    let refine = |x: f64, sign: f64| -> (f64, f64) {
        let a = (x - step).max(1.0);
        let b = (x + step).min(FIT_MAX);
        let (arg, v) = golden(|l| sign * ratio(l, t), a, b);
        (arg, sign * v)
    };
    let (amin, vmin) = refine(lo.1, 1.0);
    let (amax, vmax) = refine(hi.1, -1.0);
    (vmin.min(lo.0), if vmin < lo.0 { amin } else { lo.1 }, vmax.max(hi.0), if vmax > hi.0 { amax } else { hi.1 })
}

/// Fits `c_lo(t)`, `c_hi(t)` on `λ ∈ [1, 10³]` and widens them by the
/// analytic range `(1 + λ^{-2})(πt ± π/(2λ))` of the ratio beyond.
pub fn band_constants(t: f64) -> Result<Band> {
    check_domain("t", t, t > 0.0 && t.is_finite(), "(0, inf)")?;
    let (lo, argmin, hi, argmax) = scan(t, 24.0);
    let (lo2, _, hi2, _) = scan(t, 48.0);
    let stable = (lo - lo2).abs() <= 1e-9 * lo.abs() && (hi - hi2).abs() <= 1e-9 * hi.abs();
    let beyond_lo = PI * t - PI / (2.0 * FIT_MAX);
    let beyond_hi = (1.0 + FIT_MAX.powi(-2)) * (PI * t + PI / (2.0 * FIT_MAX));
    Ok(Band {
        t,
        c_lo: lo.min(lo2).min(beyond_lo),
        c_hi: hi.max(hi2).max(beyond_hi),
        argmin,
        argmax,
        stable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_examples() {
        assert!((sandwich_exact(1.0, PI).unwrap() - PI * PI).abs() < 1e-12);
        let v = sandwich_exact(2.0, 1.0).unwrap();
        assert!((v - (2.0 * PI - 0.5 * PI * 4f64.sin())).abs() < 1e-12);
        // ≈ 7.471968
        assert!((v - 7.471968).abs() < 1e-6);
        let x = 1e-3;
        let small = sandwich_exact(x, 1.0).unwrap();
        assert!((small / (2.0 * PI / 3.0 * x * x * x) - 1.0).abs() < 1e-6);
        assert!(sandwich_exact(0.0, 1.0).is_err());
    }

    #[test]
    fn numerical_matches_exact() {
        let spec = QuadratureSpec::default();
        for &l in &[0.1, 1.0, 2.0, 10.0] {
            for &t in &[0.5, 1.0, 2.0] {
                let e = sandwich_exact(l, t).unwrap();
                let n = sandwich_numerical(l, t, &spec).unwrap();
                assert!((n - e).abs() < 1e-9 * e, "λ={l} t={t}: {n} vs {e}");
            }
        }
    }

    #[test]
    fn band_is_positive_and_contains_limit() {
        for &t in &[0.5, 1.0, 2.0] {
            let b = band_constants(t).unwrap();
            assert!(b.stable, "{b:?}");
            assert!(b.c_lo > 0.0 && b.c_lo <= PI * t && PI * t <= b.c_hi, "{b:?}");
            for &l in &[1.0, 1.7, 33.3, 999.0, 5e3, 1e6] {
                let r = ratio(l, t);
                assert!(r >= b.c_lo * (1.0 - 1e-12) && r <= b.c_hi * (1.0 + 1e-12));
            }
        }
    }
}
