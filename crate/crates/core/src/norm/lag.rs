//! The two-time kernel
//!
//! ```text
//! Cross(t1, t2, r) = α_H ∫_0^{t1} ∫_0^{t2} G(t1 - u) G(t2 - v) |u - v|^{2H-2} du dv
//! ```
//!
//! with `G = FG(·)(r)`, reduced to a single integral over the lag
//! `w = u - v`:
//!
//! ```text
//! Cross = α_H ∫_{-t2}^{t1} |w|^{2H-2} C(w) dw,
//! C(w)  = ∫_{max(0,-w)}^{min(t2, t1-w)} G(t1 - w - v) G(t2 - v) dv,
//! ```
//!
//! where `C` is elementary for both operators. For the wave kernel with
//! `r·t` not small the lag integral itself is done in closed form through
//! moments `∫_0^W w^{s-1} e^{iκw} dw`, which makes the cost independent of
//! `r`.

use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::frac_time::osc_width;
use crate::hurst::HurstModel;
use crate::quadrature::{graded_panels, QuadratureSpec, Rule};
use crate::special::{gamma, one_minus_sinc_over_sq, sin_over};
use crate::Operator;

/// Below this value of `r·max(t1, t2)` the wave kernel is integrated
/// numerically; the closed form loses digits to cancellation there.
const CLOSED_FORM_MIN_RT: f64 = 2.0;

/// `|x|` above which the incomplete moments use their asymptotic series.
const MOMENT_ASYMPTOTIC: f64 = 40.0;

#[derive(Debug, Clone)]
pub(crate) struct LagKernel {
    model: HurstModel,
    gamma: f64,
    spec: QuadratureSpec,
    jac0: Rule,
    leg: Rule,
    /// `Φ(s_m, ·)` nodes for `s_m = 2H - 1 + m`, `m = 0, 1`.
    moments: [Vec<(f64, f64)>; 2],
}

impl LagKernel {
    pub(crate) fn new(model: &HurstModel, spec: &QuadratureSpec) -> Self {
        let gamma = 2.0 * model.h() - 2.0;
        let moment_rule = |m: f64| -> Vec<(f64, f64)> {
            let s = gamma + 1.0 + m;
            Rule::jacobi(48, 0.0, s - 1.0).mapped(0.0, 1.0).collect()
        };
        LagKernel {
            model: *model,
            gamma,
            spec: *spec,
            jac0: Rule::jacobi(spec.node_count, 0.0, gamma),
            leg: Rule::legendre(spec.node_count),
            moments: [moment_rule(0.0), moment_rule(1.0)],
        }
    }

    pub(crate) fn cross(&self, op: Operator, t1: f64, t2: f64, r: f64) -> f64 {
        if t1 <= 0.0 || t2 <= 0.0 {
            return 0.0;
        }
        match op {
            Operator::Wave if r * t1.max(t2) >= CLOSED_FORM_MIN_RT => self.wave_closed(t1, t2, r),
            Operator::Wave => self.wave_quadrature(t1, t2, r),
            Operator::Heat => self.heat_quadrature(t1, t2, r),
        }
    }

    // -- numerical lag integral ------------------------------------------

    /// `∫_0^W w^γ c(w) dw` on panels graded from 0 and from an interior
    /// kink, where `c` may peak.
    fn one_sided<F: Fn(f64) -> f64>(&self, width: f64, kink: Option<f64>, first: f64, max_w: f64, c: F) -> f64 {
        if width <= 0.0 {
            return 0.0;
        }
        let mut pts: Vec<f64> = Vec::new();
        match kink.filter(|&k| k > 0.0 && k < width) {
            Some(k) => {
                pts.extend(two_sided(0.0, k, first, max_w));
                pts.pop();
                // |w|^γ still varies on the scale k beyond the kink
                pts.extend(graded_panels(k, width, first.min(k), max_w));
            }
            None => pts.extend(graded_panels(0.0, width, first, max_w)),
        }
        let mut acc = 0.0;
        for (i, w) in pts.windows(2).enumerate() {
            if i == 0 {
                acc += self.jac0.mapped(w[0], w[1]).map(|(x, wt)| wt * c(x)).sum::<f64>();
            } else {
                acc += self
                    .leg
                    .mapped(w[0], w[1])
                    .map(|(x, wt)| wt * x.powf(self.gamma) * c(x))
                    .sum::<f64>();
            }
        }
        acc
    }

    fn lag_integral<F: Fn(f64) -> f64>(&self, t1: f64, t2: f64, first: f64, max_w: f64, c: F) -> f64 {
        let delta = t1 - t2;
        let pos = self.one_sided(t1, Some(delta), first, max_w, &c);
        let neg = self.one_sided(t2, Some(-delta), first, max_w, |v| c(-v));
        self.model.alpha_h * (pos + neg)
    }

    fn wave_quadrature(&self, t1: f64, t2: f64, r: f64) -> f64 {
        let c = |w: f64| {
            let lo = (-w).max(0.0);
            let hi = t2.min(t1 - w);
            let ell = hi - lo;
            if ell <= 0.0 {
                return 0.0;
            }
            let a = t1 - w;
            let mid = 0.5 * (lo + hi);
            let x = a - mid;
            let y = mid - t2;
            let c2 = r * (a + t2 - lo - hi);
            0.5 * ell * (-2.0 * sin_over(r, x) * sin_over(r, y) + c2.cos() * ell * ell * one_minus_sinc_over_sq(r * ell))
        };
        let max_w = osc_width(2.0 * r, &self.spec);
        let first = max_w.min(t1.max(t2));
        self.lag_integral(t1, t2, first, max_w, c)
    }

    fn heat_quadrature(&self, t1: f64, t2: f64, r: f64) -> f64 {
        let a = 0.5 * r * r;
        let c = |w: f64| {
            let lo = (-w).max(0.0);
            let hi = t2.min(t1 - w);
            let ell = hi - lo;
            if ell <= 0.0 {
                return 0.0;
            }
            let decay = (t1 - w) + t2 - 2.0 * hi;
            (-a * decay).exp() * ell * phi1_real(2.0 * a * ell)
        };
        let first = if a > 0.0 {
            (self.spec.node_count as f64 / 10.0 / a).min(t1.max(t2))
        } else {
            t1.max(t2)
        };
        self.lag_integral(t1, t2, first, f64::INFINITY, c)
    }

    // -- closed form for the wave kernel ------------------------------------

    /// `Φ(s, x) = ∫_0^1 σ^{s-1} e^{-xσ} dσ`, `s = 2H - 1 + m`.
    fn phi_s(&self, m: usize, x: Complex64) -> Complex64 {
        let s = self.gamma + 1.0 + m as f64;
        if x.norm() <= MOMENT_ASYMPTOTIC {
            return self.moments[m].iter().map(|&(sig, w)| (-x * sig).exp() * w).sum();
        }
        // Γ(s) x^{-s} - ∫_1^∞ σ^{s-1} e^{-xσ} dσ, the latter by its
        // asymptotic series e^{-x} Σ_k (s-1)…(s-k) / x^{k+1}
        let mut term = Complex64::new(1.0, 0.0) / x;
        let mut sum = term;
        for k in 1..24 {
            term *= (s - k as f64) / x;
            sum += term;
        }
        x.powf(-s) * gamma(s) - (-x).exp() * sum
    }

    /// `∫_0^W w^{γ+m} e^{iκw} dw`.
    fn moment(&self, m: usize, kappa: f64, width: f64) -> Complex64 {
        if width <= 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let s = self.gamma + 1.0 + m as f64;
        self.phi_s(m, Complex64::new(0.0, -kappa * width)) * width.powf(s)
    }

    fn wave_closed(&self, t1: f64, t2: f64, r: f64) -> f64 {
        let delta = t1 - t2;
        let mut total = 0.0;
        // (side sign, lo, hi, L0, L1, C0, C1) in the reflected variable v ≥ 0
        let mut pieces: Vec<(f64, f64, f64, f64, f64, f64, f64)> = Vec::with_capacity(4);
        if delta > 0.0 {
            pieces.push((1.0, 0.0, delta, t2, 0.0, r * t1, -r));
        }
        pieces.push((1.0, delta.max(0.0), t1, t1, -1.0, r * t2, 0.0));
        if delta < 0.0 {
            pieces.push((-1.0, 0.0, -delta, t1, 0.0, r * t2, -r));
        }
        pieces.push((-1.0, (-delta).max(0.0), t2, t2, -1.0, r * t1, 0.0));

        let r2 = r * r;
        for (sigma, lo, hi, l0, l1, c0, c1) in pieces {
            if hi <= lo {
                continue;
            }
            // (amplitude, p0, p1, phase, κ)
            let terms = [
                (0.5 / r2, l0, l1, r * delta, -sigma * r),
                (-0.25 / (r2 * r), 1.0, 0.0, r * l0 + c0 - FRAC_PI_2, r * l1 + c1),
                (-0.25 / (r2 * r), 1.0, 0.0, r * l0 - c0 - FRAC_PI_2, r * l1 - c1),
            ];
            for (amp, p0, p1, phase, kappa) in terms {
                let e0 = self.moment(0, kappa, hi) - self.moment(0, kappa, lo);
                let mut val = e0 * p0;
                if p1 != 0.0 {
                    let e1 = self.moment(1, kappa, hi) - self.moment(1, kappa, lo);
                    val += e1 * p1;
                }
                total += amp * (Complex64::from_polar(1.0, phase) * val).re;
            }
        }
        self.model.alpha_h * total
    }

    #[cfg(test)]
    pub(crate) fn wave_both(&self, t1: f64, t2: f64, r: f64) -> (f64, f64) {
        (self.wave_quadrature(t1, t2, r), self.wave_closed(t1, t2, r))
    }
}

/// `(1 - e^{-x}) / x` for `x ≥ 0`.
fn phi1_real(x: f64) -> f64 {
    if x < 1e-8 {
        1.0 - 0.5 * x
    } else {
        -libm::expm1(-x) / x
    }
}

/// Panels graded from both ends of `[lo, hi]` towards the middle.
fn two_sided(lo: f64, hi: f64, first: f64, max_w: f64) -> Vec<f64> {
    let mid = 0.5 * (lo + hi);
    let mut left = graded_panels(lo, mid, first, max_w);
    let right = graded_panels(0.0, hi - mid, first, max_w);
    left.pop();
    left.extend(right.iter().rev().map(|&x| hi - x));
    left
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kernel(h: f64) -> LagKernel {
        LagKernel::new(&HurstModel::new(h).unwrap(), &QuadratureSpec::default())
    }

    #[test]
    fn closed_form_matches_quadrature() {
        for &h in &[0.55, 0.75, 0.95] {
            let k = kernel(h);
            for &(t1, t2) in &[(1.0, 1.0), (1.0, 2.0), (2.0, 0.7), (0.3, 0.3)] {
                for &r in &[3.0, 7.3, 40.0, 400.0] {
                    let (q, c) = k.wave_both(t1, t2, r);
                    assert!((q - c).abs() < 1e-9 * q.abs().max(1e-3 * k.cross(Operator::Wave, t1, t1, r)), "h={h} t=({t1},{t2}) r={r}: {q} vs {c}");
                }
            }
        }
    }

    #[test]
    fn zero_radius_limits() {
        let m = HurstModel::new(0.75).unwrap();
        let k = LagKernel::new(&m, &QuadratureSpec::default());
        let n = k.cross(Operator::Wave, 1.0, 1.0, 0.0);
        assert!((n - 1.0 / 3.5).abs() < 1e-12, "{n}");
        let a = k.cross(Operator::Heat, 2.0, 2.0, 0.0);
        assert!((a - 2f64.powf(1.5)).abs() < 1e-12);
        // heat at r = 0 is the fBm covariance
        let c = k.cross(Operator::Heat, 2.0, 0.5, 0.0);
        assert!((c - m.covariance(2.0, 0.5).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn moments_switch_smoothly() {
        let k = kernel(0.7);
        for m in 0..2 {
            let s = k.gamma + 1.0 + m as f64;
            for &x in &[39.9, 40.1, 80.0] {
                let z = Complex64::new(0.0, x);
                let v = k.phi_s(m, z);
                // brute force with many Legendre panels after σ = u^{1/s}
                // substitution: ∫_0^1 σ^{s-1} e^{-zσ} dσ = (1/s) ∫_0^1 e^{-z u^{1/s}} du
                let leg = Rule::legendre(30);
                let mut b = Complex64::new(0.0, 0.0);
                let mut pts = crate::quadrature::geometric_towards_lo(0.0, 1.0 / 400.0, 0.3, 1e-14);
                pts.pop();
                pts.extend((1..=400).map(|j| j as f64 / 400.0));
                for p in pts.windows(2) {
                    for (u, w) in leg.mapped(p[0], p[1]) {
                        b += (-z * u.powf(1.0 / s)).exp() * w;
                    }
                }
                b /= s;
                assert!((v - b).norm() < 1e-9, "m={m} x={x}: {v} vs {b}");
            }
        }
    }
}
