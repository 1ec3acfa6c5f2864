//! Fundamental solutions of `∂_tt - Δ` and `∂_t - ½Δ`, in physical and
//! Fourier space, plus the oscillatory pair `(f_t, g_t)` and the restricted
//! Fourier transform of `sin`.

use core::f64::consts::PI;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{check_domain, Error, Result};
use crate::special::{gamma, phi};
use crate::Operator;

/// Below this value of `t·r` the wave symbol uses its Taylor series.
pub const SMALL_TR: f64 = 1e-4;

/// Half-width of the band around `τ = ±1` where [`restricted_fourier_sin`]
/// switches to the singularity-free representation.
pub const UNIT_FREQUENCY_EPS: f64 = 1e-4;

/// `FG(t, ·)(ξ)` as a function of `r = |ξ|`.
///
/// Wave: `sin(t r)/r` (equal to `t` at `r = 0`). Heat: `exp(-t r²/2)`.
pub fn fourier_green(op: Operator, t: f64, r: f64) -> f64 {
    match op {
        Operator::Wave => {
            let x = t * r;
            if x.abs() < SMALL_TR {
                let x2 = x * x;
                t * (1.0 - x2 / 6.0 + x2 * x2 / 120.0)
            } else {
                (x).sin() / r
            }
        }
        Operator::Heat => (-0.5 * t * r * r).exp(),
    }
}

/// Physical-space fundamental solution at `(t, x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhysicalGreen {
    /// A pointwise density value.
    Density(f64),
    /// The wave kernel in `d = 3`: the measure `c_d t^{-1} σ_t`, with `σ_t`
    /// the surface measure on the sphere of radius `t`.
    SphereMeasure {
        radius: f64,
        /// `c_d = 1/(4π)`.
        density_constant: f64,
        /// `c_d t^{-1} · 4π t² = t`, the value of the Fourier symbol at 0.
        total_mass: f64,
    },
}

impl PhysicalGreen {
    pub fn density(&self) -> Option<f64> {
        match *self {
            PhysicalGreen::Density(v) => Some(v),
            PhysicalGreen::SphereMeasure { .. } => None,
        }
    }
}

pub fn green_physical(op: Operator, d: usize, t: f64, x: &[f64]) -> Result<PhysicalGreen> {
    check_domain("t", t, t > 0.0, "(0, inf)")?;
    if d == 0 || x.len() != d {
        return Err(Error::Config(alloc::format!(
            "point has {} coordinates but the dimension is {d}",
            x.len()
        )));
    }
    let r2: f64 = x.iter().map(|v| v * v).sum();
    match op {
        Operator::Wave => match d {
            1 => Ok(PhysicalGreen::Density(if r2 < t * t { 0.5 } else { 0.0 })),
            2 => Ok(PhysicalGreen::Density(if r2 < t * t {
                1.0 / (2.0 * PI * (t * t - r2).sqrt())
            } else {
                0.0
            })),
            3 => {
                let c_d = 1.0 / (4.0 * PI);
                Ok(PhysicalGreen::SphereMeasure {
                    radius: t,
                    density_constant: c_d,
                    total_mass: c_d / t * 4.0 * PI * t * t,
                })
            }
            _ => Err(Error::Unsupported(alloc::format!(
                "the wave kernel in dimension {d} is a distribution; use the Fourier side"
            ))),
        },
        Operator::Heat => {
            let norm = (2.0 * PI * t).powf(-(d as f64) / 2.0);
            Ok(PhysicalGreen::Density(norm * (-r2 / (2.0 * t)).exp()))
        }
    }
}

/// `(f_t(λ, τ), g_t(λ, τ)) = (sin τλt - τ sin λt, cos τλt - cos λt)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatoryPair {
    pub f_val: f64,
    pub g_val: f64,
}

pub fn ft_gt(lambda: f64, tau: f64, t: f64) -> OscillatoryPair {
    if tau.abs() == 1.0 {
        return OscillatoryPair { f_val: 0.0, g_val: 0.0 };
    }
    let lt = lambda * t;
    OscillatoryPair {
        f_val: (tau * lt).sin() - tau * lt.sin(),
        g_val: (tau * lt).cos() - lt.cos(),
    }
}

/// `∫_a^b e^{-iτx} sin x dx`.
pub fn restricted_fourier_sin(a: f64, b: f64, tau: f64) -> Result<Complex64> {
    check_domain("a", a, a >= 0.0, "[0, inf)")?;
    check_domain("b", b, b > a, "(a, inf)")?;
    let upper = fourier_sin_from_zero(b, tau);
    if a == 0.0 {
        Ok(upper)
    } else {
        Ok(upper - fourier_sin_from_zero(a, tau))
    }
}

fn fourier_sin_from_zero(t: f64, tau: f64) -> Complex64 {
    if (tau.abs() - 1.0).abs() < UNIT_FREQUENCY_EPS {
        return fourier_sin_near_unit(t, tau);
    }
    let (st, ct) = t.sin_cos();
    let (stt, ctt) = (tau * t).sin_cos();
    let denom = 1.0 - tau * tau;
    let i1 = (1.0 - ctt * ct - tau * stt * st) / denom;
    let j1 = (tau * ctt * st - stt * ct) / denom;
    Complex64::new(i1, -j1)
}

/// `sin x = (e^{ix} - e^{-ix}) / (2i)` gives
/// `F(τ) = T [φ₁(-i(1-τ)T) - φ₁(i(1+τ)T)] / (2i)`, with no removable
/// singularity left.
fn fourier_sin_near_unit(t: f64, tau: f64) -> Complex64 {
    let a = phi(1, Complex64::new(0.0, -(1.0 - tau) * t));
    let b = phi(1, Complex64::new(0.0, (1.0 + tau) * t));
    (a - b) * t / Complex64::new(0.0, 2.0)
}

/// Surface area `ω_{d-1} = 2 π^{d/2} / Γ(d/2)` of the unit sphere in `R^d`.
pub fn sphere_area(d: usize) -> f64 {
    let h = d as f64 / 2.0;
    2.0 * PI.powf(h) / gamma(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::Rule;

    #[test]
    fn symbols() {
        assert!((fourier_green(Operator::Wave, 1.0, 1e-9) - 1.0).abs() < 1e-15);
        assert!(fourier_green(Operator::Wave, 1.0, PI).abs() < 1e-15);
        assert!((fourier_green(Operator::Heat, 1.0, 2.0) - (-2.0f64).exp()).abs() < 1e-15);
        assert_eq!(fourier_green(Operator::Wave, 2.0, 0.0), 2.0);
        // series and direct branch meet
        let r = SMALL_TR * 1.0001;
        let direct = r.sin() / r;
        assert!((fourier_green(Operator::Wave, 1.0, r) - direct).abs() < 1e-15);
        let r = SMALL_TR * 0.9999;
        assert!((fourier_green(Operator::Wave, 1.0, r) - r.sin() / r).abs() < 1e-15);
    }

    #[test]
    fn physical_kernels() {
        let g = green_physical(Operator::Wave, 1, 2.0, &[1.0]).unwrap();
        assert_eq!(g.density(), Some(0.5));
        let g = green_physical(Operator::Wave, 1, 1.0, &[3.0]).unwrap();
        assert_eq!(g.density(), Some(0.0));
        let g = green_physical(Operator::Heat, 1, 1.0, &[0.0]).unwrap();
        assert!((g.density().unwrap() - 0.3989422804014327).abs() < 1e-15);
        let g = green_physical(Operator::Wave, 3, 2.0, &[0.0, 0.0, 0.0]).unwrap();
        match g {
            PhysicalGreen::SphereMeasure { radius, total_mass, .. } => {
                assert_eq!(radius, 2.0);
                assert!((total_mass - 2.0).abs() < 1e-14);
            }
            _ => panic!("expected a measure"),
        }
        assert!(matches!(
            green_physical(Operator::Wave, 4, 1.0, &[0.0; 4]),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn physical_and_fourier_agree_d1() {
        let leg = Rule::legendre(30);
        for &t in &[0.5, 1.0, 2.0] {
            for &xi in &[0.0, 0.3, 1.7, 5.0] {
                // ∫ G(t, x) e^{-iξx} dx, real by symmetry
                let mut v = 0.0;
                let n = 8;
                for k in 0..n {
                    let lo = -t + 2.0 * t * k as f64 / n as f64;
                    let hi = lo + 2.0 * t / n as f64;
                    v += leg.integrate(lo, hi, |x| {
                        (xi * x).cos() * green_physical(Operator::Wave, 1, t, &[x]).unwrap().density().unwrap()
                    });
                }
                assert!((v - fourier_green(Operator::Wave, t, xi)).abs() < 1e-12, "t={t} xi={xi}");
            }
        }
        for &t in &[0.5, 1.0] {
            for &xi in &[0.0, 1.0, 3.0] {
                let mut v = 0.0;
                for k in 0..40 {
                    let lo = -12.0 + 0.6 * k as f64;
                    v += leg.integrate(lo, lo + 0.6, |x| {
                        (xi * x).cos() * green_physical(Operator::Heat, 1, t, &[x]).unwrap().density().unwrap()
                    });
                }
                assert!((v - fourier_green(Operator::Heat, t, xi)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn oscillatory_pair() {
        let p = ft_gt(2.0, 1.0, 1.0);
        assert_eq!((p.f_val, p.g_val), (0.0, 0.0));
        let p = ft_gt(2.0, 3.0, 1.0);
        assert!((p.f_val - (6f64.sin() - 3.0 * 2f64.sin())).abs() < 1e-15);
        assert!((p.g_val - (6f64.cos() - 2f64.cos())).abs() < 1e-15);
        assert!((p.f_val + 3.007307).abs() < 1e-6 && (p.g_val - 1.376317).abs() < 1e-6);
    }

    #[test]
    fn fourier_sin_values() {
        let v = restricted_fourier_sin(0.0, PI, 0.0).unwrap();
        assert!((v.re - 2.0).abs() < 1e-15 && v.im.abs() < 1e-15);
        for &t in &[0.3, 1.0, 2.5, 10.0] {
            let v = restricted_fourier_sin(0.0, t, 1.0).unwrap();
            let re = t.sin().powi(2) / 2.0;
            let im = -(t / 2.0 - (2.0 * t).sin() / 4.0);
            assert!((v.re - re).abs() < 1e-14 && (v.im - im).abs() < 1e-14, "t={t} {v}");
            let w = restricted_fourier_sin(0.0, t, -1.0).unwrap();
            assert!((w - v.conj()).norm() < 1e-14);
        }
    }

    #[test]
    fn fourier_sin_modulus_identity() {
        for &t in &[0.7, 2.0, 6.0] {
            for &tau in &[0.0, 0.5, 1.5, -2.3, 9.0] {
                let v = restricted_fourier_sin(0.0, t, tau).unwrap();
                let num = ((tau * t).sin() - tau * t.sin()).powi(2) + ((tau * t).cos() - t.cos()).powi(2);
                let want = num / (1.0 - tau * tau).powi(2);
                assert!((v.norm_sqr() - want).abs() < 1e-12 * (1.0 + want));
            }
        }
    }

    #[test]
    fn fourier_sin_continuous_at_unit() {
        let e = UNIT_FREQUENCY_EPS;
        for &t in &[0.5, 3.0, 20.0] {
            for &c in &[1.0, -1.0] {
                for &sgn in &[1.0, -1.0] {
                    let outside = c + sgn * 2.0 * e;
                    let inside = c + sgn * 0.999 * e;
                    let a = restricted_fourier_sin(0.0, t, outside).unwrap();
                    let b = restricted_fourier_sin(0.0, t, inside).unwrap();
                    let slope = t * t;
                    assert!((a - b).norm() <= 1e-8 + slope * 1.1 * e, "t={t} c={c}");
                    // the two representations agree at one point
                    let x = fourier_sin_near_unit(t, outside);
                    assert!((a - x).norm() < 1e-8, "t={t}: {a} vs {x}");
                }
            }
        }
    }

    #[test]
    fn fourier_sin_matches_time_function() {
        let f = crate::time_fn::TimeFunction::sine(1.0);
        for &(a, b) in &[(0.0, 2.0), (0.5, 3.0)] {
            for &tau in &[0.2, 1.0 + 5e-5, 4.0] {
                let v = restricted_fourier_sin(a, b, tau).unwrap();
                let w = f.fourier(tau, b).unwrap() - f.fourier(tau, a).unwrap_or_default();
                assert!((v - w).norm() < 1e-12);
            }
        }
        assert!(restricted_fourier_sin(1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn sphere_areas() {
        assert!((sphere_area(1) - 2.0).abs() < 1e-14);
        assert!((sphere_area(2) - 2.0 * PI).abs() < 1e-14);
        assert!((sphere_area(3) - 4.0 * PI).abs() < 1e-13);
    }
}
