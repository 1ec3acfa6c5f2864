//! The Hurst index and the constants derived from it.

use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::special::{beta, gamma};

/// A Hurst index `H ∈ (1/2, 1)` together with its derived constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HurstModel {
    h: f64,
    /// `α_H = H(2H - 1)`, the weight of `|u - v|^{2H-2}` in the fBm covariance.
    pub alpha_h: f64,
    /// `c_H = Γ(2H + 1) sin(πH) / (2π)`, the spectral weight of `|τ|^{-(2H-1)}`.
    pub c_h: f64,
    /// Normalisation of the kernel `K_H`: `(α_H / B(H - 1/2, 2 - 2H))^{1/2}`.
    pub c_star_h: f64,
    /// `d_H = (c*_H)² Γ(H - 1/2)²`, the constant of the transfer isometry.
    pub d_h: f64,
}

impl HurstModel {
    pub fn new(h: f64) -> Result<Self> {
        if !(h > 0.5 && h < 1.0) {
            return Err(Error::Domain {
                name: "H",
                value: h,
                domain: "the open interval (1/2, 1)",
            });
        }
        let alpha_h = h * (2.0 * h - 1.0);
        let c_h = gamma(2.0 * h + 1.0) * (PI * h).sin() / (2.0 * PI);
        let c_star_h = (alpha_h / beta(h - 0.5, 2.0 - 2.0 * h)).sqrt();
        let d_h = c_star_h * c_star_h * gamma(h - 0.5).powi(2);
        Ok(HurstModel {
            h,
            alpha_h,
            c_h,
            c_star_h,
            d_h,
        })
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// Exponent of the time kernel `|u - v|^{2H-2}`.
    pub fn kernel_exponent(&self) -> f64 {
        2.0 * self.h - 2.0
    }

    /// `β = H - 1/2`, the order of the fractional integral in `K*_H`.
    pub fn transfer_exponent(&self) -> f64 {
        self.h - 0.5
    }

    /// Exponent of the spectral weight `|τ|^{1-2H}`.
    pub fn spectral_exponent(&self) -> f64 {
        1.0 - 2.0 * self.h
    }

    /// `|d_H - 2π c_H| / (2π c_H)`; zero up to rounding.
    pub fn constants_mismatch(&self) -> f64 {
        let two_pi_c = 2.0 * PI * self.c_h;
        (self.d_h - two_pi_c).abs() / two_pi_c
    }

    /// fBm covariance `R_H(t, s) = ½(t^{2H} + s^{2H} - |t - s|^{2H})`.
    pub fn covariance(&self, t: f64, s: f64) -> Result<f64> {
        if !(t >= 0.0) || !(s >= 0.0) {
            return Err(Error::Domain {
                name: "time",
                value: if t >= 0.0 { s } else { t },
                domain: "[0, inf)",
            });
        }
        let p = 2.0 * self.h;
        Ok(0.5 * (t.powf(p) + s.powf(p) - (t - s).abs().powf(p)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_out_of_range() {
        for h in [0.5, 1.0, 0.2, f64::NAN] {
            let err = HurstModel::new(h).unwrap_err();
            assert!(alloc::format!("{err}").contains("(1/2, 1)"));
        }
    }

    #[test]
    fn alpha_limit() {
        let m = HurstModel::new(0.5 + 1e-9).unwrap();
        assert!(m.alpha_h < 1e-8 && m.alpha_h > 0.0);
        assert_eq!(HurstModel::new(0.75).unwrap().alpha_h, 0.375);
    }

    #[test]
    fn covariance_values() {
        let m = HurstModel::new(0.75).unwrap();
        assert_eq!(m.covariance(1.0, 1.0).unwrap(), 1.0);
        assert!((m.covariance(2.0, 1.0).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(m.covariance(3.0, 0.0).unwrap(), 0.0);
        assert!(m.covariance(-1.0, 0.0).is_err());
    }
}
