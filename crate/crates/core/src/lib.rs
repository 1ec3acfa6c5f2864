//! Numerics for the linear stochastic wave and heat equations driven by a
//! Gaussian noise that behaves like fractional Brownian motion in time
//! (Hurst index `H > 1/2`) and is spatially homogeneous with spectral
//! measure `mu`.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is a pure
//! function of its inputs: IO, configuration files, thread pools and the
//! command-line front-end live in the companion `fracwave` crate.
//!
//! Layout:
//!
//! * [`hurst`], [`time_fn`], [`frac_time`]: the temporal fractional structure
//!   (constants, fBm covariance, fractional integrals, the transfer operator
//!   and the `H(0,T)` inner product with three independent backends).
//! * [`spectral`]: spectral measures and existence criteria.
//! * [`green`]: wave and heat fundamental solutions and the oscillatory pair.
//! * [`norm`]: the variance kernels, bounds, the necessity chain and
//!   continuity moduli.
//! * [`sampler`]: exact Gaussian sampling of the solution on a finite grid.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod error;
pub mod frac_time;
pub mod green;
pub mod hurst;
pub mod norm;
pub mod quadrature;
pub mod sampler;
pub mod special;
pub mod spectral;
pub mod time_fn;

pub use error::{Error, Result};
pub use hurst::HurstModel;
pub use num_complex::Complex64;
pub use quadrature::QuadratureSpec;

/// Version of this crate, recorded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Which stochastic PDE is being solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Operator {
    /// `u_tt = Δu + Ẇ`.
    Wave,
    /// `u_t = ½Δu + Ẇ`.
    Heat,
}

impl Operator {
    pub fn name(self) -> &'static str {
        match self {
            Operator::Wave => "wave",
            Operator::Heat => "heat",
        }
    }
}

impl core::str::FromStr for Operator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "wave" => Ok(Operator::Wave),
            "heat" => Ok(Operator::Heat),
            _ => Err(Error::Config(alloc::format!("unknown operator `{s}` (expected wave|heat)"))),
        }
    }
}
