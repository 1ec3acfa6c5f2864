use alloc::string::String;
use alloc::vec::Vec;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("{name} = {value} is outside the domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("numerical divergence: {reason} (partial integrals {trace:?})")]
    Divergence { reason: String, trace: Vec<f64> },

    #[error("internal consistency check failed: {what} (values {values:?}, relative spread {spread:.3e} > {tolerance:.3e})")]
    Consistency {
        what: &'static str,
        values: Vec<f64>,
        spread: f64,
        tolerance: f64,
    },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error(
        "matrix is not positive semidefinite within the jitter ladder (most negative eigenvalue {min_eigenvalue:.3e}, \
         largest jitter tried {jitter:.3e})"
    )]
    NotPsd { pivot: f64, min_eigenvalue: f64, jitter: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub(crate) fn check_domain(name: &'static str, value: f64, ok: bool, domain: &'static str) -> Result<()> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain { name, value, domain })
    }
}
