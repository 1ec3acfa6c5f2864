//! One module per subcommand. Each turns a merged [`RunConfig`] into an
//! [`Outcome`]; [`run`] adds timing and wraps it into a [`Report`].

mod bounds;
mod check;
mod continuity;
mod identity;
mod necessity;
mod sandwich;
mod simulate;
mod variance;

use std::time::Instant;

use clap::Subcommand;
use fracwave_core::QuadratureSpec;

use crate::config::RunConfig;
use crate::error::Result;
use crate::report::{Outcome, Report};

pub use identity::{backend_rows, family, HORIZONS, HURST_GRID};
pub use simulate::{sample_csv, sidecar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Existence verdicts: temperedness, Dalang, wave and heat conditions.
    Check,
    /// Second moment of the solution over a list of times.
    Variance,
    /// Two-sided bounds on the variance kernels over a radius grid.
    Bounds,
    /// Closed form against quadrature for the oscillatory sandwich integral.
    Sandwich,
    /// Cross-backend identities and exact anchors of the fractional norm.
    Identity,
    /// The necessity chain for the wave equation.
    Necessity,
    /// L² moduli of continuity in time and space.
    Continuity,
    /// Covariance assembly, exact Gaussian samples and their validation.
    Simulate,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Variance => "variance",
            Command::Bounds => "bounds",
            Command::Sandwich => "sandwich",
            Command::Identity => "identity",
            Command::Necessity => "necessity",
            Command::Continuity => "continuity",
            Command::Simulate => "simulate",
        }
    }
}

/// Validates the config for `cmd`, runs it on a pool of `config.threads`
/// workers and times it.
pub fn run(cmd: Command, config: &RunConfig) -> Result<Report> {
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .map_err(|e| crate::error::CliError::config(format!("thread pool: {e}")))?;
    let outcome = pool.install(|| dispatch(cmd, config))?;
    Ok(Report {
        command: cmd.name().to_string(),
        config: config.clone(),
        outcome,
        seconds: start.elapsed().as_secs_f64(),
    })
}

fn dispatch(cmd: Command, c: &RunConfig) -> Result<Outcome> {
    match cmd {
        Command::Check => check::run(c),
        Command::Variance => variance::run(c),
        Command::Bounds => bounds::run(c),
        Command::Sandwich => sandwich::run(c),
        Command::Identity => identity::run(c),
        Command::Necessity => necessity::run(c),
        Command::Continuity => continuity::run(c),
        Command::Simulate => simulate::run(c),
    }
}

/// The same rule with half the nodes per panel; the difference of the two
/// results is the reported error estimate.
pub(crate) fn coarse(spec: &QuadratureSpec) -> QuadratureSpec {
    QuadratureSpec {
        node_count: (spec.node_count / 2).max(4),
        ..*spec
    }
}
