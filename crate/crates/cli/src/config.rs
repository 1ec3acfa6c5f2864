//! Run configuration: one JSON document, overridden field by field by
//! command-line flags. The merged result is what every report embeds.

use std::path::{Path, PathBuf};

use clap::Args;
use fracwave_core::sampler::{GridPoint, SpaceTimeGrid};
use fracwave_core::spectral::SpectralMeasure;
use fracwave_core::{HurstModel, Operator, QuadratureSpec};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};
use crate::measure::parse_measure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum, Default)]
#[serde(rename_all = "lowercase")]
pub enum OpName {
    #[default]
    Wave,
    Heat,
}

impl From<OpName> for Operator {
    fn from(op: OpName) -> Self {
        match op {
            OpName::Wave => Operator::Wave,
            OpName::Heat => Operator::Heat,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureConfig {
    pub node_count: usize,
    pub removable_singularity_radius: f64,
    pub relative_tolerance: f64,
    pub tail_cutoff: f64,
    pub refinement_factor: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        let s = QuadratureSpec::default();
        QuadratureConfig {
            node_count: s.node_count,
            removable_singularity_radius: s.removable_singularity_radius,
            relative_tolerance: s.relative_tolerance,
            tail_cutoff: s.tail_cutoff,
            refinement_factor: s.refinement_factor,
        }
    }
}

impl QuadratureConfig {
    pub fn spec(&self) -> QuadratureSpec {
        QuadratureSpec {
            node_count: self.node_count,
            removable_singularity_radius: self.removable_singularity_radius,
            relative_tolerance: self.relative_tolerance,
            tail_cutoff: self.tail_cutoff,
            refinement_factor: self.refinement_factor,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointConfig {
    pub t: f64,
    pub x: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// Either explicit points or the product `times × xs`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<PointConfig>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub times: Vec<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub xs: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub operator: OpName,
    pub hurst: Option<f64>,
    pub measure: Option<String>,
    pub quadrature: QuadratureConfig,
    pub grid: Option<GridConfig>,
    pub seed: Option<u64>,
    pub b_h: f64,
    /// Evaluation times (horizons for `identity`).
    pub times: Option<Vec<f64>>,
    pub radii: Option<Vec<f64>>,
    pub lambdas: Option<Vec<f64>>,
    /// Temperedness order `l` for `necessity`.
    pub order: Option<u32>,
    /// Number of halvings `k = 1..steps` for `continuity`.
    pub steps: u32,
    pub samples: usize,
    pub validate: bool,
    pub allow_large_grid: bool,
    pub binary: bool,
    /// Worker threads, 0 for one per core. Not part of the config hash.
    pub threads: usize,
    /// Output directory. Not part of the config hash.
    pub output_dir: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            operator: OpName::Wave,
            hurst: None,
            measure: None,
            quadrature: QuadratureConfig::default(),
            grid: None,
            seed: None,
            b_h: 2.0,
            times: None,
            radii: None,
            lambdas: None,
            order: None,
            steps: 10,
            samples: 10_000,
            validate: true,
            allow_large_grid: false,
            binary: false,
            threads: 0,
            output_dir: None,
        }
    }
}

/// Flags shared by every command. Each one overrides the matching field of
/// the config document.
#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    /// JSON config document (a previous report is accepted too).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum, global = true)]
    pub op: Option<OpName>,
    #[arg(long, global = true)]
    pub hurst: Option<f64>,
    /// e.g. `riesz:alpha=1,d=3`, `bessel:alpha=1,d=1`, `white:d=2`,
    /// `fbm:h1=0.7,h2=0.8`, `custom:path=table.csv,d=3`.
    #[arg(long, global = true)]
    pub measure: Option<String>,
    #[arg(long = "t", visible_alias = "times", value_delimiter = ',', num_args = 1.., global = true)]
    pub times: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', num_args = 1.., global = true)]
    pub radii: Option<Vec<f64>>,
    #[arg(long = "lambda", visible_alias = "lambdas", value_delimiter = ',', num_args = 1.., global = true)]
    pub lambdas: Option<Vec<f64>>,
    /// A spatial point, comma separated; repeat for several.
    #[arg(long = "x", allow_hyphen_values = true, global = true)]
    pub xs: Vec<String>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long = "b-h", global = true)]
    pub b_h: Option<f64>,
    #[arg(long, global = true)]
    pub order: Option<u32>,
    #[arg(long, global = true)]
    pub steps: Option<u32>,
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    #[arg(long, global = true)]
    pub nodes: Option<usize>,
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    #[arg(long, global = true)]
    pub cutoff: Option<f64>,
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Also write samples as a raw column-major f64 array.
    #[arg(long, global = true)]
    pub binary: bool,
    /// Skip the Monte-Carlo comparison in `simulate`.
    #[arg(long, global = true)]
    pub no_validate: bool,
    #[arg(long, global = true)]
    pub allow_large_grid: bool,
}

impl Overrides {
    /// Reads the config document, if any, and applies the flags.
    pub fn merge(&self) -> Result<RunConfig> {
        let mut c = match &self.config {
            Some(path) => load(path)?,
            None => RunConfig::default(),
        };
        macro_rules! set {
            ($($field:ident),*) => {$(
                if let Some(v) = self.$field.clone() {
                    c.$field = Some(v);
                }
            )*};
        }
        set!(hurst, measure, times, radii, lambdas, seed, order);
        if let Some(op) = self.op {
            c.operator = op;
        }
        if let Some(v) = self.b_h {
            c.b_h = v;
        }
        if let Some(v) = self.steps {
            c.steps = v;
        }
        if let Some(v) = self.samples {
            c.samples = v;
        }
        if let Some(v) = self.nodes {
            c.quadrature.node_count = v;
        }
        if let Some(v) = self.tolerance {
            c.quadrature.relative_tolerance = v;
        }
        if let Some(v) = self.cutoff {
            c.quadrature.tail_cutoff = v;
        }
        if let Some(v) = self.threads {
            c.threads = v;
        }
        if let Some(v) = &self.out {
            c.output_dir = Some(v.clone());
        }
        c.binary |= self.binary;
        c.validate &= !self.no_validate;
        c.allow_large_grid |= self.allow_large_grid;
        if !self.xs.is_empty() {
            let xs = self.xs.iter().map(|s| parse_list(s)).collect::<Result<Vec<_>>>()?;
            let grid = c.grid.get_or_insert_with(GridConfig::default);
            grid.points.clear();
            grid.xs = xs;
        }
        // a relative custom-table path is resolved against the config file
        if let (Some(path), Some(m)) = (&self.config, &c.measure) {
            if self.measure.is_none() && m.starts_with("custom") {
                c.measure = Some(absolutize_table(m, path.parent().unwrap_or(Path::new("."))));
            }
        }
        Ok(c)
    }
}

fn absolutize_table(measure: &str, base: &Path) -> String {
    let Some((kind, rest)) = measure.split_once(':') else {
        return measure.to_string();
    };
    let items: Vec<String> = rest
        .split(',')
        .map(|item| match item.trim().split_once('=') {
            Some(("path", p)) if Path::new(p.trim()).is_relative() => format!("path={}", base.join(p.trim()).display()),
            _ => item.to_string(),
        })
        .collect();
    format!("{kind}:{}", items.join(","))
}

fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|_| CliError::config(format!("`{s}` is not a comma separated list of numbers"))))
        .collect()
}

fn load(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    let json_err = |source| CliError::Json { path: path.to_path_buf(), source };
    let mut value: serde_json::Value = serde_json::from_str(&text).map_err(json_err)?;
    // a report embeds the config it was produced from
    if value.get("command").is_some() && value.get("config_hash").is_some() {
        value = value["config"].take();
    }
    serde_json::from_value(value).map_err(json_err)
}

impl RunConfig {
    /// SHA-256 of the canonical JSON of everything that affects results.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.threads = 0;
        c.output_dir = None;
        let bytes = serde_json::to_vec(&c).expect("config serializes");
        Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn spec(&self) -> Result<QuadratureSpec> {
        let spec = self.quadrature.spec();
        spec.validate()?;
        Ok(spec)
    }

    pub fn model(&self) -> Result<HurstModel> {
        let h = self.hurst.ok_or_else(|| CliError::config("this command needs --hurst"))?;
        Ok(HurstModel::new(h)?)
    }

    pub fn measure(&self) -> Result<SpectralMeasure> {
        let m = self.measure.as_deref().ok_or_else(|| CliError::config("this command needs --measure"))?;
        parse_measure(m, None)
    }

    pub fn times_or(&self, default: &[f64]) -> Result<Vec<f64>> {
        let ts = self.times.clone().unwrap_or_else(|| default.to_vec());
        positive("t", &ts)?;
        Ok(ts)
    }

    pub fn radii_or(&self, default: &[f64]) -> Result<Vec<f64>> {
        let rs = self.radii.clone().unwrap_or_else(|| default.to_vec());
        if rs.is_empty() || rs.iter().any(|r| !(r.is_finite() && *r >= 0.0)) {
            return Err(CliError::config("radii must be a nonempty list of finite values >= 0"));
        }
        Ok(rs)
    }

    pub fn lambdas_or(&self, default: &[f64]) -> Result<Vec<f64>> {
        let ls = self.lambdas.clone().unwrap_or_else(|| default.to_vec());
        positive("lambda", &ls)?;
        Ok(ls)
    }

    pub fn b_h(&self) -> Result<f64> {
        if !(self.b_h.is_finite() && self.b_h > 0.0) {
            return Err(CliError::config(format!("b_H = {} must be positive", self.b_h)));
        }
        Ok(self.b_h)
    }

    /// The simulation grid: explicit points, or `times × xs` with the
    /// origin as the only point when no `xs` are given.
    pub fn grid(&self, d: usize) -> Result<SpaceTimeGrid> {
        let g = self.grid.clone().unwrap_or_default();
        let grid = if !g.points.is_empty() {
            let points = g
                .points
                .iter()
                .enumerate()
                .map(|(k, p)| GridPoint {
                    t: p.t,
                    x: p.x.clone(),
                    label: p.label.clone().unwrap_or_else(|| format!("p{k}")),
                })
                .collect();
            SpaceTimeGrid::new(d, points, self.allow_large_grid)?
        } else {
            let times = if g.times.is_empty() { self.times_or(&[1.0])? } else { g.times.clone() };
            let xs = if g.xs.is_empty() { vec![vec![0.0; d]] } else { g.xs.clone() };
            let points = times
                .iter()
                .flat_map(|&t| {
                    xs.iter().map(move |x| GridPoint {
                        t,
                        x: x.clone(),
                        label: format!("t={t};x={}", x.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")),
                    })
                })
                .collect();
            SpaceTimeGrid::new(d, points, self.allow_large_grid)?
        };
        Ok(grid)
    }
}

fn positive(name: &str, xs: &[f64]) -> Result<()> {
    if xs.is_empty() || xs.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(CliError::config(format!("{name} must be a nonempty list of finite positive values")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_the_document() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.json");
        std::fs::write(&path, r#"{"operator": "heat", "hurst": 0.6, "b_h": 3.0, "quadrature": {"node_count": 30}}"#).unwrap();
        let o = Overrides {
            config: Some(path),
            hurst: Some(0.7),
            ..Overrides::default()
        };
        let c = o.merge().unwrap();
        assert_eq!(c.operator, OpName::Heat);
        assert_eq!(c.hurst, Some(0.7));
        assert_eq!(c.b_h, 3.0);
        assert_eq!(c.quadrature.node_count, 30);
        assert_eq!(c.quadrature.tail_cutoff, QuadratureSpec::default().tail_cutoff);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.json");
        std::fs::write(&path, r#"{"hurts": 0.6}"#).unwrap();
        let o = Overrides {
            config: Some(path),
            ..Overrides::default()
        };
        assert!(matches!(o.merge(), Err(CliError::Json { .. })));
    }

    #[test]
    fn hash_ignores_threads_and_paths() {
        let a = RunConfig::default();
        let mut b = a.clone();
        b.threads = 4;
        b.output_dir = Some("/tmp/x".into());
        assert_eq!(a.hash(), b.hash());
        b.seed = Some(1);
        assert_ne!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 64);
    }

    #[test]
    fn hurst_outside_the_model_is_refused() {
        let c = RunConfig {
            hurst: Some(0.4),
            ..RunConfig::default()
        };
        let msg = c.model().unwrap_err().to_string();
        assert!(msg.contains("(1/2, 1)"), "{msg}");
    }

    #[test]
    fn grids() {
        let mut c = RunConfig {
            times: Some(vec![0.5, 1.0]),
            ..RunConfig::default()
        };
        assert_eq!(c.grid(2).unwrap().len(), 2);
        c.grid = Some(GridConfig {
            xs: vec![vec![0.0], vec![1.0], vec![2.0]],
            ..GridConfig::default()
        });
        assert_eq!(c.grid(1).unwrap().len(), 6);
        assert!(c.grid(2).is_err());
    }
}
