//! Exact Gaussian sampling of the solution on a finite space-time grid.
//!
//! The covariance of `u(t, x)` and `u(s, y)` is
//!
//! ```text
//! C = ∫ Φ_d(r |x - y|) Cross(t, s, r) μ_rad(dr)
//! ```
//!
//! with `Φ_d` the spherical average of the plane wave. It is assembled on
//! one radial grid shared by all entries, factorized by Cholesky with a
//! jitter ladder, and sampled with a counter-based generator so every
//! sample depends only on `(seed, index)`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{check_domain, Error, Result};
use crate::frac_time::osc_width;
use crate::hurst::HurstModel;
use crate::norm::variance::{kernel_decay, require_existence, variance_with};
use crate::norm::{pairwise_sum, NormEngine};
use crate::quadrature::{tridiagonal_eigen, QuadratureSpec};
use crate::special::isotropic_cos;
use crate::spectral::{radial_grid, RadialGrid, RadialOptions, SpectralMeasure};
use crate::Operator;

/// Grids larger than this need an explicit override.
pub const GRID_SOFT_CAP: usize = 2000;

/// Relative jitter rungs, in units of `trace(C)/n`.
pub const DEFAULT_JITTER_LADDER: [f64; 4] = [0.0, 1e-12, 1e-10, 1e-8];

/// Name of the sample generator, recorded with every batch.
pub const GENERATOR: &str = "chacha8 stream per sample, ziggurat normals";

#[derive(Debug, Clone, PartialEq)]
pub struct GridPoint {
    pub t: f64,
    pub x: Vec<f64>,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpaceTimeGrid {
    d: usize,
    points: Vec<GridPoint>,
}

impl SpaceTimeGrid {
    /// Validates the points; more than [`GRID_SOFT_CAP`] of them need
    /// `allow_large`.
    pub fn new(d: usize, points: Vec<GridPoint>, allow_large: bool) -> Result<Self> {
        if d == 0 {
            return Err(Error::Config("spatial dimension must be at least 1".into()));
        }
        if points.is_empty() {
            return Err(Error::Config("the grid has no points".into()));
        }
        if points.len() > GRID_SOFT_CAP && !allow_large {
            return Err(Error::Config(format!(
                "the grid has {} points, above the soft cap of {GRID_SOFT_CAP}; pass the override to proceed",
                points.len()
            )));
        }
        for (i, p) in points.iter().enumerate() {
            check_domain("t", p.t, p.t > 0.0 && p.t.is_finite(), "(0, inf)")?;
            if p.x.len() != d || p.x.iter().any(|v| !v.is_finite()) {
                return Err(Error::Config(format!("point {i} ({}) does not have {d} finite coordinates", p.label)));
            }
            if points[..i].iter().any(|q| q.t == p.t && q.x == p.x) {
                return Err(Error::Config(format!("point {i} ({}) repeats an earlier point", p.label)));
            }
        }
        Ok(SpaceTimeGrid { d, points })
    }

    /// The product of `times` and `xs`, labelled `t=…;x=…`.
    pub fn product(d: usize, times: &[f64], xs: &[Vec<f64>]) -> Result<Self> {
        let mut points = Vec::with_capacity(times.len() * xs.len());
        for &t in times {
            for x in xs {
                let coords: Vec<String> = x.iter().map(|v| format!("{v}")).collect();
                points.push(GridPoint {
                    t,
                    x: x.clone(),
                    label: format!("t={t};x={}", coords.join(",")),
                });
            }
        }
        SpaceTimeGrid::new(d, points, false)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn points(&self) -> &[GridPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// A dense symmetric matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    pub n: usize,
    pub data: Vec<f64>,
    /// Per-entry quadrature error estimate (difference to a half-order
    /// rule on the same panels), row-major.
    pub error: Vec<f64>,
    pub op: Operator,
    pub h: f64,
    pub measure: String,
}

impl CovarianceMatrix {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::Config("covariance must be a non-empty square matrix".into()));
        }
        Ok(CovarianceMatrix {
            n,
            data: rows.concat(),
            error: vec![0.0; n * n],
            op: Operator::Wave,
            h: f64::NAN,
            measure: String::from("explicit"),
        })
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn set_sym(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
        self.data[j * self.n + i] = v;
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }
}

/// Everything needed to evaluate single covariance entries; lets callers
/// spread the entries over threads.
#[derive(Debug)]
pub struct CovariancePlan {
    op: Operator,
    h: f64,
    measure: String,
    d: usize,
    times: Vec<f64>,
    /// Index into `times` per grid point.
    time_of: Vec<usize>,
    xs: Vec<Vec<f64>>,
    full: Nodes,
    half: Nodes,
}

#[derive(Debug)]
struct Nodes {
    grid: RadialGrid,
    /// `Cross(times[a], times[b], r_k)` for `a ≤ b`, keyed by `(a, b)`.
    cross: BTreeMap<(usize, usize), Vec<f64>>,
}

impl Nodes {
    fn build(engine: &NormEngine, op: Operator, mu: &SpectralMeasure, opts: &RadialOptions, spec: &QuadratureSpec, times: &[f64]) -> Result<Self> {
        let grid = radial_grid(mu, opts, spec)?;
        let mut cross = BTreeMap::new();
        for a in 0..times.len() {
            for b in a..times.len() {
                let vals = grid
                    .nodes
                    .iter()
                    .map(|&r| engine.cross_time(op, times[a], times[b], r))
                    .collect::<Result<Vec<_>>>()?;
                cross.insert((a, b), vals);
            }
        }
        Ok(Nodes { grid, cross })
    }

    fn entry(&self, d: usize, a: usize, b: usize, z: f64) -> f64 {
        let key = if a <= b { (a, b) } else { (b, a) };
        let cross = &self.cross[&key];
        let mut terms = Vec::with_capacity(cross.len());
        for (k, (&r, &w)) in self.grid.nodes.iter().zip(&self.grid.weights).enumerate() {
            let phase = if z == 0.0 { 1.0 } else { isotropic_cos(d, r * z) };
            if Some(k) == self.grid.tail_index {
                // beyond the cutoff only the non-oscillating diagonal survives
                if z == 0.0 && a == b {
                    terms.push(w * cross[k]);
                }
            } else {
                terms.push(w * phase * cross[k]);
            }
        }
        pairwise_sum(&terms)
    }
}

impl CovariancePlan {
    pub fn new(grid: &SpaceTimeGrid, mu: &SpectralMeasure, model: &HurstModel, op: Operator, spec: &QuadratureSpec) -> Result<Self> {
        if grid.dim() != mu.dim() {
            return Err(Error::Config(format!(
                "grid dimension {} does not match the measure dimension {}",
                grid.dim(),
                mu.dim()
            )));
        }
        require_existence(op, mu, model, spec)?;
        let pts = grid.points();
        let distinct_x = pts.iter().any(|p| p.x != pts[0].x);
        if distinct_x && !mu.is_isotropic() {
            return Err(Error::Unsupported(format!(
                "covariances between distinct points need an isotropic measure; {} is not",
                mu.describe()
            )));
        }
        let mut times: Vec<f64> = pts.iter().map(|p| p.t).collect();
        times.sort_by(|a, b| a.partial_cmp(b).unwrap());
        times.dedup();
        let time_of = pts.iter().map(|p| times.iter().position(|&t| t == p.t).unwrap()).collect();

        let t_max = times[times.len() - 1];
        let z_max = pts
            .iter()
            .flat_map(|p| pts.iter().map(move |q| dist(&p.x, &q.x)))
            .fold(0.0f64, f64::max);
        let mut width = osc_width(z_max, spec);
        if op == Operator::Wave {
            width = width.min(osc_width(2.0 * t_max, spec));
        }
        let opts = RadialOptions {
            decay: kernel_decay(op, model),
            max_width: Some(width),
            breakpoints: vec![1.0],
            ..RadialOptions::default()
        };
        let engine = NormEngine::new(model, spec)?;
        let half_spec = QuadratureSpec {
            node_count: (spec.node_count / 2).max(4),
            ..*spec
        };
        let full = Nodes::build(&engine, op, mu, &opts, spec, &times)?;
        let half = Nodes::build(&engine, op, mu, &opts, &half_spec, &times)?;
        Ok(CovariancePlan {
            op,
            h: model.h(),
            measure: mu.describe(),
            d: grid.dim(),
            times,
            time_of,
            xs: pts.iter().map(|p| p.x.clone()).collect(),
            full,
            half,
        })
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// `(value, error estimate)` of entry `(i, j)`.
    pub fn entry(&self, i: usize, j: usize) -> (f64, f64) {
        let z = dist(&self.xs[i], &self.xs[j]);
        let (a, b) = (self.time_of[i], self.time_of[j]);
        let v = self.full.entry(self.d, a, b, z);
        let coarse = self.half.entry(self.d, a, b, z);
        (v, (v - coarse).abs())
    }

    /// Distinct times of the grid, ascending.
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    /// Assembles from precomputed `(i, j, value, error)` entries with
    /// `j ≤ i`, in any order.
    pub fn finish<I: IntoIterator<Item = (usize, usize, f64, f64)>>(&self, entries: I) -> CovarianceMatrix {
        let n = self.len();
        let mut c = CovarianceMatrix {
            n,
            data: vec![0.0; n * n],
            error: vec![0.0; n * n],
            op: self.op,
            h: self.h,
            measure: self.measure.clone(),
        };
        for (i, j, v, e) in entries {
            c.set_sym(i, j, v);
            c.error[i * n + j] = e;
            c.error[j * n + i] = e;
        }
        c
    }
}

fn dist(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
}

/// Sequential assembly; the command-line front-end spreads
/// [`CovariancePlan::entry`] over threads instead.
pub fn assemble_covariance(
    grid: &SpaceTimeGrid,
    mu: &SpectralMeasure,
    model: &HurstModel,
    op: Operator,
    spec: &QuadratureSpec,
) -> Result<CovarianceMatrix> {
    let plan = CovariancePlan::new(grid, mu, model, op, spec)?;
    let n = plan.len();
    let mut entries = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in 0..=i {
            let (v, e) = plan.entry(i, j);
            entries.push((i, j, v, e));
        }
    }
    Ok(plan.finish(entries))
}

/// Lower Cholesky factor of `C + δI`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Factor {
    pub n: usize,
    pub l: Vec<f64>,
    /// The absolute jitter `δ` that was needed.
    pub jitter: f64,
}

impl Factor {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.l[i * self.n + j]
    }

    /// `L z`.
    pub fn apply(&self, z: &[f64], out: &mut [f64]) {
        for i in 0..self.n {
            let row = &self.l[i * self.n..i * self.n + i + 1];
            out[i] = row.iter().zip(z).map(|(a, b)| a * b).sum();
        }
    }
}

/// `Ok(L)` or `Err(index of the failing pivot, its value)`.
fn cholesky(a: &[f64], n: usize, shift: f64) -> core::result::Result<Vec<f64>, (usize, f64)> {
    let mut l = vec![0.0; n * n];
    for j in 0..n {
        let mut d = a[j * n + j] + shift;
        for k in 0..j {
            d -= l[j * n + k] * l[j * n + k];
        }
        if !(d > 0.0) {
            return Err((j, d));
        }
        let dj = d.sqrt();
        l[j * n + j] = dj;
        for i in j + 1..n {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            l[i * n + j] = s / dj;
        }
    }
    Ok(l)
}

/// Tries `C + δI` for `δ = rung · trace(C)/n` along the ladder.
pub fn factorize_spd(c: &CovarianceMatrix, ladder: &[f64]) -> Result<Factor> {
    if !c.is_symmetric() {
        return Err(Error::Config("covariance matrix is not symmetric".into()));
    }
    let n = c.n;
    let scale = c.trace() / n as f64;
    let mut worst = 0.0;
    let mut last = 0.0;
    for &rung in ladder {
        let jitter = rung * scale;
        last = jitter;
        match cholesky(&c.data, n, jitter) {
            Ok(l) => return Ok(Factor { n, l, jitter }),
            Err((_, p)) => worst = p,
        }
    }
    Err(Error::NotPsd {
        pivot: worst,
        min_eigenvalue: min_eigenvalue(&c.data, n),
        jitter: last,
    })
}

/// Smallest eigenvalue of a symmetric matrix, by Householder reduction and
/// implicit QL. Used for diagnostics only.
pub fn min_eigenvalue(a: &[f64], n: usize) -> f64 {
    let mut m = a.to_vec();
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n];
    for k in 0..n.saturating_sub(2) {
        let alpha_sq: f64 = (k + 1..n).map(|i| m[i * n + k] * m[i * n + k]).sum();
        let x0 = m[(k + 1) * n + k];
        let alpha = if x0 > 0.0 { -alpha_sq.sqrt() } else { alpha_sq.sqrt() };
        let mut v = vec![0.0; n];
        v[k + 1] = x0 - alpha;
        for i in k + 2..n {
            v[i] = m[i * n + k];
        }
        let vnorm_sq: f64 = v.iter().map(|x| x * x).sum();
        if vnorm_sq == 0.0 {
            continue;
        }
        // M ← (I - 2vvᵀ/|v|²) M (I - 2vvᵀ/|v|²)
        let p: Vec<f64> = (0..n).map(|i| 2.0 * (0..n).map(|j| m[i * n + j] * v[j]).sum::<f64>() / vnorm_sq).collect();
        let kk: f64 = (0..n).map(|i| v[i] * p[i]).sum::<f64>() / vnorm_sq;
        let q: Vec<f64> = (0..n).map(|i| p[i] - kk * v[i]).collect();
        for i in 0..n {
            for j in 0..n {
                m[i * n + j] -= v[i] * q[j] + q[i] * v[j];
            }
        }
    }
    for i in 0..n {
        diag[i] = m[i * n + i];
        if i + 1 < n {
            off[i] = m[(i + 1) * n + i];
        }
    }
    tridiagonal_eigen(&mut diag, &mut off);
    diag.into_iter().fold(f64::INFINITY, f64::min)
}

/// `n_samples` draws of `L z`, row-major (one row per sample).
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    pub n_samples: usize,
    pub dim: usize,
    pub values: Vec<f64>,
    pub seed: u64,
    pub generator: &'static str,
}

impl SampleBatch {
    pub fn sample(&self, k: usize) -> &[f64] {
        &self.values[k * self.dim..(k + 1) * self.dim]
    }

    /// `(1/n) Σ_k x_i x_j`; the field is centred, so no mean is removed.
    pub fn second_moment(&self, i: usize, j: usize) -> f64 {
        let terms: Vec<f64> = (0..self.n_samples).map(|k| self.values[k * self.dim + i] * self.values[k * self.dim + j]).collect();
        pairwise_sum(&terms) / self.n_samples as f64
    }

    pub fn mean(&self, i: usize) -> f64 {
        let terms: Vec<f64> = (0..self.n_samples).map(|k| self.values[k * self.dim + i]).collect();
        pairwise_sum(&terms) / self.n_samples as f64
    }
}

/// Sample number `index` of the batch keyed by `seed`, written to `out`.
pub fn sample_one(factor: &Factor, seed: u64, index: u64, out: &mut [f64]) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let z: Vec<f64> = (0..factor.n).map(|_| StandardNormal.sample(&mut rng)).collect();
    factor.apply(&z, out);
}

pub fn sample_batch(factor: &Factor, n: usize, seed: u64) -> Result<SampleBatch> {
    check_domain("n", n as f64, n >= 1, "{1, 2, ...}")?;
    let dim = factor.n;
    let mut values = vec![0.0; n * dim];
    for (k, row) in values.chunks_mut(dim).enumerate() {
        sample_one(factor, seed, k as u64, row);
    }
    Ok(SampleBatch {
        n_samples: n,
        dim,
        values,
        seed,
        generator: GENERATOR,
    })
}

/// One compared quantity of [`validate_batch`].
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub i: usize,
    pub j: usize,
    pub expected: f64,
    pub observed: f64,
    /// Half-width of the 3σ band.
    pub band: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub n_samples: usize,
    pub seed: u64,
    pub jitter: f64,
    /// Diagonal checks against the variance integral.
    pub variances: Vec<Check>,
    /// Off-diagonal checks against the assembled covariance.
    pub covariances: Vec<Check>,
    /// Mean checks with band `4 √(C_ii / n)`.
    pub means: Vec<Check>,
    pub holds: bool,
}

impl ValidationReport {
    pub fn offending(&self) -> impl Iterator<Item = &Check> {
        self.variances.iter().chain(&self.covariances).chain(&self.means).filter(|c| !c.holds)
    }
}

/// Compares a batch with the covariance it should have: second moments
/// inside `3 √((C_ii C_jj + C_ij²)/n)` (which is `3 v √(2/n)` on the
/// diagonal), with the diagonal taken from `variances`.
pub fn validate_batch(batch: &SampleBatch, expected: &CovarianceMatrix, variances: &[f64], jitter: f64) -> ValidationReport {
    let n = batch.n_samples as f64;
    let mut report = ValidationReport {
        n_samples: batch.n_samples,
        seed: batch.seed,
        jitter,
        variances: Vec::new(),
        covariances: Vec::new(),
        means: Vec::new(),
        holds: true,
    };
    let mk = |i, j, expected: f64, observed: f64, band: f64| Check {
        i,
        j,
        expected,
        observed,
        band,
        holds: (observed - expected).abs() <= band,
    };
    for i in 0..expected.n {
        let v = variances[i];
        report.variances.push(mk(i, i, v, batch.second_moment(i, i), 3.0 * v * (2.0 / n).sqrt()));
        report.means.push(mk(i, i, 0.0, batch.mean(i), 4.0 * (v / n).sqrt()));
        for j in 0..i {
            let c = expected.get(i, j);
            let band = 3.0 * ((expected.get(i, i) * expected.get(j, j) + c * c) / n).sqrt();
            report.covariances.push(mk(i, j, c, batch.second_moment(i, j), band));
        }
    }
    let holds = report.offending().next().is_none();
    report.holds = holds;
    report
}

/// End-to-end check: assemble, factorize, sample and compare.
pub fn mc_validate(
    grid: &SpaceTimeGrid,
    mu: &SpectralMeasure,
    model: &HurstModel,
    op: Operator,
    n: usize,
    seed: u64,
    spec: &QuadratureSpec,
) -> Result<ValidationReport> {
    let cov = assemble_covariance(grid, mu, model, op, spec)?;
    let factor = factorize_spd(&cov, &DEFAULT_JITTER_LADDER)?;
    let batch = sample_batch(&factor, n, seed)?;
    let variances = point_variances(grid, mu, model, op, spec)?;
    Ok(validate_batch(&batch, &cov, &variances, factor.jitter))
}

/// `variance(op, t_i, μ)` for every grid point.
pub fn point_variances(grid: &SpaceTimeGrid, mu: &SpectralMeasure, model: &HurstModel, op: Operator, spec: &QuadratureSpec) -> Result<Vec<f64>> {
    let engine = NormEngine::new(model, spec)?;
    let mut cache: BTreeMap<u64, f64> = BTreeMap::new();
    grid.points()
        .iter()
        .map(|p| {
            if let Some(&v) = cache.get(&p.t.to_bits()) {
                return Ok(v);
            }
            let v = variance_with(&engine, op, p.t, mu)?.value;
            cache.insert(p.t.to_bits(), v);
            Ok(v)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matrix(rows: &[&[f64]]) -> CovarianceMatrix {
        CovarianceMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn point(t: f64, x: f64) -> GridPoint {
        GridPoint { t, x: vec![x], label: format!("{t},{x}") }
    }

    #[test]
    fn grid_validation() {
        assert!(SpaceTimeGrid::new(1, vec![], false).is_err());
        assert!(SpaceTimeGrid::new(1, vec![point(0.0, 0.0)], false).is_err());
        assert!(SpaceTimeGrid::new(1, vec![point(1.0, 0.0), point(1.0, 0.0)], false).is_err());
        assert!(SpaceTimeGrid::new(2, vec![point(1.0, 0.0)], false).is_err());
        let many: Vec<GridPoint> = (0..GRID_SOFT_CAP + 1).map(|k| point(1.0, k as f64)).collect();
        assert!(SpaceTimeGrid::new(1, many.clone(), false).is_err());
        assert_eq!(SpaceTimeGrid::new(1, many, true).unwrap().len(), GRID_SOFT_CAP + 1);
        let g = SpaceTimeGrid::product(1, &[0.5, 1.0], &[vec![0.0], vec![2.0]]).unwrap();
        assert_eq!(g.len(), 4);
        assert_eq!(g.points()[3].label, "t=1;x=2");
    }

    #[test]
    fn identity_and_scalar_factors() {
        let id = matrix(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]);
        let f = factorize_spd(&id, &DEFAULT_JITTER_LADDER).unwrap();
        assert_eq!(f.jitter, 0.0);
        assert_eq!(f.l, id.data);
        let f = factorize_spd(&matrix(&[&[2.5]]), &DEFAULT_JITTER_LADDER).unwrap();
        assert_eq!(f.l, vec![2.5f64.sqrt()]);
    }

    #[test]
    fn rank_one_needs_at_most_the_first_rung() {
        let a = [1.0, -2.0, 0.5, 3.0];
        let rows: Vec<Vec<f64>> = a.iter().map(|x| a.iter().map(|y| x * y).collect()).collect();
        let c = CovarianceMatrix::from_rows(&rows).unwrap();
        let f = factorize_spd(&c, &DEFAULT_JITTER_LADDER).unwrap();
        assert!(f.jitter <= 1e-12 * c.trace() / 4.0);
        for i in 0..4 {
            for j in 0..4 {
                let llt: f64 = (0..4).map(|k| f.get(i, k) * f.get(j, k)).sum();
                assert!((llt - c.get(i, j)).abs() < 1e-6 * c.trace(), "{i} {j}");
            }
        }
    }

    #[test]
    fn indefinite_matrix_reports_its_eigenvalue() {
        // eigenvalues 3 and -1
        let c = matrix(&[&[1.0, 2.0], &[2.0, 1.0]]);
        match factorize_spd(&c, &DEFAULT_JITTER_LADDER) {
            Err(Error::NotPsd { min_eigenvalue, .. }) => assert!((min_eigenvalue + 1.0).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
        assert!(factorize_spd(&matrix(&[&[1.0, 2.0], &[0.0, 1.0]]), &DEFAULT_JITTER_LADDER).is_err());
    }

    #[test]
    fn min_eigenvalue_of_a_known_spectrum() {
        // tridiagonal (-1, 2, -1) of size n: 2 - 2 cos(kπ/(n+1))
        let n = 7;
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            a[i * n + i] = 2.0;
            if i + 1 < n {
                a[i * n + i + 1] = -1.0;
                a[(i + 1) * n + i] = -1.0;
            }
        }
        // a dense similar matrix: conjugate by a Householder reflection
        let v: Vec<f64> = (0..n).map(|k| 1.0 + k as f64).collect();
        let vv: f64 = v.iter().map(|x| x * x).sum();
        let q: Vec<f64> = (0..n * n)
            .map(|ij| {
                let (i, j) = (ij / n, ij % n);
                f64::from(u8::from(i == j)) - 2.0 * v[i] * v[j] / vv
            })
            .collect();
        let mut qa = vec![0.0; n * n];
        let mut qaq = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                qa[i * n + j] = (0..n).map(|k| q[i * n + k] * a[k * n + j]).sum();
            }
        }
        for i in 0..n {
            for j in 0..n {
                qaq[i * n + j] = (0..n).map(|k| qa[i * n + k] * q[k * n + j]).sum();
            }
        }
        let expected = 2.0 - 2.0 * (core::f64::consts::PI / (n as f64 + 1.0)).cos();
        assert!((min_eigenvalue(&qaq, n) - expected).abs() < 1e-12);
        assert!((min_eigenvalue(&[4.0], 1) - 4.0).abs() < 1e-15);
    }

    #[test]
    fn batches_are_reproducible() {
        let c = matrix(&[&[2.0, 0.5], &[0.5, 1.0]]);
        let f = factorize_spd(&c, &DEFAULT_JITTER_LADDER).unwrap();
        let a = sample_batch(&f, 100, 42).unwrap();
        let b = sample_batch(&f, 100, 42).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.values, sample_batch(&f, 100, 43).unwrap().values);
        // each sample depends on its index only
        let mut out = [0.0; 2];
        sample_one(&f, 42, 57, &mut out);
        assert_eq!(out, a.sample(57));
        assert!(sample_batch(&f, 0, 1).is_err());
    }

    #[test]
    fn scalar_variance_and_mean_bands() {
        let v = 3.7;
        let f = factorize_spd(&matrix(&[&[v]]), &DEFAULT_JITTER_LADDER).unwrap();
        let n = 100_000;
        let batch = sample_batch(&f, n, 7).unwrap();
        let nf = n as f64;
        assert!((batch.second_moment(0, 0) - v).abs() < 3.0 * v * (2.0 / nf).sqrt());
        assert!(batch.mean(0).abs() < 4.0 * (v / nf).sqrt());
    }

    #[test]
    fn corrupted_covariance_fails_validation() {
        let c = matrix(&[&[1.0, 0.6], &[0.6, 1.0]]);
        let f = factorize_spd(&c, &DEFAULT_JITTER_LADDER).unwrap();
        let batch = sample_batch(&f, 50_000, 3).unwrap();
        assert!(validate_batch(&batch, &c, &[1.0, 1.0], 0.0).holds);
        let bad = matrix(&[&[1.0, 0.9], &[0.9, 1.0]]);
        let report = validate_batch(&batch, &bad, &[1.0, 1.0], 0.0);
        assert!(!report.holds);
        assert_eq!(report.offending().count(), 1);
    }
}
