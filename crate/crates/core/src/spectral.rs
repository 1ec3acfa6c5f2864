//! Spatial spectral measures `μ` and the integrability conditions that decide
//! temperedness, the Dalang condition and existence of the fractional wave
//! and heat solutions.
//!
//! Normalisation constants of the Riesz and Bessel kernels are set to 1, as
//! is the Lebesgue density of the white-in-space case.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{check_domain, Error, Result};
use crate::green::sphere_area;
use crate::hurst::HurstModel;
use crate::quadrature::{graded_panels, with_breakpoints, QuadratureSpec, Rule};
use crate::special::gamma;

/// A radial density sampled on a table, `μ(dξ) = m(|ξ|) dξ`.
///
/// Between nodes `m` is interpolated linearly in log-log coordinates. Beyond
/// the last node it continues as the power law fitted to the last three
/// nodes, and below the first node as the power law through the first two.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialTable {
    d: usize,
    r: Vec<f64>,
    m: Vec<f64>,
    /// `m(r) ~ r^{-origin_exponent}` as `r → 0`.
    origin_exponent: f64,
    /// `m(r) ~ r^{-tail_exponent}` as `r → ∞`; infinite when the table ends
    /// in zeros.
    tail_exponent: f64,
}

impl RadialTable {
    pub fn new(d: usize, r: Vec<f64>, m: Vec<f64>) -> Result<Self> {
        if d == 0 {
            return Err(Error::Config("dimension must be at least 1".into()));
        }
        if r.len() != m.len() {
            return Err(Error::Config(format!("radial table has {} radii but {} densities", r.len(), m.len())));
        }
        if r.len() < 3 {
            return Err(Error::InsufficientData(format!(
                "radial table needs at least 3 rows to extrapolate its tail, got {}",
                r.len()
            )));
        }
        for (i, (&ri, &mi)) in r.iter().zip(&m).enumerate() {
            if !(ri > 0.0 && ri.is_finite()) || (i > 0 && ri <= r[i - 1]) {
                return Err(Error::Config(format!("radial table: radii must be positive and increasing (row {i})")));
            }
            if !(mi >= 0.0 && mi.is_finite()) {
                return Err(Error::Config(format!("radial table: density must be nonnegative (row {i})")));
            }
        }
        let origin_exponent = if m[0] > 0.0 && m[1] > 0.0 {
            -(m[1] / m[0]).ln() / (r[1] / r[0]).ln()
        } else {
            0.0
        };
        let n = r.len();
        let tail = &m[n - 3..];
        let tail_exponent = if tail.iter().all(|&v| v > 0.0) {
            // least-squares slope of log m against log r
            let xs: Vec<f64> = r[n - 3..].iter().map(|v| v.ln()).collect();
            let ys: Vec<f64> = tail.iter().map(|v| v.ln()).collect();
            let xm = xs.iter().sum::<f64>() / 3.0;
            let ym = ys.iter().sum::<f64>() / 3.0;
            let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xm) * (y - ym)).sum();
            let sxx: f64 = xs.iter().map(|x| (x - xm) * (x - xm)).sum();
            -sxy / sxx
        } else {
            f64::INFINITY
        };
        Ok(RadialTable {
            d,
            r,
            m,
            origin_exponent,
            tail_exponent,
        })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn radii(&self) -> &[f64] {
        &self.r
    }

    pub fn origin_exponent(&self) -> f64 {
        self.origin_exponent
    }

    pub fn tail_exponent(&self) -> f64 {
        self.tail_exponent
    }

    pub fn density(&self, x: f64) -> f64 {
        let n = self.r.len();
        if x <= self.r[0] {
            return self.m[0] * (x / self.r[0]).powf(-self.origin_exponent);
        }
        if x >= self.r[n - 1] {
            if self.tail_exponent.is_infinite() {
                return if x == self.r[n - 1] { self.m[n - 1] } else { 0.0 };
            }
            return self.m[n - 1] * (x / self.r[n - 1]).powf(-self.tail_exponent);
        }
        let i = self.r.partition_point(|&v| v <= x) - 1;
        let (r0, r1, m0, m1) = (self.r[i], self.r[i + 1], self.m[i], self.m[i + 1]);
        if m0 > 0.0 && m1 > 0.0 {
            let s = (x / r0).ln() / (r1 / r0).ln();
            (m0.ln() + s * (m1 / m0).ln()).exp()
        } else {
            m0 + (m1 - m0) * (x - r0) / (r1 - r0)
        }
    }
}

/// The spectral measure of the spatial covariance.
#[derive(Debug, Clone, PartialEq)]
pub enum SpectralMeasure {
    /// `|ξ|^{-α} dξ`, `0 < α < d`.
    Riesz { alpha: f64, d: usize },
    /// `(1 + |ξ|²)^{-α/2} dξ`, `α > 0`.
    Bessel { alpha: f64, d: usize },
    /// `∏ c_{H_i} |ξ_i|^{1-2H_i} dξ`, one Hurst index per coordinate.
    FbmField { hs: Vec<f64> },
    /// Lebesgue measure.
    WhiteSpace { d: usize },
    CustomRadial(RadialTable),
}

impl SpectralMeasure {
    pub fn riesz(alpha: f64, d: usize) -> Result<Self> {
        check_dim(d)?;
        check_domain("alpha", alpha, alpha > 0.0 && alpha < d as f64, "(0, d) for a Riesz kernel")?;
        Ok(SpectralMeasure::Riesz { alpha, d })
    }

    pub fn bessel(alpha: f64, d: usize) -> Result<Self> {
        check_dim(d)?;
        check_domain("alpha", alpha, alpha > 0.0, "(0, inf) for a Bessel kernel")?;
        Ok(SpectralMeasure::Bessel { alpha, d })
    }

    pub fn fbm_field(hs: Vec<f64>) -> Result<Self> {
        if hs.is_empty() {
            return Err(Error::Config("fractional field needs at least one Hurst index".into()));
        }
        for &h in &hs {
            check_domain("H_i", h, h > 0.5 && h < 1.0, "the open interval (1/2, 1)")?;
        }
        Ok(SpectralMeasure::FbmField { hs })
    }

    pub fn white(d: usize) -> Result<Self> {
        check_dim(d)?;
        Ok(SpectralMeasure::WhiteSpace { d })
    }

    pub fn custom(table: RadialTable) -> Self {
        SpectralMeasure::CustomRadial(table)
    }

    pub fn dim(&self) -> usize {
        match self {
            SpectralMeasure::Riesz { d, .. } | SpectralMeasure::Bessel { d, .. } | SpectralMeasure::WhiteSpace { d } => *d,
            SpectralMeasure::FbmField { hs } => hs.len(),
            SpectralMeasure::CustomRadial(t) => t.d,
        }
    }

    pub fn is_isotropic(&self) -> bool {
        match self {
            SpectralMeasure::FbmField { hs } => hs.len() == 1,
            _ => true,
        }
    }

    /// Decay exponent `a` of the density at infinity, `dμ/dξ ~ |ξ|^{-a}`.
    pub fn tail_exponent(&self) -> f64 {
        match self {
            SpectralMeasure::Riesz { alpha, .. } | SpectralMeasure::Bessel { alpha, .. } => *alpha,
            SpectralMeasure::FbmField { hs } => hs.iter().map(|h| 2.0 * h - 1.0).sum(),
            SpectralMeasure::WhiteSpace { .. } => 0.0,
            SpectralMeasure::CustomRadial(t) => t.tail_exponent,
        }
    }

    /// Blow-up exponent of the density at the origin.
    pub fn origin_exponent(&self) -> f64 {
        match self {
            SpectralMeasure::Riesz { alpha, .. } => *alpha,
            SpectralMeasure::FbmField { .. } => self.tail_exponent(),
            SpectralMeasure::Bessel { .. } | SpectralMeasure::WhiteSpace { .. } => 0.0,
            SpectralMeasure::CustomRadial(t) => t.origin_exponent,
        }
    }

    /// `dμ/dξ` at a point of `R^d`.
    pub fn density(&self, xi: &[f64]) -> f64 {
        match self {
            SpectralMeasure::FbmField { hs } => hs
                .iter()
                .zip(xi)
                .map(|(&h, &x)| HurstModel::new(h).map(|m| m.c_h).unwrap_or(f64::NAN) * x.abs().powf(1.0 - 2.0 * h))
                .product(),
            _ => {
                let r = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
                self.radial_density(r).unwrap_or(f64::NAN)
            }
        }
    }

    /// `m(r)` with `μ(dξ) = m(|ξ|) dξ`, for isotropic measures.
    pub fn radial_density(&self, r: f64) -> Option<f64> {
        match self {
            SpectralMeasure::Riesz { alpha, .. } => Some(r.powf(-alpha)),
            SpectralMeasure::Bessel { alpha, .. } => Some((1.0 + r * r).powf(-alpha / 2.0)),
            SpectralMeasure::WhiteSpace { .. } => Some(1.0),
            SpectralMeasure::CustomRadial(t) => Some(t.density(r)),
            SpectralMeasure::FbmField { hs } if hs.len() == 1 => {
                let h = hs[0];
                Some(HurstModel::new(h).ok()?.c_h * r.powf(1.0 - 2.0 * h))
            }
            SpectralMeasure::FbmField { .. } => None,
        }
    }

    /// Polar form `μ(dξ) = r^{d-1} ρ(r) dr dθ` integrated over angles:
    /// returns `Ω` and the radial factor so that
    /// `∫ g(|ξ|) μ(dξ) = Ω ∫_0^∞ g(r) ρ(r) r^{d-1} dr`.
    ///
    /// For the product measure the density is homogeneous of degree
    /// `-Σ(2H_i - 1)`, so `Ω = ∏ c_{H_i} · 2 ∏ Γ(1 - H_i) / Γ(Σ(1 - H_i))`.
    pub(crate) fn polar(&self) -> (f64, RadialFactor<'_>) {
        match self {
            SpectralMeasure::FbmField { hs } => {
                let mut num = 2.0;
                let mut sum = 0.0;
                for &h in hs {
                    let c = HurstModel::new(h).map(|m| m.c_h).unwrap_or(f64::NAN);
                    num *= c * gamma(1.0 - h);
                    sum += 1.0 - h;
                }
                (num / gamma(sum), RadialFactor::Power(self.tail_exponent()))
            }
            SpectralMeasure::Riesz { alpha, d } => (sphere_area(*d), RadialFactor::Power(*alpha)),
            SpectralMeasure::Bessel { alpha, d } => (sphere_area(*d), RadialFactor::Bessel(*alpha)),
            SpectralMeasure::WhiteSpace { d } => (sphere_area(*d), RadialFactor::Power(0.0)),
            SpectralMeasure::CustomRadial(t) => (sphere_area(t.d), RadialFactor::Table(t)),
        }
    }

    pub fn describe(&self) -> alloc::string::String {
        match self {
            SpectralMeasure::Riesz { alpha, d } => format!("riesz(alpha={alpha}, d={d})"),
            SpectralMeasure::Bessel { alpha, d } => format!("bessel(alpha={alpha}, d={d})"),
            SpectralMeasure::FbmField { hs } => format!("fbm(h={hs:?})"),
            SpectralMeasure::WhiteSpace { d } => format!("white(d={d})"),
            SpectralMeasure::CustomRadial(t) => format!("custom(d={}, rows={})", t.d, t.r.len()),
        }
    }
}

fn check_dim(d: usize) -> Result<()> {
    if d == 0 {
        Err(Error::Config("dimension must be at least 1".into()))
    } else {
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) enum RadialFactor<'a> {
    Power(f64),
    Bessel(f64),
    Table(&'a RadialTable),
}

impl RadialFactor<'_> {
    fn eval(&self, r: f64) -> f64 {
        match *self {
            RadialFactor::Power(a) => r.powf(-a),
            RadialFactor::Bessel(a) => (1.0 + r * r).powf(-a / 2.0),
            RadialFactor::Table(t) => t.density(r),
        }
    }
}

// ---------------------------------------------------------------------------
// Radial quadrature

/// Quadrature nodes for `∫ g(|ξ|) μ(dξ)` on `[0, cutoff]` plus a power-law
/// tail node at the cutoff.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    pub nodes: Vec<f64>,
    /// Weights include the measure, the Jacobian `r^{d-1}` and the angular
    /// constant.
    pub weights: Vec<f64>,
    /// Index of the tail node (the last one), if any.
    pub tail_index: Option<usize>,
    pub cutoff: f64,
    /// Total decay exponent `p` of the integrand, `g m r^{d-1} ~ r^{-p}`.
    pub decay: f64,
}

impl RadialGrid {
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut g: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&r, &w)| w * g(r)).sum()
    }

    /// Contribution of the tail node alone.
    pub fn tail_part<F: FnMut(f64) -> f64>(&self, mut g: F) -> f64 {
        match self.tail_index {
            Some(i) => self.weights[i] * g(self.nodes[i]),
            None => 0.0,
        }
    }
}

/// Options for [`radial_grid`].
#[derive(Debug, Clone, Default)]
pub struct RadialOptions {
    /// `g(r) = O(r^{-decay})` as `r → ∞`.
    pub decay: f64,
    /// Largest panel width (resolves oscillations of `g`).
    pub max_width: Option<f64>,
    /// Extra breakpoints (kinks of `g`).
    pub breakpoints: Vec<f64>,
    /// Integrate up to this radius instead of `spec.tail_cutoff`.
    pub cutoff: Option<f64>,
    /// Skip the tail node.
    pub no_tail: bool,
}

/// Builds the quadrature for `∫ g(|ξ|) μ(dξ)`. Anisotropic product measures
/// are reduced to polar form; that is exact only for radial `g`.
pub fn radial_grid(mu: &SpectralMeasure, opts: &RadialOptions, spec: &QuadratureSpec) -> Result<RadialGrid> {
    spec.validate()?;
    let d = mu.dim() as f64;
    let a0 = mu.origin_exponent();
    if a0 >= d {
        return Err(Error::Divergence {
            reason: format!("measure is not integrable at the origin (density ~ r^-{a0} in dimension {d})"),
            trace: vec![],
        });
    }
    let (omega, factor) = mu.polar();
    let cutoff = opts.cutoff.unwrap_or(spec.tail_cutoff);
    let decay = opts.decay + mu.tail_exponent() - (d - 1.0);
    let max_w = opts.max_width.unwrap_or(f64::INFINITY).min(cutoff);

    let mut extra = opts.breakpoints.clone();
    let mut first = 1.0f64.min(max_w).min(cutoff);
    if let SpectralMeasure::CustomRadial(t) = mu {
        first = first.min(t.r[0]);
        extra.extend_from_slice(&t.r);
    }
    let mut pts = vec![0.0];
    pts.extend(graded_panels(first, cutoff, first, max_w));
    let pts = with_breakpoints(pts, &extra);

    let n = spec.node_count;
    let jac = Rule::jacobi(n, 0.0, d - 1.0 - a0);
    let leg = Rule::legendre(n);
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for (k, w) in pts.windows(2).enumerate() {
        if k == 0 {
            // r^{d-1-a0} carried by the rule; the rest is smooth at 0
            for (r, wt) in jac.mapped(w[0], w[1]) {
                nodes.push(r);
                weights.push(omega * wt * factor.eval(r) * r.powf(a0));
            }
        } else {
            for (r, wt) in leg.mapped(w[0], w[1]) {
                nodes.push(r);
                weights.push(omega * wt * factor.eval(r) * r.powf(d - 1.0));
            }
        }
    }
    let mut tail_index = None;
    if !opts.no_tail && factor.eval(cutoff) > 0.0 {
        if decay <= 1.0 {
            return Err(Error::Divergence {
                reason: format!("integrand decays like r^-{decay:.4}, which is not integrable at infinity"),
                trace: vec![],
            });
        }
        // ∫_R^∞ h(R) (r/R)^{-p} dr = R h(R) / (p - 1)
        tail_index = Some(nodes.len());
        nodes.push(cutoff);
        weights.push(omega * factor.eval(cutoff) * cutoff.powf(d - 1.0) * cutoff / (decay - 1.0));
    }
    Ok(RadialGrid {
        nodes,
        weights,
        tail_index,
        cutoff,
        decay,
    })
}

/// Result of [`radial_integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialIntegral {
    pub value: f64,
    /// Power-law estimate of the part beyond the cutoff (already included
    /// in `value`).
    pub tail: f64,
    pub cutoff: f64,
}

/// `ω_{d-1} ∫_0^∞ g(r) m(r) r^{d-1} dr` for isotropic measures, where `g`
/// decays like `r^{-decay}`.
pub fn radial_integrate<F: Fn(f64) -> f64>(
    mu: &SpectralMeasure,
    g: F,
    decay: f64,
    max_width: Option<f64>,
    spec: &QuadratureSpec,
) -> Result<RadialIntegral> {
    if !mu.is_isotropic() {
        return Err(Error::Unsupported(format!("{} is not isotropic; radial reduction does not apply", mu.describe())));
    }
    let opts = RadialOptions {
        decay,
        max_width,
        ..RadialOptions::default()
    };
    let grid = match radial_grid(mu, &opts, spec) {
        Ok(g) => g,
        Err(Error::Divergence { reason, .. }) => {
            let trace = partial_integrals(mu, &g, max_width, spec)?;
            return Err(Error::Divergence { reason, trace: trace.to_vec() });
        }
        Err(e) => return Err(e),
    };
    let value = grid.integrate(&g);
    let tail = grid.tail_part(&g);
    if !value.is_finite() {
        return Err(Error::Divergence {
            reason: "radial integral is not finite".into(),
            trace: vec![value],
        });
    }
    Ok(RadialIntegral {
        value,
        tail,
        cutoff: grid.cutoff,
    })
}

/// Cutoffs of the growth trace used by the numerical verdicts.
pub const TRACE_CUTOFFS: [f64; 4] = [1e1, 1e2, 1e3, 1e4];

/// Partial integrals `∫_{|ξ| ≤ R} g μ` at `R ∈ TRACE_CUTOFFS`.
fn partial_integrals<F: Fn(f64) -> f64>(
    mu: &SpectralMeasure,
    g: &F,
    max_width: Option<f64>,
    spec: &QuadratureSpec,
) -> Result<[f64; 4]> {
    let opts = RadialOptions {
        max_width,
        breakpoints: TRACE_CUTOFFS.to_vec(),
        cutoff: Some(TRACE_CUTOFFS[3]),
        no_tail: true,
        ..RadialOptions::default()
    };
    let grid = radial_grid(mu, &opts, spec)?;
    let mut out = [0.0; 4];
    let mut acc = 0.0;
    let mut k = 0;
    for (&r, &w) in grid.nodes.iter().zip(&grid.weights) {
        while k < 4 && r > TRACE_CUTOFFS[k] {
            out[k] = acc;
            k += 1;
        }
        acc += w * g(r);
    }
    while k < 4 {
        out[k] = acc;
        k += 1;
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Verdicts

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictMethod {
    ClosedForm,
    Numerical,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub holds: bool,
    /// False when the numerical trace neither settles nor grows clearly.
    pub conclusive: bool,
    pub method: VerdictMethod,
    /// The tail exponent must exceed this value.
    pub threshold: Option<f64>,
    pub margin: Option<f64>,
    /// Partial integrals at the cutoffs of [`TRACE_CUTOFFS`].
    pub trace: Vec<f64>,
    /// Smallest admissible `l` for the temperedness condition.
    pub order: Option<u32>,
}

impl Verdict {
    fn closed(threshold: f64, exponent: f64) -> Self {
        let margin = exponent - threshold;
        Verdict {
            holds: margin > 0.0,
            conclusive: true,
            method: VerdictMethod::ClosedForm,
            threshold: Some(threshold),
            margin: Some(margin),
            trace: vec![],
            order: None,
        }
    }

    pub fn label(&self) -> &'static str {
        match (self.conclusive, self.holds) {
            (false, _) => "inconclusive",
            (true, true) => "holds",
            (true, false) => "does not hold",
        }
    }
}

/// Integrability conditions of the form `∫ (1 + |ξ|²)^{-p} μ(dξ) < ∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Condition {
    /// `p = l`.
    Tempered(u32),
    /// `p = 1`.
    Dalang,
    /// `p = H + 1/2`.
    Wave(f64),
    /// `p = 2H`.
    Heat(f64),
}

impl Condition {
    pub fn exponent(&self) -> f64 {
        match *self {
            Condition::Tempered(l) => l as f64,
            Condition::Dalang => 1.0,
            Condition::Wave(h) => h + 0.5,
            Condition::Heat(h) => 2.0 * h,
        }
    }

    /// The condition holds iff the tail exponent of `μ` exceeds `d - 2p`.
    pub fn threshold(&self, d: usize) -> f64 {
        d as f64 - 2.0 * self.exponent()
    }
}

/// Closed form for the named variants, numerical for tables.
pub fn check_condition(mu: &SpectralMeasure, cond: Condition, spec: &QuadratureSpec) -> Result<Verdict> {
    match mu {
        SpectralMeasure::CustomRadial(_) => numerical_condition(mu, cond, spec),
        // near-origin mass is finite for every named variant
        _ => Ok(Verdict::closed(cond.threshold(mu.dim()), mu.tail_exponent())),
    }
}

/// Ratio of successive growth-trace increments below which the integral is
/// declared convergent.
pub const CONVERGENT_RATIO: f64 = 0.9;
/// Ratio at or above which it is declared divergent.
pub const DIVERGENT_RATIO: f64 = 0.95;

/// Classifies a growth trace of partial integrals of a positive integrand at
/// geometrically spaced cutoffs: `Some(true)` convergent, `Some(false)`
/// divergent, `None` inconclusive.
pub fn classify_trace(trace: &[f64]) -> Option<bool> {
    if trace.len() < 3 {
        return None;
    }
    let inc: Vec<f64> = trace.windows(2).map(|w| w[1] - w[0]).collect();
    let last = inc[inc.len() - 1];
    let prev = inc[inc.len() - 2];
    if !(last.is_finite() && prev.is_finite()) {
        return Some(false);
    }
    if prev <= 0.0 {
        return if last <= 0.0 { Some(true) } else { None };
    }
    let ratio = last / prev;
    if ratio < CONVERGENT_RATIO {
        Some(true)
    } else if ratio >= DIVERGENT_RATIO {
        Some(false)
    } else {
        None
    }
}

/// Decides `∫ (1 + |ξ|²)^{-p} μ(dξ) < ∞` from partial integrals, without
/// using any closed form.
pub fn numerical_condition(mu: &SpectralMeasure, cond: Condition, spec: &QuadratureSpec) -> Result<Verdict> {
    if let Condition::Tempered(_) = cond {
        return numerical_tempered(mu, spec);
    }
    let p = cond.exponent();
    let mut v = numerical_weight(mu, p, spec)?;
    v.threshold = Some(cond.threshold(mu.dim()));
    Ok(v)
}

fn numerical_weight(mu: &SpectralMeasure, p: f64, spec: &QuadratureSpec) -> Result<Verdict> {
    let near = origin_trace(mu, spec)?;
    let near_ok = classify_trace(&near);
    let g = |r: f64| (1.0 + r * r).powf(-p);
    let trace = partial_integrals(mu, &g, None, spec)?.to_vec();
    let far_ok = classify_trace(&trace);
    let (holds, conclusive) = match (near_ok, far_ok) {
        (Some(false), _) | (_, Some(false)) => (false, true),
        (Some(true), Some(true)) => (true, true),
        _ => (false, false),
    };
    Ok(Verdict {
        holds,
        conclusive,
        method: VerdictMethod::Numerical,
        threshold: None,
        margin: None,
        trace,
        order: None,
    })
}

fn numerical_tempered(mu: &SpectralMeasure, spec: &QuadratureSpec) -> Result<Verdict> {
    const MAX_ORDER: u32 = 8;
    let mut last = None;
    for l in 1..=MAX_ORDER {
        let v = numerical_weight(mu, l as f64, spec)?;
        if v.holds && v.conclusive {
            return Ok(Verdict {
                order: Some(l),
                threshold: Some(Condition::Tempered(l).threshold(mu.dim())),
                ..v
            });
        }
        last = Some(v);
    }
    Ok(last.expect("at least one order tried"))
}

/// `∫_ε^1 μ` at `ε ∈ {10^-1, …, 10^-4}`, as a growth trace for the
/// near-origin mass.
fn origin_trace(mu: &SpectralMeasure, spec: &QuadratureSpec) -> Result<Vec<f64>> {
    let (omega, factor) = mu.polar();
    let d = mu.dim() as f64;
    let leg = Rule::legendre(spec.node_count);
    let mut out = Vec::with_capacity(4);
    let mut acc = 0.0;
    let mut hi = 1.0;
    for k in 1..=4 {
        let lo = 10f64.powi(-k);
        // geometric sub-panels keep r^{d-1-a} well resolved
        let pts = crate::quadrature::geometric_towards_lo(lo, hi, 0.5, 0.5 * lo);
        for w in pts.windows(2) {
            acc += leg.integrate(w[0], w[1], |r| omega * factor.eval(r) * r.powf(d - 1.0));
        }
        out.push(acc);
        hi = lo;
    }
    if !out.iter().all(|v| v.is_finite()) {
        return Err(Error::Divergence {
            reason: "near-origin mass is not finite".into(),
            trace: out,
        });
    }
    Ok(out)
}

pub fn is_tempered(mu: &SpectralMeasure, spec: &QuadratureSpec) -> Result<Verdict> {
    match mu {
        SpectralMeasure::CustomRadial(_) => numerical_tempered(mu, spec),
        _ => {
            let d = mu.dim() as f64;
            let a = mu.tail_exponent();
            // smallest integer l ≥ 1 with 2l > d - a
            let mut l = 1u32;
            while 2.0 * l as f64 <= d - a {
                l += 1;
            }
            let mut v = Verdict::closed(Condition::Tempered(l).threshold(mu.dim()), a);
            v.order = Some(l);
            Ok(v)
        }
    }
}

pub fn dalang_condition(mu: &SpectralMeasure, spec: &QuadratureSpec) -> Result<Verdict> {
    check_condition(mu, Condition::Dalang, spec)
}

pub fn wave_existence(mu: &SpectralMeasure, model: &HurstModel, spec: &QuadratureSpec) -> Result<Verdict> {
    check_condition(mu, Condition::Wave(model.h()), spec)
}

pub fn heat_existence(mu: &SpectralMeasure, model: &HurstModel, spec: &QuadratureSpec) -> Result<Verdict> {
    check_condition(mu, Condition::Heat(model.h()), spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn constructors_validate() {
        assert!(SpectralMeasure::riesz(3.0, 3).is_err());
        assert!(SpectralMeasure::riesz(0.0, 3).is_err());
        assert!(SpectralMeasure::bessel(-1.0, 1).is_err());
        assert!(SpectralMeasure::fbm_field(vec![0.5]).is_err());
        assert!(matches!(
            RadialTable::new(1, vec![1.0, 2.0], vec![1.0, 1.0]),
            Err(Error::InsufficientData(_))
        ));
        assert!(RadialTable::new(1, vec![1.0, 1.0, 2.0], vec![1.0, 1.0, 1.0]).is_err());
    }

    #[test]
    fn closed_form_verdicts() {
        let m = HurstModel::new(0.75).unwrap();
        let r = SpectralMeasure::riesz(0.5, 3).unwrap();
        let t = is_tempered(&r, &spec()).unwrap();
        assert!(t.holds && t.order == Some(2));
        assert!(is_tempered(&SpectralMeasure::bessel(1.0, 1).unwrap(), &spec()).unwrap().holds);
        assert!(dalang_condition(&SpectralMeasure::riesz(1.5, 3).unwrap(), &spec()).unwrap().holds);
        assert!(!dalang_condition(&r, &spec()).unwrap().holds);
        assert!(dalang_condition(&SpectralMeasure::white(1).unwrap(), &spec()).unwrap().holds);
        let w = wave_existence(&SpectralMeasure::riesz(1.0, 3).unwrap(), &m, &spec()).unwrap();
        assert!(w.holds && (w.threshold.unwrap() - 0.5).abs() < 1e-15);
        assert!(!wave_existence(&SpectralMeasure::riesz(0.4, 3).unwrap(), &m, &spec()).unwrap().holds);
        let f = SpectralMeasure::fbm_field(vec![0.6, 0.6]).unwrap();
        assert!(wave_existence(&f, &m, &spec()).unwrap().holds);
        let h = heat_existence(&SpectralMeasure::riesz(1.0, 3).unwrap(), &m, &spec()).unwrap();
        assert!(h.holds && h.threshold.unwrap().abs() < 1e-15);
        assert!(heat_existence(&SpectralMeasure::riesz(2.2, 5).unwrap(), &m, &spec()).unwrap().holds);
        assert!(!heat_existence(&SpectralMeasure::riesz(1.8, 5).unwrap(), &m, &spec()).unwrap().holds);
        // exactly on the threshold does not hold
        assert!(!heat_existence(&SpectralMeasure::riesz(2.0, 5).unwrap(), &m, &spec()).unwrap().holds);
    }

    #[test]
    fn radial_integrals() {
        let w = SpectralMeasure::white(1).unwrap();
        let v = radial_integrate(&w, |r| 1.0 / (1.0 + r * r), 2.0, None, &spec()).unwrap();
        assert!((v.value - PI).abs() < 1e-6, "{v:?}");
        let v = radial_integrate(&w, |_| 0.0, 2.0, None, &spec()).unwrap();
        assert_eq!(v.value, 0.0);
        // ∫_{R^3} e^{-|ξ|²} |ξ|^{-1} dξ = 4π ∫ r e^{-r²} dr = 2π
        let r = SpectralMeasure::riesz(1.0, 3).unwrap();
        let v = radial_integrate(&r, |x| (-x * x).exp(), 50.0, None, &spec()).unwrap();
        assert!((v.value - 2.0 * PI).abs() < 1e-12);
        let f = SpectralMeasure::fbm_field(vec![0.6, 0.7]).unwrap();
        assert!(matches!(
            radial_integrate(&f, |x| (-x * x).exp(), 50.0, None, &spec()),
            Err(Error::Unsupported(_))
        ));
        // wave condition fails below threshold: divergence with a trace
        let r = SpectralMeasure::riesz(0.4, 3).unwrap();
        match radial_integrate(&r, |x| (1.0 + x * x).powf(-1.25), 2.5, None, &spec()) {
            Err(Error::Divergence { trace, .. }) => assert_eq!(trace.len(), 4),
            other => panic!("expected divergence, got {other:?}"),
        }
    }

    #[test]
    fn product_measure_polar_constant() {
        // ∫_{R^2} e^{-|ξ|²} μ(dξ) factorises into one-dimensional integrals
        let hs = [0.6, 0.8];
        let mu = SpectralMeasure::fbm_field(hs.to_vec()).unwrap();
        let grid = radial_grid(&mu, &RadialOptions { decay: 50.0, cutoff: Some(12.0), ..Default::default() }, &spec()).unwrap();
        let v = grid.integrate(|r| (-r * r).exp());
        let want: f64 = hs
            .iter()
            .map(|&h| HurstModel::new(h).unwrap().c_h * gamma(1.0 - h))
            .product();
        assert!((v - want).abs() < 1e-10 * want, "{v} vs {want}");
    }

    #[test]
    fn table_interpolation() {
        let r: Vec<f64> = (0..8).map(|k| 0.1 * 2f64.powi(k)).collect();
        let m: Vec<f64> = r.iter().map(|x| x.powf(-0.7)).collect();
        let t = RadialTable::new(2, r, m).unwrap();
        assert!((t.tail_exponent() - 0.7).abs() < 1e-12);
        assert!((t.origin_exponent() - 0.7).abs() < 1e-12);
        for &x in &[0.01, 0.15, 3.3, 100.0] {
            assert!((t.density(x) - x.powf(-0.7)).abs() < 1e-12 * x.powf(-0.7));
        }
    }

    #[test]
    fn numerical_detector_on_custom_table() {
        let m = HurstModel::new(0.75).unwrap();
        for &(alpha, want) in &[(0.4, false), (0.6, true)] {
            let r: Vec<f64> = (0..10).map(|k| 0.05 * 2f64.powi(k)).collect();
            let dens: Vec<f64> = r.iter().map(|x| x.powf(-alpha)).collect();
            let mu = SpectralMeasure::custom(RadialTable::new(3, r, dens).unwrap());
            let v = wave_existence(&mu, &m, &spec()).unwrap();
            assert_eq!(v.method, VerdictMethod::Numerical);
            assert!(v.conclusive && v.holds == want, "alpha={alpha}: {v:?}");
            assert_eq!(v.trace.len(), 4);
        }
    }

    #[test]
    fn trace_classification() {
        assert_eq!(classify_trace(&[1.0, 1.5, 1.75, 1.875]), Some(true));
        assert_eq!(classify_trace(&[1.0, 2.0, 3.0, 4.0]), Some(false));
        assert_eq!(classify_trace(&[1.0, 2.0, 2.92, 3.76]), None);
    }
}
