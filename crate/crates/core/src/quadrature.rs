//! Gauss rules and the panel machinery every integral in the crate is
//! built from.
//!
//! Nodes and weights come from the Golub–Welsch eigenvalue problem for the
//! Jacobi matrix of the weight `(1-x)^a (1+x)^b` on `[-1, 1]`. Legendre is
//! the case `a = b = 0`.

use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{check_domain, Result};
use crate::special::gamma;

/// Node counts, singularity handling and truncation settings shared by all
/// numerical integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Gauss nodes per panel.
    pub node_count: usize,
    /// Half-width of the window around a removable singularity in which a
    /// series branch replaces the direct formula.
    pub removable_singularity_radius: f64,
    /// Tolerance for cross-backend consistency checks and convergence tests.
    pub relative_tolerance: f64,
    /// Upper limit of improper integrals (radial `|ξ|` and spectral `τ`).
    pub tail_cutoff: f64,
    /// Node multiplier used when a result is re-evaluated for a refinement check.
    pub refinement_factor: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            node_count: 20,
            removable_singularity_radius: 1e-4,
            relative_tolerance: 1e-6,
            tail_cutoff: 1e3,
            refinement_factor: 2,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        check_domain("node_count", self.node_count as f64, (2..=400).contains(&self.node_count), "[2, 400]")?;
        let eps = self.removable_singularity_radius;
        check_domain("removable_singularity_radius", eps, eps > 0.0 && eps < 0.5, "(0, 1/2)")?;
        let tol = self.relative_tolerance;
        check_domain("relative_tolerance", tol, tol > 0.0, "(0, inf)")?;
        let cut = self.tail_cutoff;
        check_domain("tail_cutoff", cut, cut > 1.0, "(1, inf)")?;
        check_domain(
            "refinement_factor",
            self.refinement_factor as f64,
            self.refinement_factor >= 2,
            "[2, inf)",
        )?;
        Ok(())
    }

    /// A copy with `node_count` multiplied by the refinement factor.
    pub fn refined(&self) -> Self {
        QuadratureSpec {
            node_count: self.node_count * self.refinement_factor,
            ..*self
        }
    }
}

/// A Gauss rule on `[-1, 1]` for the weight `(1-x)^a (1+x)^b`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub a: f64,
    pub b: f64,
}

impl Rule {
    pub fn legendre(n: usize) -> Rule {
        Rule::jacobi(n, 0.0, 0.0)
    }

    /// Gauss–Jacobi rule with `n` nodes. Requires `a, b > -1`.
    pub fn jacobi(n: usize, a: f64, b: f64) -> Rule {
        assert!(n >= 1 && a > -1.0 && b > -1.0, "invalid Jacobi rule parameters n={n} a={a} b={b}");
        let ab = a + b;
        let mut diag = vec![0.0; n];
        let mut off = vec![0.0; n];
        for k in 0..n {
            let kf = k as f64;
            diag[k] = if k == 0 {
                (b - a) / (ab + 2.0)
            } else {
                (b * b - a * a) / ((2.0 * kf + ab) * (2.0 * kf + ab + 2.0))
            };
        }
        for k in 1..n {
            let kf = k as f64;
            let beta = if k == 1 {
                4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab).powi(2) * (3.0 + ab))
            } else {
                let s = 2.0 * kf + ab;
                4.0 * kf * (kf + a) * (kf + b) * (kf + ab) / (s * s * (s + 1.0) * (s - 1.0))
            };
            off[k - 1] = beta.sqrt();
        }
        let mu0 = libm::exp2(ab + 1.0) * gamma(a + 1.0) * gamma(b + 1.0) / gamma(ab + 2.0);
        let first = tridiagonal_eigen(&mut diag, &mut off);
        let mut pairs: Vec<(f64, f64)> = diag
            .iter()
            .zip(first.iter())
            .map(|(&x, &z)| (x, mu0 * z * z))
            .collect();
        pairs.sort_by(|p, q| p.0.partial_cmp(&q.0).unwrap_or(core::cmp::Ordering::Equal));
        Rule {
            nodes: pairs.iter().map(|p| p.0).collect(),
            weights: pairs.iter().map(|p| p.1).collect(),
            a,
            b,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped to `[lo, hi]` such that
    /// `sum w_i g(x_i) ≈ ∫_lo^hi (hi-x)^a (x-lo)^b g(x) dx`.
    pub fn mapped(&self, lo: f64, hi: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        let scale = half.powf(self.a + self.b + 1.0);
        self.nodes
            .iter()
            .zip(self.weights.iter())
            .map(move |(&x, &w)| (mid + half * x, w * scale))
    }

    /// Same as [`Rule::mapped`] but with the singular end placed at `hi`
    /// regardless of the rule's orientation: for a rule built with weight
    /// `(1+x)^b` this yields `∫ (hi - x)^b g(x) dx`.
    pub fn mapped_reversed(&self, lo: f64, hi: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        let scale = half.powf(self.a + self.b + 1.0);
        self.nodes
            .iter()
            .zip(self.weights.iter())
            .map(move |(&x, &w)| (mid - half * x, w * scale))
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, lo: f64, hi: f64, mut f: F) -> f64 {
        self.mapped(lo, hi).map(|(x, w)| w * f(x)).sum()
    }
}

/// Implicit QL on a symmetric tridiagonal matrix. On return `diag` holds the
/// eigenvalues; the returned vector holds the first component of each
/// normalized eigenvector (all Golub–Welsch needs).
pub(crate) fn tridiagonal_eigen(diag: &mut [f64], off: &mut [f64]) -> Vec<f64> {
    let n = diag.len();
    let mut z = vec![0.0; n];
    if n == 0 {
        return z;
    }
    z[0] = 1.0;
    let e = off;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter < 200, "tridiagonal eigen solver failed to converge");
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
                let zf = z[i + 1];
                z[i + 1] = s * z[i] + c * zf;
                z[i] = c * z[i] - s * zf;
            }
            if underflow {
                continue;
            }
            diag[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    z
}

/// Breakpoints `lo = x_0 < x_1 < ... = hi` with every step at most `max_width`.
pub fn uniform_panels(lo: f64, hi: f64, max_width: f64) -> Vec<f64> {
    let len = hi - lo;
    if !(len > 0.0) {
        return vec![lo];
    }
    let count = if max_width.is_finite() && max_width > 0.0 {
        libm::ceil(len / max_width).max(1.0) as usize
    } else {
        1
    };
    (0..=count)
        .map(|k| if k == count { hi } else { lo + len * (k as f64) / (count as f64) })
        .collect()
}

/// Panels on `[lo, hi]` that start with width `first` at `lo`, double until
/// they reach `max_width` and then stay uniform. Used where an integrand has
/// a singularity or a fast transient at `lo`.
pub fn graded_panels(lo: f64, hi: f64, first: f64, max_width: f64) -> Vec<f64> {
    let mut out = vec![lo];
    if !(hi > lo) {
        return out;
    }
    let max_width = if max_width > 0.0 { max_width } else { hi - lo };
    let mut width = first.min(max_width).max((hi - lo) * 1e-14);
    let mut x = lo;
    loop {
        let next = x + width;
        if next >= hi * (1.0 - 1e-15) || next >= hi {
            out.push(hi);
            break;
        }
        // avoid a sliver at the end
        if hi - next < 0.25 * width {
            out.push(hi);
            break;
        }
        out.push(next);
        x = next;
        width = (2.0 * width).min(max_width);
    }
    out
}

/// Geometric panels on `[lo, hi]` refined towards `lo` with ratio `q` until
/// the innermost panel is shorter than `min_width`. Returned ascending.
pub fn geometric_towards_lo(lo: f64, hi: f64, q: f64, min_width: f64) -> Vec<f64> {
    let mut inner = Vec::new();
    let mut w = hi - lo;
    while w > min_width {
        w *= q;
        inner.push(lo + w);
    }
    let mut out = vec![lo];
    out.extend(inner.into_iter().rev());
    out.push(hi);
    out
}

/// Merge extra breakpoints into an ascending breakpoint list.
pub fn with_breakpoints(mut pts: Vec<f64>, extra: &[f64]) -> Vec<f64> {
    let lo = pts[0];
    let hi = *pts.last().unwrap();
    for &x in extra {
        if x > lo && x < hi {
            pts.push(x);
        }
    }
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let scale = (hi - lo).abs().max(1e-300);
    pts.dedup_by(|a, b| (*a - *b).abs() <= 1e-13 * scale);
    pts
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_integrates_polynomials() {
        let r = Rule::legendre(10);
        let v = r.integrate(0.0, 2.0, |x| x.powi(19));
        assert!((v - 2f64.powi(20) / 20.0).abs() < 1e-9 * v);
        let s: f64 = r.weights.iter().sum();
        assert!((s - 2.0).abs() < 1e-14);
    }

    #[test]
    fn jacobi_moments() {
        // ∫_{-1}^{1} (1-x)^a (1+x)^b dx = 2^{a+b+1} B(a+1, b+1)
        for &(a, b) in &[(-0.5, 0.0), (0.0, -0.9), (0.3, -0.45), (-0.1, -0.1)] {
            let r = Rule::jacobi(16, a, b);
            let s: f64 = r.weights.iter().sum();
            let exact = libm::exp2(a + b + 1.0) * crate::special::beta(a + 1.0, b + 1.0);
            assert!((s - exact).abs() < 1e-13 * exact, "a={a} b={b}");
            // x² moment by two rules must agree
            let r2 = Rule::jacobi(4, a, b);
            let m16: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * x * x).sum();
            let m4: f64 = r2.nodes.iter().zip(&r2.weights).map(|(x, w)| w * x * x).sum();
            assert!((m16 - m4).abs() < 1e-13);
        }
    }

    #[test]
    fn jacobi_weight_on_interval() {
        // ∫_0^2 x^{-1/2} dx = 2 sqrt 2, singular end at lo => b = -1/2
        let r = Rule::jacobi(6, 0.0, -0.5);
        let v: f64 = r.mapped(0.0, 2.0).map(|(_, w)| w).sum();
        assert!((v - 2.0 * 2f64.sqrt()).abs() < 1e-13);
        let v: f64 = r.mapped_reversed(0.0, 2.0).map(|(x, w)| w * x).sum();
        // ∫_0^2 (2-x)^{-1/2} x dx = 8 sqrt2 / 3
        assert!((v - 8.0 * 2f64.sqrt() / 3.0).abs() < 1e-12);
    }

    #[test]
    fn panels_cover_interval() {
        let p = graded_panels(0.0, 10.0, 0.01, 1.0);
        assert_eq!(p[0], 0.0);
        assert_eq!(*p.last().unwrap(), 10.0);
        assert!(p.windows(2).all(|w| w[1] > w[0] && w[1] - w[0] <= 1.0 + 1e-12));
        let u = uniform_panels(1.0, 2.0, 0.3);
        assert_eq!(u.len(), 5);
        let g = geometric_towards_lo(0.0, 1.0, 0.25, 1e-3);
        assert!(g[1] < 1e-3 && g.windows(2).all(|w| w[1] > w[0]));
    }
}
