//! Functions of time `s ∈ [0, T]` fed to the `H(0,T)` machinery.
//!
//! Most inputs are finite sums of terms `c · v^p · e^{s v}` where `v` is
//! either `u` (anchored at the origin) or `end - u` (anchored at the end of
//! the support). That family covers indicators, polynomials of degree one,
//! sines, cosines, decaying exponentials and the Fourier-side Green
//! functions, and it has a closed-form restricted Fourier transform.
//! Anything else can be wrapped as a custom closure.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::special::phi;

/// Where the power and exponential of a term are measured from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Anchor {
    /// `v = u`.
    Origin,
    /// `v = end - u`, with `end` the end of the support.
    End,
}

/// `coef · v^power · e^{rate · v}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub coef: Complex64,
    pub power: u32,
    pub rate: Complex64,
    pub anchor: Anchor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Smoothness {
    Smooth,
    PiecewiseConstant,
}

#[derive(Clone)]
enum Shape {
    Terms(Vec<Term>),
    Custom(Arc<dyn Fn(f64) -> Complex64 + Send + Sync>),
}

/// A bounded function on `[0, support]`, extended by zero to the right.
#[derive(Clone)]
pub struct TimeFunction {
    shape: Shape,
    support: f64,
    bandwidth: f64,
    decay: f64,
    smoothness: Smoothness,
}

impl fmt::Debug for TimeFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut d = f.debug_struct("TimeFunction");
        match &self.shape {
            Shape::Terms(t) => d.field("terms", t),
            Shape::Custom(_) => d.field("terms", &"<custom>"),
        };
        d.field("support", &self.support)
            .field("bandwidth", &self.bandwidth)
            .field("smoothness", &self.smoothness)
            .finish()
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

impl TimeFunction {
    pub fn from_terms(terms: Vec<Term>, support: f64) -> Self {
        let bandwidth = terms.iter().map(|t| t.rate.im.abs()).fold(0.0, f64::max);
        let decay = terms.iter().map(|t| t.rate.re.abs()).fold(0.0, f64::max);
        TimeFunction {
            shape: Shape::Terms(terms),
            support,
            bandwidth,
            decay,
            smoothness: Smoothness::Smooth,
        }
    }

    /// A custom function, smooth on `[0, support]`. `bandwidth` is the
    /// largest angular frequency it oscillates with (0 if none); it only
    /// controls panel sizes.
    pub fn custom<F>(f: F, support: f64, bandwidth: f64) -> Self
    where
        F: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        TimeFunction {
            shape: Shape::Custom(Arc::new(f)),
            support,
            bandwidth,
            decay: 0.0,
            smoothness: Smoothness::Smooth,
        }
    }

    fn single(coef: Complex64, power: u32, rate: Complex64) -> Self {
        Self::from_terms(
            vec![Term {
                coef,
                power,
                rate,
                anchor: Anchor::Origin,
            }],
            f64::INFINITY,
        )
    }

    pub fn constant(value: f64) -> Self {
        Self::single(c(value, 0.0), 0, c(0.0, 0.0))
    }

    /// `1_{[0,t]}`.
    pub fn indicator(t: f64) -> Self {
        let mut f = Self::constant(1.0).with_support(t);
        f.smoothness = Smoothness::PiecewiseConstant;
        f
    }

    pub fn identity() -> Self {
        Self::single(c(1.0, 0.0), 1, c(0.0, 0.0))
    }

    /// `e^{-rate·u}`.
    pub fn exp_decay(rate: f64) -> Self {
        Self::single(c(1.0, 0.0), 0, c(-rate, 0.0))
    }

    /// `e^{i ω u}`.
    pub fn complex_exp(omega: f64) -> Self {
        Self::single(c(1.0, 0.0), 0, c(0.0, omega))
    }

    /// `sin(ω u)`.
    pub fn sine(omega: f64) -> Self {
        Self::from_terms(sine_terms(omega, 0.0, c(1.0, 0.0), Anchor::Origin), f64::INFINITY)
    }

    /// `cos(ω u)`.
    pub fn cosine(omega: f64) -> Self {
        let half = c(0.5, 0.0);
        Self::from_terms(
            vec![
                Term {
                    coef: half,
                    power: 0,
                    rate: c(0.0, omega),
                    anchor: Anchor::Origin,
                },
                Term {
                    coef: half,
                    power: 0,
                    rate: c(0.0, -omega),
                    anchor: Anchor::Origin,
                },
            ],
            f64::INFINITY,
        )
    }

    /// `sin(ω (u + shift))`.
    pub fn shifted_sine(omega: f64, shift: f64) -> Self {
        Self::from_terms(sine_terms(omega, shift, c(1.0, 0.0), Anchor::Origin), f64::INFINITY)
    }

    /// `sin(ω (u + h)) - sin(ω u)`, without cancellation for small `h`.
    pub fn sine_increment(omega: f64, h: f64) -> Self {
        // (e^{iωh} - 1) e^{iωu} / (2i) + conjugate
        let a = crate::special::expm1_c(c(0.0, omega * h)) / c(0.0, 2.0);
        Self::from_terms(
            vec![
                Term {
                    coef: a,
                    power: 0,
                    rate: c(0.0, omega),
                    anchor: Anchor::Origin,
                },
                Term {
                    coef: a.conj(),
                    power: 0,
                    rate: c(0.0, -omega),
                    anchor: Anchor::Origin,
                },
            ],
            f64::INFINITY,
        )
    }

    /// `u ↦ FG₁(t - u)(r) = sin(r (t - u)) / r` on `[0, t]`.
    pub fn wave_green(t: f64, r: f64) -> Self {
        let terms = if r * t < 1e-5 {
            // sin(r v)/r = v - r² v³/6 + ...; the cubic is below rounding here
            vec![Term {
                coef: c(1.0, 0.0),
                power: 1,
                rate: c(0.0, 0.0),
                anchor: Anchor::End,
            }]
        } else {
            sine_terms(r, 0.0, c(1.0 / r, 0.0), Anchor::End)
        };
        Self::from_terms(terms, t)
    }

    /// `u ↦ FG₂(t - u)(r) = exp(-(t - u) r² / 2)` on `[0, t]`.
    pub fn heat_green(t: f64, r: f64) -> Self {
        Self::from_terms(
            vec![Term {
                coef: c(1.0, 0.0),
                power: 0,
                rate: c(-0.5 * r * r, 0.0),
                anchor: Anchor::End,
            }],
            t,
        )
    }

    /// Restrict to `[0, min(support, end)]`.
    pub fn with_support(mut self, end: f64) -> Self {
        let new_end = self.support.min(end);
        if let Shape::Terms(terms) = &mut self.shape {
            // End-anchored terms are tied to the old end point; re-anchor.
            if new_end < self.support && terms.iter().any(|t| t.anchor == Anchor::End) {
                let shift = self.support - new_end;
                for t in terms.iter_mut().filter(|t| t.anchor == Anchor::End) {
                    // v_old = v_new + shift; expand (v_new + shift)^p e^{rate (v_new + shift)}
                    t.coef *= (t.rate * shift).exp();
                    if t.power == 1 {
                        let extra = Term {
                            coef: t.coef * shift,
                            power: 0,
                            ..*t
                        };
                        terms.push(extra);
                        break;
                    }
                }
            }
        }
        self.support = new_end;
        self
    }

    pub fn support(&self) -> f64 {
        self.support
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    /// Largest exponential rate `|Re s|` among the terms.
    pub fn decay(&self) -> f64 {
        self.decay
    }

    pub fn smoothness(&self) -> Smoothness {
        self.smoothness
    }

    pub fn has_closed_fourier(&self) -> bool {
        matches!(self.shape, Shape::Terms(_))
    }

    /// Effective right end on a horizon `T`.
    pub fn end(&self, horizon: f64) -> f64 {
        self.support.min(horizon)
    }

    /// The smooth closure on the support (no truncation applied).
    pub fn closure(&self, u: f64) -> Complex64 {
        match &self.shape {
            Shape::Terms(terms) => terms.iter().map(|t| eval_term(t, u, self.support)).sum(),
            Shape::Custom(f) => f(u),
        }
    }

    /// Value with the support cut applied.
    pub fn eval(&self, u: f64) -> Complex64 {
        if u < 0.0 || u > self.support {
            c(0.0, 0.0)
        } else {
            self.closure(u)
        }
    }

    /// Closed-form restricted Fourier transform `∫_0^end e^{-iτu} f(u) du`,
    /// with `end ≤ support`. `None` for custom functions.
    pub fn fourier(&self, tau: f64, end: f64) -> Option<Complex64> {
        let Shape::Terms(terms) = &self.shape else {
            return None;
        };
        let mut total = c(0.0, 0.0);
        for t in terms {
            total += term_fourier(t, tau, end, self.support);
        }
        Some(total)
    }
}

fn sine_terms(omega: f64, shift: f64, scale: Complex64, anchor: Anchor) -> Vec<Term> {
    // sin(ω(v + shift)) = (e^{iω shift} e^{iωv} - e^{-iω shift} e^{-iωv}) / (2i)
    let phase = Complex64::from_polar(1.0, omega * shift);
    let half_i = c(0.0, 2.0);
    vec![
        Term {
            coef: scale * phase / half_i,
            power: 0,
            rate: c(0.0, omega),
            anchor,
        },
        Term {
            coef: -scale * phase.conj() / half_i,
            power: 0,
            rate: c(0.0, -omega),
            anchor,
        },
    ]
}

fn eval_term(t: &Term, u: f64, support: f64) -> Complex64 {
    let v = match t.anchor {
        Anchor::Origin => u,
        Anchor::End => support - u,
    };
    let mut val = t.coef * (t.rate * v).exp();
    if t.power == 1 {
        val *= v;
    }
    val
}

/// `∫_0^end e^{-iτu} term(u) du`.
fn term_fourier(t: &Term, tau: f64, end: f64, support: f64) -> Complex64 {
    let k = t.power + 1;
    let scale = end.powi(k as i32);
    match t.anchor {
        Anchor::Origin => {
            // ∫_0^end u^p e^{(s - iτ)u} du = end^{p+1} phi_{p+1}((iτ - s) end)
            t.coef * scale * phi(k, (c(0.0, tau) - t.rate) * end)
        }
        Anchor::End => {
            // v = support - u runs over [support - end, support]
            let lo = support - end;
            if lo == 0.0 {
                // e^{-iτ support} ∫_0^end v^p e^{(s + iτ) v} dv
                let rot = Complex64::from_polar(1.0, -tau * support);
                t.coef * rot * scale * phi(k, -(t.rate + c(0.0, tau)) * end)
            } else {
                // Only reached for end < support on an End-anchored term:
                // rebase onto the sub-interval.
                let shifted = Term {
                    coef: t.coef * (t.rate * lo).exp(),
                    ..*t
                };
                let mut val = term_fourier(&Term { power: t.power, ..shifted }, tau, end, end);
                if t.power == 1 {
                    val += term_fourier(
                        &Term {
                            coef: shifted.coef * lo,
                            power: 0,
                            ..shifted
                        },
                        tau,
                        end,
                        end,
                    );
                }
                val
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::Rule;

    fn numeric_fourier(f: &TimeFunction, tau: f64, end: f64) -> Complex64 {
        let rule = Rule::legendre(40);
        let panels = crate::quadrature::uniform_panels(0.0, end, 0.25);
        let mut acc = c(0.0, 0.0);
        for w in panels.windows(2) {
            for (x, wt) in rule.mapped(w[0], w[1]) {
                acc += Complex64::from_polar(wt, -tau * x) * f.eval(x);
            }
        }
        acc
    }

    #[test]
    fn closed_fourier_matches_quadrature() {
        let fam = [
            TimeFunction::indicator(0.7),
            TimeFunction::identity(),
            TimeFunction::sine(1.0),
            TimeFunction::cosine(2.0),
            TimeFunction::exp_decay(1.5),
            TimeFunction::wave_green(1.3, 2.0),
            TimeFunction::heat_green(1.3, 3.0),
            TimeFunction::shifted_sine(2.0, 0.25),
            TimeFunction::complex_exp(-0.5),
        ];
        for f in &fam {
            let end = f.end(1.3);
            for &tau in &[0.0, 0.3, 1.0, -1.0, 2.0, 7.5, -40.0] {
                let a = f.fourier(tau, end).unwrap();
                let b = numeric_fourier(f, tau, end);
                assert!((a - b).norm() < 1e-11 * (1.0 + b.norm()), "{f:?} tau={tau}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn restricting_end_anchored_terms() {
        let f = TimeFunction::heat_green(2.0, 1.0);
        let g = f.clone().with_support(1.5);
        for &u in &[0.0, 0.4, 1.5] {
            assert!((f.eval(u) - g.eval(u)).norm() < 1e-14);
        }
        assert_eq!(g.eval(1.6), c(0.0, 0.0));
        let h = TimeFunction::wave_green(2.0, 0.0).with_support(1.0);
        assert!((h.eval(0.5).re - 1.5).abs() < 1e-15);
        let a = h.fourier(0.7, 1.0).unwrap();
        let b = numeric_fourier(&h, 0.7, 1.0);
        assert!((a - b).norm() < 1e-12);
    }

    #[test]
    fn green_values() {
        let w = TimeFunction::wave_green(2.0, 3.0);
        assert!((w.eval(0.5).re - (3.0f64 * 1.5).sin() / 3.0).abs() < 1e-15);
        assert!(w.eval(0.5).im.abs() < 1e-15);
        let h = TimeFunction::heat_green(2.0, 3.0);
        assert!((h.eval(0.5).re - (-4.5f64 * 1.5).exp()).abs() < 1e-15);
    }
}
