//! Small special functions shared by the kernels.

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

pub fn beta(a: f64, b: f64) -> f64 {
    libm::exp(libm::lgamma(a) + libm::lgamma(b) - libm::lgamma(a + b))
}

/// `sin(z)/z`, equal to 1 at the origin.
pub fn sinc(z: f64) -> f64 {
    if z.abs() < 1e-4 {
        let z2 = z * z;
        1.0 - z2 / 6.0 + z2 * z2 / 120.0
    } else {
        z.sin() / z
    }
}

/// `(1 - sinc z) / z²`, which tends to 1/6 at the origin.
pub fn one_minus_sinc_over_sq(z: f64) -> f64 {
    if z.abs() < 0.1 {
        // alternating series sum_{k>=1} (-1)^{k+1} z^{2k-2} / (2k+1)!
        let z2 = z * z;
        let mut term = 1.0 / 6.0;
        let mut sum = term;
        for k in 2..10 {
            let kf = k as f64;
            term *= -z2 / ((2.0 * kf) * (2.0 * kf + 1.0));
            sum += term;
        }
        sum
    } else {
        (1.0 - z.sin() / z) / (z * z)
    }
}

/// `sin(r x) / r`, continuous at `r = 0` where it equals `x`.
pub fn sin_over(r: f64, x: f64) -> f64 {
    x * sinc(r * x)
}

/// `phi_k(x) = ∫_0^1 s^(k-1) e^{-x s} ds` for `k >= 1` and complex `x`.
///
/// `phi_1(x) = (1 - e^{-x})/x`, `phi_2(x) = (1 - e^{-x}(1 + x))/x²`.
pub fn phi(k: u32, x: Complex64) -> Complex64 {
    debug_assert!(k >= 1);
    let norm = x.norm();
    if norm < 1.0 {
        // sum_j (-x)^j / (j! (j + k))
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term / (k as f64);
        for j in 1..40 {
            term = term * (-x) / (j as f64);
            let add = term / ((j + k as usize) as f64);
            sum += add;
            if add.norm() < 1e-18 * sum.norm() {
                break;
            }
        }
        sum
    } else {
        // upward recursion phi_{k+1} = (k phi_k - e^{-x}) / x
        let e = (-x).exp();
        let mut p = (Complex64::new(1.0, 0.0) - e) / x;
        for j in 1..k {
            p = (p * (j as f64) - e) / x;
        }
        p
    }
}

/// `e^z - 1` for complex `z` without cancellation near the origin.
pub fn expm1_c(z: Complex64) -> Complex64 {
    if z.norm() < 1e-3 {
        z * phi_neg1(z)
    } else {
        z.exp() - 1.0
    }
}

fn phi_neg1(z: Complex64) -> Complex64 {
    // (e^z - 1)/z = 1 + z/2 + z²/6 + z³/24
    Complex64::new(1.0, 0.0) + z * (0.5 + z * (1.0 / 6.0 + z / 24.0))
}

/// Average of `cos(ξ·z)` over the sphere `|ξ| = r` in `R^d`, as a function
/// of `s = r|z|`: `Γ(d/2) (2/s)^{d/2-1} J_{d/2-1}(s)`. Equals `cos s` for
/// `d = 1` and `sin s / s` for `d = 3`.
pub fn isotropic_cos(d: usize, s: f64) -> f64 {
    let s = s.abs();
    match d {
        0 => 1.0,
        1 => s.cos(),
        3 => sinc(s),
        _ if s <= 8f64.max(d as f64) => {
            // Σ_k (-s²/4)^k Γ(d/2) / (k! Γ(k + d/2))
            let half = d as f64 / 2.0;
            let q = -s * s / 4.0;
            let mut term = 1.0;
            let mut sum = 1.0;
            let mut k = 1.0;
            while term.abs() > 1e-17 * sum.abs().max(1e-300) && k < 200.0 {
                term *= q / (k * (k - 1.0 + half));
                sum += term;
                k += 1.0;
            }
            sum
        }
        _ if d.is_multiple_of(2) => {
            // J_ν(s) is the mean of cos(νθ - s sin θ) over a period, which the
            // trapezoid rule resolves to rounding once it has more than
            // s + ν nodes
            let nu = d / 2 - 1;
            let n = libm::ceil(s) as usize + nu + 64;
            let step = 2.0 * core::f64::consts::PI / n as f64;
            let mean = (0..n)
                .map(|j| {
                    let th = j as f64 * step;
                    (nu as f64 * th - s * th.sin()).cos()
                })
                .sum::<f64>()
                / n as f64;
            gamma(d as f64 / 2.0) * (2.0 / s).powi(nu as i32) * mean
        }
        _ => {
            // half-integer order through the spherical Bessel function j_n,
            // whose upward recurrence is stable for s > n
            let n = (d - 3) / 2;
            let (sn, cs) = s.sin_cos();
            let mut prev = sn / s;
            let mut cur = sn / (s * s) - cs / s;
            if n == 0 {
                cur = prev;
            }
            for k in 1..n {
                let next = (2 * k + 1) as f64 / s * cur - prev;
                prev = cur;
                cur = next;
            }
            gamma(d as f64 / 2.0) * libm::exp2((n + 1) as f64) / (core::f64::consts::PI.sqrt() * s.powi(n as i32)) * cur
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_branches_meet() {
        for &k in &[1u32, 2, 3] {
            for &(re, im) in &[(0.999, 0.0), (0.0, 0.999), (0.6, -0.79)] {
                let x = Complex64::new(re, im);
                let series = phi(k, x);
                // force the closed branch
                let e = (-x).exp();
                let mut p = (Complex64::new(1.0, 0.0) - e) / x;
                for j in 1..k {
                    p = (p * (j as f64) - e) / x;
                }
                assert!((series - p).norm() < 1e-12, "k={k} x={x}");
            }
        }
    }

    #[test]
    fn sinc_limits() {
        assert_eq!(sinc(0.0), 1.0);
        assert!((sinc(1e-5) - (1e-5f64).sin() / 1e-5).abs() < 1e-15);
        assert!((one_minus_sinc_over_sq(0.0999) - (1.0 - sinc(0.0999)) / 0.0999f64.powi(2)).abs() < 1e-9);
        assert!((one_minus_sinc_over_sq(0.0) - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn beta_matches_gamma_ratio() {
        let b = beta(0.25, 0.5);
        let g = gamma(0.25) * gamma(0.5) / gamma(0.75);
        assert!((b - g).abs() < 1e-12 * g);
    }

    #[test]
    fn isotropic_cos_reference_values() {
        // J0 and J1 from standard tables
        let j0 = [(1.0, 0.7651976865579666), (10.0, -0.2459357644513483), (100.0, 0.019985850304223122)];
        for (x, want) in j0 {
            assert!((isotropic_cos(2, x) - want).abs() < 1e-14, "J0({x})");
        }
        let j1_10 = 0.04347274616886144;
        assert!((isotropic_cos(4, 10.0) - 2.0 * j1_10 / 10.0).abs() < 1e-15);
        // d = 5: 3 j_1(s)/s
        for &x in &[0.5, 7.9, 8.1, 30.0] {
            let j1 = x.sin() / (x * x) - x.cos() / x;
            assert!((isotropic_cos(5, x) - 3.0 * j1 / x).abs() < 1e-13, "d=5 s={x}");
        }
        // both branches meet at the switch
        for d in [2, 4, 6, 7] {
            let edge = 8f64.max(d as f64);
            let a = isotropic_cos(d, edge * (1.0 - 1e-12));
            let b = isotropic_cos(d, edge * (1.0 + 1e-12));
            assert!((a - b).abs() < 1e-11, "d={d}: {a} {b}");
        }
        assert_eq!(isotropic_cos(3, 0.0), 1.0);
        assert_eq!(isotropic_cos(2, 0.0), 1.0);
    }
}
