use fracwave_core::frac_time::{inner_product_time, lp_norm, TimeBackend};
use fracwave_core::green::{fourier_green, restricted_fourier_sin};
use fracwave_core::norm::{band_constants, sandwich_exact, NormEngine};
use fracwave_core::sampler::{assemble_covariance, factorize_spd, GridPoint, SpaceTimeGrid, DEFAULT_JITTER_LADDER};
use fracwave_core::spectral::{check_condition, Condition, SpectralMeasure};
use fracwave_core::time_fn::TimeFunction;
use fracwave_core::{HurstModel, Operator, QuadratureSpec};
use proptest::prelude::*;

fn spec() -> QuadratureSpec {
    QuadratureSpec::default()
}

fn hurst() -> impl Strategy<Value = f64> {
    0.51f64..0.99
}

fn family_member(kind: u8, p: f64, horizon: f64) -> TimeFunction {
    match kind % 5 {
        0 => TimeFunction::indicator(p * horizon),
        1 => TimeFunction::identity(),
        2 => TimeFunction::sine(3.0 * p),
        3 => TimeFunction::cosine(3.0 * p),
        _ => TimeFunction::exp_decay(4.0 * p),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn squared_norms_are_positive_and_below_the_lebesgue_bound(
        h in hurst(), kind in 0u8..5, p in 0.05f64..1.0, horizon in 0.2f64..4.0,
    ) {
        let m = HurstModel::new(h).unwrap();
        let f = family_member(kind, p, horizon);
        let lp = lp_norm(&f, 1.0 / h, horizon, &spec()).unwrap();
        let b_h = 2.0;
        for b in TimeBackend::ALL {
            let v = inner_product_time(&f, &f, &m, horizon, b, &spec()).unwrap();
            prop_assert!(v.re >= -1e-12 * lp * lp, "{b:?}: {v}");
            prop_assert!(v.im.abs() <= 1e-9 * v.re.abs().max(1e-300));
            prop_assert!(v.re <= b_h * b_h * lp * lp, "{b:?}: {} > {}", v.re, b_h * b_h * lp * lp);
        }
    }

    #[test]
    fn indicators_reproduce_the_fbm_covariance(h in hurst(), t in 0.05f64..3.0, s in 0.05f64..3.0) {
        let m = HurstModel::new(h).unwrap();
        let (f, g) = (TimeFunction::indicator(t), TimeFunction::indicator(s));
        let want = m.covariance(t, s).unwrap();
        for b in [TimeBackend::Transfer, TimeBackend::Direct] {
            let v = inner_product_time(&f, &g, &m, t.max(s), b, &spec()).unwrap().re;
            prop_assert!((v - want).abs() <= 1e-8 * want, "{b:?}: {v} vs {want}");
        }
    }

    #[test]
    fn transfer_constant_matches_spectral_constant(h in hurst()) {
        let m = HurstModel::new(h).unwrap();
        let two_pi_c = 2.0 * std::f64::consts::PI * m.c_h;
        prop_assert!((m.d_h - two_pi_c).abs() <= 1e-10 * two_pi_c);
    }

    #[test]
    fn conditions_are_ordered(h in hurst(), d in 1usize..6, alpha in 0.01f64..6.0, bessel in any::<bool>()) {
        let mu = if bessel { SpectralMeasure::bessel(alpha, d) } else { SpectralMeasure::riesz(alpha, d) };
        prop_assume!(mu.is_ok());
        let mu = mu.unwrap();
        let v = |c| check_condition(&mu, c, &spec()).unwrap().holds;
        let (dalang, wave, heat) = (v(Condition::Dalang), v(Condition::Wave(h)), v(Condition::Heat(h)));
        prop_assert!(!dalang || wave);
        prop_assert!(!wave || heat);
    }

    #[test]
    fn fourier_symbols_are_bounded(t in 1e-3f64..10.0, r in 1e-3f64..1e3) {
        let w = fourier_green(Operator::Wave, t, r);
        prop_assert!(w.abs() <= t.min(1.0 / r) * (1.0 + 1e-14));
        let g = fourier_green(Operator::Heat, t, r);
        prop_assert!((0.0..=1.0).contains(&g));
    }

    #[test]
    fn restricted_transform_is_continuous_at_the_poles(a in 0.0f64..2.0, len in 0.1f64..3.0, sign in prop::bool::ANY) {
        let tau = if sign { 1.0 } else { -1.0 };
        let at = restricted_fourier_sin(a, a + len, tau).unwrap();
        for eps in [1e-7, -1e-7] {
            let near = restricted_fourier_sin(a, a + len, tau + 2.0 * eps).unwrap();
            prop_assert!((near - at).norm() <= 1e-6 * (1.0 + at.norm()), "{at} vs {near}");
        }
    }

    #[test]
    fn kernels_scale(h in hurst(), t in 0.1f64..3.0, r in 0.05f64..20.0, c in 0.2f64..5.0) {
        let e = NormEngine::new(&HurstModel::new(h).unwrap(), &spec()).unwrap();
        let n = |t: f64, r: f64| e.n_wave(t, r).unwrap() * r.powf(2.0 * h + 2.0);
        let (x, y) = (n(t, r), n(c * t, r / c));
        prop_assert!((x - y).abs() <= 1e-6 * x.abs().max(y.abs()), "{x} vs {y}");
        let a = |t: f64, r: f64| e.a_heat(t, r).unwrap() * r.powf(4.0 * h);
        let (x, y) = (a(t, r), a(c * c * t, r / c));
        prop_assert!((x - y).abs() <= 1e-6 * x.abs().max(y.abs()), "{x} vs {y}");
    }

    #[test]
    fn heat_kernel_lower_bound(h in hurst(), t in 0.01f64..20.0, r in 0.0f64..50.0) {
        let e = NormEngine::new(&HurstModel::new(h).unwrap(), &spec()).unwrap();
        let a = e.a_heat(t, r).unwrap();
        prop_assert!(a >= 0.25 * t.powf(2.0 * h).min(1.0) * (1.0 + r * r).powf(-2.0 * h));
    }

    #[test]
    fn cross_time_is_a_gram_entry(h in hurst(), t1 in 0.05f64..3.0, t2 in 0.05f64..3.0, r in 0.0f64..30.0, wave in any::<bool>()) {
        let op = if wave { Operator::Wave } else { Operator::Heat };
        let e = NormEngine::new(&HurstModel::new(h).unwrap(), &spec()).unwrap();
        let c = e.cross_time(op, t1, t2, r).unwrap();
        let (k1, k2) = (e.kernel(op, t1, r).unwrap(), e.kernel(op, t2, r).unwrap());
        prop_assert!(c * c <= k1 * k2 * (1.0 + 1e-9) + 1e-300);
        prop_assert!((c - e.cross_time(op, t2, t1, r).unwrap()).abs() <= 1e-12 * k1.max(k2));
    }

    #[test]
    fn sandwich_stays_in_its_band(t in 0.2f64..3.0, lambda in 1.0f64..1e3) {
        let band = band_constants(t).unwrap();
        let ratio = sandwich_exact(lambda, t).unwrap() * (1.0 + lambda * lambda) / lambda.powi(3);
        prop_assert!(band.c_lo > 0.0);
        prop_assert!(band.c_lo <= ratio && ratio <= band.c_hi, "{} <= {ratio} <= {}", band.c_lo, band.c_hi);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn small_covariances_factorize_without_jitter(
        h in 0.55f64..0.95,
        xs in prop::collection::vec(-2.0f64..2.0, 1..4),
        ts in prop::collection::vec(0.2f64..1.5, 1..3),
        shift in -10.0f64..10.0,
        wave in any::<bool>(),
    ) {
        let op = if wave { Operator::Wave } else { Operator::Heat };
        let mu = SpectralMeasure::riesz(0.5, 1).unwrap();
        let m = HurstModel::new(h).unwrap();
        let mut points = Vec::new();
        for &t in &ts {
            for &x in &xs {
                if !points.iter().any(|p: &GridPoint| p.t == t && p.x[0] == x) {
                    points.push(GridPoint { t, x: vec![x], label: String::new() });
                }
            }
        }
        let shifted: Vec<GridPoint> = points.iter().map(|p| GridPoint { x: vec![p.x[0] + shift], ..p.clone() }).collect();
        let c = assemble_covariance(&SpaceTimeGrid::new(1, points, false).unwrap(), &mu, &m, op, &spec()).unwrap();
        let f = factorize_spd(&c, &DEFAULT_JITTER_LADDER).unwrap();
        prop_assert!(f.jitter <= 1e-8 * c.trace() / c.n as f64);
        let moved = assemble_covariance(&SpaceTimeGrid::new(1, shifted, false).unwrap(), &mu, &m, op, &spec()).unwrap();
        for (a, b) in c.data.iter().zip(&moved.data) {
            prop_assert!((a - b).abs() <= 1e-9 * c.trace());
        }
    }
}
