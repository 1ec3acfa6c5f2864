use super::*;

fn engine(h: f64) -> NormEngine {
    NormEngine::new(&HurstModel::new(h).unwrap(), &QuadratureSpec::default()).unwrap()
}

#[test]
fn zero_radius_is_identity_norm() {
    let e = engine(0.75);
    for b in NormBackend::ALL {
        let v = e.n_wave_with(1.0, 0.0, b).unwrap();
        assert!((v - 1.0 / 3.5).abs() < 1e-9, "{b:?}: {v}");
    }
    let tiny = e.n_wave(1.0, 1e-9).unwrap();
    assert!((tiny - 1.0 / 3.5).abs() < 1e-12);
}

#[test]
fn rescaled_norm_is_sine_norm() {
    // r^{2H+2} N_1(2) = ‖sin‖²_{H(0,2)}
    let h = 0.75;
    let e = engine(h);
    let lhs = 2f64.powf(2.0 * h + 2.0) * e.n_wave(1.0, 2.0).unwrap();
    let s = crate::time_fn::TimeFunction::sine(1.0);
    let rhs = inner_product_time(&s, &s, e.model(), 2.0, TimeBackend::Direct, e.spec()).unwrap().re;
    assert!((lhs - rhs).abs() < 1e-10 * rhs, "{lhs} vs {rhs}");
}

#[test]
fn backends_agree() {
    for &h in &[0.55, 0.75, 0.95] {
        let e = engine(h);
        for &t in &[0.5, 1.0, 2.0] {
            for &r in &[0.3, 1.0, 5.0, 20.0] {
                for op in [Operator::Wave, Operator::Heat] {
                    let vals = e.kernel_checked(op, t, r);
                    assert!(vals.is_ok(), "h={h} t={t} r={r} {op:?}: {vals:?}");
                }
            }
        }
    }
}

#[test]
fn heat_kernel_values() {
    let e = engine(0.75);
    assert!((e.a_heat(2.0, 0.0).unwrap() - 2f64.powf(1.5)).abs() < 1e-12);
    // t r² → ∞: A r^{4H} → 2^{2H-1} Γ(2H+1)
    let r = 100.0;
    let v = e.a_heat(1.0, r).unwrap() * r.powf(3.0);
    let limit = 2f64.powf(0.5) * crate::special::gamma(2.5);
    assert!((v / limit - 1.0).abs() < 0.01, "{v} vs {limit}");
    assert!((limit - 1.879971).abs() < 1e-6);
}

#[test]
fn scaling_laws() {
    let h = 0.65;
    let e = engine(h);
    for &(t, r) in &[(1.0, 3.0), (0.5, 0.7), (2.0, 12.0)] {
        let k = 2.5;
        let a = e.n_wave(t, r).unwrap() * r.powf(2.0 * h + 2.0);
        let b = e.n_wave(t * k, r / k).unwrap() * (r / k).powf(2.0 * h + 2.0);
        assert!((a - b).abs() < 1e-10 * a, "wave {t} {r}: {a} {b}");
        let a = e.a_heat(t, r).unwrap() * r.powf(4.0 * h);
        let b = e.a_heat(t * k * k, r / k).unwrap() * (r / k).powf(4.0 * h);
        assert!((a - b).abs() < 1e-10 * a, "heat {t} {r}: {a} {b}");
    }
}

#[test]
fn cross_time_properties() {
    let e = engine(0.75);
    for op in [Operator::Wave, Operator::Heat] {
        for &(t1, t2, r) in &[(1.0, 2.0, 1.0), (0.3, 1.7, 6.0), (2.0, 2.5, 0.1), (1.0, 1.1, 40.0)] {
            let c12 = e.cross_time(op, t1, t2, r).unwrap();
            let c21 = e.cross_time(op, t2, t1, r).unwrap();
            let c11 = e.cross_time(op, t1, t1, r).unwrap();
            let c22 = e.cross_time(op, t2, t2, r).unwrap();
            assert!((c12 - c21).abs() < 1e-12 * c11.max(c22), "{op:?} symmetry {c12} {c21}");
            assert!(c12 * c12 <= c11 * c22 * (1.0 + 1e-12));
            assert!(c11 >= 0.0 && c22 >= 0.0);
        }
    }
    assert_eq!(e.cross_time(Operator::Wave, 0.0, 1.0, 1.0).unwrap(), 0.0);
    assert!(e.cross_time(Operator::Wave, 1.0, 1.0, -1.0).is_err());
}

#[test]
fn cross_time_against_time_inner_product() {
    // <G(t1 - ·), G(t2 - ·)> on [0, max] with zero extension
    let e = engine(0.7);
    use crate::time_fn::TimeFunction;
    let cases = [(1.0, 2.0, 1.0), (1.5, 0.4, 3.0), (1.0, 1.0 + 1.0 / 256.0, 1.0), (1.0, 1.001, 0.2), (0.5, 0.52, 6.0)];
    for &(t1, t2, r) in &cases {
        for op in [Operator::Wave, Operator::Heat] {
            let green = |t| match op {
                Operator::Wave => TimeFunction::wave_green(t, r),
                Operator::Heat => TimeFunction::heat_green(t, r),
            };
            let want = inner_product_time(&green(t1), &green(t2), e.model(), t1.max(t2), TimeBackend::Direct, e.spec()).unwrap().re;
            let got = e.cross_time(op, t1, t2, r).unwrap();
            assert!((got - want).abs() < 1e-8 * want.abs(), "{op:?} {t1} {t2} {r}: {got} vs {want}");
        }
    }
}

#[test]
fn large_radius_closed_form_is_cheap_and_positive() {
    let e = engine(0.75);
    let mut prev = f64::INFINITY;
    for &r in &[1e2, 1e3, 1e4, 1e5] {
        let n = e.n_wave(1.0, r).unwrap();
        let scaled = n * (1.0 + r * r).powf(1.25);
        assert!(n > 0.0 && n < prev);
        // N(1+r²)^{H+1/2} → π c_H t
        assert!((scaled / (PI * e.model().c_h) - 1.0).abs() < 0.05, "r={r}: {scaled}");
        prev = n;
    }
}

#[test]
fn two_pi_int_sin_sq_branches_meet() {
    let a = two_pi_int_sin_sq(0.1 * (1.0 - 1e-15));
    let b = two_pi_int_sin_sq(0.1 * (1.0 + 1e-15));
    assert!((a - b).abs() < 1e-13 * a, "{a} {b}");
}

#[test]
fn heat_kernel_is_reversible_in_time() {
    let e = engine(0.6);
    for &(t, r) in &[(1.0, 0.5), (1.0, 3.0), (0.3, 10.0)] {
        let f = TimeFunction::exp_decay(0.5 * r * r);
        let forward = inner_product_time(&f, &f, e.model(), t, TimeBackend::Direct, e.spec()).unwrap().re;
        let a = e.a_heat(t, r).unwrap();
        assert!((forward - a).abs() < 1e-8 * a, "{t} {r}: {forward} vs {a}");
    }
}
