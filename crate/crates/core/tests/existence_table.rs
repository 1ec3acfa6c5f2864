use fracwave_core::spectral::{check_condition, numerical_condition, Condition, SpectralMeasure};
use fracwave_core::QuadratureSpec;

fn rows() -> Vec<(SpectralMeasure, Condition)> {
    let mut out = Vec::new();
    for &h in &[0.55, 0.75, 0.95] {
        for &d in &[1usize, 2, 3, 5] {
            for cond in [Condition::Wave(h), Condition::Heat(h)] {
                let th = cond.threshold(d);
                for a in [th - 0.1, th + 0.1] {
                    if let Ok(m) = SpectralMeasure::riesz(a, d) {
                        out.push((m, cond));
                    }
                    if let Ok(m) = SpectralMeasure::bessel(a, d) {
                        out.push((m, cond));
                    }
                }
            }
        }
    }
    out
}

#[test]
fn numerical_matches_closed_form_near_thresholds() {
    let spec = QuadratureSpec::default();
    let rows = rows();
    assert!(rows.len() > 40);
    for (mu, cond) in rows {
        let closed = check_condition(&mu, cond, &spec).unwrap();
        let num = numerical_condition(&mu, cond, &spec).unwrap();
        assert!(num.conclusive, "{} {cond:?}: {:?}", mu.describe(), num.trace);
        assert_eq!(closed.holds, num.holds, "{} {cond:?}: {:?}", mu.describe(), num.trace);
    }
}

#[test]
fn on_threshold_is_flagged_divergent() {
    let spec = QuadratureSpec::default();
    for &(h, d) in &[(0.75, 3usize), (0.55, 2), (0.95, 5)] {
        for cond in [Condition::Wave(h), Condition::Heat(h)] {
            let th = cond.threshold(d);
            if let Ok(mu) = SpectralMeasure::riesz(th, d) {
                let num = numerical_condition(&mu, cond, &spec).unwrap();
                assert!(num.conclusive && !num.holds, "{} {cond:?}", mu.describe());
            }
        }
    }
}
