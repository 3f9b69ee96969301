use sharpness::decay::{circle_sup, DecayConfig};
use sharpness::{decay_scan, dyadic_radii, Curve};

#[test]
fn cubic_at_zero_order() {
    let scan = decay_scan(
        Curve::Cubic,
        0.0,
        &dyadic_radii(10, 22),
        &DecayConfig::default(),
    )
    .unwrap();
    assert!(scan.pass, "{:?} {:?}", scan.angular, scan.vertical);
    assert!((scan.angular.slope + 1.0 / 6.0).abs() < 0.05);
    assert!((scan.vertical.slope + 1.0 / 6.0).abs() < 0.05);
    for s in &scan.samples {
        assert!(s.sup >= s.vertical);
    }
    let csv = scan.to_csv();
    assert!(csv.starts_with("x,value,predicted,residual\n"));
    assert_eq!(csv.lines().count(), 14);
}

#[test]
fn parabola_at_zero_order() {
    let scan = decay_scan(
        Curve::Parabola,
        0.0,
        &dyadic_radii(10, 22),
        &DecayConfig::default(),
    )
    .unwrap();
    assert!(scan.pass, "{:?} {:?}", scan.angular, scan.vertical);
    assert!((scan.angular.slope + 0.25).abs() < 0.05);
}

#[test]
fn log_endpoint_grows_like_log_r() {
    let scan = decay_scan(
        Curve::Log,
        -0.5,
        &dyadic_radii(10, 22),
        &DecayConfig::default(),
    )
    .unwrap();
    let fit = scan.log_fit.unwrap();
    assert!(
        fit.coefficient > 0.0 && fit.max_rel_residual < 0.1,
        "{fit:?}"
    );
    let scaled: Vec<f64> = scan
        .samples
        .iter()
        .map(|s| s.sup * s.radius.cbrt())
        .collect();
    assert!(scaled.last() > scaled.first());
}

#[test]
fn sup_is_symmetric_under_reflection() {
    let cfg = DecayConfig::default();
    let spec = Curve::Cubic.spec(0.25);
    let r = 2f64.powi(14);
    let s = circle_sup(&spec, r, &cfg).unwrap();
    let m = |xi: (f64, f64)| {
        oscillatory::fractional_multiplier(xi, &spec, &cfg.bump, &cfg.quad)
            .unwrap()
            .norm()
    };
    let (a, b) = s.argmax;
    assert!((m((-a, -b)) - s.sup).abs() < 1e-9 * s.sup);
}
