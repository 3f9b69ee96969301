use num_complex::Complex64;
use oscillatory::pv::{locate_vanishing_cubic, pv_cubic_estimate, pv_cubic_multiplier};
use oscillatory::table::{multiplier_m, MultiplierTable};
use oscillatory::QuadratureSpec;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_xi(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let x1: f64 = rng.gen_range(-20.0..20.0);
    let x2: f64 = rng.gen_range(-50.0..50.0);
    (x1, x2)
}

#[test]
fn homogeneity_on_seeded_samples() {
    let table = MultiplierTable::shared();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let xi = random_xi(&mut rng);
        let rho = 2f64.powf(rng.gen_range(-4.0..4.0));
        let a = multiplier_m(xi, table).unwrap();
        let b = multiplier_m((rho * xi.0, rho.powi(3) * xi.1), table).unwrap();
        assert!((a - b).norm() < 1e-8, "{xi:?} rho={rho}: {a} vs {b}");
    }
}

#[test]
fn oddness_on_seeded_samples() {
    let table = MultiplierTable::shared();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..100 {
        let xi = random_xi(&mut rng);
        let a = multiplier_m(xi, table).unwrap();
        let b = multiplier_m((-xi.0, -xi.1), table).unwrap();
        assert!((a + b).norm() < 1e-8);
    }
}

#[test]
fn real_part_vanishes() {
    let q = QuadratureSpec::default();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..100 {
        let mu: f64 = rng.gen_range(-30.0..30.0);
        let m = pv_cubic_multiplier(mu, &q).unwrap();
        assert!(m.re.abs() <= q.abs_tol);
    }
}

#[test]
fn vanishing_cubic_estimate_shape() {
    let q = QuadratureSpec::default();
    let table = MultiplierTable::shared();
    let alpha = locate_vanishing_cubic(&q).unwrap().alpha;
    let m = multiplier_m((2.0, 8.0 * alpha), table).unwrap();
    assert!(m.norm() < 1e-6, "{m}");

    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let mut c_fit = 0.0f64;
    for i in 0..100 {
        let x1: f64 = rng.gen_range(1.0..8.0) * if i % 2 == 0 { 1.0 } else { -1.0 };
        // half the samples hug the vanishing cubic
        let ratio = if i % 4 < 2 {
            alpha + rng.gen_range(-0.05..0.05)
        } else {
            rng.gen_range(-40.0..40.0)
        };
        let xi = (x1, ratio * x1.powi(3));
        let d = (alpha - xi.1 / xi.0.powi(3)).abs().min(1.0);
        let v = multiplier_m(xi, table).unwrap().norm();
        c_fit = c_fit.max(v / d);
    }
    assert!(c_fit.is_finite() && c_fit < 50.0, "fitted C = {c_fit}");
}

/// 2i ∫_0^∞ sin(μt + t³)/t dt by Romberg-extrapolated trapezoid sums on
/// [0, T] plus two integration-by-parts terms for the tail.
fn trapezoid_oracle(mu: f64, t_end: f64, nodes: usize) -> (f64, f64) {
    let f = |t: f64| {
        if t == 0.0 {
            mu
        } else {
            (mu * t + t * t * t).sin() / t
        }
    };
    let n = nodes - 1;
    let h = t_end / n as f64;
    let vals: Vec<f64> = (0..=n).map(|i| f(i as f64 * h)).collect();
    let trap = |stride: usize| {
        let mut s = 0.5 * (vals[0] + vals[n]);
        for i in (stride..n).step_by(stride) {
            s += vals[i];
        }
        s * h * stride as f64
    };
    let (t1, t2, t4) = (trap(1), trap(2), trap(4));
    let r1 = (4.0 * t1 - t2) / 3.0;
    let r2 = (4.0 * t2 - t4) / 3.0;
    let t = t_end;
    let g = mu * t + t * t * t;
    let dg = mu + 3.0 * t * t;
    let u = 1.0 / (t * dg);
    let du = -(mu + 9.0 * t * t) / (t * dg).powi(2);
    let tail = u * g.cos() - du / dg * g.sin();
    // R1 carries an O(h⁴) error, estimated by (R1 - R2)/15
    (2.0 * (r1 + tail), 2.0 * (r1 - r2).abs() / 15.0)
}

#[test]
fn engine_agrees_with_trapezoid_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..20 {
        let mu: f64 = rng.gen_range(-10.0..10.0);
        let tol = 10f64.powf(rng.gen_range(-10.0..-6.0));
        let q = QuadratureSpec::default().with_tol(tol, tol);
        let est = pv_cubic_estimate(mu, &q).unwrap();
        let (oracle, oracle_err) = trapezoid_oracle(mu, 2.0 * q.tail_radius, 1_000_001);
        let diff = (est.value - Complex64::new(0.0, oracle)).norm();
        assert!(
            diff <= 5.0 * (est.error + oracle_err),
            "mu={mu} tol={tol}: diff {diff}, estimate {} oracle {oracle_err}",
            est.error
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn table_is_odd_and_homogeneous(
        x1 in -30.0f64..30.0,
        x2 in prop_oneof![-60.0f64..-1e-3, 1e-3f64..60.0],
        e in -4.0f64..4.0,
    ) {
        let table = MultiplierTable::shared();
        let rho = 2f64.powf(e);
        let a = multiplier_m((x1, x2), table).unwrap();
        let b = multiplier_m((rho * x1, rho.powi(3) * x2), table).unwrap();
        let c = multiplier_m((-x1, -x2), table).unwrap();
        prop_assert!(a.re == 0.0);
        prop_assert!((a - b).norm() < 1e-8);
        prop_assert!((a + c).norm() < 1e-8);
    }
}
