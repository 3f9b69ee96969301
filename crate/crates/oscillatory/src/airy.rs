//! Airy function Ai on the real line.
//!
//! On [-10, 6] the Maclaurin series is summed in double-double arithmetic, so
//! the cancellation between the two power series (terms reach 1e9 at x = -10)
//! costs nothing visible in f64. Outside that window the standard asymptotic
//! expansions take over. The switch on the negative side is at -10 rather than
//! -6: at -6 the oscillatory expansion is only accurate to about 1e-9, while at
//! -10 its optimally truncated error is below 1e-17.

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;

use crate::dd::DD;

/// Above this point the decaying asymptotic expansion is used.
pub const SWITCH_POS: f64 = 6.0;
/// Below this point the oscillatory (modulus/phase) expansion is used.
pub const SWITCH_NEG: f64 = -10.0;

/// Ai(0) split into two doubles.
const AI0: DD = DD::new(0.3550280538878172, 2.05233632436212e-17);
/// -Ai'(0) split into two doubles.
const MINUS_AIP0: DD = DD::new(0.2588194037928068, -2.522243111610832e-17);

const MAX_TERMS: usize = 400;

pub fn airy_ai(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x > SWITCH_POS {
        airy_ai_decaying(x)
    } else if x < SWITCH_NEG {
        airy_ai_oscillatory(-x)
    } else {
        airy_ai_series(x)
    }
}

/// Maclaurin series Ai(x) = c1 f(x) - c2 g(x), summed in double-double.
pub fn airy_ai_series(x: f64) -> f64 {
    let x3 = DD::from_f64(x).mul_f64(x).mul_f64(x);
    let mut tf = DD::from_f64(1.0);
    let mut tg = DD::from_f64(x);
    let mut f = tf;
    let mut g = tg;
    for k in 1..MAX_TERMS {
        let kf = k as f64;
        tf = tf.mul(x3).div_f64((3.0 * kf - 1.0) * (3.0 * kf));
        tg = tg.mul(x3).div_f64((3.0 * kf) * (3.0 * kf + 1.0));
        f = f.add(tf);
        g = g.add(tg);
        let scale = f.abs_hi().max(g.abs_hi()).max(1.0);
        if 9.0 * kf * kf > x3.hi.abs() && tf.abs_hi() + tg.abs_hi() < 1e-34 * scale {
            break;
        }
    }
    AI0.mul(f).sub(MINUS_AIP0.mul(g)).to_f64()
}

/// Coefficients u_k of the Airy asymptotic expansions.
fn u_coeff(n: usize) -> Vec<f64> {
    let mut u = vec![1.0; n];
    for k in 1..n {
        let kf = k as f64;
        u[k] = u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
            / ((2.0 * kf - 1.0) * 216.0 * kf);
    }
    u
}

fn u_table() -> &'static [f64] {
    use std::sync::OnceLock;
    static U: OnceLock<Vec<f64>> = OnceLock::new();
    U.get_or_init(|| u_coeff(80))
}

/// Ai(x) for large positive x, optimally truncated.
pub fn airy_ai_decaying(x: f64) -> f64 {
    let zeta = 2.0 / 3.0 * x * x.sqrt();
    let u = u_table();
    let mut sum = 1.0;
    let mut prev = f64::INFINITY;
    let mut pow = 1.0;
    for &uk in u.iter().skip(1) {
        pow /= -zeta;
        let term = uk * pow;
        if term.abs() >= prev || term.abs() < 1e-18 {
            break;
        }
        sum += term;
        prev = term.abs();
    }
    (-zeta).exp() / (2.0 * PI.sqrt() * x.powf(0.25)) * sum
}

/// The slowly varying factors P(zeta), Q(zeta) of the oscillatory expansion.
pub fn airy_pq(zeta: f64) -> (f64, f64) {
    let u = u_table();
    let mut p = 1.0;
    let mut q = 0.0;
    let mut prev = f64::INFINITY;
    let mut pow = 1.0;
    for k in 1..u.len() {
        pow /= zeta;
        let term = u[k] * pow;
        if term.abs() >= prev || term.abs() < 1e-18 {
            break;
        }
        prev = term.abs();
        // signs follow (-1)^m u_{2m} and (-1)^m u_{2m+1}
        let m = k / 2;
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * term;
        } else {
            q += sign * term;
        }
    }
    (p, q)
}

/// Smooth amplitude A(y) and phase zeta(y) = (2/3) y^{3/2} with
/// Ai(-y) = Re[A(y) e^{i zeta(y)}] for y > 0 large.
pub fn airy_modulus_phase(y: f64) -> (Complex64, f64) {
    let zeta = 2.0 / 3.0 * y * y.sqrt();
    let (p, q) = airy_pq(zeta);
    let amp =
        Complex64::new(p, -q) * Complex64::from_polar(1.0, -FRAC_PI_4) / (PI.sqrt() * y.powf(0.25));
    (amp, zeta)
}

/// Ai(-y) for large positive y.
pub fn airy_ai_oscillatory(y: f64) -> f64 {
    let (amp, zeta) = airy_modulus_phase(y);
    (amp * Complex64::from_polar(1.0, zeta)).re
}

/// ∫_y^∞ Ai(-u) du for large positive y. Writing Ai(-u) = Re[A e^{iζ}] and
/// changing variable to ζ, the integrand is a sum of powers ζ^{-k-1/2} times
/// e^{iζ}; repeated integration by parts then gives the series
/// i e^{iZ} K Σ_n (-i)^n e_n Z^{-n-1/2}, e_n = Σ_{k<=n} u_k (k+1/2)_{n-k},
/// K = (2/(3π))^{1/2} e^{-iπ/4}, optimally truncated. Accurate to 1e-12
/// for y >= 14.
pub fn airy_ai_integral_oscillatory(y: f64) -> f64 {
    let z = 2.0 / 3.0 * y * y.sqrt();
    let u = u_table();
    let mut sum = Complex64::new(0.0, 0.0);
    let mut prev = f64::INFINITY;
    let mut zpow = z.powf(-0.5);
    let mut phase = Complex64::new(1.0, 0.0);
    for n in 0..u.len() {
        let mut e = 0.0;
        for (k, uk) in u.iter().enumerate().take(n + 1) {
            let mut rising = 1.0;
            for j in 0..n - k {
                rising *= k as f64 + 0.5 + j as f64;
            }
            e += uk * rising;
        }
        let term = e * zpow;
        if term.abs() >= prev {
            break;
        }
        sum += phase * term;
        if term.abs() < 1e-18 * sum.norm() {
            break;
        }
        prev = term.abs();
        zpow /= z;
        phase *= Complex64::new(0.0, -1.0);
    }
    let k = (2.0 / (3.0 * PI)).sqrt() * Complex64::from_polar(1.0, -FRAC_PI_4);
    (Complex64::new(0.0, 1.0) * Complex64::from_polar(1.0, z) * k * sum).re
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oscillatory_integral_closes_the_unit_mass() {
        // ∫_{-y}^{∞} Ai + ∫_y^∞ Ai(-u) du = 1
        for y in [14.0, 25.0, 44.0] {
            let mut s = 0.0;
            let panels = 4000;
            let (a, b) = (-y, 30.0);
            for p in 0..panels {
                let lo = a + (b - a) * p as f64 / panels as f64;
                let hi = a + (b - a) * (p + 1) as f64 / panels as f64;
                s += crate::gauss::rule(16).integrate(lo, hi, airy_ai);
            }
            let total = s + airy_ai_integral_oscillatory(y);
            assert!((total - 1.0).abs() < 1e-12, "y={y}: {total}");
        }
    }

    #[test]
    fn oscillatory_integral_derivative() {
        for y in [12.0, 30.0, 100.0] {
            let h = 1e-5;
            let fd = (airy_ai_integral_oscillatory(y + h) - airy_ai_integral_oscillatory(y - h))
                / (2.0 * h);
            assert!((fd + airy_ai(-y)).abs() < 1e-8, "y={y}");
        }
    }

    /// Plain f64 Maclaurin series with a fixed number of terms.
    fn maclaurin_oracle(x: f64, terms: usize) -> f64 {
        let c1 = 0.355_028_053_887_817_24;
        let c2 = 0.258_819_403_792_806_8;
        let mut f = 0.0;
        let mut g = 0.0;
        let mut tf = 1.0;
        let mut tg = x;
        for k in 0..terms {
            f += tf;
            g += tg;
            let kf = (k + 1) as f64;
            tf *= x * x * x / ((3.0 * kf - 1.0) * (3.0 * kf));
            tg *= x * x * x / ((3.0 * kf) * (3.0 * kf + 1.0));
        }
        c1 * f - c2 * g
    }

    #[test]
    fn values_at_zero_and_one() {
        assert!((airy_ai(0.0) - maclaurin_oracle(0.0, 30)).abs() < 1e-15);
        assert!((airy_ai(1.0) - maclaurin_oracle(1.0, 30)).abs() < 1e-15);
        assert!((airy_ai(0.0) - 0.355028053887817).abs() < 1e-15);
        assert!((airy_ai(1.0) - 0.135292416312881).abs() < 1e-15);
    }

    #[test]
    fn rapid_decay_at_twenty() {
        let v = airy_ai(20.0);
        assert!(v > 0.0 && v < 1e-8);
        assert!((v / 1.6916728686705404e-27 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reference_values() {
        let refs = [
            (-100.0, 0.1767533932395529),
            (-50.0, -0.1618814236123209),
            (-20.0, -0.1764061270779847),
            (-15.0, 0.2782174908708289),
            (-10.0, 0.04024123848644319),
            (-9.5, 0.3191032477191282),
            (-8.0, -0.0527050503563862),
            (-6.0, -0.3291451736298231),
            (-3.0, -0.37881429367765806),
            (-1.0, 0.5355608832923521),
            (3.0, 0.006591139357460719),
            (5.9, 1.2747094509184477e-05),
            (6.0, 9.947694360252889e-06),
            (6.1, 7.747731032448435e-06),
            (10.0, 1.1047532552898686e-10),
        ];
        for (x, v) in refs {
            assert!(
                (airy_ai(x) - v).abs() < 1e-14,
                "x={x}: {} vs {v}",
                airy_ai(x)
            );
        }
    }

    #[test]
    fn branches_agree_in_overlap() {
        for i in 0..=40 {
            let x = 5.5 + 1.5 * i as f64 / 40.0;
            let d = (airy_ai_series(x) - airy_ai_decaying(x)).abs();
            assert!(d < 1e-12, "x={x} d={d}");
        }
        for i in 0..=40 {
            let y = 10.0 + 2.0 * i as f64 / 40.0;
            let d = (airy_ai_series(-y) - airy_ai_oscillatory(y)).abs();
            assert!(d < 1e-12, "y={y} d={d}");
        }
    }

    #[test]
    fn satisfies_airy_equation() {
        let h = 1e-3;
        for i in 0..60 {
            let x = -20.0 + 0.5 * i as f64;
            let d2 = (airy_ai(x + h) - 2.0 * airy_ai(x) + airy_ai(x - h)) / (h * h);
            assert!(
                (d2 - x * airy_ai(x)).abs() < 1e-5 * (1.0 + x.abs()),
                "x={x}"
            );
        }
    }
}
