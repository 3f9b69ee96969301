//! The principal-value multiplier m(μ, 1) = p.v. ∫ e^{i(μt + t³)} dt/t.
//!
//! The phase and the weight are both odd, so the cosine part cancels and
//! m(μ, 1) = 2i ∫_0^∞ sin(μt + t³)/t dt exactly. Near t = 0 the integrand is
//! the smooth function (μ + t²) sinc(t(μ + t²)); beyond t0 the imaginary part
//! of ∫ e^{ig}/t is taken from the panel engine, and beyond the tail radius
//! from two integrations by parts.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::airy::{airy_ai, airy_ai_integral_oscillatory};
use crate::error::{OscError, Result};
use crate::quad::{integrate, oscillatory_tail, Estimate, FnIntegrand, QuadratureSpec};

/// 3^{-1/3}: the substitution t = 3^{-1/3} s turns t³ into s³/3.
pub const AIRY_ARG_SCALE: f64 = 0.693_361_274_350_634_8;
/// 2π 3^{-1/3}, so that dm/dμ(μ, 1) = i AIRY_DERIV_SCALE Ai(AIRY_ARG_SCALE μ).
pub const AIRY_DERIV_SCALE: f64 = 2.0 * PI * AIRY_ARG_SCALE;

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Panel breakpoints on [t0, t_end] for the phase μt + t³.
fn cubic_breaks(mu: f64, t0: f64, t_end: f64, radius: f64) -> Vec<f64> {
    let mut b = vec![t0, t_end];
    if mu < 0.0 {
        let ts = (-mu / 3.0).sqrt();
        let w = (radius * (-mu / 3.0).powf(-0.25)).min(1.0);
        for t in [ts - w, ts, ts + w] {
            if t > t0 && t < t_end {
                b.push(t);
            }
        }
    }
    if 1.0 > t0 && 1.0 < t_end {
        b.push(1.0);
    }
    b
}

/// Radius beyond which the analytic tail is used.
fn tail_start(mu: f64, quad: &QuadratureSpec) -> f64 {
    let ts = if mu < 0.0 { (-mu / 3.0).sqrt() } else { 0.0 };
    quad.tail_radius.max(2.0 * ts + 2.0)
}

fn cubic_phase(mu: f64) -> (impl Fn(f64) -> f64, impl Fn(f64) -> f64) {
    (
        move |t: f64| t * (mu + t * t),
        move |t: f64| mu + 3.0 * t * t,
    )
}

/// ∫_0^∞ sin(μt + t³)/t dt with its error estimate (real part of the result).
fn half_line_sine(mu: f64, quad: &QuadratureSpec) -> Result<Estimate> {
    let half = quad.scaled(0.5);
    let t0 = 1.0f64.min(1.0 / (1.0 + mu.abs()));
    let near = FnIntegrand {
        f: move |t: f64| Complex64::new((mu + t * t) * sinc(t * (mu + t * t)), 0.0),
        g: |_| 0.0,
        dg: |_| 0.0,
    };
    let a = integrate(&near, &[0.0, t0], &half)?;
    let t_end = tail_start(mu, quad);
    let (g, dg) = cubic_phase(mu);
    let far = FnIntegrand {
        f: |t: f64| Complex64::new(1.0 / t, 0.0),
        g,
        dg,
    };
    let b = integrate(
        &far,
        &cubic_breaks(mu, t0, t_end, quad.stationary_split_radius),
        &half,
    )?;
    let c = oscillatory_tail(&far, t_end);
    Ok(Estimate {
        value: Complex64::new(a.value.re + (b.value + c.value).im, 0.0),
        error: a.error + b.error + c.error,
        panels: a.panels + b.panels,
    })
}

/// m(μ, 1) with error estimate. The real part is exactly zero.
pub fn pv_cubic_estimate(mu: f64, quad: &QuadratureSpec) -> Result<Estimate> {
    quad.validate()?;
    if !mu.is_finite() {
        return Err(OscError::DomainError(format!(
            "mu must be finite, got {mu}"
        )));
    }
    let s = half_line_sine(mu, quad)?;
    Ok(Estimate {
        value: Complex64::new(0.0, 2.0 * s.value.re),
        error: 2.0 * s.error,
        panels: s.panels,
    })
}

pub fn pv_cubic_multiplier(mu: f64, quad: &QuadratureSpec) -> Result<Complex64> {
    pv_cubic_estimate(mu, quad).map(|e| e.value)
}

/// dm/dμ(μ, 1) = 2i ∫_0^∞ cos(μt + t³) dt, by quadrature.
pub fn pv_cubic_derivative(mu: f64, quad: &QuadratureSpec) -> Result<Estimate> {
    quad.validate()?;
    let t_end = tail_start(mu, quad);
    let (g, dg) = cubic_phase(mu);
    let f = FnIntegrand {
        f: |_t: f64| Complex64::new(1.0, 0.0),
        g,
        dg,
    };
    let body = integrate(
        &f,
        &cubic_breaks(mu, 0.0, t_end, quad.stationary_split_radius),
        quad,
    )?;
    let tail = oscillatory_tail(&f, t_end);
    let c = (body.value + tail.value).re;
    Ok(Estimate {
        value: Complex64::new(0.0, 2.0 * c),
        error: 2.0 * (body.error + tail.error),
        panels: body.panels,
    })
}

/// Centered difference (m(μ+h,1) - m(μ-h,1)) / (2h), evaluated as the single
/// integral (2i/h) ∫_0^∞ cos(μt + t³) sin(ht)/t dt so that no digits are lost
/// to cancellation between the two multiplier values.
pub fn centered_difference(mu: f64, h: f64, quad: &QuadratureSpec) -> Result<Estimate> {
    quad.validate()?;
    let t_end = tail_start(mu, quad);
    let (g, dg) = cubic_phase(mu);
    let f = FnIntegrand {
        f: move |t: f64| Complex64::new(h * sinc(h * t), 0.0),
        g,
        dg,
    };
    let body = integrate(
        &f,
        &cubic_breaks(mu, 0.0, t_end, quad.stationary_split_radius),
        quad,
    )?;
    let tail = oscillatory_tail(&f, t_end);
    let j = (body.value + tail.value).re;
    Ok(Estimate {
        value: Complex64::new(0.0, 2.0 * j / h),
        error: 2.0 * (body.error + tail.error) / h,
        panels: body.panels,
    })
}

/// The derivative predicted by the Airy identity, 2πi 3^{-1/3} Ai(3^{-1/3} μ).
pub fn airy_identity_derivative(mu: f64) -> Complex64 {
    Complex64::new(0.0, AIRY_DERIV_SCALE * airy_ai(AIRY_ARG_SCALE * mu))
}

/// |μ| beyond which `pv_cubic_asymptotic` applies.
pub const ASYMPTOTIC_MU: f64 = 64.0;

/// m(μ, 1) for |μ| >= ASYMPTOTIC_MU from Im m = π - 2π ∫_{3^{-1/3}μ}^∞ Ai.
/// For μ >= 64 the Airy tail is below 1e-80, so m = iπ to double precision.
/// For μ <= -64 the integral is 1 - ∫_y^∞ Ai(-u) du with y = -3^{-1/3}μ >= 44,
/// evaluated by its asymptotic series.
pub fn pv_cubic_asymptotic(mu: f64) -> Option<Complex64> {
    if mu >= ASYMPTOTIC_MU {
        Some(Complex64::new(0.0, PI))
    } else if mu <= -ASYMPTOTIC_MU {
        let y = -AIRY_ARG_SCALE * mu;
        Some(Complex64::new(
            0.0,
            -PI + 2.0 * PI * airy_ai_integral_oscillatory(y),
        ))
    } else {
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VanishingCubic {
    pub mu0: f64,
    pub alpha: f64,
    pub sign_changes: usize,
}

pub const ZERO_SCAN_LO: f64 = -10.0;
pub const ZERO_SCAN_HI: f64 = 10.0;
const ZERO_SCAN_POINTS: usize = 401;

/// Unique sign change mu0 of Im m(·, 1) on [-10, 10] and alpha = mu0^{-3}.
pub fn locate_vanishing_cubic(quad: &QuadratureSpec) -> Result<VanishingCubic> {
    let grid: Vec<f64> = (0..ZERO_SCAN_POINTS)
        .map(|i| {
            ZERO_SCAN_LO + (ZERO_SCAN_HI - ZERO_SCAN_LO) * i as f64 / (ZERO_SCAN_POINTS - 1) as f64
        })
        .collect();
    let vals: Vec<f64> = grid
        .par_iter()
        .map(|&mu| pv_cubic_multiplier(mu, quad).map(|m| m.im))
        .collect::<Result<_>>()?;
    let mut brackets = Vec::new();
    for i in 0..grid.len() - 1 {
        if vals[i] == 0.0 || vals[i].signum() != vals[i + 1].signum() {
            brackets.push(i);
        }
    }
    if brackets.len() != 1 {
        return Err(OscError::RootNotBracketed {
            sign_changes: brackets.len(),
        });
    }
    let i = brackets[0];
    let (mut lo, mut hi) = (grid[i], grid[i + 1]);
    let mut flo = vals[i];
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        let fm = pv_cubic_multiplier(mid, quad)?.im;
        if fm == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    let mu0 = 0.5 * (lo + hi);
    Ok(VanishingCubic {
        mu0,
        alpha: mu0.powi(-3),
        sign_changes: 1,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrosscheckReport {
    pub h: f64,
    pub points: usize,
    pub max_rel_error: f64,
    pub worst_mu: f64,
    pub rel_errors: Vec<f64>,
}

/// Largest relative discrepancy over the grid between the centered difference
/// of m(·, 1) with step h (the grid spacing) and 2πi 3^{-1/3} Ai(3^{-1/3} μ).
pub fn airy_crosscheck(mu_grid: &[f64], quad: &QuadratureSpec) -> Result<CrosscheckReport> {
    if mu_grid.is_empty() {
        return Err(OscError::DomainError("empty grid".into()));
    }
    if mu_grid.iter().any(|m| !(-10.0..=10.0).contains(m)) {
        return Err(OscError::DomainError("grid must lie in [-10, 10]".into()));
    }
    let h = if mu_grid.len() > 1 {
        mu_grid
            .windows(2)
            .map(|w| (w[1] - w[0]).abs())
            .filter(|d| *d > 0.0)
            .fold(f64::INFINITY, f64::min)
    } else {
        1e-3
    };
    if !(h <= 1e-3 * (1.0 + 1e-9)) {
        return Err(OscError::DomainError(format!(
            "grid spacing {h} exceeds 1e-3"
        )));
    }
    let rel_errors: Vec<f64> = mu_grid
        .par_iter()
        .map(|&mu| {
            let d = centered_difference(mu, h, quad)?.value;
            let a = airy_identity_derivative(mu);
            Ok((d - a).norm() / a.norm())
        })
        .collect::<Result<_>>()?;
    let (mut worst, mut worst_mu) = (0.0, mu_grid[0]);
    for (e, &mu) in rel_errors.iter().zip(mu_grid) {
        if *e > worst {
            worst = *e;
            worst_mu = mu;
        }
    }
    Ok(CrosscheckReport {
        h,
        points: mu_grid.len(),
        max_rel_error: worst,
        worst_mu,
        rel_errors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss;

    /// Im m(μ,1) = π - 2π ∫_{3^{-1/3}μ}^∞ Ai, with the Airy integral done by
    /// dense Gauss-Legendre on the series/asymptotic Ai.
    fn airy_oracle(mu: f64) -> f64 {
        let x0 = AIRY_ARG_SCALE * mu;
        let r = gauss::rule(32);
        let mut s = 0.0;
        let n = 400;
        let top = 30.0;
        for k in 0..n {
            let a = x0 + (top - x0) * k as f64 / n as f64;
            let b = x0 + (top - x0) * (k + 1) as f64 / n as f64;
            s += r.integrate(a, b, airy_ai);
        }
        PI - 2.0 * PI * s
    }

    #[test]
    fn asymptotic_branch_matches_quadrature() {
        let q = QuadratureSpec::default();
        for mu in [-64.0, -71.3, -150.0, -600.0, 64.0, 90.0, 400.0] {
            let a = pv_cubic_asymptotic(mu).unwrap();
            let d = pv_cubic_multiplier(mu, &q).unwrap();
            assert!((a - d).norm() < 1e-9, "mu={mu}: {a} vs {d}");
        }
        assert!(pv_cubic_asymptotic(10.0).is_none());
    }

    #[test]
    fn matches_airy_integral_oracle() {
        let q = QuadratureSpec::default();
        for &mu in &[-20.0, -9.3, -3.3721, -0.59, 0.0, 0.7, 4.0, 12.0, 50.0] {
            let m = pv_cubic_estimate(mu, &q).unwrap();
            let o = airy_oracle(mu);
            assert_eq!(m.value.re, 0.0);
            assert!(
                (m.value.im - o).abs() < 1e-9,
                "mu={mu}: {} vs {o}",
                m.value.im
            );
            assert!(m.error < 1e-9);
        }
    }

    #[test]
    fn large_mu_approaches_hilbert_value() {
        let m = pv_cubic_multiplier(50.0, &QuadratureSpec::default()).unwrap();
        assert!((m.im - PI).abs() < 0.05);
        let m = pv_cubic_multiplier(-60.0, &QuadratureSpec::default()).unwrap();
        assert!((m.im + PI).abs() < 0.5);
    }

    #[test]
    fn derivative_matches_airy_identity() {
        let q = QuadratureSpec::default();
        for &mu in &[-30.0, -5.0, -1.0, 0.0, 0.5, 3.0, 9.0] {
            let d = pv_cubic_derivative(mu, &q).unwrap();
            let a = airy_identity_derivative(mu);
            assert!((d.value - a).norm() < 1e-9, "mu={mu}: {} vs {}", d.value, a);
        }
    }

    #[test]
    fn centered_difference_consistent_with_values() {
        let q = QuadratureSpec::default().with_tol(1e-13, 1e-13);
        let (mu, h) = (-2.0, 1e-2);
        let direct = (pv_cubic_multiplier(mu + h, &q).unwrap()
            - pv_cubic_multiplier(mu - h, &q).unwrap())
            / (2.0 * h);
        let d = centered_difference(mu, h, &q).unwrap().value;
        assert!((direct - d).norm() < 1e-9);
    }

    #[test]
    fn halving_tolerance_never_raises_estimate() {
        for &mu in &[-8.0, -0.3, 2.0] {
            let mut spec = QuadratureSpec::default().with_tol(1e-3, 1e-3);
            let mut prev = f64::INFINITY;
            for _ in 0..10 {
                let e = pv_cubic_estimate(mu, &spec).unwrap();
                assert!(e.error <= prev, "mu={mu}");
                prev = e.error;
                spec = spec.scaled(0.5);
            }
        }
    }
}
