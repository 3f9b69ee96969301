//! Globally adaptive panel quadrature for integrals of the form
//! ∫ f(t) e^{i g(t)} dt with smooth f and real phase g.
//!
//! Each panel gets either a Levin rule (monotone phase with more than one full
//! turn) or a Gauss-Legendre pair. The panel with the largest error estimate is
//! bisected until the summed estimate falls below
//! max(abs_tol, rel_tol * |I_initial|). The target uses the initial estimate,
//! not the running one, so the refinement sequence does not depend on the
//! tolerances and halving them can only prolong it.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{OscError, Result};
use crate::gauss;
use crate::levin::levin_panel;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub tail_radius: f64,
    pub max_panels: usize,
    pub stationary_split_radius: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            abs_tol: 1e-11,
            rel_tol: 1e-11,
            tail_radius: 32.0,
            max_panels: 4000,
            stationary_split_radius: 1.0,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        let ok = self.abs_tol > 0.0
            && self.rel_tol > 0.0
            && self.tail_radius > 0.0
            && self.max_panels >= 4
            && self.stationary_split_radius > 0.0;
        if ok {
            Ok(())
        } else {
            Err(OscError::InvalidSpec(format!("{self:?}")))
        }
    }

    pub fn with_tol(mut self, abs_tol: f64, rel_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self.rel_tol = rel_tol;
        self
    }

    /// Both tolerances scaled by `factor`.
    pub fn scaled(self, factor: f64) -> Self {
        self.with_tol(self.abs_tol * factor, self.rel_tol * factor)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: Complex64,
    pub error: f64,
    pub panels: usize,
}

impl Estimate {
    pub fn zero() -> Self {
        Estimate {
            value: Complex64::new(0.0, 0.0),
            error: 0.0,
            panels: 0,
        }
    }

    pub fn add(self, o: Estimate) -> Estimate {
        Estimate {
            value: self.value + o.value,
            error: self.error + o.error,
            panels: self.panels + o.panels,
        }
    }
}

pub trait Integrand {
    fn amplitude(&self, t: f64) -> Complex64;

    fn phase(&self, _t: f64) -> f64 {
        0.0
    }

    fn phase_deriv(&self, _t: f64) -> f64 {
        0.0
    }

    fn phase_deriv2(&self, t: f64) -> f64 {
        let h = 1e-4 * (1.0 + t.abs());
        (self.phase_deriv(t + h) - self.phase_deriv(t - h)) / (2.0 * h)
    }
}

/// Integrand built from closures.
pub struct FnIntegrand<F, G, D> {
    pub f: F,
    pub g: G,
    pub dg: D,
}

impl<F, G, D> Integrand for FnIntegrand<F, G, D>
where
    F: Fn(f64) -> Complex64,
    G: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    fn amplitude(&self, t: f64) -> Complex64 {
        (self.f)(t)
    }
    fn phase(&self, t: f64) -> f64 {
        (self.g)(t)
    }
    fn phase_deriv(&self, t: f64) -> f64 {
        (self.dg)(t)
    }
}

const GAUSS_LO: usize = 16;
const GAUSS_HI: usize = 24;
const LEVIN_LO: usize = 12;
const LEVIN_HI: usize = 20;
const LEVIN_MIN_TURN: f64 = 2.0 * std::f64::consts::PI;

struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Panel {
    fn cmp(&self, o: &Self) -> Ordering {
        self.error
            .total_cmp(&o.error)
            .then_with(|| o.a.total_cmp(&self.a))
    }
}

fn gauss_pair<I: Integrand + ?Sized>(f: &I, a: f64, b: f64) -> (Complex64, f64) {
    let eval = |t: f64| f.amplitude(t) * Complex64::from_polar(1.0, f.phase(t));
    let lo: Complex64 = gauss::rule(GAUSS_LO).integrate(a, b, eval);
    let hi: Complex64 = gauss::rule(GAUSS_HI).integrate(a, b, eval);
    (hi, (hi - lo).norm())
}

fn monotone_phase<I: Integrand + ?Sized>(f: &I, a: f64, b: f64) -> bool {
    let ga = f.phase_deriv(a);
    let gb = f.phase_deriv(b);
    let gm = f.phase_deriv(0.5 * (a + b));
    ga != 0.0 && ga.signum() == gb.signum() && ga.signum() == gm.signum()
}

/// Estimate of one panel: (value, error).
pub fn panel_rule<I: Integrand + ?Sized>(f: &I, a: f64, b: f64) -> (Complex64, f64) {
    let turn = (f.phase(b) - f.phase(a)).abs();
    if turn > LEVIN_MIN_TURN && monotone_phase(f, a, b) {
        let amp = |t: f64| f.amplitude(t);
        let g = |t: f64| f.phase(t);
        let dg = |t: f64| f.phase_deriv(t);
        let lo = levin_panel(LEVIN_LO, a, b, &amp, &g, &dg);
        let hi = levin_panel(LEVIN_HI, a, b, &amp, &g, &dg);
        if let (Some(lo), Some(hi)) = (lo, hi) {
            return (hi, (hi - lo).norm());
        }
    }
    gauss_pair(f, a, b)
}

/// Adaptive integration of `f` over consecutive intervals given by `breaks`.
pub fn integrate<I: Integrand + ?Sized>(
    f: &I,
    breaks: &[f64],
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    spec.validate()?;
    let mut pts: Vec<f64> = breaks.iter().copied().filter(|t| t.is_finite()).collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    if pts.len() < 2 {
        return Ok(Estimate::zero());
    }
    let mut heap = BinaryHeap::new();
    let mut initial = Complex64::new(0.0, 0.0);
    for w in pts.windows(2) {
        let (value, error) = panel_rule(f, w[0], w[1]);
        initial += value;
        heap.push(Panel {
            a: w[0],
            b: w[1],
            value,
            error,
        });
    }
    let target = spec.abs_tol.max(spec.rel_tol * initial.norm());
    let mut running: f64 = heap.iter().map(|p| p.error).sum();
    loop {
        if running <= target {
            let exact: f64 = heap.iter().map(|p| p.error).sum();
            if exact <= target {
                break;
            }
            running = exact;
            continue;
        }
        if heap.len() >= spec.max_panels {
            let exact: f64 = heap.iter().map(|p| p.error).sum();
            return Err(OscError::QuadratureNotConverged {
                panels: heap.len(),
                error: exact,
                target,
            });
        }
        let worst = heap.pop().expect("non-empty heap");
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            // cannot split further in floating point
            let exact: f64 = heap.iter().map(|p| p.error).sum::<f64>() + worst.error;
            return Err(OscError::QuadratureNotConverged {
                panels: heap.len() + 1,
                error: exact,
                target,
            });
        }
        running -= worst.error;
        for (a, b) in [(worst.a, mid), (mid, worst.b)] {
            let (value, error) = panel_rule(f, a, b);
            running += error;
            heap.push(Panel { a, b, value, error });
        }
    }
    // fixed summation order: left to right
    let mut panels = heap.into_vec();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let mut value = Complex64::new(0.0, 0.0);
    let mut error = 0.0;
    for p in &panels {
        value += p.value;
        error += p.error;
    }
    Ok(Estimate {
        value,
        error,
        panels: panels.len(),
    })
}

/// Asymptotic value of ∫_T^∞ f e^{ig} dt from two integrations by parts,
/// with the third term as error estimate. Requires g' bounded away from zero
/// and growing on [T, ∞), and f of at most polynomial growth.
pub fn oscillatory_tail<I: Integrand + ?Sized>(f: &I, t: f64) -> Estimate {
    let i = Complex64::new(0.0, 1.0);
    let f1 = |s: f64| f.amplitude(s) / (i * f.phase_deriv(s));
    let step = 1e-3 * t.abs().max(1.0);
    let d1 = |s: f64| (f1(s + step) - f1(s - step)) / (2.0 * step);
    let f2 = |s: f64| d1(s) / (i * f.phase_deriv(s));
    let d2 = (f2(t + 4.0 * step) - f2(t - 4.0 * step)) / (8.0 * step);
    let f3 = d2 / (i * f.phase_deriv(t));
    let term1 = f1(t);
    let term2 = f2(t);
    let e = Complex64::from_polar(1.0, f.phase(t));
    Estimate {
        value: -e * (term1 - term2),
        error: f3.norm() + 1e-6 * term2.norm(),
        panels: 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cubic(
        mu: f64,
    ) -> FnIntegrand<impl Fn(f64) -> Complex64, impl Fn(f64) -> f64, impl Fn(f64) -> f64> {
        FnIntegrand {
            f: |_t: f64| Complex64::new(1.0, 0.0),
            g: move |t: f64| mu * t + t * t * t,
            dg: move |t: f64| mu + 3.0 * t * t,
        }
    }

    #[test]
    fn polynomial_without_phase() {
        let f = FnIntegrand {
            f: |t: f64| Complex64::new(t * t, 0.0),
            g: |_| 0.0,
            dg: |_| 0.0,
        };
        let e = integrate(&f, &[0.0, 3.0], &QuadratureSpec::default()).unwrap();
        assert!((e.value.re - 9.0).abs() < 1e-13);
    }

    #[test]
    fn airy_integral_full_line() {
        // ∫ e^{i(s^3/3 + x s)} ds = 2π Ai(x); integrand is even in s for the
        // cosine part, so 2 ∫_0^∞ cos(s^3/3 + x s) ds = 2π Ai(x).
        for &x in &[-3.0, 0.0, 1.5] {
            let f = FnIntegrand {
                f: |_t: f64| Complex64::new(1.0, 0.0),
                g: move |s: f64| s * s * s / 3.0 + x * s,
                dg: move |s: f64| s * s + x,
            };
            let t = 20.0;
            let mut breaks = vec![0.0, t];
            if x < 0.0 {
                let ts = (-x).sqrt();
                breaks.extend([ts - 0.5, ts, ts + 0.5]);
            }
            let body = integrate(&f, &breaks, &QuadratureSpec::default()).unwrap();
            let tail = oscillatory_tail(&f, t);
            let v = 2.0 * (body.value + tail.value).re;
            let exact = 2.0 * std::f64::consts::PI * crate::airy::airy_ai(x);
            assert!((v - exact).abs() < 1e-9, "x={x}: {v} vs {exact}");
        }
    }

    #[test]
    fn not_converged_is_reported() {
        let spec = QuadratureSpec {
            max_panels: 4,
            ..QuadratureSpec::default()
        }
        .with_tol(1e-15, 1e-15);
        let f = FnIntegrand {
            f: |t: f64| Complex64::new(t.abs().sqrt(), 0.0),
            g: |_| 0.0,
            dg: |_| 0.0,
        };
        let r = integrate(&f, &[-1.0, 1.0], &spec);
        assert!(matches!(r, Err(OscError::QuadratureNotConverged { .. })));
    }

    #[test]
    fn tighter_tolerance_never_raises_error_estimate() {
        let f = cubic(-7.0);
        let mut prev = f64::INFINITY;
        let mut spec = QuadratureSpec::default().with_tol(1e-4, 1e-4);
        for _ in 0..12 {
            let e = integrate(&f, &[0.0, 1.0, 1.5, 2.0, 6.0], &spec).unwrap();
            assert!(e.error <= prev);
            prev = e.error;
            spec = spec.scaled(0.5);
        }
    }

    #[test]
    fn tail_matches_direct_integration() {
        let f = FnIntegrand {
            f: |t: f64| Complex64::new(1.0 / t, 0.0),
            g: |t: f64| 2.0 * t + t * t * t,
            dg: |t: f64| 2.0 + 3.0 * t * t,
        };
        let spec = QuadratureSpec::default().with_tol(1e-14, 1e-14);
        let near =
            integrate(&f, &[10.0, 40.0], &spec).unwrap().value + oscillatory_tail(&f, 40.0).value;
        let far = oscillatory_tail(&f, 10.0);
        assert!((near - far.value).norm() < 10.0 * far.error + 1e-14);
    }
}
