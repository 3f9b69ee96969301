//! The function f₀ with f̂₀(ξ) = Σ_k c_k χ̂(ξ₁ − n_k) χ̂(ξ₂ − α n_k³), n_k = 2^k,
//! which lies in L² but in no H^s (s > 0), while 𝓗f₀ lies in H^{s₀}.
//!
//! Everything is computed on the frequency side. χ̂ = ψ̂² is the transform of
//! the autocorrelation bump, and each bump is integrated over a window of
//! half-width `WINDOW` around its center. Norms use the unitary convention,
//! ‖g‖²_{H^s} = (2π)^{-2} ∫ (1+|ξ|²)^s |ĝ|² with ĝ(ξ) = ∫ g e^{-ix·ξ}, so the L²
//! partials are the actual ‖f_K‖₂.

use std::f64::consts::PI;
use std::sync::OnceLock;

use oscillatory::gauss;
use oscillatory::{
    locate_vanishing_cubic, multiplier_m, BumpFunction, MultiplierTable, QuadratureSpec,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Result, SharpnessError};

/// Half-width of the window around each bump center. χ̂ = ψ̂² only decays
/// like exp(−c|ξ|^{1/2}); beyond 128 the neglected share of ∫χ̂² is below
/// 1e-16 and that of ∫ξ²χ̂² below 1e-12.
pub const WINDOW: f64 = 128.0;
pub const DEFAULT_TERMS: usize = 24;
pub const DEFAULT_KAPPA: f64 = 0.25;
pub const DEFAULT_S0: f64 = 0.05;
pub const L2_CAUCHY_TOL: f64 = 1e-2;
pub const GROWTH_TARGET: f64 = 1e3;
const GAUSS_ORDER: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum CoefficientRule {
    /// c_k = k^{-1/2} (1 + log k)^{-1}
    Standard,
    /// c_k = c for every k
    Constant(f64),
}

impl CoefficientRule {
    pub fn coefficient(&self, k: usize) -> f64 {
        match *self {
            CoefficientRule::Standard => {
                let k = k as f64;
                1.0 / (k.sqrt() * (1.0 + k.ln()))
            }
            CoefficientRule::Constant(c) => c,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CounterexampleSpec {
    pub terms: usize,
    pub coefficients: CoefficientRule,
    pub kappa: f64,
    pub alpha: f64,
    pub bump: BumpFunction,
}

impl CounterexampleSpec {
    /// Standard coefficients, κ = 0.25 and α from the vanishing cubic of m.
    pub fn standard(quad: &QuadratureSpec) -> Result<Self> {
        let v = locate_vanishing_cubic(quad)?;
        Self::new(
            DEFAULT_TERMS,
            CoefficientRule::Standard,
            DEFAULT_KAPPA,
            v.alpha,
        )
    }

    pub fn new(
        terms: usize,
        coefficients: CoefficientRule,
        kappa: f64,
        alpha: f64,
    ) -> Result<Self> {
        let s = CounterexampleSpec {
            terms,
            coefficients,
            kappa,
            alpha,
            bump: BumpFunction::autocorrelation(),
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.terms == 0 {
            return Err(SharpnessError::Precondition(
                "at least one term is needed".into(),
            ));
        }
        if !(self.kappa > 0.0 && self.kappa < 1.0 / 3.0) {
            return Err(SharpnessError::Precondition(format!(
                "kappa = {} outside (0, 1/3)",
                self.kappa
            )));
        }
        if !matches!(self.bump, BumpFunction::Autocorrelation(_)) {
            return Err(SharpnessError::Precondition(
                "the bump must have a non-negative transform".into(),
            ));
        }
        if !self.alpha.is_finite() || self.alpha == 0.0 {
            return Err(SharpnessError::Precondition(format!(
                "alpha = {}",
                self.alpha
            )));
        }
        Ok(())
    }

    pub fn frequency(&self, k: usize) -> f64 {
        2f64.powi(k as i32)
    }

    pub fn coefficient(&self, k: usize) -> f64 {
        self.coefficients.coefficient(k)
    }

    pub fn center(&self, k: usize) -> (f64, f64) {
        let n = self.frequency(k);
        (n, self.alpha * n * n * n)
    }

    fn chi_hat(&self, x: f64) -> f64 {
        if x.abs() > WINDOW {
            0.0
        } else {
            self.bump.fourier(x)
        }
    }

    fn check_terms(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.terms {
            return Err(SharpnessError::Precondition(format!(
                "K = {k} outside 1..={}",
                self.terms
            )));
        }
        Ok(())
    }
}

/// Coefficient hypotheses: c_k strictly decreasing and Σ c_k² convergent.
/// Convergence is checked by Cauchy condensation: t_i = 2^i c_{2^i}² must
/// decay at least like i^{-3/2} between i = 20 and i = 40.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoefficientCheck {
    pub decreasing: bool,
    pub condensed_ratio: f64,
    pub square_summable: bool,
}

pub fn coefficient_check(spec: &CounterexampleSpec) -> CoefficientCheck {
    let decreasing = (1..spec.terms.max(64)).all(|k| spec.coefficient(k + 1) < spec.coefficient(k));
    let t = |i: i32| {
        let k = 2f64.powi(i);
        let c = spec.coefficients.coefficient(k as usize);
        k * c * c
    };
    let condensed_ratio = t(40) / t(20);
    CoefficientCheck {
        decreasing,
        condensed_ratio,
        square_summable: condensed_ratio <= 0.5f64.powf(1.5),
    }
}

/// Composite Gauss nodes on [lo, hi], panels graded away from `center`:
/// width 1 within 16 of it, then 2, 4 and 8.
fn graded_nodes(lo: f64, hi: f64, center: f64) -> Vec<(f64, f64)> {
    let mut edges = vec![];
    let mut d = 0.0;
    while d <= 2.0 * WINDOW {
        edges.push(center + d);
        if d > 0.0 {
            edges.push(center - d);
        }
        let dd = d.abs();
        d += if dd < 16.0 {
            1.0
        } else if dd < 32.0 {
            2.0
        } else if dd < 64.0 {
            4.0
        } else {
            8.0
        };
    }
    edges.retain(|&e| e > lo && e < hi);
    edges.extend([lo, hi]);
    edges.sort_by(f64::total_cmp);
    let r = gauss::rule(GAUSS_ORDER);
    let mut out = Vec::with_capacity(edges.len() * GAUSS_ORDER);
    for w in edges.windows(2) {
        let (c, h) = (0.5 * (w[0] + w[1]), 0.5 * (w[1] - w[0]));
        for (x, wt) in r.nodes.iter().zip(&r.weights) {
            out.push((c + h * x, wt * h));
        }
    }
    out
}

/// Common support [lo, hi] of two windows centered at a and b, if any.
fn window_overlap(a: f64, b: f64) -> Option<(f64, f64)> {
    let lo = (a - WINDOW).max(b - WINDOW);
    let hi = (a + WINDOW).min(b + WINDOW);
    (lo < hi).then_some((lo, hi))
}

/// ∫ χ̂(x − a) χ̂(x − b) dx, integrated in the offset y = x − a so that
/// centers near 2^72 keep full relative precision in the bump arguments.
fn overlap(spec: &CounterexampleSpec, a: f64, b: f64) -> f64 {
    let d = a - b;
    let Some((lo, hi)) = window_overlap(0.0, -d) else {
        return 0.0;
    };
    graded_nodes(lo, hi, 0.0)
        .iter()
        .map(|&(y, w)| w * spec.chi_hat(y) * spec.chi_hat(y + d))
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct L2Partial {
    pub terms: usize,
    pub norm: f64,
    /// Diagonal part of ‖f_K‖₂².
    pub s1: f64,
    /// Off-diagonal part of ‖f_K‖₂².
    pub s2: f64,
}

/// ‖f_K‖₂ with the diagonal/off-diagonal split of ‖f_K‖₂².
pub fn f0_l2_split(spec: &CounterexampleSpec, terms: usize) -> Result<L2Partial> {
    spec.check_terms(terms)?;
    let norm = (2.0 * PI).powi(-2);
    let (mut s1, mut s2) = (0.0, 0.0);
    for k in 1..=terms {
        for kp in 1..=terms {
            let (a, b) = (spec.center(k), spec.center(kp));
            let v = spec.coefficient(k)
                * spec.coefficient(kp)
                * overlap(spec, a.0, b.0)
                * overlap(spec, a.1, b.1)
                * norm;
            if k == kp {
                s1 += v;
            } else {
                s2 += v;
            }
        }
    }
    Ok(L2Partial {
        terms,
        norm: (s1 + s2).max(0.0).sqrt(),
        s1,
        s2,
    })
}

pub fn f0_l2_partial(spec: &CounterexampleSpec, terms: usize) -> Result<f64> {
    Ok(f0_l2_split(spec, terms)?.norm)
}

/// ε₀ and c₀ with inf{ψ̂(ξ): |ξ| ≤ ε₀} ≥ c₀ and inf{χ̂(ξ₁): |ξ₁| ≤ ε₀} ≥ c₀,
/// for the localizer ψ = χ ⊗ χ (so ψ̂ = χ̂ ⊗ χ̂ ≥ 0).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LowerBoundConstants {
    pub eps0: f64,
    pub c0: f64,
}

/// ε₀ only scales the constant; it cancels in every ratio the suite checks.
pub const EPS0: f64 = 1.0;

pub fn lower_bound_constants(bump: &BumpFunction) -> LowerBoundConstants {
    static C: OnceLock<LowerBoundConstants> = OnceLock::new();
    *C.get_or_init(|| {
        let n = 400;
        let mut line = f64::INFINITY;
        for i in 0..=n {
            line = line.min(bump.fourier(EPS0 * i as f64 / n as f64));
        }
        let mut disk = f64::INFINITY;
        for i in 0..=n {
            let a = EPS0 * i as f64 / n as f64;
            for j in 0..=n {
                let b = EPS0 * j as f64 / n as f64;
                if a * a + b * b <= EPS0 * EPS0 {
                    disk = disk.min(bump.fourier(a) * bump.fourier(b));
                }
            }
        }
        LowerBoundConstants {
            eps0: EPS0,
            c0: line.min(disk),
        }
    })
}

impl LowerBoundConstants {
    /// c = (2π)^{-6} c₀⁶ |D|³ 2^{-s} |α|^{2s}, |D| = π ε₀²/4 the area of the
    /// disc of radius ε₀/2 about each bump center.
    pub fn constant(&self, s: f64, alpha: f64) -> f64 {
        let area = PI * self.eps0 * self.eps0 / 4.0;
        (2.0 * PI).powi(-6)
            * self.c0.powi(6)
            * area.powi(3)
            * 2f64.powf(-s)
            * alpha.abs().powf(2.0 * s)
    }
}

/// Certified lower bound c Σ_{k≤K} c_k² n_k^{6s} for ‖ψ f_K‖²_{H^s}.
pub fn f0_sobolev_lower(spec: &CounterexampleSpec, terms: usize, s: f64) -> Result<f64> {
    spec.check_terms(terms)?;
    if s < 0.0 {
        return Err(SharpnessError::Precondition(format!(
            "s = {s} must be non-negative"
        )));
    }
    let c = lower_bound_constants(&spec.bump).constant(s, spec.alpha);
    let sum: f64 = (1..=terms)
        .map(|k| spec.coefficient(k).powi(2) * spec.frequency(k).powf(6.0 * s))
        .sum();
    Ok(c * sum)
}

/// Ratio of consecutive lower-bound terms, (c_{k+1}/c_k)² 2^{6s}.
pub fn lower_bound_term_ratio(spec: &CounterexampleSpec, k: usize, s: f64) -> f64 {
    (spec.coefficient(k + 1) / spec.coefficient(k)).powi(2) * 2f64.powf(6.0 * s)
}

/// One term of ‖𝓗f_K‖²_{H^s}: (2π)^{-2} c_k c_{k'} ∫ |m|² (1+|ξ|²)^s χ̂χ̂χ̂χ̂ dξ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Hf0Term {
    pub k: usize,
    pub kp: usize,
    pub value: f64,
    /// Part of a diagonal term inside E_k = {|ξ − center| ≤ n_k^κ componentwise}.
    pub inner: f64,
}

fn hf0_integral(
    spec: &CounterexampleSpec,
    k: usize,
    kp: usize,
    s: f64,
    table: &MultiplierTable,
) -> Result<Hf0Term> {
    let (a, b) = (spec.center(k), spec.center(kp));
    let d = (a.0 - b.0, a.1 - b.1);
    let (Some(x1), Some(x2)) = (window_overlap(0.0, -d.0), window_overlap(0.0, -d.1)) else {
        return Ok(Hf0Term {
            k,
            kp,
            value: 0.0,
            inner: 0.0,
        });
    };
    let scale = spec.coefficient(k) * spec.coefficient(kp) * (2.0 * PI).powi(-2);
    // (u, v) is the offset from the center of bump k
    let integrand = |u: f64, v: f64| -> Result<f64> {
        let xi = (a.0 + u, a.1 + v);
        let m = multiplier_m(xi, table)?.norm_sqr();
        let w = (1.0 + xi.0 * xi.0 + xi.1 * xi.1).powf(s);
        Ok(m * w
            * spec.chi_hat(u)
            * spec.chi_hat(v)
            * spec.chi_hat(u + d.0)
            * spec.chi_hat(v + d.1))
    };
    let box_integral = |r1: (f64, f64), r2: (f64, f64)| -> Result<f64> {
        let n1 = graded_nodes(r1.0, r1.1, 0.0);
        let n2 = graded_nodes(r2.0, r2.1, 0.0);
        let rows: Vec<f64> = n1
            .par_iter()
            .map(|&(u, wu)| {
                let mut acc = 0.0;
                for &(v, wv) in &n2 {
                    acc += wv * integrand(u, v)?;
                }
                Ok(wu * acc)
            })
            .collect::<Result<_>>()?;
        Ok(rows.iter().sum())
    };
    let value = scale * box_integral(x1, x2)?;
    let inner = if k == kp {
        let r = spec.frequency(k).powf(spec.kappa);
        scale * box_integral((-r, r), (-r, r))?
    } else {
        0.0
    };
    Ok(Hf0Term {
        k,
        kp,
        value,
        inner,
    })
}

fn check_hf0(spec: &CounterexampleSpec, s: f64) -> Result<()> {
    if !(s > 0.0) || 4.0 * spec.kappa + 6.0 * s >= 2.0 {
        return Err(SharpnessError::Precondition(format!(
            "need s > 0 and 4 kappa + 6 s < 2, got kappa = {}, s = {s}",
            spec.kappa
        )));
    }
    Ok(())
}

/// All terms with k, k' ≤ K, in (k, k') order.
pub fn hf0_terms(spec: &CounterexampleSpec, terms: usize, s: f64) -> Result<Vec<Hf0Term>> {
    spec.check_terms(terms)?;
    check_hf0(spec, s)?;
    let table = MultiplierTable::shared();
    let mut out = vec![];
    for k in 1..=terms {
        for kp in 1..=terms {
            out.push(hf0_integral(spec, k, kp, s, table)?);
        }
    }
    Ok(out)
}

/// Single term T_{kk'}.
pub fn hf0_term(spec: &CounterexampleSpec, k: usize, kp: usize, s: f64) -> Result<Hf0Term> {
    spec.check_terms(k.max(kp))?;
    check_hf0(spec, s)?;
    hf0_integral(spec, k, kp, s, MultiplierTable::shared())
}

/// Partial sums P_1..P_K of ‖𝓗f_K‖²_{H^s} from the term list.
pub fn hf0_partials(terms: &[Hf0Term], upto: usize) -> Vec<f64> {
    (1..=upto)
        .map(|kk| {
            terms
                .iter()
                .filter(|t| t.k <= kk && t.kp <= kk)
                .map(|t| t.value)
                .sum()
        })
        .collect()
}

/// K-term partial sum of ‖𝓗f₀‖²_{H^s}.
pub fn hf0_sobolev_upper(spec: &CounterexampleSpec, terms: usize, s: f64) -> Result<f64> {
    let t = hf0_terms(spec, terms, s)?;
    Ok(hf0_partials(&t, terms)[terms - 1])
}

/// T_{kk} / (c_k² n_k^{4κ+6s−2}), the constant of the diagonal estimate.
pub fn diagonal_constant(spec: &CounterexampleSpec, term: &Hf0Term, s: f64) -> f64 {
    let n = spec.frequency(term.k);
    term.value / (spec.coefficient(term.k).powi(2) * n.powf(4.0 * spec.kappa + 6.0 * s - 2.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> CounterexampleSpec {
        CounterexampleSpec::new(24, CoefficientRule::Standard, 0.25, -4.8505333596).unwrap()
    }

    #[test]
    fn coefficient_rule() {
        let s = spec();
        assert_eq!(s.coefficient(1), 1.0);
        assert!((s.coefficient(2) - 1.0 / (2f64.sqrt() * (1.0 + 2f64.ln()))).abs() < 1e-15);
        let c = coefficient_check(&s);
        assert!(c.decreasing && c.square_summable);
        let flat =
            CounterexampleSpec::new(24, CoefficientRule::Constant(1.0), 0.25, -4.85).unwrap();
        let c = coefficient_check(&flat);
        assert!(!c.decreasing && !c.square_summable);
    }

    #[test]
    fn spec_guards() {
        assert!(CounterexampleSpec::new(24, CoefficientRule::Standard, 1.0 / 3.0, -4.85).is_err());
        assert!(CounterexampleSpec::new(0, CoefficientRule::Standard, 0.25, -4.85).is_err());
        let mut s = spec();
        s.bump = BumpFunction::plateau();
        assert!(s.validate().is_err());
    }

    #[test]
    fn graded_nodes_integrate_polynomials() {
        let n = graded_nodes(-3.0, 200.0, 1.5);
        let v: f64 = n.iter().map(|(x, w)| w * x * x).sum();
        let exact = (200f64.powi(3) + 27.0) / 3.0;
        assert!((v - exact).abs() < 1e-9 * exact);
    }

    #[test]
    fn self_overlap_is_parseval() {
        // ∫ χ̂² = 2π ∫ χ²
        let s = spec();
        let o = overlap(&s, 0.0, 0.0);
        let r = gauss::rule(32);
        let mut chi2 = 0.0;
        for p in 0..64 {
            let a = -1.0 + p as f64 / 32.0;
            chi2 += r.integrate(a, a + 1.0 / 32.0, |t: f64| s.bump.value(t).powi(2));
        }
        assert!(
            (o - 2.0 * PI * chi2).abs() < 1e-9 * o,
            "{o} vs {}",
            2.0 * PI * chi2
        );
        assert_eq!(overlap(&s, 0.0, 2.0 * WINDOW + 1.0), 0.0);
    }

    #[test]
    fn lower_bound_constants_are_positive() {
        let s = spec();
        let c = lower_bound_constants(&s.bump);
        assert!(c.c0 > 0.0 && c.c0 < s.bump.fourier(0.0));
        assert!(c.constant(0.1, s.alpha) > 0.0);
    }

    #[test]
    fn hf0_guard() {
        let s = spec();
        assert!(hf0_sobolev_upper(&s, 4, 0.2).is_err());
        assert!(hf0_sobolev_upper(&s, 4, 0.0).is_err());
    }
}
