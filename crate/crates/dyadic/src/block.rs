//! Block multipliers M_{jk} by the Airy reduction.
//!
//! For the translation-invariant model the multiplier of the operator with
//! amplitude χ_k(θ₁)χ_j(θ₂)a is
//!   M_{jk}(ξ) = 2π χ_j(ξ₂) ∫ χ_k(θ₁) a(θ₁, ξ₂) G(θ₁ − ξ₁, ξ₂) dθ₁,
//!   G(β, τ) = ∫ e^{i(wβ − w³τ)} dw = 2π c^{-1} Ai(−sgn(τ) β / c),  c = (3|τ|)^{1/3},
//! so that with x = sgn(ξ₂)(ξ₁ − θ₁)/c
//!   M_{jk}(ξ) = 4π² χ_j(ξ₂) ∫ F(ξ₁ − sgn(ξ₂) c x) Ai(x) dx,  F = χ_k a.
//! The x-integral is cut at x = 14 (Ai < 1e-16 beyond), uses an interpolated
//! Ai on [-10, 14] and the modulus-phase form with Levin panels below -10.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use oscillatory::airy::{airy_ai, airy_modulus_phase};
use oscillatory::quad::{integrate, oscillatory_tail, FnIntegrand};
use oscillatory::{DyadicIndex, QuadratureSpec};

use crate::amplitude::{Amplitude, BlockSymbol, SymbolKind};
use crate::cheb::ChebPiecewise;
use crate::cutoff::{pow2, CutoffFamily};
use crate::error::Result;
use crate::orders::OrderPair;

const X_CUT: f64 = 14.0;
const X_OSC: f64 = -10.0;
/// The two-term tail of ∫ A(y) e^{iζ} errs by about y^{-19/4}; 1e-13 here.
const TAIL_START: f64 = 1000.0;

fn airy_table() -> &'static ChebPiecewise {
    static T: OnceLock<ChebPiecewise> = OnceLock::new();
    T.get_or_init(|| ChebPiecewise::build(airy_ai, -10.5, 14.5, 50, 20))
}

/// Quadrature settings used by the block scans. `abs_tol` is relative to
/// the size of the amplitude on the window.
pub fn default_quad() -> QuadratureSpec {
    QuadratureSpec::default().with_tol(1e-12, 1e-9)
}

/// θ₁-window multiplying the amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Window {
    /// φ(θ/2^hi) − φ(θ/2^lo), or φ(θ/2^hi) without `lo`.
    Band { lo: Option<u32>, hi: u32 },
    /// χ_∞(θ₁, ξ₂).
    Remainder,
    /// No window.
    Full,
}

impl Window {
    pub fn block(k: u32) -> Self {
        Window::Band {
            lo: k.checked_sub(1),
            hi: k,
        }
    }

    fn eval(&self, fam: &CutoffFamily, theta: f64, xi2: f64) -> f64 {
        match *self {
            Window::Band { lo, hi } => {
                fam.partial(hi, theta) - lo.map_or(0.0, |m| fam.partial(m, theta))
            }
            Window::Remainder => fam.remainder((theta, xi2)),
            Window::Full => 1.0,
        }
    }

    /// Support in |θ| and the points where the window stops being smooth or constant.
    fn geometry(&self, xi2: f64) -> ((f64, f64), Vec<f64>) {
        match *self {
            Window::Band { lo, hi } => {
                let mut br = vec![pow2(hi), pow2(hi + 1)];
                if let Some(m) = lo {
                    br.extend([pow2(m), pow2(m + 1)]);
                }
                ((lo.map_or(0.0, pow2), pow2(hi + 1)), br)
            }
            Window::Remainder => {
                let levels = CutoffFamily::levels_at(xi2);
                let mut br = vec![];
                for &j in &levels {
                    br.extend([pow2(j), pow2(j + 1)]);
                }
                ((pow2(levels[0]), f64::INFINITY), br)
            }
            Window::Full => ((0.0, f64::INFINITY), vec![]),
        }
    }
}

/// Evaluates windowed multipliers for one symbol.
#[derive(Clone)]
pub struct BlockEngine {
    pub family: CutoffFamily,
    pub orders: OrderPair,
    pub symbol: BlockSymbol,
    pub quad: QuadratureSpec,
    amp: Amplitude,
}

impl BlockEngine {
    pub fn new(orders: OrderPair, kind: SymbolKind, quad: QuadratureSpec) -> Result<Self> {
        quad.validate()?;
        let symbol = BlockSymbol::new(kind, &orders);
        Ok(BlockEngine {
            family: CutoffFamily::default(),
            orders,
            symbol,
            quad,
            amp: Amplitude::new(symbol)?,
        })
    }

    pub fn amplitude(&self, theta1: f64, theta2: f64) -> f64 {
        self.amp.eval(theta1, theta2)
    }

    /// M_{jk}(ξ); real for these even amplitudes.
    pub fn block(&self, xi: (f64, f64), idx: DyadicIndex) -> Result<f64> {
        let pre = self.family.chi(idx.j, xi.1);
        if pre == 0.0 {
            return Ok(0.0);
        }
        Ok(pre * self.windowed(xi, Window::block(idx.k))?)
    }

    /// 2π ∫ W(θ₁, ξ₂) a(θ₁, ξ₂) G(θ₁ − ξ₁, ξ₂) dθ₁ without the χ_j(ξ₂) factor.
    pub fn windowed(&self, xi: (f64, f64), window: Window) -> Result<f64> {
        let (x1, x2) = xi;
        let f = |theta: f64| window.eval(&self.family, theta, x2) * self.amp.eval(theta, x2);
        let ((r0, r1), mut breaks) = window.geometry(x2);
        let c = (3.0 * x2.abs()).cbrt();
        if c < 1e-12 {
            return Ok(4.0 * PI * PI * f(x1));
        }
        if r1.is_infinite() {
            // dyadic ladder so that the tail starts where the amplitude is slow
            let reach = 4.0 * (x1.abs() + 16.0 * c) + breaks.iter().copied().fold(0.0, f64::max);
            let mut m = 1.0;
            while m < reach {
                breaks.push(m);
                m *= 2.0;
            }
        }
        let s = if x2 >= 0.0 { 1.0 } else { -1.0 };
        let to_x = |theta: f64| s * (x1 - theta) / c;

        let mut theta_iv = vec![(-r1, -r0), (r0, r1)];
        if r0 == 0.0 {
            theta_iv = vec![(-r1, r1)];
        }
        let mut scale: f64 = 0.0;
        for &b in &breaks {
            scale = scale.max(f(b).abs()).max(f(0.75 * b).abs());
        }
        scale = scale.max(f(x1).abs()).max(f(0.0).abs());
        if scale == 0.0 {
            scale = 1.0;
        }
        let quad = self
            .quad
            .with_tol(self.quad.abs_tol * scale, self.quad.rel_tol);
        let x_breaks: Vec<f64> = breaks.iter().flat_map(|&b| [to_x(b), to_x(-b)]).collect();

        let g = |x: f64| f(x1 - s * c * x);
        let mut total = 0.0;
        for (ta, tb) in theta_iv {
            let (mut xa, mut xb) = (to_x(ta), to_x(tb));
            if xa > xb {
                std::mem::swap(&mut xa, &mut xb);
            }
            total += airy_convolution(&g, xa, xb, &x_breaks, &quad)?;
        }
        Ok(4.0 * PI * PI * total)
    }

    /// Pointwise sum of the remainder and all blocks with j ≤ jmax.
    pub fn decomposed_sum(&self, xi: (f64, f64), jmax: u32) -> Result<f64> {
        let mut s = self.windowed(xi, Window::Remainder)?;
        for j in CutoffFamily::levels_at(xi.1) {
            if j > jmax {
                continue;
            }
            for k in 0..=j {
                s += self.block(xi, DyadicIndex { j, k })?;
            }
        }
        Ok(s)
    }
}

/// ∫_{xa}^{xb} g(x) Ai(x) dx, with g smooth between `breaks`.
fn airy_convolution(
    g: &dyn Fn(f64) -> f64,
    xa: f64,
    xb: f64,
    breaks: &[f64],
    quad: &QuadratureSpec,
) -> Result<f64> {
    let xb = xb.min(X_CUT);
    if !(xa < xb) {
        return Ok(0.0);
    }
    let mut total = 0.0;
    let (a, b) = (xa.max(X_OSC), xb);
    if a < b {
        let tab = airy_table();
        let mut pts = vec![a, b];
        pts.extend(breaks.iter().copied().filter(|&x| x > a && x < b));
        for m in [-6.0, -2.0, 0.0, 4.0] {
            if m > a && m < b {
                pts.push(m);
            }
        }
        let body = FnIntegrand {
            f: |x: f64| Complex64::new(g(x) * tab.eval(x), 0.0),
            g: |_| 0.0,
            dg: |_| 0.0,
        };
        total += integrate(&body, &pts, quad)?.value.re;
    }
    if xa < X_OSC {
        // y = -x in [ya, yb] with Ai(-y) = Re[A(y) e^{iζ(y)}]
        let ya = (-xb).max(-X_OSC);
        let yb = -xa;
        let osc = FnIntegrand {
            f: |y: f64| airy_modulus_phase(y).0 * g(-y),
            g: |y: f64| 2.0 / 3.0 * y * y.sqrt(),
            dg: |y: f64| y.sqrt(),
        };
        let mut pts: Vec<f64> = vec![ya];
        pts.extend(breaks.iter().map(|x| -x).filter(|&y| y > ya && y < yb));
        if yb.is_finite() {
            pts.push(yb);
            total += integrate(&osc, &pts, quad)?.value.re;
        } else {
            let last = pts.iter().copied().fold(ya, f64::max);
            let end = (2.0 * last + 16.0).max(TAIL_START);
            pts.push(end);
            let body = integrate(&osc, &pts, quad)?;
            let tail = oscillatory_tail(&osc, end);
            total += (body.value + tail.value).re;
        }
    }
    Ok(total)
}

/// M_{jk}(ξ) for one block.
pub fn block_multiplier(
    xi: (f64, f64),
    idx: DyadicIndex,
    orders: OrderPair,
    kind: SymbolKind,
    quad: QuadratureSpec,
) -> Result<Complex64> {
    let eng = BlockEngine::new(orders, kind, quad)?;
    Ok(Complex64::new(eng.block(xi, idx)?, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn airy_table_accuracy() {
        let t = airy_table();
        for i in 0..=2400 {
            let x = -10.0 + 0.01 * i as f64;
            assert!((t.eval(x) - airy_ai(x)).abs() < 1e-14, "x={x}");
        }
    }

    #[test]
    fn outside_support_is_zero() {
        let o = OrderPair::with_default_delta(-0.5, 0.0).unwrap();
        let eng = BlockEngine::new(o, SymbolKind::ModelProduct, default_quad()).unwrap();
        let idx = DyadicIndex::new(6, 2).unwrap();
        assert_eq!(eng.block((3.0, 20.0), idx).unwrap(), 0.0);
        assert_eq!(eng.block((3.0, 200.0), idx).unwrap(), 0.0);
        assert!(eng.block((3.0, 64.0), idx).unwrap() != 0.0);
    }

    #[test]
    fn zero_frequency_limit() {
        // as ξ₂ → 0 the Airy kernel tends to a delta
        let o = OrderPair::with_default_delta(-0.5, 0.0).unwrap();
        let eng = BlockEngine::new(o, SymbolKind::ModelProduct, default_quad()).unwrap();
        let w = Window::block(1);
        let at0 = eng.windowed((2.5, 0.0), w).unwrap();
        let near = eng.windowed((2.5, 1e-9), w).unwrap();
        assert!((at0 - near).abs() < 1e-3 * at0.abs(), "{at0} vs {near}");
    }

    #[test]
    fn reflection_symmetry() {
        let o = OrderPair::with_default_delta(0.0, -0.25).unwrap();
        let eng = BlockEngine::new(o, SymbolKind::ModelProduct, default_quad()).unwrap();
        let idx = DyadicIndex::new(5, 3).unwrap();
        for &(a, b) in &[(7.0, 30.0), (-12.5, 41.0), (0.3, 17.0)] {
            let m1 = eng.block((a, -b), idx).unwrap();
            let m2 = eng.block((-a, b), idx).unwrap();
            assert!((m1 - m2).abs() < 1e-9 * m1.abs().max(1e-6));
        }
    }
}
