//! Amplitudes a(θ₁, θ₂) of the model operators.
//!
//! The model product symbol is ⟨θ⟩^{p+1/2}⟨θ₁⟩^{l−1/2}. The fractional
//! symbol is the one whose operator is the fractional integral along the
//! cubic: a(θ₁) = (2π)^{-2} ĥ(θ₁) with h(t) = χ(t)|t|^{−(l+1/2)} and
//! ĥ(θ) = ∫ h(t) e^{−itθ} dt. Writing the kernel as
//! ∫ e^{i(z₁θ₁ + (z₂ − z₁³)θ₂)} a dθ then reproduces m_l exactly.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use oscillatory::{fractional_multiplier, BumpFunction, MultiplierSpec, QuadratureSpec};
use serde::Serialize;

use crate::cheb::ChebPiecewise;
use crate::error::{DyadicError, Result};
use crate::orders::OrderPair;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SymbolKind {
    ModelProduct,
    FractionalDerived,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum BlockSymbol {
    ModelProduct { p: f64, l: f64 },
    FractionalDerived { l: f64 },
}

impl BlockSymbol {
    pub fn new(kind: SymbolKind, orders: &OrderPair) -> Self {
        match kind {
            SymbolKind::ModelProduct => BlockSymbol::ModelProduct {
                p: orders.p,
                l: orders.l,
            },
            SymbolKind::FractionalDerived => BlockSymbol::FractionalDerived { l: orders.l },
        }
    }
}

#[derive(Clone)]
pub enum Amplitude {
    Product { p: f64, l: f64 },
    Fractional(Arc<FractionalTable>),
}

impl Amplitude {
    pub fn new(symbol: BlockSymbol) -> Result<Self> {
        match symbol {
            BlockSymbol::ModelProduct { p, l } => Ok(Amplitude::Product { p, l }),
            BlockSymbol::FractionalDerived { l } => {
                Ok(Amplitude::Fractional(FractionalTable::shared(l)?))
            }
        }
    }

    /// a(θ₁, θ₂); even in both arguments.
    pub fn eval(&self, theta1: f64, theta2: f64) -> f64 {
        match self {
            Amplitude::Product { p, l } => {
                let t1 = 1.0 + theta1 * theta1;
                (t1 + theta2 * theta2).powf(0.5 * (p + 0.5)) * t1.powf(0.5 * (l - 0.5))
            }
            Amplitude::Fractional(tab) => tab.eval(theta1),
        }
    }
}

/// (2π)^{-2} ĥ(θ) on [0, 2^12] by piecewise Chebyshev, then the power law
/// of |t|^{-a} (the smooth remainder is below 1e-15 there).
pub struct FractionalTable {
    a: f64,
    near: ChebPiecewise,
    far: ChebPiecewise,
    coef: f64,
}

const NEAR_END: f64 = 64.0;
const FAR_END_LOG2: f64 = 12.0;

impl FractionalTable {
    pub fn build(l: f64) -> Result<Self> {
        if !(l > -0.5 && l < 0.5) {
            return Err(DyadicError::Domain(format!(
                "the fractional symbol needs -1/2 < l < 1/2, got {l}"
            )));
        }
        let spec = MultiplierSpec::fractional_cubic(l);
        let bump = BumpFunction::plateau();
        let quad = QuadratureSpec::default().with_tol(1e-13, 1e-12);
        let norm = 1.0 / (4.0 * PI * PI);
        let h = |theta: f64| -> f64 {
            fractional_multiplier((theta, 0.0), &spec, &bump, &quad)
                .map(|v| v.re * norm)
                .unwrap_or(f64::NAN)
        };
        let near = ChebPiecewise::build(h, 0.0, NEAR_END, 32, 20);
        let far = ChebPiecewise::build(|u| h(u.exp2()), NEAR_END.log2(), FAR_END_LOG2, 48, 20);
        let a = l + 0.5;
        let coef = norm * 2.0 * gamma(1.0 - a) * (0.5 * PI * a).sin();
        let t = FractionalTable { a, near, far, coef };
        if !t.eval(1.0).is_finite() || !t.eval(1000.0).is_finite() {
            return Err(DyadicError::Domain(
                "fractional symbol table did not converge".into(),
            ));
        }
        Ok(t)
    }

    pub fn shared(l: f64) -> Result<Arc<Self>> {
        static CACHE: OnceLock<Mutex<HashMap<u64, Arc<FractionalTable>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(t) = cache.lock().expect("cache lock").get(&l.to_bits()) {
            return Ok(t.clone());
        }
        let t = Arc::new(Self::build(l)?);
        cache
            .lock()
            .expect("cache lock")
            .insert(l.to_bits(), t.clone());
        Ok(t)
    }

    pub fn eval(&self, theta: f64) -> f64 {
        let x = theta.abs();
        if x <= NEAR_END {
            self.near.eval(x)
        } else if x.log2() <= FAR_END_LOG2 {
            self.far.eval(x.log2())
        } else {
            self.power_law(x)
        }
    }

    /// (2π)^{-2} · 2Γ(1−a) sin(πa/2) |θ|^{a−1}, the transform of |t|^{-a}.
    pub fn power_law(&self, theta: f64) -> f64 {
        self.coef * theta.abs().powf(self.a - 1.0)
    }
}

/// Lanczos approximation, g = 7, accurate to about 1e-15 for x > 0.
fn gamma(x: f64) -> f64 {
    const G: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    let x = x - 1.0;
    let mut s = G[0];
    for (i, g) in G.iter().enumerate().skip(1) {
        s += g / (x + i as f64);
    }
    let t = x + 7.5;
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_values() {
        assert!((gamma(0.5) - PI.sqrt()).abs() < 1e-14);
        assert!((gamma(5.0) - 24.0).abs() < 1e-12);
        assert!((gamma(4.0 / 3.0) - 0.892_979_511_569_249_2).abs() < 1e-14);
    }

    #[test]
    fn fractional_table_matches_quadrature_and_power_law() {
        let tab = FractionalTable::build(0.0).unwrap();
        let spec = MultiplierSpec::fractional_cubic(0.0);
        let quad = QuadratureSpec::default();
        for &th in &[0.0, 0.3, 5.1, 47.0, 65.5, 300.0, 2900.0] {
            let direct = fractional_multiplier((th, 0.0), &spec, &BumpFunction::plateau(), &quad)
                .unwrap()
                .re
                / (4.0 * PI * PI);
            assert!(
                (tab.eval(th) - direct).abs() < 1e-11,
                "θ={th}: {} vs {direct}",
                tab.eval(th)
            );
        }
        let x = 2f64.powf(FAR_END_LOG2);
        assert!((tab.eval(x * 0.999) / tab.power_law(x * 0.999) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn product_symbol_orders() {
        let a = Amplitude::Product { p: -0.5, l: 0.25 };
        let r = a.eval(1e6, 3.0) / a.eval(2e6, 3.0);
        assert!((r - 2f64.powf(0.25)).abs() < 1e-6);
    }
}
