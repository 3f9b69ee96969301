//! Bump functions.
//!
//! `Plateau` is 1 on |t| <= 1/2 and vanishes for |t| >= 1. `Autocorrelation`
//! is χ = ψ * ψ̌ with ψ(t) = exp(-1/(1 - 4t²)) on (-1/2, 1/2); ψ is even and
//! real so χ̂ = ψ̂² is non-negative by construction. ψ̂ and χ are tabulated
//! with their derivatives and read back by cubic Hermite interpolation.

use std::sync::{Arc, OnceLock};

use crate::gauss;

/// C^∞ step: 0 for x <= 0, 1 for x >= 1.
pub fn smooth_step(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        let a = (-1.0 / x).exp();
        let b = (-1.0 / (1.0 - x)).exp();
        a / (a + b)
    }
}

/// Derivative of `smooth_step`.
pub fn smooth_step_deriv(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        0.0
    } else {
        let a = (-1.0 / x).exp();
        let b = (-1.0 / (1.0 - x)).exp();
        let da = a / (x * x);
        let db = -b / ((1.0 - x) * (1.0 - x));
        (da * b - a * db) / ((a + b) * (a + b))
    }
}

pub fn plateau(t: f64) -> f64 {
    1.0 - smooth_step(2.0 * t.abs() - 1.0)
}

pub fn psi(t: f64) -> f64 {
    let u = 1.0 - 4.0 * t * t;
    if u <= 0.0 {
        0.0
    } else {
        (-1.0 / u).exp()
    }
}

fn psi_deriv(t: f64) -> f64 {
    let u = 1.0 - 4.0 * t * t;
    if u <= 0.0 {
        0.0
    } else {
        (-1.0 / u).exp() * (-8.0 * t / (u * u))
    }
}

/// Uniform-grid samples with slopes; Hermite interpolation, zero outside.
#[derive(Debug, Clone)]
pub struct HermiteSamples {
    pub x0: f64,
    pub step: f64,
    pub values: Vec<f64>,
    pub slopes: Vec<f64>,
}

impl HermiteSamples {
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.values.len();
        let s = (x - self.x0) / self.step;
        if !(s >= 0.0 && s <= (n - 1) as f64) {
            return 0.0;
        }
        let i = (s.floor() as usize).min(n - 2);
        let u = s - i as f64;
        let h = self.step;
        let u2 = u * u;
        let u3 = u2 * u;
        (2.0 * u3 - 3.0 * u2 + 1.0) * self.values[i]
            + (u3 - 2.0 * u2 + u) * h * self.slopes[i]
            + (-2.0 * u3 + 3.0 * u2) * self.values[i + 1]
            + (u3 - u2) * h * self.slopes[i + 1]
    }

    pub fn x_max(&self) -> f64 {
        self.x0 + self.step * (self.values.len() - 1) as f64
    }
}

pub const PSI_HAT_MAX: f64 = 512.0;
const PSI_HAT_STEP: f64 = 1.0 / 16.0;
const CHI_STEP: f64 = 1.0 / 512.0;
const PANELS: usize = 64;

/// Composite Gauss nodes and weights on [lo, hi].
fn composite(lo: f64, hi: f64, panels: usize, order: usize) -> Vec<(f64, f64)> {
    let r = gauss::rule(order);
    let mut out = Vec::with_capacity(panels * order);
    for p in 0..panels {
        let a = lo + (hi - lo) * p as f64 / panels as f64;
        let b = lo + (hi - lo) * (p + 1) as f64 / panels as f64;
        let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
        for (x, w) in r.nodes.iter().zip(&r.weights) {
            out.push((c + h * x, w * h));
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct AutocorrelationTable {
    /// ψ̂ on [0, PSI_HAT_MAX]; even in ξ.
    pub psi_hat: HermiteSamples,
    /// χ on [0, 1]; even in t.
    pub chi: HermiteSamples,
}

impl AutocorrelationTable {
    fn build() -> Self {
        let nodes = composite(0.0, 0.5, PANELS, 16);
        let n_hat = (PSI_HAT_MAX / PSI_HAT_STEP).round() as usize + 1;
        let mut hv = Vec::with_capacity(n_hat);
        let mut hs = Vec::with_capacity(n_hat);
        for i in 0..n_hat {
            let xi = i as f64 * PSI_HAT_STEP;
            let (mut v, mut d) = (0.0, 0.0);
            for &(t, w) in &nodes {
                let p = psi(t) * w;
                let (s, c) = (t * xi).sin_cos();
                v += p * c;
                d -= p * t * s;
            }
            hv.push(2.0 * v);
            hs.push(2.0 * d);
        }
        // χ(t) = ∫ ψ(s) ψ(t - s) ds over s ∈ [t - 1/2, 1/2]
        let n_chi = (1.0 / CHI_STEP).round() as usize + 1;
        let mut cv = Vec::with_capacity(n_chi);
        let mut cs = Vec::with_capacity(n_chi);
        for i in 0..n_chi {
            let t = i as f64 * CHI_STEP;
            let (lo, hi) = (t - 0.5, 0.5);
            let (mut v, mut d) = (0.0, 0.0);
            if hi > lo {
                for (s, w) in composite(lo, hi, 16, 16) {
                    v += w * psi(s) * psi(t - s);
                    d += w * psi(s) * psi_deriv(t - s);
                }
            }
            cv.push(v);
            cs.push(d);
        }
        AutocorrelationTable {
            psi_hat: HermiteSamples {
                x0: 0.0,
                step: PSI_HAT_STEP,
                values: hv,
                slopes: hs,
            },
            chi: HermiteSamples {
                x0: 0.0,
                step: CHI_STEP,
                values: cv,
                slopes: cs,
            },
        }
    }
}

#[derive(Debug, Clone)]
pub enum BumpFunction {
    Plateau,
    Autocorrelation(Arc<AutocorrelationTable>),
}

impl BumpFunction {
    pub fn plateau() -> Self {
        BumpFunction::Plateau
    }

    /// The frozen autocorrelation bump; tables are built once per process.
    pub fn autocorrelation() -> Self {
        static TABLE: OnceLock<Arc<AutocorrelationTable>> = OnceLock::new();
        BumpFunction::Autocorrelation(
            TABLE
                .get_or_init(|| Arc::new(AutocorrelationTable::build()))
                .clone(),
        )
    }

    pub fn value(&self, t: f64) -> f64 {
        match self {
            BumpFunction::Plateau => plateau(t),
            BumpFunction::Autocorrelation(tab) => tab.chi.eval(t.abs()),
        }
    }

    /// χ̂(ξ) = ∫ χ(t) e^{-itξ} dt (real, since χ is even).
    pub fn fourier(&self, xi: f64) -> f64 {
        match self {
            BumpFunction::Plateau => {
                let mut s = 0.0;
                for (t, w) in composite(0.0, 1.0, 32 + (xi.abs() / 8.0) as usize, 16) {
                    s += w * plateau(t) * (t * xi).cos();
                }
                2.0 * s
            }
            BumpFunction::Autocorrelation(tab) => {
                let p = tab.psi_hat.eval(xi.abs());
                p * p
            }
        }
    }

    /// ψ̂ for the autocorrelation bump (None for the plateau).
    pub fn psi_hat(&self, xi: f64) -> Option<f64> {
        match self {
            BumpFunction::Plateau => None,
            BumpFunction::Autocorrelation(tab) => Some(tab.psi_hat.eval(xi.abs())),
        }
    }

    /// Half-width beyond which χ̂ is treated as zero.
    pub fn fourier_cutoff(&self) -> f64 {
        match self {
            BumpFunction::Plateau => f64::INFINITY,
            BumpFunction::Autocorrelation(tab) => tab.psi_hat.x_max(),
        }
    }
}
