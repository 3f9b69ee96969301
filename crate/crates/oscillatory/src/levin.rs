//! Levin collocation for panels with a monotone phase.
//!
//! On [a, b] we look for a slowly varying p with p' + i g' p = f; then
//! the panel integral of f e^{ig} is p(b) e^{ig(b)} - p(a) e^{ig(a)}.
//! Collocation uses Chebyshev-Lobatto nodes.

use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub struct ChebGrid {
    pub x: Vec<f64>,
    pub d: Vec<f64>,
}

impl ChebGrid {
    fn new(n: usize) -> Self {
        let m = n - 1;
        let x: Vec<f64> = (0..n)
            .map(|j| (std::f64::consts::PI * j as f64 / m as f64).cos())
            .collect();
        let c = |i: usize| {
            let base = if i == 0 || i == m { 2.0 } else { 1.0 };
            if i % 2 == 0 {
                base
            } else {
                -base
            }
        };
        let mut d = vec![0.0; n * n];
        for i in 0..n {
            let mut diag = 0.0;
            for j in 0..n {
                if i != j {
                    let v = c(i) / c(j) / (x[i] - x[j]);
                    d[i * n + j] = v;
                    diag -= v;
                }
            }
            d[i * n + i] = diag;
        }
        ChebGrid { x, d }
    }
}

const MAX_N: usize = 48;

pub fn cheb_grid(n: usize) -> &'static ChebGrid {
    static CACHE: [OnceLock<ChebGrid>; MAX_N + 1] = [const { OnceLock::new() }; MAX_N + 1];
    assert!((3..=MAX_N).contains(&n));
    CACHE[n].get_or_init(|| ChebGrid::new(n))
}

/// Levin estimate of the panel integral with `n` collocation nodes.
/// `f`, `g`, `dg` are amplitude, phase and phase derivative.
/// Returns None if the collocation system is singular.
pub fn levin_panel(
    n: usize,
    a: f64,
    b: f64,
    f: &dyn Fn(f64) -> Complex64,
    g: &dyn Fn(f64) -> f64,
    dg: &dyn Fn(f64) -> f64,
) -> Option<Complex64> {
    let grid = cheb_grid(n);
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let inv_h = 1.0 / h;
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    let mut rhs = DVector::<Complex64>::zeros(n);
    for i in 0..n {
        let t = c + h * grid.x[i];
        for j in 0..n {
            m[(i, j)] = Complex64::new(grid.d[i * n + j] * inv_h, 0.0);
        }
        m[(i, i)] += Complex64::new(0.0, dg(t));
        rhs[i] = f(t);
    }
    let p = m.lu().solve(&rhs)?;
    if p.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return None;
    }
    let eb = Complex64::from_polar(1.0, g(b));
    let ea = Complex64::from_polar(1.0, g(a));
    Some(p[0] * eb - p[n - 1] * ea)
}
