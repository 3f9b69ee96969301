//! Type-1 non-uniform FFT: F_k = Σ_q c_q e^{-ik x_q} for k = -N/2..N/2-1.
//!
//! Gaussian gridding on a twice-oversampled grid (Greengard and Lee) with
//! 12 points of spreading on each side, giving about 12 correct digits
//! relative to Σ|c_q|. The node set is fixed at construction, so the
//! spreading weights are computed once and reused for every strength vector.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

const SPREAD: usize = 12;
const OVERSAMPLE: usize = 2;

pub struct Nufft1 {
    n_out: usize,
    m_r: usize,
    base: Vec<usize>,
    kernel: Vec<f64>,
    deconv: Vec<f64>,
    fft: Arc<dyn Fft<f64>>,
}

impl Nufft1 {
    /// `nodes` may lie anywhere on the real line; they are reduced modulo 2π.
    pub fn new(nodes: &[f64], n_out: usize) -> Self {
        assert!(n_out >= 2 && n_out % 2 == 0, "n_out must be even");
        let m_r = OVERSAMPLE * n_out;
        let r = OVERSAMPLE as f64;
        let tau = PI * SPREAD as f64 / ((n_out * n_out) as f64 * r * (r - 0.5));
        let h = 2.0 * PI / m_r as f64;
        let width = 2 * SPREAD;
        let mut base = Vec::with_capacity(nodes.len());
        let mut kernel = Vec::with_capacity(nodes.len() * width);
        for &x in nodes {
            let x = x.rem_euclid(2.0 * PI);
            let m0 = (x / h).floor() as i64;
            let first = m0 - SPREAD as i64 + 1;
            base.push(first.rem_euclid(m_r as i64) as usize);
            for j in 0..width as i64 {
                let dx = x - (first + j) as f64 * h;
                kernel.push((-dx * dx / (4.0 * tau)).exp());
            }
        }
        let half = (n_out / 2) as i64;
        let deconv = (-half..half)
            .map(|k| (PI / tau).sqrt() * ((k * k) as f64 * tau).exp() / m_r as f64)
            .collect();
        let fft = FftPlanner::new().plan_fft_forward(m_r);
        Nufft1 {
            n_out,
            m_r,
            base,
            kernel,
            deconv,
            fft,
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.base.len()
    }

    /// F_k for k = -N/2..N/2-1, in that order.
    pub fn apply(&self, strengths: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(strengths.len(), self.base.len());
        let width = 2 * SPREAD;
        let mut grid = vec![Complex64::new(0.0, 0.0); self.m_r];
        for (q, &c) in strengths.iter().enumerate() {
            let b = self.base[q];
            let w = &self.kernel[q * width..(q + 1) * width];
            if b + width <= self.m_r {
                for (g, &k) in grid[b..b + width].iter_mut().zip(w) {
                    *g += c * k;
                }
            } else {
                for (j, &k) in w.iter().enumerate() {
                    grid[(b + j) % self.m_r] += c * k;
                }
            }
        }
        self.fft.process(&mut grid);
        let half = self.n_out / 2;
        (0..self.n_out)
            .map(|i| {
                let k = i as i64 - half as i64;
                grid[k.rem_euclid(self.m_r as i64) as usize] * self.deconv[i]
            })
            .collect()
    }
}
