//! Empirical operator norms of diagonal operators between Sobolev spaces.
//!
//! For a multiplier m the H^{s_in} → H^{s_out} norm on the truncated lattice is
//! sup |m(ξ)|·(1+|ξ|²)^{(s_out-s_in)/2}. The probe reports that supremum and
//! an independent estimate from 20 Lanczos steps on A*A for the weighted
//! diagonal operator A, started from a seeded complex Gaussian vector.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::grid::{GridSpec, SobolevIndex};
use crate::symbol::{lattice_multiplier, Symbol};

pub const POWER_ITERATIONS: usize = 20;
pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbeReport {
    pub sup: f64,
    pub argmax: (f64, f64),
    pub power_estimate: f64,
    pub iterations: usize,
    /// |power_estimate / sup - 1|
    pub agreement: f64,
    /// Second largest distinct weighted value over the largest.
    pub gap_ratio: f64,
    /// Lattice points that entered the supremum.
    pub points: usize,
}

/// Annulus r_lo ≤ |ξ| ≤ r_hi in the Euclidean norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Shell {
    pub r_lo: f64,
    pub r_hi: f64,
}

pub fn operator_norm_probe(
    sym: &dyn Symbol,
    s_in: SobolevIndex,
    s_out: SobolevIndex,
    grid: &GridSpec,
) -> Result<ProbeReport> {
    probe_with(sym, s_in, s_out, grid, None, DEFAULT_SEED)
}

/// Probe restricted to a frequency shell.
pub fn operator_norm_probe_shell(
    sym: &dyn Symbol,
    s_in: SobolevIndex,
    s_out: SobolevIndex,
    grid: &GridSpec,
    shell: Shell,
) -> Result<ProbeReport> {
    probe_with(sym, s_in, s_out, grid, Some(shell), DEFAULT_SEED)
}

pub fn probe_with(
    sym: &dyn Symbol,
    s_in: SobolevIndex,
    s_out: SobolevIndex,
    grid: &GridSpec,
    shell: Option<Shell>,
    seed: u64,
) -> Result<ProbeReport> {
    let m = lattice_multiplier(sym, grid)?;
    Ok(probe_lattice(&m, s_in, s_out, grid, shell, seed))
}

/// Probe from precomputed lattice values (as returned by `lattice_multiplier`).
pub fn probe_lattice(
    m: &[Complex64],
    s_in: SobolevIndex,
    s_out: SobolevIndex,
    grid: &GridSpec,
    shell: Option<Shell>,
    seed: u64,
) -> ProbeReport {
    let ds = SobolevIndex {
        s: s_out.s - s_in.s,
    };
    let d: Vec<f64> = m
        .par_iter()
        .enumerate()
        .map(|(i, v)| {
            let xi = grid.xi(i);
            let inside = shell.map_or(true, |sh| {
                let r = xi.0.hypot(xi.1);
                r >= sh.r_lo && r <= sh.r_hi
            });
            if inside {
                v.norm() * ds.weight(xi)
            } else {
                0.0
            }
        })
        .collect();
    let mut sup = 0.0;
    let mut arg = 0;
    let mut points = 0;
    for (i, &v) in d.iter().enumerate() {
        if v > 0.0 {
            points += 1;
        }
        if v > sup {
            sup = v;
            arg = i;
        }
    }
    let second = d
        .iter()
        .fold(0.0f64, |s, &v| if v < sup { s.max(v) } else { s });

    let d2: Vec<f64> = d.iter().map(|v| v * v).collect();
    let estimate = lanczos_top(&d2, seed).sqrt();
    ProbeReport {
        sup,
        argmax: grid.xi(arg),
        power_estimate: estimate,
        iterations: POWER_ITERATIONS,
        agreement: if sup > 0.0 {
            (estimate / sup - 1.0).abs()
        } else {
            0.0
        },
        gap_ratio: if sup > 0.0 { second / sup } else { 0.0 },
        points,
    }
}

/// Largest eigenvalue of diag(d2) from POWER_ITERATIONS Lanczos steps on a
/// seeded complex Gaussian start. The Krylov space is the one spanned by the
/// power iterates; the top Ritz value replaces the Rayleigh quotient.
pub fn lanczos_top(d2: &[f64], seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut q: Vec<Complex64> = (0..d2.len())
        .map(|_| {
            Complex64::new(
                StandardNormal.sample(&mut rng),
                StandardNormal.sample(&mut rng),
            )
        })
        .collect();
    let norm = ordered_sum(&q, |x, _| x.norm_sqr()).sqrt();
    q.par_iter_mut().for_each(|x| *x /= norm);
    let mut prev = vec![Complex64::new(0.0, 0.0); d2.len()];
    let mut alphas = Vec::with_capacity(POWER_ITERATIONS);
    let mut betas: Vec<f64> = Vec::with_capacity(POWER_ITERATIONS);
    for _ in 0..POWER_ITERATIONS {
        let beta = betas.last().copied().unwrap_or(0.0);
        // w = D q - beta prev, stored in prev
        prev.par_iter_mut()
            .zip(&q)
            .zip(d2)
            .for_each(|((p, x), &w)| *p = x * w - *p * beta);
        let alpha = ordered_sum(&q, |x, i| (x.conj() * prev[i]).re);
        prev.par_iter_mut()
            .zip(&q)
            .for_each(|(p, x)| *p -= x * alpha);
        alphas.push(alpha);
        let b = ordered_sum(&prev, |x, _| x.norm_sqr()).sqrt();
        if b <= 1e-14 * alpha.abs().max(f64::MIN_POSITIVE) {
            break;
        }
        betas.push(b);
        // (q, prev) <- (w / b, q)
        std::mem::swap(&mut q, &mut prev);
        q.par_iter_mut().for_each(|x| *x /= b);
    }
    let k = alphas.len();
    let t = nalgebra::DMatrix::from_fn(k, k, |i, j| {
        if i == j {
            alphas[i]
        } else if i + 1 == j {
            betas[i]
        } else if j + 1 == i {
            betas[j]
        } else {
            0.0
        }
    });
    t.symmetric_eigenvalues()
        .iter()
        .fold(0.0f64, |m, &v| m.max(v))
}

const CHUNK: usize = 4096;

/// Sum in fixed chunks so the result does not depend on the thread count.
fn ordered_sum<F: Fn(&Complex64, usize) -> f64 + Sync>(v: &[Complex64], f: F) -> f64 {
    let parts: Vec<f64> = v
        .par_chunks(CHUNK)
        .enumerate()
        .map(|(c, xs)| {
            xs.iter()
                .enumerate()
                .map(|(i, x)| f(x, c * CHUNK + i))
                .sum()
        })
        .collect();
    parts.iter().sum()
}
