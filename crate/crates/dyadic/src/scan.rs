//! Suprema of |f| over a box: a coarse product grid, then local pattern
//! search around the best grid maxima with the step halved at each level.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;

/// Refinement levels; each halves the step, so the final resolution is the
/// coarse spacing over 64.
pub const REFINE_DEPTH: usize = 6;
const CANDIDATES: usize = 3;
const MOVES_PER_LEVEL: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SupReport {
    pub value: f64,
    pub argmax: (f64, f64),
    pub evaluations: usize,
}

/// Coarse grid given as sorted coordinate lists; `bounds` clamps refinement.
pub struct ScanGrid {
    pub xi1: Vec<f64>,
    pub xi2: Vec<f64>,
    pub bounds: ((f64, f64), (f64, f64)),
}

impl ScanGrid {
    pub fn new(mut xi1: Vec<f64>, mut xi2: Vec<f64>, bounds: ((f64, f64), (f64, f64))) -> Self {
        for v in [&mut xi1, &mut xi2] {
            v.retain(|x| x.is_finite());
            v.sort_by(f64::total_cmp);
            v.dedup();
        }
        let (b1, b2) = bounds;
        xi1.retain(|&x| x >= b1.0 && x <= b1.1);
        xi2.retain(|&x| x >= b2.0 && x <= b2.1);
        ScanGrid { xi1, xi2, bounds }
    }
}

/// `n` points evenly spaced over [a, b], endpoints included.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![0.5 * (a + b)];
    }
    (0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect()
}

/// `n` cell midpoints of [a, b].
pub fn midpoints(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| a + (b - a) * (i as f64 + 0.5) / n as f64)
        .collect()
}

fn spacing(v: &[f64], i: usize) -> f64 {
    let left = if i > 0 {
        v[i] - v[i - 1]
    } else {
        f64::INFINITY
    };
    let right = if i + 1 < v.len() {
        v[i + 1] - v[i]
    } else {
        f64::INFINITY
    };
    let h = left.min(right);
    if h.is_finite() {
        h
    } else {
        1.0
    }
}

pub fn sup_search<F>(f: F, grid: &ScanGrid) -> Result<SupReport>
where
    F: Fn((f64, f64)) -> Result<f64> + Sync,
{
    let (n1, n2) = (grid.xi1.len(), grid.xi2.len());
    if n1 == 0 || n2 == 0 {
        return Ok(SupReport {
            value: 0.0,
            argmax: (0.0, 0.0),
            evaluations: 0,
        });
    }
    let vals: Vec<f64> = (0..n1 * n2)
        .into_par_iter()
        .map(|i| f((grid.xi1[i / n2], grid.xi2[i % n2])).map(f64::abs))
        .collect::<Result<_>>()?;
    let mut evaluations = vals.len();

    // grid local maxima, best first
    let at = |a: usize, b: usize| vals[a * n2 + b];
    let mut peaks: Vec<(usize, usize)> = vec![];
    for a in 0..n1 {
        for b in 0..n2 {
            let v = at(a, b);
            if v == 0.0 {
                continue;
            }
            let mut top = true;
            for (da, db) in [(-1i64, 0i64), (1, 0), (0, -1), (0, 1)] {
                let (p, q) = (a as i64 + da, b as i64 + db);
                if p >= 0
                    && q >= 0
                    && (p as usize) < n1
                    && (q as usize) < n2
                    && at(p as usize, q as usize) > v
                {
                    top = false;
                }
            }
            if top {
                peaks.push((a, b));
            }
        }
    }
    peaks.sort_by(|x, y| at(y.0, y.1).total_cmp(&at(x.0, x.1)).then(x.cmp(y)));
    peaks.truncate(CANDIDATES);

    let mut best = SupReport {
        value: 0.0,
        argmax: (grid.xi1[0], grid.xi2[0]),
        evaluations: 0,
    };
    for (i, v) in vals.iter().enumerate() {
        if *v > best.value {
            best.value = *v;
            best.argmax = (grid.xi1[i / n2], grid.xi2[i % n2]);
        }
    }
    let ((lo1, hi1), (lo2, hi2)) = grid.bounds;
    let results: Vec<(f64, (f64, f64), usize)> = peaks
        .par_iter()
        .map(|&(a, b)| -> Result<(f64, (f64, f64), usize)> {
            let mut x = (grid.xi1[a], grid.xi2[b]);
            let mut v = at(a, b);
            let mut h = (0.5 * spacing(&grid.xi1, a), 0.5 * spacing(&grid.xi2, b));
            let mut count = 0;
            for _ in 0..REFINE_DEPTH {
                for _ in 0..MOVES_PER_LEVEL {
                    let mut moved = false;
                    let mut cand = (v, x);
                    for d1 in [-1.0, 0.0, 1.0] {
                        for d2 in [-1.0, 0.0, 1.0] {
                            if d1 == 0.0 && d2 == 0.0 {
                                continue;
                            }
                            let y = (
                                (x.0 + d1 * h.0).clamp(lo1, hi1),
                                (x.1 + d2 * h.1).clamp(lo2, hi2),
                            );
                            if y == x {
                                continue;
                            }
                            let w = f(y)?.abs();
                            count += 1;
                            if w > cand.0 {
                                cand = (w, y);
                                moved = true;
                            }
                        }
                    }
                    (v, x) = cand;
                    if !moved {
                        break;
                    }
                }
                h = (0.5 * h.0, 0.5 * h.1);
            }
            Ok((v, x, count))
        })
        .collect::<Result<_>>()?;
    for (v, x, count) in results {
        evaluations += count;
        if v > best.value {
            best.value = v;
            best.argmax = x;
        }
    }
    best.evaluations = evaluations;
    Ok(best)
}
