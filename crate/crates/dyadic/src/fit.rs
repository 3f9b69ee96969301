//! Log-linear regressions of measured norms against an index.

use serde::Serialize;

use crate::error::{DyadicError, Result};

pub const MIN_POINTS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayFit {
    pub slope: f64,
    pub intercept: f64,
    pub max_residual: f64,
    pub sample_range: (f64, f64),
    pub predicted: f64,
    pub tolerance: f64,
    /// |slope − predicted| ≤ tolerance
    pub pass: bool,
}

impl DecayFit {
    /// Ordinary least squares of y against x.
    pub fn linear(xs: &[f64], ys: &[f64], predicted: f64, tolerance: f64) -> Result<Self> {
        Self::pooled(&[(xs.to_vec(), ys.to_vec())], predicted, tolerance)
    }

    /// One common slope with a separate intercept per group; groups with a
    /// single point carry no slope information and are dropped. The reported
    /// intercept is the mean of the group intercepts.
    pub fn pooled(groups: &[(Vec<f64>, Vec<f64>)], predicted: f64, tolerance: f64) -> Result<Self> {
        let used: Vec<&(Vec<f64>, Vec<f64>)> = groups.iter().filter(|g| g.0.len() >= 2).collect();
        let points: usize = used.iter().map(|g| g.0.len()).sum();
        if points < MIN_POINTS {
            return Err(DyadicError::InsufficientData {
                points,
                needed: MIN_POINTS,
            });
        }
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        let (mut sxy, mut sxx) = (0.0, 0.0);
        for (xs, ys) in &used {
            let (mx, my) = (mean(xs), mean(ys));
            for (x, y) in xs.iter().zip(ys) {
                sxy += (x - mx) * (y - my);
                sxx += (x - mx) * (x - mx);
            }
        }
        if sxx == 0.0 {
            return Err(DyadicError::InsufficientData {
                points: 0,
                needed: MIN_POINTS,
            });
        }
        let slope = sxy / sxx;
        let mut intercepts = vec![];
        let mut max_residual: f64 = 0.0;
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for (xs, ys) in &used {
            let b = mean(ys) - slope * mean(xs);
            intercepts.push(b);
            for (x, y) in xs.iter().zip(ys) {
                max_residual = max_residual.max((y - slope * x - b).abs());
                lo = lo.min(*x);
                hi = hi.max(*x);
            }
        }
        Ok(DecayFit {
            slope,
            intercept: mean(&intercepts),
            max_residual,
            sample_range: (lo, hi),
            predicted,
            tolerance,
            pass: (slope - predicted).abs() <= tolerance,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let xs: Vec<f64> = (0..8).map(f64::from).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 0.5 * x - 1.0).collect();
        let f = DecayFit::linear(&xs, &ys, 0.5, 0.1).unwrap();
        assert!((f.slope - 0.5).abs() < 1e-14 && f.max_residual < 1e-12 && f.pass);
        assert!((f.intercept + 1.0).abs() < 1e-13);
    }

    #[test]
    fn too_few_points() {
        let e = DecayFit::linear(&[1.0, 2.0, 3.0], &[0.0, 1.0, 2.0], 1.0, 0.1);
        assert!(matches!(
            e,
            Err(DyadicError::InsufficientData { points: 3, .. })
        ));
    }

    #[test]
    fn pooled_ignores_offsets() {
        let g1 = (vec![0.0, 1.0, 2.0], vec![5.0, 4.0, 3.0]);
        let g2 = (vec![3.0, 4.0, 5.0], vec![-1.0, -2.0, -3.0]);
        let f = DecayFit::pooled(&[g1, g2], -1.0, 0.01).unwrap();
        assert!((f.slope + 1.0).abs() < 1e-14 && f.max_residual < 1e-12);
    }
}
