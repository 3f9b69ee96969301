use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SpectralError};

pub const MIN_LOG2_N: u32 = 4;
pub const MAX_LOG2_N: u32 = 14;
/// Box side over field support: compactly supported data then see no wrap-around.
pub const PADDING: f64 = 8.0;

/// Square periodic box of side `period` sampled at `n_per_axis` points per axis.
/// Lattice frequencies are (2π/period)·{-n/2, ..., n/2 - 1} on each axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n_per_axis: usize,
    pub period: f64,
}

impl GridSpec {
    pub fn new(n_per_axis: usize, period: f64) -> Result<Self> {
        let g = GridSpec { n_per_axis, period };
        g.validate()?;
        Ok(g)
    }

    /// Grid whose period is PADDING times the side of the support box.
    pub fn for_support(n_per_axis: usize, support: f64) -> Result<Self> {
        Self::new(n_per_axis, PADDING * support)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n_per_axis;
        let ok_n = n.is_power_of_two() && n >= 1 << MIN_LOG2_N && n <= 1 << MAX_LOG2_N;
        if !ok_n {
            return Err(SpectralError::Domain(format!(
                "n_per_axis must be a power of two in [2^{MIN_LOG2_N}, 2^{MAX_LOG2_N}], got {n}"
            )));
        }
        if !(self.period > 0.0 && self.period.is_finite()) {
            return Err(SpectralError::Domain(format!(
                "period must be positive, got {}",
                self.period
            )));
        }
        Ok(())
    }

    /// Lattice spacing 2π/period.
    pub fn dxi(&self) -> f64 {
        2.0 * PI / self.period
    }

    pub fn cell_area(&self) -> f64 {
        self.dxi() * self.dxi()
    }

    pub fn len(&self) -> usize {
        self.n_per_axis * self.n_per_axis
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Integer frequency index of storage position `a` along one axis.
    pub fn wavenumber(&self, a: usize) -> i64 {
        a as i64 - (self.n_per_axis / 2) as i64
    }

    /// Storage position of integer wavenumber `k`, if on the lattice.
    pub fn position(&self, k: i64) -> Option<usize> {
        let a = k + (self.n_per_axis / 2) as i64;
        (a >= 0 && (a as usize) < self.n_per_axis).then_some(a as usize)
    }

    /// Frequency at row-major storage index (row = ξ1, column = ξ2).
    pub fn xi(&self, index: usize) -> (f64, f64) {
        let n = self.n_per_axis;
        let d = self.dxi();
        (
            self.wavenumber(index / n) as f64 * d,
            self.wavenumber(index % n) as f64 * d,
        )
    }

    /// Largest lattice frequency magnitude along one axis, π n / period.
    pub fn max_frequency(&self) -> f64 {
        self.dxi() * (self.n_per_axis / 2) as f64
    }

    /// Spatial sample spacing.
    pub fn dx(&self) -> f64 {
        self.period / self.n_per_axis as f64
    }
}

/// Sobolev order s.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SobolevIndex {
    pub s: f64,
}

impl SobolevIndex {
    pub fn new(s: f64) -> Result<Self> {
        if s.is_finite() {
            Ok(SobolevIndex { s })
        } else {
            Err(SpectralError::Domain(format!(
                "Sobolev index must be finite, got {s}"
            )))
        }
    }

    /// (1 + |ξ|²)^{s/2}
    pub fn weight(&self, xi: (f64, f64)) -> f64 {
        (1.0 + xi.0 * xi.0 + xi.1 * xi.1).powf(0.5 * self.s)
    }
}

impl From<f64> for SobolevIndex {
    fn from(s: f64) -> Self {
        SobolevIndex { s }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(GridSpec::new(8, 1.0).is_err());
        assert!(GridSpec::new(48, 1.0).is_err());
        assert!(GridSpec::new(1 << 15, 1.0).is_err());
        assert!(GridSpec::new(64, 0.0).is_err());
        assert!(GridSpec::new(64, 2.0).is_ok());
    }

    #[test]
    fn lattice_layout() {
        let g = GridSpec::new(16, 2.0 * PI).unwrap();
        assert_eq!(g.wavenumber(0), -8);
        assert_eq!(g.position(7), Some(15));
        assert_eq!(g.position(8), None);
        assert_eq!(g.xi(8 * 16 + 8), (0.0, 0.0));
        assert_eq!(g.xi(9 * 16 + 6), (1.0, -2.0));
        assert_eq!(g.max_frequency(), 8.0);
    }
}
