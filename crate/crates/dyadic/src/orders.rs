use serde::Serialize;

use crate::error::{DyadicError, Result};

/// Orders (p, l) of the class and the splitting parameter δ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrderPair {
    pub p: f64,
    pub l: f64,
    pub delta: f64,
}

impl OrderPair {
    pub fn new(p: f64, l: f64, delta: f64) -> Result<Self> {
        if !(p.is_finite() && l.is_finite()) {
            return Err(DyadicError::Domain(format!(
                "orders must be finite, got ({p}, {l})"
            )));
        }
        if !(1.0 / 3.0..0.5).contains(&delta) {
            return Err(DyadicError::Domain(format!(
                "delta must lie in [1/3, 1/2), got {delta}"
            )));
        }
        Ok(OrderPair { p, l, delta })
    }

    /// δ = 1/3.
    pub fn with_default_delta(p: f64, l: f64) -> Result<Self> {
        Self::new(p, l, 1.0 / 3.0)
    }

    /// [δj], the last k belonging to A₀ at level j.
    pub fn split(&self, j: u32) -> u32 {
        // the small offset keeps [j/3] exact for δ = 1/3
        ((self.delta * j as f64) + 1e-12).floor() as u32
    }

    /// Predicted j- and k-exponents of a block norm.
    pub fn block_exponents(&self) -> (f64, f64) {
        (self.p + 0.5, self.l - 0.5)
    }

    /// Exponent of the A_j group bound for l < 1/2.
    pub fn group_exponent(&self) -> f64 {
        self.p + 0.5 + self.delta * (self.l - 0.5)
    }

    /// Order of A₀ as an operator, p + 1/6 + δ(l + 1/2)_+.
    pub fn a0_exponent(&self) -> f64 {
        self.p + 1.0 / 6.0 + self.delta * (self.l + 0.5).max(0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_window() {
        assert!(OrderPair::new(0.0, 0.0, 0.3).is_err());
        assert!(OrderPair::new(0.0, 0.0, 0.5).is_err());
        let o = OrderPair::new(0.0, 0.0, 1.0 / 3.0).unwrap();
        assert_eq!(o.split(12), 4);
        assert_eq!(o.split(11), 3);
        assert_eq!(o.split(0), 0);
    }
}
