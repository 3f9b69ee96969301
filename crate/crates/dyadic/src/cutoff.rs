//! The non-homogeneous dyadic partition of unity.
//!
//! With φ(t) = profile(t) equal to 1 on |t| ≤ 1 and 0 on |t| ≥ 2, set
//! χ₀ = φ and χ_j(t) = φ(t/2^j) − φ(t/2^{j−1}). Then Σ_{j≤J} χ_j = φ(·/2^J),
//! and the two-index remainder has the closed form
//! χ_∞(θ) = 1 − Σ_j χ_j(θ₂) φ(θ₁/2^j).

use oscillatory::BumpFunction;

#[derive(Debug, Clone)]
pub struct CutoffFamily {
    pub base_bump: BumpFunction,
}

impl Default for CutoffFamily {
    fn default() -> Self {
        CutoffFamily {
            base_bump: BumpFunction::plateau(),
        }
    }
}

impl CutoffFamily {
    pub fn new(base_bump: BumpFunction) -> Self {
        CutoffFamily { base_bump }
    }

    /// φ(t): the bump stretched to be 1 on [-1, 1] and 0 outside (-2, 2).
    pub fn profile(&self, t: f64) -> f64 {
        self.base_bump.value(0.5 * t)
    }

    /// Σ_{i≤m} χ_i(t) = φ(t/2^m).
    pub fn partial(&self, m: u32, t: f64) -> f64 {
        self.profile(t / pow2(m))
    }

    pub fn chi(&self, j: u32, t: f64) -> f64 {
        if j == 0 {
            self.profile(t)
        } else {
            self.partial(j, t) - self.partial(j - 1, t)
        }
    }

    /// Support of χ_j as an interval in |t|.
    pub fn support(j: u32) -> (f64, f64) {
        if j == 0 {
            (0.0, 2.0)
        } else {
            (pow2(j - 1), pow2(j + 1))
        }
    }

    /// χ_{jk}(θ) = χ_k(θ₁) χ_j(θ₂).
    pub fn chi_jk(&self, j: u32, k: u32, theta: (f64, f64)) -> f64 {
        self.chi(k, theta.0) * self.chi(j, theta.1)
    }

    /// Levels j with χ_j(t) possibly non-zero.
    pub fn levels_at(t: f64) -> Vec<u32> {
        let a = t.abs();
        if a < 1.0 {
            return vec![0];
        }
        let top = a.log2().floor() as i64;
        (top.max(0)..=top + 1).map(|j| j as u32).collect()
    }

    /// χ_∞(θ) for the infinite family.
    pub fn remainder(&self, theta: (f64, f64)) -> f64 {
        let mut s = 0.0;
        for j in Self::levels_at(theta.1) {
            s += self.chi(j, theta.1) * self.partial(j, theta.0);
        }
        1.0 - s
    }
}

pub(crate) fn pow2(m: u32) -> f64 {
    (2.0f64).powi(m as i32)
}
