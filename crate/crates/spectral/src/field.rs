//! Spectral fields on the periodic box.
//!
//! Coefficients approximate the unitary transform
//! f̂(ξ) = (2π)^{-1} ∫ f(x) e^{-ix·ξ} dx, so that
//! f(x) = (2π)^{-1} Σ_ξ f̂(ξ) e^{ix·ξ} · cell_area and
//! ‖f‖₂² = Σ_ξ |f̂(ξ)|² · cell_area exactly.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use crate::error::{Result, SpectralError};
use crate::grid::{GridSpec, SobolevIndex};

/// Relative tolerance for the real-valued flag.
pub const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    pub grid: GridSpec,
    /// Row-major, row = ξ1 index, column = ξ2 index, centered ordering.
    pub coeffs: Vec<Complex64>,
    real_valued: bool,
}

impl SpectralField {
    pub fn new(grid: GridSpec, coeffs: Vec<Complex64>) -> Result<Self> {
        grid.validate()?;
        if coeffs.len() != grid.len() {
            return Err(SpectralError::Domain(format!(
                "expected {} coefficients, got {}",
                grid.len(),
                coeffs.len()
            )));
        }
        let mut f = SpectralField {
            grid,
            coeffs,
            real_valued: false,
        };
        f.real_valued = f.hermitian_defect() <= HERMITIAN_TOL;
        Ok(f)
    }

    pub fn zeros(grid: GridSpec) -> Result<Self> {
        Self::new(grid, vec![Complex64::new(0.0, 0.0); grid.len()])
    }

    /// Unit coefficient at integer wavenumbers (k1, k2).
    pub fn single_mode(grid: GridSpec, k: (i64, i64)) -> Result<Self> {
        let mut f = Self::zeros(grid)?;
        let idx = f
            .index_of(k)
            .ok_or_else(|| SpectralError::Domain(format!("mode {k:?} is outside the lattice")))?;
        f.coeffs[idx] = Complex64::new(1.0, 0.0);
        f.real_valued = f.hermitian_defect() <= HERMITIAN_TOL;
        Ok(f)
    }

    pub(crate) fn from_parts(grid: GridSpec, coeffs: Vec<Complex64>, real_valued: bool) -> Self {
        SpectralField {
            grid,
            coeffs,
            real_valued,
        }
    }

    pub fn index_of(&self, k: (i64, i64)) -> Option<usize> {
        let a = self.grid.position(k.0)?;
        let b = self.grid.position(k.1)?;
        Some(a * self.grid.n_per_axis + b)
    }

    pub fn is_real_valued(&self) -> bool {
        self.real_valued
    }

    /// max |c(-ξ) - conj c(ξ)| / max |c|, with -ξ taken modulo the lattice so
    /// that the Nyquist lines pair with themselves. Zero iff the field is real.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.grid.n_per_axis;
        let scale = self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.norm()));
        if scale == 0.0 {
            return 0.0;
        }
        let partner = |a: usize| (n - a) % n;
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                let c = self.coeffs[a * n + b];
                let d = self.coeffs[partner(a) * n + partner(b)];
                worst = worst.max((d - c.conj()).norm());
            }
        }
        worst / scale
    }

    pub fn l2_norm(&self) -> f64 {
        sobolev_norm(self, SobolevIndex { s: 0.0 })
    }

    /// Samples f(x) at x = (i, j)·dx, i, j = 0..n, row-major (row = x1).
    pub fn to_spatial(&self) -> Vec<Complex64> {
        let n = self.grid.n_per_axis;
        let h = n / 2;
        let mut buf = vec![Complex64::new(0.0, 0.0); n * n];
        for a in 0..n {
            let p = (a + h) % n;
            for b in 0..n {
                buf[p * n + (b + h) % n] = self.coeffs[a * n + b];
            }
        }
        fft2(&mut buf, n, true);
        let scale = self.grid.cell_area() / (2.0 * std::f64::consts::PI);
        buf.par_iter_mut().for_each(|v| *v *= scale);
        buf
    }

    /// Inverse of `to_spatial`.
    pub fn from_spatial(grid: GridSpec, samples: &[Complex64]) -> Result<Self> {
        grid.validate()?;
        let n = grid.n_per_axis;
        if samples.len() != n * n {
            return Err(SpectralError::Domain(
                "sample count does not match the grid".into(),
            ));
        }
        let mut buf = samples.to_vec();
        fft2(&mut buf, n, false);
        let scale = grid.dx() * grid.dx() / (2.0 * std::f64::consts::PI);
        let h = n / 2;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n * n];
        for a in 0..n {
            let p = (a + h) % n;
            for b in 0..n {
                coeffs[a * n + b] = buf[p * n + (b + h) % n] * scale;
            }
        }
        Self::new(grid, coeffs)
    }

    /// Spatial L² norm from samples, (dx² Σ |f(x_j)|²)^{1/2}.
    pub fn spatial_l2(grid: &GridSpec, samples: &[Complex64]) -> f64 {
        let s: f64 = samples.iter().map(|v| v.norm_sqr()).sum();
        (s * grid.dx() * grid.dx()).sqrt()
    }

    pub fn add(&self, other: &SpectralField) -> Result<SpectralField> {
        if self.grid != other.grid {
            return Err(SpectralError::Domain(
                "fields live on different grids".into(),
            ));
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        SpectralField::new(self.grid, coeffs)
    }
}

/// ( Σ_ξ (1+|ξ|²)^s |f̂(ξ)|² · cell_area )^{1/2}, summed row by row in a fixed order.
pub fn sobolev_norm(f: &SpectralField, s: SobolevIndex) -> f64 {
    let g = f.grid;
    let n = g.n_per_axis;
    let d = g.dxi();
    let rows: Vec<f64> = f
        .coeffs
        .par_chunks(n)
        .enumerate()
        .map(|(a, row)| {
            let x1 = g.wavenumber(a) as f64 * d;
            let mut acc = 0.0;
            for (b, c) in row.iter().enumerate() {
                let x2 = g.wavenumber(b) as f64 * d;
                let w = if s.s == 0.0 {
                    1.0
                } else {
                    (1.0 + x1 * x1 + x2 * x2).powf(s.s)
                };
                acc += w * c.norm_sqr();
            }
            acc
        })
        .collect();
    (rows.iter().sum::<f64>() * g.cell_area()).sqrt()
}

/// Gaussian packet in frequency with standard deviation `width` about the
/// lattice point nearest `center`, scaled to unit L² norm.
pub fn make_wave_packet(grid: GridSpec, center: (f64, f64), width: f64) -> Result<SpectralField> {
    grid.validate()?;
    let d = grid.dxi();
    if !(width > d) {
        return Err(SpectralError::Domain(format!(
            "packet width {width} must exceed the lattice spacing {d}"
        )));
    }
    let k0 = ((center.0 / d).round() as i64, (center.1 / d).round() as i64);
    let c = (k0.0 as f64 * d, k0.1 as f64 * d);
    let reach = 6.0 * width;
    let lo = grid.wavenumber(0) as f64 * d;
    let hi = grid.wavenumber(grid.n_per_axis - 1) as f64 * d;
    if c.0 - reach < lo || c.0 + reach > hi || c.1 - reach < lo || c.1 + reach > hi {
        return Err(SpectralError::Domain(format!(
            "the 6σ ball around {c:?} leaves the lattice [{lo}, {hi}]²"
        )));
    }
    let coeffs: Vec<Complex64> = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let xi = grid.xi(i);
            let r2 = (xi.0 - c.0).powi(2) + (xi.1 - c.1).powi(2);
            Complex64::new((-0.5 * r2 / (width * width)).exp(), 0.0)
        })
        .collect();
    let mut f = SpectralField::new(grid, coeffs)?;
    let norm = f.l2_norm();
    f.coeffs.par_iter_mut().for_each(|v| *v /= norm);
    Ok(f)
}

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    let mut p = FftPlanner::new();
    if inverse {
        p.plan_fft_inverse(n)
    } else {
        p.plan_fft_forward(n)
    }
}

/// Unnormalized 2-D transform of a row-major n×n array.
pub(crate) fn fft2(buf: &mut [Complex64], n: usize, inverse: bool) {
    let fft = plan(n, inverse);
    buf.par_chunks_mut(n).for_each(|row| fft.process(row));
    transpose(buf, n);
    buf.par_chunks_mut(n).for_each(|row| fft.process(row));
    transpose(buf, n);
}

fn transpose(buf: &mut [Complex64], n: usize) {
    for i in 0..n {
        for j in i + 1..n {
            buf.swap(i * n + j, j * n + i);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn grid() -> GridSpec {
        GridSpec::new(32, 2.0 * PI).unwrap()
    }

    #[test]
    fn single_mode_round_trip() {
        let g = grid();
        let f = SpectralField::single_mode(g, (3, -2)).unwrap();
        let x = f.to_spatial();
        // f(x) = (2π)^{-1} e^{ix·ξ} · cell_area with cell_area = 1
        let v = x[5 * 32 + 7];
        let xs = (5.0 * g.dx(), 7.0 * g.dx());
        let expect = Complex64::from_polar(1.0 / (2.0 * PI), 3.0 * xs.0 - 2.0 * xs.1);
        assert!((v - expect).norm() < 1e-14);
        let back = SpectralField::from_spatial(g, &x).unwrap();
        for (a, b) in back.coeffs.iter().zip(&f.coeffs) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn real_samples_give_real_flag() {
        let g = grid();
        let x: Vec<Complex64> = (0..g.len())
            .map(|i| Complex64::new(((i * 7919) % 101) as f64 / 101.0, 0.0))
            .collect();
        let f = SpectralField::from_spatial(g, &x).unwrap();
        assert!(f.is_real_valued());
        let single = SpectralField::single_mode(g, (1, 1)).unwrap();
        assert!(!single.is_real_valued());
        assert!(SpectralField::single_mode(g, (0, 0))
            .unwrap()
            .is_real_valued());
    }

    #[test]
    fn sobolev_of_single_mode() {
        let g = GridSpec::new(16, 4.0).unwrap();
        let f = SpectralField::single_mode(g, (2, 1)).unwrap();
        let xi = (2.0 * g.dxi(), g.dxi());
        for s in [-1.0, 0.0, 0.5, 2.0] {
            let expect = (1.0 + xi.0 * xi.0 + xi.1 * xi.1).powf(s / 2.0) * g.dxi();
            let got = sobolev_norm(&f, SobolevIndex { s });
            assert!((got / expect - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn packet_domain_checks() {
        let g = GridSpec::new(64, 2.0 * PI).unwrap();
        assert!(make_wave_packet(g, (0.0, 0.0), 0.5).is_err());
        assert!(make_wave_packet(g, (0.0, 25.0), 2.0).is_err());
        let f = make_wave_packet(g, (0.2, -0.3), 2.0).unwrap();
        assert!((f.l2_norm() - 1.0).abs() < 1e-14);
    }
}
