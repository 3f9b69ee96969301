//! Multiplier symbols on the frequency lattice and their diagonal action.
//!
//! Every symbol is set to zero at ξ = 0 and on the two Nyquist lines
//! (k1 = -n/2 or k2 = -n/2). The Nyquist modes have no partner -ξ on the
//! lattice, so an odd symbol cannot act on them without breaking realness.

use num_complex::Complex64;
use oscillatory::fractional::{kernel, Weight};
use oscillatory::gauss;
use oscillatory::quad::QuadratureSpec;
use oscillatory::{
    fractional_multiplier, multiplier_m, BumpFunction, MultiplierKind, MultiplierSpec,
    MultiplierTable,
};
use rayon::prelude::*;

use crate::error::{Result, SpectralError};
use crate::field::SpectralField;
use crate::grid::GridSpec;
use crate::nufft::Nufft1;

pub trait Symbol: Sync {
    fn eval(&self, xi: (f64, f64)) -> Result<Complex64>;

    /// True when m(-ξ) = conj m(ξ), so real fields stay real.
    fn preserves_real(&self) -> bool;

    /// Values at every lattice point, row-major. Masking is applied by the caller.
    fn lattice_values(&self, grid: &GridSpec) -> Result<Vec<Complex64>> {
        (0..grid.len())
            .into_par_iter()
            .map(|i| self.eval(grid.xi(i)))
            .collect()
    }
}

/// Symbol given by a closure.
pub struct FnSymbol<F> {
    pub f: F,
    pub real: bool,
}

impl<F> Symbol for FnSymbol<F>
where
    F: Fn((f64, f64)) -> Result<Complex64> + Sync,
{
    fn eval(&self, xi: (f64, f64)) -> Result<Complex64> {
        (self.f)(xi)
    }
    fn preserves_real(&self) -> bool {
        self.real
    }
}

/// The symbols named by a `MultiplierSpec`: the cubic Hilbert multiplier from
/// the shared table, the fractional kernels by quadrature, and the identity.
pub struct SpecSymbol<'a> {
    pub spec: MultiplierSpec,
    pub bump: BumpFunction,
    pub quad: QuadratureSpec,
    table: Option<&'a MultiplierTable>,
}

impl SpecSymbol<'static> {
    pub fn new(spec: MultiplierSpec) -> Result<Self> {
        let table = (spec.kind == MultiplierKind::HilbertCubic).then(MultiplierTable::shared);
        SpecSymbol::with_table(spec, table)
    }
}

impl<'a> SpecSymbol<'a> {
    pub fn with_table(spec: MultiplierSpec, table: Option<&'a MultiplierTable>) -> Result<Self> {
        spec.validate()?;
        match spec.kind {
            MultiplierKind::ModelBlock => Err(SpectralError::Domain(
                "model blocks are evaluated by the dyadic decomposition".into(),
            )),
            MultiplierKind::HilbertCubic if table.is_none() => Err(SpectralError::Domain(
                "the Hilbert multiplier needs a table".into(),
            )),
            _ => Ok(SpecSymbol {
                spec,
                bump: BumpFunction::plateau(),
                quad: QuadratureSpec::default(),
                table,
            }),
        }
    }

    pub fn with_quad(mut self, quad: QuadratureSpec) -> Self {
        self.quad = quad;
        self
    }

    pub fn with_bump(mut self, bump: BumpFunction) -> Self {
        self.bump = bump;
        self
    }

    fn is_fractional(&self) -> bool {
        matches!(
            self.spec.kind,
            MultiplierKind::FractionalCubic
                | MultiplierKind::FractionalParabola
                | MultiplierKind::LogCubic
        )
    }
}

impl Symbol for SpecSymbol<'_> {
    fn eval(&self, xi: (f64, f64)) -> Result<Complex64> {
        if xi == (0.0, 0.0) {
            return Ok(Complex64::new(0.0, 0.0));
        }
        match self.spec.kind {
            MultiplierKind::HilbertCubic => Ok(multiplier_m(xi, self.table.expect("checked"))?),
            MultiplierKind::Identity => Ok(Complex64::new(1.0, 0.0)),
            _ => Ok(fractional_multiplier(
                xi, &self.spec, &self.bump, &self.quad,
            )?),
        }
    }

    fn preserves_real(&self) -> bool {
        true
    }

    fn lattice_values(&self, grid: &GridSpec) -> Result<Vec<Complex64>> {
        if !self.is_fractional() {
            return (0..grid.len())
                .into_par_iter()
                .map(|i| self.eval(grid.xi(i)))
                .collect();
        }
        let (q, w) = kernel(&self.spec)?;
        let n = grid.n_per_axis;
        let d = grid.dxi();
        let line =
            LineQuadrature::new(q, w, &self.bump, grid.max_frequency(), grid.max_frequency());
        let nodes: Vec<f64> = line.t.iter().map(|t| t * d).collect();
        let plan = Nufft1::new(&nodes, n);
        let columns: Vec<Vec<Complex64>> = (0..n)
            .into_par_iter()
            .map(|b| {
                let x2 = grid.wavenumber(b) as f64 * d;
                let c: Vec<Complex64> = line
                    .t
                    .iter()
                    .zip(&line.w)
                    .map(|(&t, &wt)| Complex64::from_polar(wt, -x2 * t.powi(q)))
                    .collect();
                plan.apply(&c)
            })
            .collect();
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for (b, col) in columns.iter().enumerate() {
            for (a, v) in col.iter().enumerate() {
                out[a * n + b] = *v;
            }
        }
        Ok(out)
    }
}

/// Quadrature for ∫ w(|t|) χ(t) g(t) dt over [-1, 1], valid for every g whose
/// phase derivative is bounded by xi1_max + q·xi2_max·|t|^{q-1}.
pub struct LineQuadrature {
    pub t: Vec<f64>,
    pub w: Vec<f64>,
}

impl LineQuadrature {
    const PANEL_PHASE: f64 = 6.0;

    pub fn new(q: i32, weight: Weight, bump: &BumpFunction, xi1_max: f64, xi2_max: f64) -> Self {
        let qf = q as f64;
        let tc = 0.5f64
            .min(0.5 / (1.0 + xi1_max))
            .min((0.5 / (1.0 + xi2_max)).powf(1.0 / qf));
        let mut half: Vec<(f64, f64)> = Vec::new();
        let g16 = gauss::rule(16);
        let mut b = tc;
        for _ in 0..oscillatory::fractional::GRADED_LEVELS {
            let a = b * oscillatory::fractional::GRADED_RATIO;
            push_panel(&mut half, g16, a, b);
            b = a;
        }
        let g20 = gauss::rule(20);
        let mut a = tc;
        while a < 1.0 {
            let omega = xi1_max + qf * xi2_max * (2.0 * a).min(1.0).powi(q - 1);
            let mut width = (Self::PANEL_PHASE / omega.max(1e-300)).min(a).min(1.0 - a);
            if a >= 0.5 {
                width = width.min(1.0 / 32.0);
            }
            if 1.0 - (a + width) < 1e-12 {
                width = 1.0 - a;
            }
            push_panel(&mut half, g20, a, a + width);
            a += width;
        }
        let mut t = vec![0.0];
        let mut w = vec![2.0 * weight.primitive(b) * bump.value(0.0)];
        for (x, wx) in half {
            let base = wx * weight.eval(x) * bump.value(x);
            if base != 0.0 {
                t.push(x);
                w.push(base);
                t.push(-x);
                w.push(base);
            }
        }
        LineQuadrature { t, w }
    }
}

fn push_panel(out: &mut Vec<(f64, f64)>, rule: &gauss::GaussRule, a: f64, b: f64) {
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    for (x, w) in rule.nodes.iter().zip(&rule.weights) {
        out.push((c + h * x, w * h));
    }
}

/// Lattice values of `sym` with the origin and the Nyquist lines set to zero.
pub fn lattice_multiplier(sym: &dyn Symbol, grid: &GridSpec) -> Result<Vec<Complex64>> {
    grid.validate()?;
    let mut m = sym.lattice_values(grid)?;
    let n = grid.n_per_axis;
    let h = n / 2;
    m[h * n + h] = Complex64::new(0.0, 0.0);
    for i in 0..n {
        m[i] = Complex64::new(0.0, 0.0);
        m[i * n] = Complex64::new(0.0, 0.0);
    }
    Ok(m)
}

/// Diagonal action coeffs_out(ξ) = m(ξ)·coeffs_in(ξ) with precomputed lattice values.
pub fn apply_lattice(
    f: &SpectralField,
    m: &[Complex64],
    preserves_real: bool,
) -> Result<SpectralField> {
    if m.len() != f.coeffs.len() {
        return Err(SpectralError::Domain(
            "multiplier and field sizes differ".into(),
        ));
    }
    let coeffs = f.coeffs.par_iter().zip(m).map(|(c, m)| c * m).collect();
    Ok(SpectralField::from_parts(
        f.grid,
        coeffs,
        f.is_real_valued() && preserves_real,
    ))
}

pub fn apply_symbol(f: &SpectralField, sym: &dyn Symbol) -> Result<SpectralField> {
    let m = lattice_multiplier(sym, &f.grid)?;
    apply_lattice(f, &m, sym.preserves_real())
}

pub fn apply_multiplier(f: &SpectralField, spec: MultiplierSpec) -> Result<SpectralField> {
    apply_symbol(f, &SpecSymbol::new(spec)?)
}
