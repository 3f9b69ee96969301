//! Block norms, cross norms and the A₀ / A_j / A_∞ groups as multiplier suprema.
//!
//! All amplitudes are even in θ₁, which gives M(ξ₁, −ξ₂) = M(−ξ₁, ξ₂); scans
//! therefore cover ξ₂ ≥ 0 and both signs of ξ₁.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use oscillatory::DyadicIndex;
use serde::Serialize;

use crate::amplitude::BlockSymbol;
use crate::block::{BlockEngine, Window};
use crate::cutoff::{pow2, CutoffFamily};
use crate::error::Result;
use crate::fit::DecayFit;
use crate::orders::OrderPair;
use crate::scan::{linspace, midpoints, sup_search, ScanGrid, SupReport, REFINE_DEPTH};

const XI2_POINTS: usize = 9;
const GLOBAL_POINTS: usize = 17;
const LOBE_POINTS: usize = 25;
/// Lobes are widened by this many Airy lengths c on each side.
const LOBE_MARGIN: f64 = 6.0;

fn airy_length(xi2: f64) -> f64 {
    (3.0 * xi2.abs()).cbrt()
}

/// ξ₂-range of χ_j restricted to ξ₂ ≥ 0.
fn level_range(j: u32) -> (f64, f64) {
    CutoffFamily::support(j)
}

/// ξ₁ points covering the window support |θ₁| ∈ [r0, r1] widened by `margin`.
fn lobe_points(r0: f64, r1: f64, margin: f64, n: usize) -> Vec<f64> {
    if r0 == 0.0 {
        return linspace(-r1 - margin, r1 + margin, 2 * n - 1);
    }
    let mut v = linspace(r0 - margin, r1 + margin, n);
    v.extend(linspace(-r1 - margin, -r0 + margin, n));
    v
}

/// Scan box for level j: ξ₂ over supp χ_j, ξ₁ over [−2^{j+1}, 2^{j+1}]
/// widened by the lobe margin, with extra points on each θ₁-window.
fn level_grid(j: u32, windows: &[(f64, f64)], xi2: (f64, f64)) -> ScanGrid {
    let c = airy_length(xi2.1);
    let reach = pow2(j + 1) + LOBE_MARGIN * c;
    let mut xi1 = linspace(-pow2(j + 1), pow2(j + 1), GLOBAL_POINTS);
    for &(r0, r1) in windows {
        xi1.extend(lobe_points(r0, r1, LOBE_MARGIN * c, LOBE_POINTS));
    }
    ScanGrid::new(
        xi1,
        midpoints(xi2.0, xi2.1, XI2_POINTS),
        ((-reach, reach), xi2),
    )
}

fn band_support(k: u32) -> (f64, f64) {
    CutoffFamily::support(k)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Group {
    A0,
    Aj(u32),
    Ainf,
}

impl BlockEngine {
    /// sup_ξ |M_{jk}(ξ)| = ‖A_{jk}‖_{L²→L²}.
    pub fn block_norm(&self, idx: DyadicIndex) -> Result<SupReport> {
        let grid = level_grid(idx.j, &[band_support(idx.k)], level_range(idx.j));
        sup_search(|xi| self.block(xi, idx), &grid)
    }

    /// sup_ξ |M_b(ξ) M_a(ξ)| = ‖B*A‖ for the two block multipliers.
    pub fn offdiagonal_norm(&self, a: DyadicIndex, b: DyadicIndex) -> Result<SupReport> {
        let (ra, rb) = (level_range(a.j), level_range(b.j));
        let xi2 = (ra.0.max(rb.0), ra.1.min(rb.1));
        if xi2.0 >= xi2.1 {
            // χ_j χ_{j'} ≡ 0
            return Ok(SupReport {
                value: 0.0,
                argmax: (0.0, 0.0),
                evaluations: 0,
            });
        }
        let top = a.j.max(b.j);
        let grid = level_grid(top, &[band_support(a.k), band_support(b.k)], xi2);
        sup_search(|xi| Ok(self.block(xi, a)? * self.block(xi, b)?), &grid)
    }

    /// Multiplier of a group; `jmax` bounds the levels summed into A₀.
    pub fn group_multiplier(&self, xi: (f64, f64), group: Group, jmax: u32) -> Result<f64> {
        match group {
            Group::A0 => {
                let mut s = 0.0;
                for j in CutoffFamily::levels_at(xi.1) {
                    if j > jmax {
                        continue;
                    }
                    let pre = self.family.chi(j, xi.1);
                    if pre != 0.0 {
                        let w = Window::Band {
                            lo: None,
                            hi: self.orders.split(j),
                        };
                        s += pre * self.windowed(xi, w)?;
                    }
                }
                Ok(s)
            }
            Group::Aj(j) => {
                let pre = self.family.chi(j, xi.1);
                if j == 0 || pre == 0.0 {
                    return Ok(0.0);
                }
                let w = Window::Band {
                    lo: Some(self.orders.split(j)),
                    hi: j,
                };
                Ok(pre * self.windowed(xi, w)?)
            }
            Group::Ainf => self.windowed(xi, Window::Remainder),
        }
    }

    /// sup |M_{A_j}| over its level.
    pub fn aj_norm(&self, j: u32) -> Result<SupReport> {
        let s = self.orders.split(j);
        let grid = level_grid(j, &[(pow2(s), pow2(j + 1))], level_range(j));
        sup_search(|xi| self.group_multiplier(xi, Group::Aj(j), j), &grid)
    }

    /// sup |M_{A₀}| over the shell 2^{n−1} ≤ |ξ₂| ≤ 2^{n+1}, |ξ₁| ≤ 2^{n+1}.
    pub fn a0_shell_sup(&self, n: u32) -> Result<SupReport> {
        let xi2 = level_range(n.max(1));
        let reach = pow2(self.orders.split(n + 2) + 1);
        let grid = level_grid(n, &[(0.0, reach)], xi2);
        let jmax = n + 2;
        sup_search(|xi| self.group_multiplier(xi, Group::A0, jmax), &grid)
    }

    /// sup |M_{A_∞}| over the shell 2^{n−1} ≤ |ξ₁| ≤ 2^{n+1}, |ξ₂| ≤ 2^{n+1},
    /// where the remainder lives (|θ₁| ≥ |θ₂|/2 on its support).
    pub fn ainf_shell_sup(&self, n: u32) -> Result<SupReport> {
        let (lo, hi) = (pow2(n.saturating_sub(1)), pow2(n + 1));
        let xi1 = lobe_points(lo, hi, 0.0, 2 * LOBE_POINTS);
        let grid = ScanGrid::new(xi1, linspace(0.0, hi, XI2_POINTS), ((-hi, hi), (0.0, hi)));
        let f = |xi: (f64, f64)| {
            if xi.0.abs() < lo {
                return Ok(0.0);
            }
            self.group_multiplier(xi, Group::Ainf, 0)
        };
        sup_search(f, &grid)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlockEntry {
    pub norm: f64,
    pub argmax: (f64, f64),
    pub evaluations: usize,
}

/// Measured block norms for one symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockNormTable {
    pub entries: BTreeMap<DyadicIndex, BlockEntry>,
    pub symbol: BlockSymbol,
    pub orders: OrderPair,
    pub refine_depth: usize,
}

impl BlockNormTable {
    pub fn empty(symbol: BlockSymbol, orders: OrderPair) -> Self {
        BlockNormTable {
            entries: BTreeMap::new(),
            symbol,
            orders,
            refine_depth: REFINE_DEPTH,
        }
    }

    /// Norms for the given blocks, computed in the order given.
    pub fn compute(engine: &BlockEngine, indices: &[DyadicIndex]) -> Result<Self> {
        let mut t = Self::empty(engine.symbol, engine.orders);
        for &idx in indices {
            let r = engine.block_norm(idx)?;
            t.entries.insert(
                idx,
                BlockEntry {
                    norm: r.value,
                    argmax: r.argmax,
                    evaluations: r.evaluations,
                },
            );
        }
        Ok(t)
    }

    pub fn norm(&self, idx: DyadicIndex) -> Option<f64> {
        self.entries.get(&idx).map(|e| e.norm)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("j,k,norm,log2_norm\n");
        for (idx, e) in &self.entries {
            s.push_str(&format!(
                "{},{},{:.16e},{:.16e}\n",
                idx.j,
                idx.k,
                e.norm,
                e.norm.log2()
            ));
        }
        s
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut f = std::fs::File::create(path)?;
        f.write_all(self.to_csv().as_bytes())?;
        Ok(())
    }
}

/// Blocks with [δj] < k ≤ j for jmin ≤ j ≤ jmax, where the block bound applies.
pub fn regime_indices(orders: &OrderPair, jmin: u32, jmax: u32) -> Vec<DyadicIndex> {
    let mut v = vec![];
    for j in jmin..=jmax {
        for k in orders.split(j) + 1..=j {
            v.push(DyadicIndex { j, k });
        }
    }
    v
}

/// Every block with j ≤ jmax.
pub fn all_indices(jmax: u32) -> Vec<DyadicIndex> {
    (0..=jmax)
        .flat_map(|j| (0..=j).map(move |k| DyadicIndex { j, k }))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Axis {
    J,
    K,
}

/// The fit report as exported to JSON.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitReport {
    pub axis: Axis,
    pub slope: f64,
    pub intercept: f64,
    pub max_residual: f64,
    pub range: (f64, f64),
    pub predicted_slope: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl FitReport {
    pub fn new(axis: Axis, fit: &DecayFit) -> Self {
        FitReport {
            axis,
            slope: fit.slope,
            intercept: fit.intercept,
            max_residual: fit.max_residual,
            range: fit.sample_range,
            predicted_slope: fit.predicted,
            tolerance: fit.tolerance,
            pass: fit.pass,
        }
    }
}

pub const EXPONENT_TOLERANCE: f64 = 0.1;
/// Lobe-to-Airy-length ratio above which a block counts as resolved.
pub const RESOLVE_RATIO: f64 = 4.0;

/// Which blocks enter an exponent fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    /// [δj] < k ≤ j, the range of the block bound.
    Full,
    /// Additionally 2^{k−1} ≥ 4 (3·2^{j+1})^{1/3}: the θ₁-lobe is wider than
    /// the Airy length at every ξ₂ of the level, so the norm sits on its
    /// asymptotic scaling instead of being smoothed below it.
    Resolved,
}

impl Regime {
    pub fn admits(&self, orders: &OrderPair, idx: DyadicIndex) -> bool {
        if idx.k <= orders.split(idx.j) || idx.k > idx.j {
            return false;
        }
        match self {
            Regime::Full => true,
            Regime::Resolved => pow2(idx.k - 1) >= RESOLVE_RATIO * airy_length(pow2(idx.j + 1)),
        }
    }
}

/// Fit of log₂ norm against j (grouped by k) or against k (grouped by j)
/// over the resolved blocks. Each group has its own intercept, so the slope
/// measures the exponent of one index with the other held fixed.
pub fn fit_exponents(table: &BlockNormTable, axis: Axis) -> Result<DecayFit> {
    fit_exponents_in(table, axis, Regime::Resolved)
}

pub fn fit_exponents_in(table: &BlockNormTable, axis: Axis, regime: Regime) -> Result<DecayFit> {
    let mut groups: BTreeMap<u32, (Vec<f64>, Vec<f64>)> = BTreeMap::new();
    for (idx, e) in &table.entries {
        if !regime.admits(&table.orders, *idx) || !(e.norm > 0.0) {
            continue;
        }
        let (key, x) = match axis {
            Axis::J => (idx.k, idx.j),
            Axis::K => (idx.j, idx.k),
        };
        let g = groups.entry(key).or_default();
        g.0.push(x as f64);
        g.1.push(e.norm.log2());
    }
    let (pj, pk) = table.orders.block_exponents();
    let predicted = match axis {
        Axis::J => pj,
        Axis::K => pk,
    };
    let groups: Vec<_> = groups.into_values().collect();
    DecayFit::pooled(&groups, predicted, EXPONENT_TOLERANCE)
}

/// The pointwise-summed multiplier of a group as a closure.
pub fn group_operator(
    engine: &BlockEngine,
    group: Group,
    jmax: u32,
) -> impl Fn((f64, f64)) -> Result<f64> + Sync + '_ {
    move |xi| engine.group_multiplier(xi, group, jmax)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amplitude::BlockSymbol;

    fn synthetic(f: impl Fn(u32, u32) -> f64) -> BlockNormTable {
        let orders = OrderPair::with_default_delta(0.0, 0.0).unwrap();
        let mut t = BlockNormTable::empty(BlockSymbol::ModelProduct { p: 0.0, l: 0.0 }, orders);
        for idx in all_indices(24) {
            t.entries.insert(
                idx,
                BlockEntry {
                    norm: f(idx.j, idx.k),
                    argmax: (0.0, 0.0),
                    evaluations: 0,
                },
            );
        }
        t
    }

    #[test]
    fn synthetic_exact_slopes() {
        let t = synthetic(|j, k| 2f64.powf(0.5 * j as f64 - 0.25 * k as f64 + 3.0));
        let fj = fit_exponents(&t, Axis::J).unwrap();
        let fk = fit_exponents(&t, Axis::K).unwrap();
        assert!((fj.slope - 0.5).abs() < 1e-12 && fj.max_residual < 1e-12);
        assert!((fk.slope + 0.25).abs() < 1e-12 && fk.max_residual < 1e-12);
        assert!(fj.pass && !fk.pass);
    }

    #[test]
    fn too_few_blocks() {
        let mut t = synthetic(|j, _| 2f64.powi(j as i32));
        t.entries.retain(|idx, _| idx.j == 24 && idx.k > 20);
        assert!(matches!(
            fit_exponents(&t, Axis::K),
            Err(crate::error::DyadicError::InsufficientData { .. })
        ));
    }

    #[test]
    fn csv_layout() {
        let t = synthetic(|j, _| 2f64.powi(j as i32));
        let csv = t.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("j,k,norm,log2_norm"));
        let row: Vec<&str> = lines.nth(3).unwrap().split(',').collect();
        assert_eq!((row[0], row[1]), ("2", "0"));
        assert_eq!(row[2].parse::<f64>().unwrap(), 4.0);
        assert_eq!(row[3].parse::<f64>().unwrap(), 2.0);
    }

    #[test]
    fn resolved_regime() {
        let o = OrderPair::with_default_delta(0.0, 0.0).unwrap();
        assert!(!Regime::Resolved.admits(&o, DyadicIndex { j: 12, k: 7 }));
        assert!(Regime::Resolved.admits(&o, DyadicIndex { j: 12, k: 8 }));
        assert!(Regime::Full.admits(&o, DyadicIndex { j: 12, k: 5 }));
        assert!(!Regime::Full.admits(&o, DyadicIndex { j: 12, k: 4 }));
    }
}
