//! One function per subcommand. Each writes its artifacts into the output
//! directory and returns whether every verdict passed.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use dyadic::{
    default_quad, fit_exponents_in, regime_indices, Axis, BlockEngine, BlockNormTable, DecayFit,
    DyadicIndex, FitReport, OrderPair, Regime, SymbolKind,
};
use num_complex::Complex64;
use num_rational::Rational64;
use oscillatory::pv::{airy_crosscheck, pv_cubic_estimate, pv_cubic_multiplier};
use oscillatory::{locate_vanishing_cubic, MultiplierSpec, MultiplierTable, QuadratureSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use sharpness::counterexample::{CoefficientRule, CounterexampleSpec};
use sharpness::decay::{decay_scan, dyadic_radii, Curve, DecayConfig};
use sharpness::report::{noninvertibility_report, ExponentRow, SharpnessReport};
use sharpness::{exponent_graph, exponent_main};
use spectral::{make_wave_packet, GridSpec, SpectralField};

use crate::config::Settings;
use crate::error::{CliError, Result};
use crate::svg;
use crate::{Cli, Command};

pub const DEFAULT_OUT: &str = "foldlab-out";
pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub pass: bool,
    pub summary: String,
    pub artifacts: Vec<String>,
}

pub struct Context {
    pub out: PathBuf,
    pub seed: u64,
    pub threads: usize,
    pub quad_tol: Option<f64>,
}

impl Context {
    pub fn resolve(cli: &Cli, s: &mut Settings) -> Result<Self> {
        let out: String = s.get(
            "out",
            cli.out.as_ref().map(|p| p.display().to_string()),
            DEFAULT_OUT.into(),
        )?;
        let seed = s.get("seed", cli.seed, DEFAULT_SEED)?;
        let threads: String = s.get("threads", cli.threads.clone(), "auto".into())?;
        let threads = match threads.as_str() {
            "auto" => 0,
            t => match t.parse::<usize>() {
                Ok(n) if n > 0 => n,
                _ => {
                    return Err(CliError::Usage(format!(
                        "threads must be a positive integer or auto, got {t:?}"
                    )))
                }
            },
        };
        let quad_tol = s.get_opt("quad_tol", cli.quad_tol)?;
        if let Some(t) = quad_tol {
            if !(t > 0.0 && t < 1.0) {
                return Err(CliError::Usage(format!(
                    "quad-tol must lie in (0, 1), got {t}"
                )));
            }
        }
        std::fs::create_dir_all(&out)
            .map_err(|e| CliError::Io(format!("cannot create output directory {out}: {e}")))?;
        Ok(Context {
            out: PathBuf::from(out),
            seed,
            threads,
            quad_tol,
        })
    }

    /// Runs `f` on a pool of `threads` workers (rayon's default for auto).
    pub fn install_pool<R: Send>(&self, f: impl FnOnce() -> R + Send) -> Result<R> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.threads)
            .build()
            .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
        Ok(pool.install(f))
    }

    pub fn quad(&self, base: QuadratureSpec) -> QuadratureSpec {
        match self.quad_tol {
            Some(t) => base.with_tol(t, t),
            None => base,
        }
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }

    pub fn write_text(&self, name: &str, text: &str) -> Result<String> {
        let p = self.path(name);
        std::fs::write(&p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
        Ok(name.to_string())
    }

    /// JSON artifact with the seed as a top-level field.
    pub fn write_json<T: Serialize>(&self, name: &str, value: &T) -> Result<String> {
        let v = match serde_json::to_value(value)? {
            Value::Object(mut m) => {
                m.insert("seed".into(), json!(self.seed));
                Value::Object(m)
            }
            other => json!({ "seed": self.seed, "value": other }),
        };
        self.write_text(name, &(serde_json::to_string_pretty(&v)? + "\n"))
    }
}

pub fn dispatch(cmd: &Command, ctx: &Context, s: &mut Settings) -> Result<Outcome> {
    match cmd {
        Command::MultiplierPlot(a) => multiplier_plot(ctx, s, a),
        Command::Zero => zero(ctx),
        Command::AiryCheck(a) => airy_check(ctx, s, a),
        Command::Decay(a) => decay(ctx, s, a),
        Command::Blocks(a) => blocks(ctx, s, a),
        Command::Orthogonality(a) => orthogonality(ctx, s, a),
        Command::Counterexample(a) => counterexample(ctx, s, a),
        Command::Exponent(a) => exponent(ctx, s, a),
        Command::Apply(a) => apply(ctx, s, a),
    }
}

fn e17(x: f64) -> String {
    format!("{x:.16e}")
}

fn check(name: &str, pass: bool) -> String {
    format!("{name}: {}", if pass { "pass" } else { "FAIL" })
}

// ---------------------------------------------------------------- multiplier-plot

#[derive(Debug, Clone, Serialize)]
pub struct PlotSummary {
    pub mu_range: (f64, f64),
    pub samples: usize,
    pub zeros: Vec<f64>,
    pub minimum_mu: f64,
    pub minimum_value: f64,
    /// Im m(10, 1), when the range reaches 10.
    pub value_at_10: Option<f64>,
    pub one_crossing_in_unit_interval: bool,
    pub minimum_value_in_range: bool,
    pub plateau_near_pi: Option<bool>,
    pub pass: bool,
}

fn bisect_zero(mut lo: f64, mut hi: f64, quad: &QuadratureSpec) -> Result<f64> {
    let mut flo = pv_cubic_multiplier(lo, quad)?.im;
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        let fm = pv_cubic_multiplier(mid, quad)?.im;
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn golden_min(mut a: f64, mut b: f64, quad: &QuadratureSpec) -> Result<(f64, f64)> {
    let f = |x: f64| pv_cubic_multiplier(x, quad).map(|m| m.im);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    for _ in 0..60 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d)?;
        }
    }
    let x = 0.5 * (a + b);
    Ok((x, f(x)?))
}

pub fn multiplier_plot(ctx: &Context, s: &mut Settings, a: &crate::PlotArgs) -> Result<Outcome> {
    let lo = s.get("mu_min", a.mu_min, -10.0)?;
    let hi = s.get("mu_max", a.mu_max, 10.0)?;
    let n = s.get("samples", a.samples, 2001usize)?;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(CliError::Usage(format!("empty range [{lo}, {hi}]")));
    }
    if n < 2 {
        return Err(CliError::Usage("at least 2 samples are needed".into()));
    }
    let cap = oscillatory::table::DEFAULT_HALF_RANGE;
    if lo < -cap || hi > cap {
        return Err(CliError::Usage(format!(
            "range must lie within [-{cap}, {cap}]"
        )));
    }
    let quad = ctx.quad(QuadratureSpec::default());
    let mus: Vec<f64> = (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect();
    let est: Vec<(Complex64, f64)> = mus
        .par_iter()
        .map(|&mu| pv_cubic_estimate(mu, &quad).map(|e| (e.value, e.error)))
        .collect::<oscillatory::Result<_>>()?;

    let mut csv = String::from("mu,re_m,im_m,err_est\n");
    for (mu, (m, err)) in mus.iter().zip(&est) {
        let _ = writeln!(
            csv,
            "{},{},{},{}",
            e17(*mu),
            e17(m.re),
            e17(m.im),
            e17(*err)
        );
    }
    let im: Vec<f64> = est.iter().map(|e| e.0.im).collect();
    let mut zeros = vec![];
    for i in 0..n - 1 {
        if im[i] == 0.0 {
            zeros.push(mus[i]);
        } else if im[i].signum() != im[i + 1].signum() && im[i + 1] != 0.0 {
            zeros.push(bisect_zero(mus[i], mus[i + 1], &quad)?);
        }
    }
    if im[n - 1] == 0.0 {
        zeros.push(mus[n - 1]);
    }
    let imin = (0..n).fold(0, |b, i| if im[i] < im[b] { i } else { b });
    let (minimum_mu, minimum_value) = golden_min(
        mus[imin.saturating_sub(1)],
        mus[(imin + 1).min(n - 1)],
        &quad,
    )?;
    let value_at_10 = if hi >= 10.0 && lo <= 10.0 {
        Some(pv_cubic_multiplier(10.0, &quad)?.im)
    } else {
        None
    };
    let one_crossing = zeros.len() == 1 && zeros[0] > -1.0 && zeros[0] < 0.0;
    let min_ok = minimum_value > -5.0 && minimum_value < -4.0;
    let plateau = value_at_10.map(|v| (v - PI).abs() < 0.2);
    let summary = PlotSummary {
        mu_range: (lo, hi),
        samples: n,
        zeros: zeros.clone(),
        minimum_mu,
        minimum_value,
        value_at_10,
        one_crossing_in_unit_interval: one_crossing,
        minimum_value_in_range: min_ok,
        plateau_near_pi: plateau,
        pass: one_crossing && min_ok && plateau.unwrap_or(true),
    };
    let points: Vec<(f64, f64)> = mus.iter().copied().zip(im.iter().copied()).collect();
    let artifacts = vec![
        ctx.write_text("m_table.csv", &csv)?,
        ctx.write_text("figure2.svg", &svg::figure(&points, &zeros))?,
        ctx.write_json("figure2.json", &summary)?,
    ];
    let text = format!(
        "zeros {:?}\nminimum Im m = {:.6} at mu = {:.6}\nIm m(10,1) = {}\n{}\n{}\n{}",
        zeros,
        minimum_value,
        minimum_mu,
        value_at_10.map_or("n/a".into(), |v| format!("{v:.6}")),
        check("one zero crossing in (-1,0)", one_crossing),
        check("minimum value in (-5,-4)", min_ok),
        plateau.map_or("plateau near pi: skipped (range below 10)".into(), |p| {
            check("plateau near pi", p)
        }),
    );
    Ok(Outcome {
        pass: summary.pass,
        summary: text,
        artifacts,
    })
}

// ---------------------------------------------------------------- zero

pub fn zero(ctx: &Context) -> Result<Outcome> {
    let quad = ctx.quad(QuadratureSpec::default());
    let v = locate_vanishing_cubic(&quad)?;
    let pass = v.sign_changes == 1 && v.mu0 > -1.0 && v.mu0 < 0.0;
    let artifacts = vec![ctx.write_json(
        "zero.json",
        &json!({
            "mu0": v.mu0,
            "alpha": v.alpha,
            "sign_changes": v.sign_changes,
            "scan_range": [oscillatory::pv::ZERO_SCAN_LO, oscillatory::pv::ZERO_SCAN_HI],
            "bisection_tol": 1e-10,
            "pass": pass,
        }),
    )?];
    Ok(Outcome {
        pass,
        summary: format!("mu0 = {:.12}\nalpha = {:.12}", v.mu0, v.alpha),
        artifacts,
    })
}

// ---------------------------------------------------------------- airy-check

pub const AIRY_TOLERANCE: f64 = 1e-5;

pub fn airy_check(ctx: &Context, s: &mut Settings, a: &crate::AiryArgs) -> Result<Outcome> {
    let h = s.get("h", a.h, 1e-3)?;
    if !(h > 0.0 && h <= 1e-3) {
        return Err(CliError::Usage(format!("h must lie in (0, 1e-3], got {h}")));
    }
    let n = (20.0 / h).round() as usize;
    let grid: Vec<f64> = (0..=n).map(|i| (-10.0 + i as f64 * h).min(10.0)).collect();
    let quad = ctx.quad(QuadratureSpec::default());
    let r = airy_crosscheck(&grid, &quad)?;
    let mut csv = String::from("mu,rel_error\n");
    for (mu, e) in grid.iter().zip(&r.rel_errors) {
        let _ = writeln!(csv, "{},{}", e17(*mu), e17(*e));
    }
    let pass = r.max_rel_error < AIRY_TOLERANCE;
    let artifacts = vec![
        ctx.write_text("airy_check.csv", &csv)?,
        ctx.write_json(
            "airy_check.json",
            &json!({
                "h": r.h,
                "points": r.points,
                "max_rel_error": r.max_rel_error,
                "worst_mu": r.worst_mu,
                "tolerance": AIRY_TOLERANCE,
                "pass": pass,
            }),
        )?,
    ];
    Ok(Outcome {
        pass,
        summary: format!(
            "max relative error {:.3e} at mu = {:.4} over {} points\n{}",
            r.max_rel_error,
            r.worst_mu,
            r.points,
            check("below 1e-5", pass)
        ),
        artifacts,
    })
}

// ---------------------------------------------------------------- decay

pub fn parse_curve(s: &str) -> Result<Curve> {
    match s {
        "cubic" => Ok(Curve::Cubic),
        "parabola" => Ok(Curve::Parabola),
        "log" | "log-cubic" => Ok(Curve::Log),
        _ => Err(CliError::Usage(format!(
            "unknown curve {s:?} (cubic, parabola, log)"
        ))),
    }
}

pub fn decay(ctx: &Context, s: &mut Settings, a: &crate::DecayArgs) -> Result<Outcome> {
    let curve_name: String = s.get("curve", a.curve.clone(), "cubic".into())?;
    let curve = parse_curve(&curve_name)?;
    let l = if curve == Curve::Log {
        -0.5
    } else {
        s.get("l", a.l, 0.0)?
    };
    let lo = s.get("r_min_exp", a.r_min_exp, 10)?;
    let hi = s.get("r_max_exp", a.r_max_exp, 22)?;
    if lo > hi {
        return Err(CliError::Usage(format!(
            "empty radius range 2^{lo}..2^{hi}"
        )));
    }
    let mut cfg = DecayConfig::default();
    cfg.quad = ctx.quad(cfg.quad);
    let scan = decay_scan(curve, l, &dyadic_radii(lo, hi), &cfg)?;
    let artifacts = vec![
        ctx.write_text("decay.csv", &scan.to_csv())?,
        ctx.write_json("decay.json", &scan)?,
    ];
    let mut text = format!(
        "{curve_name} l = {l}: angular slope {:.4}, vertical slope {:.4}, predicted {:.4}",
        scan.angular.slope, scan.vertical.slope, scan.angular.predicted
    );
    if let Some(f) = scan.log_fit {
        let _ = write!(
            text,
            "\nsup R^(1/3) = {:.4} + {:.4} log2 R, max relative residual {:.3}",
            f.intercept, f.coefficient, f.max_rel_residual
        );
    }
    let _ = write!(text, "\n{}", check("decay", scan.pass));
    Ok(Outcome {
        pass: scan.pass,
        summary: text,
        artifacts,
    })
}

// ---------------------------------------------------------------- blocks

fn parse_symbol(s: &str) -> Result<SymbolKind> {
    match s {
        "model" => Ok(SymbolKind::ModelProduct),
        "fractional" => Ok(SymbolKind::FractionalDerived),
        _ => Err(CliError::Usage(format!(
            "unknown symbol {s:?} (model, fractional)"
        ))),
    }
}

fn orders(
    s: &mut Settings,
    p: Option<f64>,
    l: Option<f64>,
    delta: Option<f64>,
) -> Result<OrderPair> {
    let p = s.get("p", p, -0.5)?;
    let l = s.get("l", l, 0.0)?;
    let delta = s.get("delta", delta, 1.0 / 3.0)?;
    Ok(OrderPair::new(p, l, delta)?)
}

#[derive(Debug, Clone, Serialize)]
pub struct BlockFits {
    pub orders: OrderPair,
    pub symbol: String,
    pub j_range: (u32, u32),
    pub resolved: [FitReport; 2],
    pub full: Option<[FitReport; 2]>,
    pub pass: bool,
}

pub fn block_fits(table: &BlockNormTable, symbol: &str, j_range: (u32, u32)) -> Result<BlockFits> {
    let fit = |regime| -> Result<[FitReport; 2]> {
        Ok([
            FitReport::new(Axis::J, &fit_exponents_in(table, Axis::J, regime)?),
            FitReport::new(Axis::K, &fit_exponents_in(table, Axis::K, regime)?),
        ])
    };
    let resolved = fit(Regime::Resolved)?;
    let full = fit(Regime::Full).ok();
    Ok(BlockFits {
        orders: table.orders,
        symbol: symbol.into(),
        j_range,
        pass: resolved.iter().all(|f| f.pass),
        resolved,
        full,
    })
}

pub fn blocks(ctx: &Context, s: &mut Settings, a: &crate::BlocksArgs) -> Result<Outcome> {
    let orders = orders(s, a.p, a.l, a.delta)?;
    let jmin = s.get("jmin", a.jmin, 6)?;
    let jmax = s.get("jmax", a.jmax, 12)?;
    let symbol: String = s.get("symbol", a.symbol.clone(), "model".into())?;
    if jmin > jmax || jmax > 20 {
        return Err(CliError::Usage(format!(
            "need jmin <= jmax <= 20, got {jmin}..{jmax}"
        )));
    }
    let engine = BlockEngine::new(orders, parse_symbol(&symbol)?, ctx.quad(default_quad()))?;
    let table = BlockNormTable::compute(&engine, &regime_indices(&orders, jmin, jmax))?;
    let fits = block_fits(&table, &symbol, (jmin, jmax))?;
    let artifacts = vec![
        ctx.write_text("blocks.csv", &table.to_csv())?,
        ctx.write_json("block_fits.json", &fits)?,
    ];
    let mut text = String::new();
    for f in &fits.resolved {
        let _ = writeln!(
            text,
            "{:?}-slope {:.4} (predicted {:.4}, residual {:.3})",
            f.axis, f.slope, f.predicted_slope, f.max_residual
        );
    }
    if let Some(l) = &fits.full {
        let _ = writeln!(
            text,
            "full block range: j-slope {:.4}, k-slope {:.4}",
            l[0].slope, l[1].slope
        );
    }
    let _ = write!(text, "{}", check("block exponents", fits.pass));
    Ok(Outcome {
        pass: fits.pass,
        summary: text,
        artifacts,
    })
}

// ---------------------------------------------------------------- orthogonality

#[derive(Debug, Clone, Serialize)]
pub struct OrthoRow {
    pub gap: u32,
    pub kp: u32,
    pub norm: f64,
    pub geometric_mean: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct OrthoReport {
    pub orders: OrderPair,
    pub j: u32,
    pub k: u32,
    pub separated_levels_zero: bool,
    pub rows: Vec<OrthoRow>,
    pub monotone: bool,
    pub fit: DecayFit,
    pub slope_at_most_minus_one: bool,
    /// value at |k−k'| = 6 over 2^{-3} times the geometric mean, if measured
    pub gap_six_ratio: Option<f64>,
    pub pass: bool,
}

pub fn orthogonality_report(
    engine: &BlockEngine,
    j: u32,
    k: u32,
    kps: std::ops::RangeInclusive<u32>,
) -> Result<OrthoReport> {
    let idx = |j, k| DyadicIndex { j, k };
    let mut separated = true;
    for (a, b) in [
        (idx(j, k), idx(j + 2, k)),
        (idx(j, k), idx(j + 3, j + 3)),
        (idx(j, k), idx(j.saturating_sub(2), k.min(j - 2))),
    ] {
        separated &= engine.offdiagonal_norm(a, b)?.value == 0.0;
    }
    let na = engine.block_norm(idx(j, k))?.value;
    let mut rows = vec![];
    for kp in kps {
        let v = engine.offdiagonal_norm(idx(j, k), idx(j, kp))?.value;
        let nb = engine.block_norm(idx(j, kp))?.value;
        rows.push(OrthoRow {
            gap: kp.abs_diff(k),
            kp,
            norm: v,
            geometric_mean: (na * nb).sqrt(),
        });
    }
    let monotone = rows.windows(2).all(|w| w[1].norm <= w[0].norm);
    let xs: Vec<f64> = rows.iter().map(|r| r.gap as f64).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.norm.log2()).collect();
    let fit = DecayFit::linear(&xs, &ys, -1.0, f64::INFINITY)?;
    let slope_ok = fit.slope <= -1.0;
    let gap_six_ratio = rows
        .iter()
        .find(|r| r.gap == 6)
        .map(|r| r.norm / (0.125 * r.geometric_mean));
    let pass = separated && monotone && slope_ok && gap_six_ratio.map_or(true, |r| r <= 1.0);
    Ok(OrthoReport {
        orders: engine.orders,
        j,
        k,
        separated_levels_zero: separated,
        rows,
        monotone,
        fit,
        slope_at_most_minus_one: slope_ok,
        gap_six_ratio,
        pass,
    })
}

pub fn orthogonality(ctx: &Context, s: &mut Settings, a: &crate::OrthoArgs) -> Result<Outcome> {
    let orders = orders(s, a.p, a.l, None)?;
    let j = s.get("j", a.j, 12)?;
    let k = s.get("k", a.k, 5)?;
    let kp_min = s.get("kp_min", a.kp_min, 8)?;
    let kp_max = s.get("kp_max", a.kp_max, 12)?;
    if j < 3 || k > j || kp_max > j || kp_min < k + 3 || kp_min > kp_max {
        return Err(CliError::Usage(format!(
            "need k <= j, k + 3 <= kp_min <= kp_max <= j and j >= 3, got j={j} k={k} kp={kp_min}..{kp_max}"
        )));
    }
    let engine = BlockEngine::new(orders, SymbolKind::ModelProduct, ctx.quad(default_quad()))?;
    let r = orthogonality_report(&engine, j, k, kp_min..=kp_max)?;
    let mut csv = String::from("gap,kp,norm,log2_norm,geometric_mean\n");
    for row in &r.rows {
        let _ = writeln!(
            csv,
            "{},{},{},{},{}",
            row.gap,
            row.kp,
            e17(row.norm),
            e17(row.norm.log2()),
            e17(row.geometric_mean)
        );
    }
    let artifacts = vec![
        ctx.write_text("orthogonality.csv", &csv)?,
        ctx.write_json("orthogonality.json", &r)?,
    ];
    let text = format!(
        "{}\n{}\ndecay slope {:.3} per unit gap: {}\n{}",
        check(
            "separated levels exactly orthogonal",
            r.separated_levels_zero
        ),
        check("non-increasing in k'", r.monotone),
        r.fit.slope,
        if r.slope_at_most_minus_one {
            "pass"
        } else {
            "FAIL"
        },
        check("orthogonality", r.pass)
    );
    Ok(Outcome {
        pass: r.pass,
        summary: text,
        artifacts,
    })
}

// ---------------------------------------------------------------- counterexample

fn parse_rule(s: &str) -> Result<CoefficientRule> {
    if s == "standard" {
        return Ok(CoefficientRule::Standard);
    }
    if let Some(c) = s.strip_prefix("constant:") {
        let c: f64 = c
            .parse()
            .map_err(|_| CliError::Usage(format!("bad constant {c:?}")))?;
        return Ok(CoefficientRule::Constant(c));
    }
    Err(CliError::Usage(format!(
        "unknown coefficient rule {s:?} (standard, constant:<c>)"
    )))
}

pub fn default_exponent_rows() -> Vec<ExponentRow> {
    [-1.0, -0.5, -0.25, 0.0, 0.25, 0.5, 1.0]
        .iter()
        .map(|&l| ExponentRow::new(-0.5, l))
        .collect()
}

pub fn counterexample(
    ctx: &Context,
    s: &mut Settings,
    a: &crate::CounterexampleArgs,
) -> Result<Outcome> {
    let terms = s.get("terms", a.terms, 24usize)?;
    let kappa = s.get("kappa", a.kappa, 0.25)?;
    let shift = s.get("alpha_shift", a.alpha_shift, 0.0)?;
    let rule: String = s.get("coefficients", a.coefficients.clone(), "standard".into())?;
    let alpha = locate_vanishing_cubic(&ctx.quad(QuadratureSpec::default()))?.alpha + shift;
    let spec = CounterexampleSpec::new(terms, parse_rule(&rule)?, kappa, alpha)?;
    let chain = noninvertibility_report(&spec)?;
    let mut text = String::new();
    for v in &chain.verdicts {
        let _ = writeln!(
            text,
            "{}: {} ({})",
            v.name,
            if v.pass { "pass" } else { "FAIL" },
            v.detail
        );
    }
    let cx = &chain.counterexample;
    let mut l2 = String::from("K,norm,s1,s2\n");
    for p in &cx.l2.partials {
        let _ = writeln!(
            l2,
            "{},{},{},{}",
            p.terms,
            e17(p.norm),
            e17(p.s1),
            e17(p.s2)
        );
    }
    let mut hf = String::from("K,partial,increment\n");
    for (i, (p, d)) in cx
        .hf0_upper
        .partials
        .iter()
        .zip(&cx.hf0_upper.increments)
        .enumerate()
    {
        let _ = writeln!(hf, "{},{},{}", i + 1, e17(*p), e17(*d));
    }
    let mut lower = String::from("s,K,lower_bound\n");
    for b in &cx.sobolev_lower {
        for k in 1..=terms {
            let _ = writeln!(
                lower,
                "{},{},{}",
                b.s,
                k,
                e17(sharpness::f0_sobolev_lower(&spec, k, b.s)?)
            );
        }
    }
    let pass = chain.pass;
    let report = SharpnessReport::new(default_exponent_rows(), vec![], Some(chain));
    let artifacts = vec![
        ctx.write_json("counterexample.json", &report)?,
        ctx.write_text("l2_partials.csv", &l2)?,
        ctx.write_text("hf0_partials.csv", &hf)?,
        ctx.write_text("sobolev_lower.csv", &lower)?,
    ];
    Ok(Outcome {
        pass,
        summary: text.trim_end().to_string(),
        artifacts,
    })
}

// ---------------------------------------------------------------- exponent

/// r as a short fraction when it is one, else as a decimal.
pub fn format_exponent(r: f64) -> String {
    let q = (1..=1000i64)
        .map(|d| Rational64::new((r * d as f64).round() as i64, d))
        .find(|q| (*q.numer() as f64 / *q.denom() as f64 - r).abs() < 1e-9);
    match q {
        Some(q) if q.is_integer() => format!("{}", q.numer()),
        Some(q) => format!("{}/{}", q.numer(), q.denom()),
        None => format!("{r}"),
    }
}

pub fn exponent(ctx: &Context, s: &mut Settings, a: &crate::ExponentArgs) -> Result<Outcome> {
    let p = s.get("p", a.p, -0.5)?;
    let l = s.get("l", a.l, 0.0)?;
    let k = s.get("codim", a.codim, 1)?;
    if !(p.is_finite() && l.is_finite()) || k == 0 {
        return Err(CliError::Usage(
            "p and l must be finite and codim positive".into(),
        ));
    }
    let main = exponent_main(p, l);
    let graph = exponent_graph(p, l, k);
    let eps = |e: bool| if e { " + eps" } else { "" };
    let text = format!(
        "r = {}{} (folding relation)\nr = {}{} (clean graph, codimension {k})",
        format_exponent(main.r),
        eps(main.endpoint_eps),
        format_exponent(graph.r),
        eps(graph.endpoint_eps)
    );
    let artifacts = vec![ctx.write_json(
        "exponent.json",
        &json!({ "p": p, "l": l, "codim": k, "main": main, "graph": graph }),
    )?];
    Ok(Outcome {
        pass: true,
        summary: text,
        artifacts,
    })
}

// ---------------------------------------------------------------- apply

fn parse_operator(s: &str, l: f64) -> Result<MultiplierSpec> {
    let spec = match s {
        "hilbert" => MultiplierSpec::hilbert_cubic(),
        "identity" => MultiplierSpec::identity(),
        "fractional-cubic" => MultiplierSpec::fractional_cubic(l),
        "fractional-parabola" => MultiplierSpec::fractional_parabola(l),
        "log-cubic" => MultiplierSpec::log_cubic(),
        _ => {
            return Err(CliError::Usage(format!(
                "unknown operator {s:?} (hilbert, identity, fractional-cubic, fractional-parabola, log-cubic)"
            )))
        }
    };
    spec.validate()?;
    Ok(spec)
}

/// Real field with spatial samples uniform in [-1, 1].
pub fn random_real_field(grid: GridSpec, seed: u64) -> Result<SpectralField> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x: Vec<Complex64> = (0..grid.len())
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), 0.0))
        .collect();
    Ok(SpectralField::from_spatial(grid, &x)?)
}

fn make_field(kind: &str, grid: GridSpec, seed: u64) -> Result<SpectralField> {
    match kind {
        "identity" => Ok(SpectralField::new(
            grid,
            vec![Complex64::new(1.0, 0.0); grid.len()],
        )?),
        "random" => random_real_field(grid, seed),
        "packet" => {
            let r = grid.max_frequency();
            Ok(make_wave_packet(
                grid,
                (0.0, r / 2.0),
                (r / 16.0).max(1.01 * grid.dxi()),
            )?)
        }
        _ => Err(CliError::Usage(format!(
            "unknown field {kind:?} (identity, packet, random)"
        ))),
    }
}

pub fn apply(ctx: &Context, s: &mut Settings, a: &crate::ApplyArgs) -> Result<Outcome> {
    let op: String = s.get("operator", a.operator.clone(), "hilbert".into())?;
    let l = s.get("l", a.l, 0.0)?;
    let spec = parse_operator(&op, l)?;
    let input: Option<String> = s.get_opt("input", a.input.clone())?;
    let field = match &input {
        Some(p) => spectral::io::read_field(Path::new(p))?,
        None => {
            let kind: String = s.get("field", a.field.clone(), "random".into())?;
            let n = s.get("n", a.n, 128usize)?;
            let period = s.get("period", a.period, 2.0 * PI)?;
            make_field(&kind, GridSpec::new(n, period)?, ctx.seed)?
        }
    };
    let out = spectral::apply_multiplier(&field, spec)?;
    spectral::io::write_field(&ctx.path("applied.fiof"), &out)?;
    let mut csv = String::from("xi1,xi2,re,im\n");
    for (i, c) in out.coeffs.iter().enumerate() {
        let xi = out.grid.xi(i);
        let _ = writeln!(
            csv,
            "{},{},{},{}",
            e17(xi.0),
            e17(xi.1),
            e17(c.re),
            e17(c.im)
        );
    }
    let (nin, nout) = (field.l2_norm(), out.l2_norm());
    let bound = (op == "hilbert").then(|| MultiplierTable::shared().sup_abs());
    let pass = bound.map_or(true, |m| nout <= m * nin * (1.0 + 1e-12));
    let artifacts = vec![
        "applied.fiof".to_string(),
        "applied.fiof.json".to_string(),
        ctx.write_text("applied.csv", &csv)?,
        ctx.write_json(
            "apply.json",
            &json!({
                "operator": op,
                "l": l,
                "n": out.grid.n_per_axis,
                "period": out.grid.period,
                "input_l2": nin,
                "output_l2": nout,
                "ratio": if nin > 0.0 { nout / nin } else { 0.0 },
                "bound": bound,
                "pass": pass,
            }),
        )?,
    ];
    let mut text = format!(
        "|Af| / |f| = {:.6}",
        if nin > 0.0 { nout / nin } else { 0.0 }
    );
    if let Some(m) = bound {
        let _ = write!(text, " (bound {m:.6})\n{}", check("L2 bound", pass));
    }
    Ok(Outcome {
        pass,
        summary: text,
        artifacts,
    })
}
