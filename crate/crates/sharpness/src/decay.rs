//! Decay of fractional multipliers on circles |ξ| = R.
//!
//! For each radius the sup of |m| is taken over 64 equally spaced directions
//! plus a geometric ladder of directions approaching (0, 1), where the fold
//! concentrates (for the cubic the peak sits about R^{-2/3} off the axis),
//! followed by golden-section polish. The kernels are real and even, so
//! |m(−ξ)| = |m(ξ)| and the ladder near (0, −1) is not needed.

use std::f64::consts::PI;

use dyadic::DecayFit;
use oscillatory::{fractional_multiplier, BumpFunction, MultiplierSpec, QuadratureSpec};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Result, SharpnessError};
use crate::exponents::fractional_slope;

pub const DIRECTIONS: usize = 64;
pub const DECAY_TOLERANCE: f64 = 0.05;
pub const LOG_RESIDUAL_TOLERANCE: f64 = 0.1;
pub const MIN_RADIUS_EXP: i32 = 8;
pub const MAX_RADIUS_EXP: i32 = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Curve {
    /// (t, t³) with weight |t|^{-(l+1/2)}
    Cubic,
    /// (t, t²) with weight |t|^{-(l+1/2)}
    Parabola,
    /// (t, t³) with weight log|t|
    Log,
}

impl Curve {
    pub fn spec(&self, l: f64) -> MultiplierSpec {
        match self {
            Curve::Cubic => MultiplierSpec::fractional_cubic(l),
            Curve::Parabola => MultiplierSpec::fractional_parabola(l),
            Curve::Log => MultiplierSpec::log_cubic(),
        }
    }

    /// Predicted slope of log₂ sup |m| against log₂ R.
    pub fn predicted_slope(&self, l: f64) -> f64 {
        match self {
            Curve::Cubic => fractional_slope(l, 3),
            Curve::Parabola => fractional_slope(l, 2),
            Curve::Log => -1.0 / 3.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct DecayConfig {
    pub directions: usize,
    /// Ladder directions per halving of the angle to (0, 1).
    pub ladder_per_octave: usize,
    pub polish_iterations: usize,
    pub tolerance: f64,
    pub quad: QuadratureSpec,
    pub bump: BumpFunction,
}

impl Default for DecayConfig {
    fn default() -> Self {
        DecayConfig {
            directions: DIRECTIONS,
            ladder_per_octave: 4,
            polish_iterations: 30,
            tolerance: DECAY_TOLERANCE,
            quad: QuadratureSpec::default().with_tol(1e-10, 1e-8),
            bump: BumpFunction::plateau(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadiusSample {
    pub radius: f64,
    pub sup: f64,
    pub argmax: (f64, f64),
    /// |m(0, R)|
    pub vertical: f64,
    pub evaluations: usize,
}

/// sup·R^{1/3} ≈ a + b·log₂ R for the log endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogFit {
    pub coefficient: f64,
    pub intercept: f64,
    pub max_rel_residual: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecayScan {
    pub curve: Curve,
    pub l: f64,
    pub samples: Vec<RadiusSample>,
    /// Angular sup against R (upper bound).
    pub angular: DecayFit,
    /// |m(0, R)| against R (lower bound).
    pub vertical: DecayFit,
    pub log_fit: Option<LogFit>,
    pub pass: bool,
}

/// 2^lo, 2^{lo+1}, ..., 2^hi.
pub fn dyadic_radii(lo: i32, hi: i32) -> Vec<f64> {
    (lo..=hi).map(|e| 2f64.powi(e)).collect()
}

fn check_radii(radii: &[f64]) -> Result<()> {
    for &r in radii {
        let e = r.log2();
        let dyadic = r > 0.0 && e.fract() == 0.0;
        if !dyadic || e < MIN_RADIUS_EXP as f64 || e > MAX_RADIUS_EXP as f64 {
            return Err(SharpnessError::Precondition(format!(
                "radius {r} is not a power of two in [2^{MIN_RADIUS_EXP}, 2^{MAX_RADIUS_EXP}]"
            )));
        }
    }
    Ok(())
}

/// Sup of |m| on the circle of radius R.
pub fn circle_sup(spec: &MultiplierSpec, radius: f64, cfg: &DecayConfig) -> Result<RadiusSample> {
    let eval = |phi: f64| -> Result<f64> {
        let xi = (radius * phi.cos(), radius * phi.sin());
        Ok(fractional_multiplier(xi, spec, &cfg.bump, &cfg.quad)?.norm())
    };
    let step = 2.0 * PI / cfg.directions as f64;
    let mut angles: Vec<f64> = (0..cfg.directions).map(|i| i as f64 * step).collect();
    let top = PI / 2.0;
    let floor = 0.25 / radius;
    let mut d = step;
    let ratio = 2f64.powf(-1.0 / cfg.ladder_per_octave as f64);
    while d > floor {
        angles.extend([top - d, top + d]);
        d *= ratio;
    }
    angles.push(top);
    angles.sort_by(f64::total_cmp);
    angles.dedup();
    let values: Vec<f64> = angles.par_iter().map(|&a| eval(a)).collect::<Result<_>>()?;
    let mut evaluations = angles.len();

    let (ib, _) = values
        .iter()
        .enumerate()
        .fold(
            (0, f64::NEG_INFINITY),
            |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc },
        );
    let mut best = (values[ib], angles[ib]);
    let n = angles.len();
    let lo = if ib == 0 {
        angles[n - 1] - 2.0 * PI
    } else {
        angles[ib - 1]
    };
    let hi = if ib + 1 == n {
        angles[0] + 2.0 * PI
    } else {
        angles[ib + 1]
    };
    // golden-section on [lo, hi]
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - g * (b - a);
    let mut e = a + g * (b - a);
    let (mut fc, mut fe) = (eval(c)?, eval(e)?);
    evaluations += 2;
    for _ in 0..cfg.polish_iterations {
        if fc > fe {
            b = e;
            e = c;
            fe = fc;
            c = b - g * (b - a);
            fc = eval(c)?;
        } else {
            a = c;
            c = e;
            fc = fe;
            e = a + g * (b - a);
            fe = eval(e)?;
        }
        evaluations += 1;
    }
    for (v, phi) in [(fc, c), (fe, e)] {
        if v > best.0 {
            best = (v, phi);
        }
    }
    Ok(RadiusSample {
        radius,
        sup: best.0,
        argmax: (radius * best.1.cos(), radius * best.1.sin()),
        vertical: eval(top)?,
        evaluations: evaluations + 1,
    })
}

fn log_fit(samples: &[RadiusSample]) -> LogFit {
    let xs: Vec<f64> = samples.iter().map(|s| s.radius.log2()).collect();
    let ys: Vec<f64> = samples.iter().map(|s| s.sup * s.radius.cbrt()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let b = sxy / sxx;
    let a = my - b * mx;
    let max_rel_residual = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| ((y - (a + b * x)) / (a + b * x)).abs())
        .fold(0.0, f64::max);
    LogFit {
        coefficient: b,
        intercept: a,
        max_rel_residual,
        pass: b > 0.0 && max_rel_residual < LOG_RESIDUAL_TOLERANCE,
    }
}

/// Fits log₂ sup |m| and log₂ |m(0, R)| against log₂ R.
pub fn decay_scan(curve: Curve, l: f64, radii: &[f64], cfg: &DecayConfig) -> Result<DecayScan> {
    check_radii(radii)?;
    if curve != Curve::Log && !(l > -0.5 && l < 0.5) {
        return Err(SharpnessError::Precondition(format!(
            "l = {l} outside (-1/2, 1/2)"
        )));
    }
    let spec = curve.spec(l);
    let samples: Vec<RadiusSample> = radii
        .iter()
        .map(|&r| circle_sup(&spec, r, cfg))
        .collect::<Result<_>>()?;
    let xs: Vec<f64> = radii.iter().map(|r| r.log2()).collect();
    let sup: Vec<f64> = samples.iter().map(|s| s.sup.log2()).collect();
    let vert: Vec<f64> = samples.iter().map(|s| s.vertical.log2()).collect();
    let predicted = curve.predicted_slope(l);
    let angular = DecayFit::linear(&xs, &sup, predicted, cfg.tolerance)?;
    let vertical = DecayFit::linear(&xs, &vert, predicted, cfg.tolerance)?;
    let log_fit = (curve == Curve::Log).then(|| log_fit(&samples));
    let pass = match log_fit {
        Some(f) => f.pass,
        None => angular.pass && vertical.pass,
    };
    Ok(DecayScan {
        curve,
        l,
        samples,
        angular,
        vertical,
        log_fit,
        pass,
    })
}

impl DecayScan {
    /// `x,value,predicted,residual` with x = log₂ R, value = log₂ sup and the
    /// predicted line through the centroid of the data.
    pub fn to_csv(&self) -> String {
        let xs: Vec<f64> = self.samples.iter().map(|s| s.radius.log2()).collect();
        let ys: Vec<f64> = self.samples.iter().map(|s| s.sup.log2()).collect();
        let n = xs.len() as f64;
        let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
        let mut out = String::from("x,value,predicted,residual\n");
        for (x, y) in xs.iter().zip(&ys) {
            let p = my + self.angular.predicted * (x - mx);
            out.push_str(&format!("{x:.16e},{y:.16e},{p:.16e},{:.16e}\n", y - p));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radii_must_be_dyadic_and_in_range() {
        let cfg = DecayConfig::default();
        for bad in [vec![300.0], vec![128.0], vec![2f64.powi(25)]] {
            assert!(matches!(
                decay_scan(Curve::Cubic, 0.0, &bad, &cfg),
                Err(SharpnessError::Precondition(_))
            ));
        }
        assert!(matches!(
            decay_scan(Curve::Cubic, 0.5, &dyadic_radii(8, 12), &cfg),
            Err(SharpnessError::Precondition(_))
        ));
    }

    #[test]
    fn cubic_peak_leaves_the_axis() {
        let cfg = DecayConfig::default();
        let s = circle_sup(&Curve::Cubic.spec(0.0), 2f64.powi(12), &cfg).unwrap();
        assert!(s.sup >= s.vertical);
        let off = s.argmax.0.abs() / s.radius;
        assert!(off > 0.0 && off < 0.1, "{off}");
    }

    #[test]
    fn log_fit_recovers_line() {
        let samples: Vec<RadiusSample> = (8..14)
            .map(|e| {
                let r = 2f64.powi(e);
                RadiusSample {
                    radius: r,
                    sup: (1.0 + 0.5 * e as f64) / r.cbrt(),
                    argmax: (0.0, r),
                    vertical: 0.0,
                    evaluations: 0,
                }
            })
            .collect();
        let f = log_fit(&samples);
        assert!((f.coefficient - 0.5).abs() < 1e-12 && (f.intercept - 1.0).abs() < 1e-12);
        assert!(f.pass);
    }
}
