//! Non-invertibility suite and the combined JSON report.
//!
//! The chain: f₀ ∈ L², f₀ ∉ H^s for every s > 0, yet 𝓗f₀ ∈ H^{s₀}. A left
//! parametrix B of 𝓗 bounded H^{s₀} → H^{s} for some s > 0 would put
//! f₀ = B𝓗f₀ (modulo smoothing) in H^s.

use serde::Serialize;

use crate::counterexample::*;
use crate::decay::DecayScan;
use crate::error::{Result, SharpnessError};
use crate::exponents::{exponent_graph, exponent_main, Exponent};

pub const LOWER_S: [f64; 2] = [0.05, 0.1];
pub const HF0_TERMS: usize = 12;
pub const MIN_TERMS: usize = 20;
/// inc(12) must be below 2^{-6} inc(4).
pub const HF0_CAUCHY_FACTOR: f64 = 1.0 / 64.0;

#[derive(Debug, Clone, Serialize)]
pub struct L2Block {
    pub witnesses: &'static str,
    pub coefficients: CoefficientCheck,
    pub partials: Vec<L2Partial>,
    /// |‖f_K‖ − ‖f_{K/2}‖| at K = terms.
    pub increment: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SobolevLowerBlock {
    pub witnesses: &'static str,
    pub s: f64,
    pub constants: LowerBoundConstants,
    pub constant: f64,
    pub lower_k5: f64,
    pub lower_k20: f64,
    pub growth: f64,
    pub growth_target: f64,
    /// First k from which (c_{k+1}/c_k)² 2^{6s} > 1 stays true up to k = 4096.
    pub ratio_exceeds_one_from: Option<usize>,
    pub ratio_limit: f64,
    pub diverges: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Hf0Block {
    pub witnesses: &'static str,
    pub s: f64,
    pub kappa: f64,
    pub partials: Vec<f64>,
    pub increments: Vec<f64>,
    /// inc(K) / inc(4).
    pub cauchy_ratio: f64,
    pub cauchy_target: f64,
    pub diagonal_constants: Vec<f64>,
    /// Share of each diagonal term coming from E_k.
    pub inner_share: Vec<f64>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CounterexampleReport {
    pub terms: usize,
    pub coefficients: CoefficientRule,
    pub kappa: f64,
    pub alpha: f64,
    pub window: f64,
    pub l2: L2Block,
    pub sobolev_lower: Vec<SobolevLowerBlock>,
    pub hf0_upper: Hf0Block,
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub name: String,
    pub witnesses: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct NoninvertibilityReport {
    pub counterexample: CounterexampleReport,
    pub verdicts: Vec<Verdict>,
    pub pass: bool,
}

const L2_WITNESS: &str = "f0 lies in L2: square-summable c_k and almost disjoint bumps";
const LOWER_WITNESS: &str =
    "f0 lies in no H^s, s > 0: the localized bump sizes grow like c_k^2 n_k^(6s)";
const HF0_WITNESS: &str = "Hf0 lies in H^s0: the bumps ride the zero set of m";
const CHAIN_WITNESS: &str = "no left parametrix of H bounded H^s0 -> H^s for any s > 0";

fn l2_block(spec: &CounterexampleSpec) -> Result<L2Block> {
    let coefficients = coefficient_check(spec);
    let ks: Vec<usize> = [1, 3, 6, spec.terms / 2, spec.terms]
        .into_iter()
        .filter(|&k| k >= 1)
        .collect();
    let partials: Vec<L2Partial> = ks
        .iter()
        .map(|&k| f0_l2_split(spec, k))
        .collect::<Result<_>>()?;
    let hi = partials.last().unwrap().norm;
    let lo = partials[partials.len() - 2].norm;
    let increment = (hi - lo).abs();
    Ok(L2Block {
        witnesses: L2_WITNESS,
        coefficients,
        partials,
        increment,
        tolerance: L2_CAUCHY_TOL,
        pass: coefficients.decreasing && coefficients.square_summable && increment < L2_CAUCHY_TOL,
    })
}

fn lower_block(spec: &CounterexampleSpec, s: f64) -> Result<SobolevLowerBlock> {
    let constants = lower_bound_constants(&spec.bump);
    let lower_k5 = f0_sobolev_lower(spec, 5, s)?;
    let lower_k20 = f0_sobolev_lower(spec, 20, s)?;
    let growth = lower_k20 / lower_k5;
    let ratios: Vec<f64> = (1..=4096)
        .map(|k| lower_bound_term_ratio(spec, k, s))
        .collect();
    let from = ratios.iter().rposition(|&r| r <= 1.0).map_or(1, |i| i + 2);
    let ratio_exceeds_one_from = (from <= ratios.len()).then_some(from);
    // the ratio increases to 2^{6s} > 1, so the terms grow without bound
    let increasing = ratios.windows(2).all(|w| w[1] >= w[0]);
    let ratio_limit = 2f64.powf(6.0 * s);
    let diverges = s > 0.0 && increasing && ratio_exceeds_one_from.is_some() && ratio_limit > 1.0;
    Ok(SobolevLowerBlock {
        witnesses: LOWER_WITNESS,
        s,
        constants,
        constant: constants.constant(s, spec.alpha),
        lower_k5,
        lower_k20,
        growth,
        growth_target: GROWTH_TARGET,
        ratio_exceeds_one_from,
        ratio_limit,
        diverges,
        pass: diverges && growth >= GROWTH_TARGET,
    })
}

fn hf0_block(spec: &CounterexampleSpec, s: f64) -> Result<Hf0Block> {
    let k = HF0_TERMS.min(spec.terms);
    let terms = hf0_terms(spec, k, s)?;
    let partials = hf0_partials(&terms, k);
    let increments: Vec<f64> = partials
        .iter()
        .enumerate()
        .map(|(i, p)| if i == 0 { *p } else { p - partials[i - 1] })
        .collect();
    let cauchy_ratio = increments[k - 1].abs() / increments[3].abs();
    let diag: Vec<&Hf0Term> = terms.iter().filter(|t| t.k == t.kp).collect();
    Ok(Hf0Block {
        witnesses: HF0_WITNESS,
        s,
        kappa: spec.kappa,
        diagonal_constants: diag.iter().map(|t| diagonal_constant(spec, t, s)).collect(),
        inner_share: diag.iter().map(|t| t.inner / t.value).collect(),
        partials,
        increments,
        cauchy_ratio,
        cauchy_target: HF0_CAUCHY_FACTOR,
        pass: cauchy_ratio < HF0_CAUCHY_FACTOR,
    })
}

/// Runs the L², Sobolev lower-bound and 𝓗f₀ suites and chains their verdicts.
pub fn noninvertibility_report(spec: &CounterexampleSpec) -> Result<NoninvertibilityReport> {
    spec.validate()?;
    if spec.terms < MIN_TERMS {
        return Err(SharpnessError::Precondition(format!(
            "the suite needs at least {MIN_TERMS} terms"
        )));
    }
    let l2 = l2_block(spec)?;
    let sobolev_lower: Vec<SobolevLowerBlock> = LOWER_S
        .iter()
        .map(|&s| lower_block(spec, s))
        .collect::<Result<_>>()?;
    let hf0_upper = hf0_block(spec, DEFAULT_S0)?;

    let mut verdicts = vec![];
    let mut l2_detail = format!(
        "|norm(K={}) - norm(K={})| = {:.3e}",
        spec.terms,
        spec.terms / 2,
        l2.increment
    );
    if !(l2.coefficients.decreasing && l2.coefficients.square_summable) {
        l2_detail.push_str(
            "; coefficient hypothesis violated (c_k must decrease and be square-summable)",
        );
    }
    verdicts.push(Verdict {
        name: "l2".into(),
        witnesses: L2_WITNESS.into(),
        pass: l2.pass,
        detail: l2_detail,
    });
    let lower_pass = sobolev_lower.iter().all(|b| b.pass);
    verdicts.push(Verdict {
        name: "sobolev_lower".into(),
        witnesses: LOWER_WITNESS.into(),
        pass: lower_pass,
        detail: sobolev_lower
            .iter()
            .map(|b| {
                format!(
                    "s={}: diverges={} (term ratio > 1 from k={}), growth K5->K20 = {:.4} (target {})",
                    b.s,
                    b.diverges,
                    b.ratio_exceeds_one_from.map_or("never".into(), |k| k.to_string()),
                    b.growth,
                    b.growth_target
                )
            })
            .collect::<Vec<_>>()
            .join("; "),
    });
    verdicts.push(Verdict {
        name: "hf0_upper".into(),
        witnesses: HF0_WITNESS.into(),
        pass: hf0_upper.pass,
        detail: format!(
            "inc(K={}) / inc(K=4) = {:.3e} (target < {:.3e})",
            HF0_TERMS.min(spec.terms),
            hf0_upper.cauchy_ratio,
            HF0_CAUCHY_FACTOR
        ),
    });
    let all = verdicts.iter().all(|v| v.pass);
    verdicts.push(Verdict {
        name: "chain".into(),
        witnesses: CHAIN_WITNESS.into(),
        pass: all,
        detail: if all {
            "all links hold".into()
        } else {
            "a link failed".into()
        },
    });
    Ok(NoninvertibilityReport {
        counterexample: CounterexampleReport {
            terms: spec.terms,
            coefficients: spec.coefficients,
            kappa: spec.kappa,
            alpha: spec.alpha,
            window: WINDOW,
            l2,
            sobolev_lower,
            hf0_upper,
        },
        verdicts,
        pass: all,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ExponentRow {
    pub p: f64,
    pub l: f64,
    pub main: Exponent<f64>,
    pub graph: Exponent<f64>,
}

impl ExponentRow {
    pub fn new(p: f64, l: f64) -> Self {
        ExponentRow {
            p,
            l,
            main: exponent_main(p, l),
            graph: exponent_graph(p, l, 1),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DecayEntry {
    /// Sharpness is established for the cubic model relation only.
    pub scope: &'static str,
    pub scan: DecayScan,
}

#[derive(Debug, Clone, Serialize)]
pub struct SharpnessReport {
    pub exponents: Vec<ExponentRow>,
    pub decay_fits: Vec<DecayEntry>,
    pub counterexample: Option<CounterexampleReport>,
    pub verdicts: Vec<Verdict>,
    pub pass: bool,
}

impl SharpnessReport {
    pub fn new(
        exponents: Vec<ExponentRow>,
        scans: Vec<DecayScan>,
        chain: Option<NoninvertibilityReport>,
    ) -> Self {
        let mut verdicts: Vec<Verdict> = scans
            .iter()
            .map(|s| Verdict {
                name: format!("decay_{:?}_{}", s.curve, s.l).to_lowercase(),
                witnesses: "sharp decay of the fractional multiplier".into(),
                pass: s.pass,
                detail: format!(
                    "angular slope {:.4}, vertical slope {:.4}, predicted {:.4}",
                    s.angular.slope, s.vertical.slope, s.angular.predicted
                ),
            })
            .collect();
        let counterexample = chain.map(|c| {
            verdicts.extend(c.verdicts);
            c.counterexample
        });
        let pass = verdicts.iter().all(|v| v.pass);
        SharpnessReport {
            exponents,
            decay_fits: scans
                .into_iter()
                .map(|scan| DecayEntry {
                    scope: "cubic model relation",
                    scan,
                })
                .collect(),
            counterexample,
            verdicts,
            pass,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponent_rows_serialize() {
        let r = SharpnessReport::new(vec![ExponentRow::new(-0.5, 0.25)], vec![], None);
        let v: serde_json::Value = serde_json::from_str(&r.to_json().unwrap()).unwrap();
        assert!((v["exponents"][0]["main"]["r"].as_f64().unwrap() + 1.0 / 12.0).abs() < 1e-15);
        assert!(v["counterexample"].is_null());
        assert!(r.pass);
    }

    #[test]
    fn too_few_terms() {
        let s = CounterexampleSpec::new(12, CoefficientRule::Standard, 0.25, -4.85).unwrap();
        assert!(matches!(
            noninvertibility_report(&s),
            Err(SharpnessError::Precondition(_))
        ));
    }
}
