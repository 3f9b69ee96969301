//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits 0 when
//! the set of failing criteria equals KNOWN_FAILURES.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use dyadic::{
    default_quad, regime_indices, BlockEngine, BlockNormTable, DecayFit, DyadicIndex, OrderPair,
    SymbolKind,
};
use foldlab::commands::{block_fits, orthogonality_report, random_real_field};
use oscillatory::pv::{airy_crosscheck, pv_cubic_multiplier};
use oscillatory::table::{multiplier_m, MultiplierTable};
use oscillatory::{locate_vanishing_cubic, MultiplierSpec, QuadratureSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sharpness::decay::{decay_scan, dyadic_radii, Curve, DecayConfig};
use sharpness::{noninvertibility_report, CounterexampleSpec};
use spectral::{apply_multiplier, operator_norm_probe, GridSpec, SpecSymbol};

/// Criteria expected to fail; see the decisions ledger.
const KNOWN_FAILURES: &[usize] = &[10];

const TRIPLES: [(f64, f64); 3] = [(-0.5, 0.0), (-0.5, 0.25), (0.0, -0.25)];
const L_VALUES: [f64; 3] = [-0.25, 0.0, 0.25];

type Check = (bool, String);
type Criterion = (usize, &'static str, fn() -> Check);

fn c1() -> Check {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap().to_string();
    let argv: Vec<String> = [
        "foldlab",
        "--out",
        &out,
        "multiplier-plot",
        "--mu-min",
        "-10",
        "--mu-max",
        "10",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let cli = foldlab::Cli::try_parse_from(&argv).unwrap();
    let o = foldlab::execute(&cli, &argv, Instant::now()).unwrap();
    let ok = o.pass
        && dir.path().join("figure2.svg").exists()
        && dir.path().join("m_table.csv").exists();
    (ok, o.summary.replace('\n', "; "))
}

fn c2() -> Check {
    let h = 1e-3;
    let grid: Vec<f64> = (0..=20000)
        .map(|i| (-10.0 + i as f64 * h).min(10.0))
        .collect();
    let r = airy_crosscheck(&grid, &QuadratureSpec::default()).unwrap();
    (
        r.max_rel_error < 1e-5,
        format!(
            "max relative error {:.3e} at mu = {:.3}",
            r.max_rel_error, r.worst_mu
        ),
    )
}

fn c3() -> Check {
    let table = MultiplierTable::shared();
    let q = QuadratureSpec::default();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut hom, mut odd, mut re) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..100 {
        let xi = (rng.gen_range(-20.0..20.0), rng.gen_range(-50.0..50.0));
        let rho = 2f64.powf(rng.gen_range(-4.0..4.0));
        let a = multiplier_m(xi, table).unwrap();
        let b = multiplier_m((rho * xi.0, rho.powi(3) * xi.1), table).unwrap();
        hom = hom.max((a - b).norm());
        let c = multiplier_m((-xi.0, -xi.1), table).unwrap();
        odd = odd.max((a + c).norm());
        let mu: f64 = rng.gen_range(-30.0..30.0);
        re = re.max(pv_cubic_multiplier(mu, &q).unwrap().re.abs());
    }
    (
        hom < 1e-8 && odd < 1e-8 && re < 1e-8,
        format!("homogeneity {hom:.1e}, oddness {odd:.1e}, |Re m| {re:.1e} over 100 samples each"),
    )
}

fn decay_check(curve: Curve, ls: &[f64]) -> Check {
    let cfg = DecayConfig::default();
    let radii = dyadic_radii(10, 22);
    let mut ok = true;
    let mut parts = vec![];
    for &l in ls {
        let s = decay_scan(curve, l, &radii, &cfg).unwrap();
        let pred = curve.predicted_slope(l);
        let pass =
            (s.angular.slope - pred).abs() <= 0.05 && (s.vertical.slope - pred).abs() <= 0.05;
        ok &= pass;
        parts.push(format!(
            "l={l}: angular {:.4}, vertical {:.4}, predicted {:.4}",
            s.angular.slope, s.vertical.slope, pred
        ));
    }
    (ok, parts.join("; "))
}

fn c6() -> Check {
    let s = decay_scan(
        Curve::Log,
        -0.5,
        &dyadic_radii(10, 22),
        &DecayConfig::default(),
    )
    .unwrap();
    let f = s.log_fit.expect("log fit");
    (
        s.pass && f.coefficient > 0.0 && f.max_rel_residual < 0.1,
        format!(
            "sup R^(1/3) = {:.4} + {:.4} log2 R, max relative residual {:.4}",
            f.intercept, f.coefficient, f.max_rel_residual
        ),
    )
}

fn engine(p: f64, l: f64) -> BlockEngine {
    BlockEngine::new(
        OrderPair::with_default_delta(p, l).unwrap(),
        SymbolKind::ModelProduct,
        default_quad(),
    )
    .unwrap()
}

fn c7() -> Check {
    let mut ok = true;
    let mut parts = vec![];
    for (p, l) in TRIPLES {
        let eng = engine(p, l);
        let table = BlockNormTable::compute(&eng, &regime_indices(&eng.orders, 6, 16)).unwrap();
        let f = block_fits(&table, "model", (6, 16)).unwrap();
        ok &= f.pass;
        let full = f.full.as_ref().map_or(String::new(), |g| {
            format!(" [full range j {:.3}, k {:.3}]", g[0].slope, g[1].slope)
        });
        parts.push(format!(
            "(p,l)=({p},{l}): j {:.3} vs {:.3}, k {:.3} vs {:.3}{full}",
            f.resolved[0].slope,
            f.resolved[0].predicted_slope,
            f.resolved[1].slope,
            f.resolved[1].predicted_slope
        ));
    }
    (ok, parts.join("; "))
}

fn c8() -> Check {
    let eng = engine(-0.5, 0.0);
    let r = orthogonality_report(&eng, 12, 5, 8..=12).unwrap();
    let idx = |j, k| DyadicIndex { j, k };
    let mut zero = r.separated_levels_zero;
    for (a, b) in [
        (idx(8, 3), idx(10, 3)),
        (idx(10, 6), idx(14, 9)),
        (idx(12, 12), idx(9, 2)),
    ] {
        zero &= eng.offdiagonal_norm(a, b).unwrap().value == 0.0;
    }
    (
        zero && r.monotone && r.slope_at_most_minus_one,
        format!(
            "separated levels zero: {zero}; monotone {}; slope {:.3} per unit gap",
            r.monotone, r.fit.slope
        ),
    )
}

fn c9() -> Check {
    let mut ok = true;
    let mut parts = vec![];
    let xs: Vec<f64> = (6..=16).map(f64::from).collect();
    for (p, l) in TRIPLES {
        let eng = engine(p, l);
        let aj: Vec<f64> = (6..=16)
            .map(|j| eng.aj_norm(j).unwrap().value.log2())
            .collect();
        let a0: Vec<f64> = (6..=16)
            .map(|n| eng.a0_shell_sup(n).unwrap().value.log2())
            .collect();
        let (bj, b0) = (eng.orders.group_exponent(), eng.orders.a0_exponent());
        let fj = DecayFit::linear(&xs, &aj, bj, 0.1).unwrap();
        let f0 = DecayFit::linear(&xs, &a0, b0, 0.1).unwrap();
        ok &= fj.slope <= bj + 0.1 && f0.slope <= b0 + 0.1;
        parts.push(format!(
            "(p,l)=({p},{l}): A_j {:.3} <= {:.3}, A_0 {:.3} <= {:.3}",
            fj.slope,
            bj + 0.1,
            f0.slope,
            b0 + 0.1
        ));
    }
    (ok, parts.join("; "))
}

fn c10() -> Check {
    let alpha = locate_vanishing_cubic(&QuadratureSpec::default())
        .unwrap()
        .alpha;
    let spec = CounterexampleSpec::new(
        24,
        sharpness::CoefficientRule::Standard,
        sharpness::counterexample::DEFAULT_KAPPA,
        alpha,
    )
    .unwrap();
    let r = noninvertibility_report(&spec).unwrap();
    let parts: Vec<String> = r
        .verdicts
        .iter()
        .map(|v| format!("{} {}", v.name, if v.pass { "pass" } else { "FAIL" }))
        .collect();
    let growth: Vec<String> = r
        .counterexample
        .sobolev_lower
        .iter()
        .map(|b| format!("s={} growth {:.3}", b.s, b.growth))
        .collect();
    (
        r.pass,
        format!("{}; {}", parts.join(", "), growth.join(", ")),
    )
}

fn c11() -> Check {
    let m = MultiplierTable::shared().sup_abs();
    let grid = GridSpec::new(128, 2.0 * PI).unwrap();
    let mut worst = 0.0f64;
    for seed in 0..10 {
        let f = random_real_field(grid, seed).unwrap();
        let g = apply_multiplier(&f, MultiplierSpec::hilbert_cubic()).unwrap();
        worst = worst.max(g.l2_norm() / f.l2_norm());
    }
    let sym = SpecSymbol::new(MultiplierSpec::fractional_cubic(0.0)).unwrap();
    let sups: Vec<f64> = [256usize, 1024, 4096]
        .iter()
        .map(|&n| {
            let grid = GridSpec::new(n, 2.0 * PI).unwrap();
            operator_norm_probe(&sym, 0.0.into(), (1.0 / 6.0).into(), &grid)
                .unwrap()
                .sup
        })
        .collect();
    let (lo, hi) = sups
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(a, b), &s| (a.min(s), b.max(s)));
    let bounded = sups.iter().all(|s| s.is_finite()) && hi <= 1.25 * lo;
    (
        worst <= m * (1.0 + 1e-12) && bounded,
        format!("max |Hf|/|f| = {worst:.4} <= M = {m:.4}; H^0 -> H^(1/6) probe sups {sups:.4?}"),
    )
}

fn main() -> ExitCode {
    let criteria: Vec<Criterion> = vec![
        (1, "multiplier figure", c1),
        (2, "Airy identity", c2),
        (3, "homogeneity and oddness", c3),
        (4, "cubic decay", || decay_check(Curve::Cubic, &L_VALUES)),
        (5, "parabola decay", || {
            decay_check(Curve::Parabola, &L_VALUES)
        }),
        (6, "log endpoint", c6),
        (7, "block exponents", c7),
        (8, "orthogonality", c8),
        (9, "group bounds", c9),
        (10, "counterexample chain", c10),
        (11, "operator bounds", c11),
    ];
    let mut failed = BTreeSet::new();
    for (n, name, f) in criteria {
        let t = Instant::now();
        let (pass, detail) = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            (false, format!("panicked: {msg}"))
        });
        if !pass {
            failed.insert(n);
        }
        println!(
            "{} {n}: {name} ({:.1} s) {detail}",
            if pass { "PASS" } else { "FAIL" },
            t.elapsed().as_secs_f64()
        );
    }
    let known: BTreeSet<usize> = KNOWN_FAILURES.iter().copied().collect();
    println!("failing {:?}, known {:?}", failed, known);
    if failed == known {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
