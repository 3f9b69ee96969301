use num_rational::Rational64 as Q;
use proptest::prelude::*;
use sharpness::{exponent_graph, exponent_main};

fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

fn max(a: Q, b: Q) -> Q {
    if a > b {
        a
    } else {
        b
    }
}

#[test]
fn folding_loses_more_than_the_clean_graph() {
    // p+(l+1)/3 − (p+(2l+1)/4) = (1−2l)/12, zero only at l = 1/2
    for n in -24..=24 {
        let l = q(n, 48);
        let p = q(-1, 2);
        let d = exponent_main(p, l).r - exponent_graph(p, l, 1).r;
        assert_eq!(d, (q(1, 1) - q(2, 1) * l) / q(12, 1), "l = {l}");
        assert!(d >= q(0, 1));
    }
    assert_eq!(
        exponent_main(q(0, 1), q(1, 2)).r,
        exponent_graph(q(0, 1), q(1, 2), 1).r
    );
}

#[test]
fn interaction_loss_is_strict() {
    for p in [q(-1, 2), q(0, 1), q(3, 4)] {
        for n in -23..24 {
            let l = q(n, 48);
            let r = exponent_main(p, l).r;
            assert!(r > max(p + l, p + q(1, 6)), "p = {p}, l = {l}");
        }
        // at the endpoint the loss sits in the ε flag, not in r
        let e = exponent_main(p, q(-1, 2));
        assert_eq!(e.r, p + q(1, 6));
        assert!(e.endpoint_eps);
    }
}

#[test]
fn continuity_at_the_upper_endpoint() {
    let p = q(-1, 2);
    let at = exponent_main(p, q(1, 2)).r;
    for k in 1..20 {
        let below = exponent_main(p, q(1, 2) - q(1, 1 << k)).r;
        assert!(at - below <= q(1, 1 << k));
        assert!(below < at);
    }
    assert_eq!(at, p + q(1, 2));
}

#[test]
fn only_the_lower_endpoint_carries_epsilon() {
    for n in -96..=96 {
        let l = q(n, 48);
        assert_eq!(exponent_main(q(0, 1), l).endpoint_eps, l == q(-1, 2));
        for k in 1..4u32 {
            assert_eq!(
                exponent_graph(q(0, 1), l, k).endpoint_eps,
                l == q(-(k as i64), 2)
            );
        }
    }
}

proptest! {
    #[test]
    fn main_table_is_monotone_in_l(p in -8i64..8, a in -96i64..96, b in -96i64..96) {
        let (la, lb) = (q(a.min(b), 48), q(a.max(b), 48));
        let p = q(p, 4);
        prop_assert!(exponent_main(p, la).r <= exponent_main(p, lb).r);
    }

    #[test]
    fn shift_in_p(p in -8i64..8, n in -96i64..96, k in 1u32..4) {
        let (p, l) = (q(p, 4), q(n, 48));
        prop_assert_eq!(exponent_main(p, l).r - p, exponent_main(q(0, 1), l).r);
        prop_assert_eq!(exponent_graph(p, l, k).r - p, exponent_graph(q(0, 1), l, k).r);
    }

    #[test]
    fn float_and_exact_agree(n in -96i64..96) {
        let l = q(n, 48);
        let exact = exponent_main(q(-1, 2), l).r;
        let float = exponent_main(-0.5, n as f64 / 48.0).r;
        prop_assert!((float - *exact.numer() as f64 / *exact.denom() as f64).abs() < 1e-14);
    }
}
