//! Sobolev mapping exponents r for I^{p,l}(Δ, C): A maps H^s_comp to H^{s−r}_loc.
//! Generic over the number type so the tables can be checked in exact arithmetic.

use num_traits::Num;
use serde::Serialize;

/// r and whether the estimate only holds with r + ε for every ε > 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Exponent<T> {
    pub r: T,
    pub endpoint_eps: bool,
}

fn small<T: Num + Copy>(n: i32) -> T {
    let mut x = T::zero();
    for _ in 0..n {
        x = x + T::one();
    }
    x
}

/// Folding canonical relation (cubic model and its seismic analogues).
pub fn exponent_main<T: Num + Copy + PartialOrd>(p: T, l: T) -> Exponent<T> {
    let (one, two, three, six) = (T::one(), small::<T>(2), small::<T>(3), small::<T>(6));
    let half = one / two;
    let zero_half = T::zero() - half;
    if l < zero_half {
        Exponent {
            r: p + one / six,
            endpoint_eps: false,
        }
    } else if l == zero_half {
        Exponent {
            r: p + one / six,
            endpoint_eps: true,
        }
    } else if l < half {
        Exponent {
            r: p + (l + one) / three,
            endpoint_eps: false,
        }
    } else {
        Exponent {
            r: p + l,
            endpoint_eps: false,
        }
    }
}

/// Local canonical graph meeting the diagonal cleanly in codimension k.
pub fn exponent_graph<T: Num + Copy + PartialOrd>(p: T, l: T, k: u32) -> Exponent<T> {
    assert!(k >= 1, "codimension must be positive");
    let kk = small::<T>(k as i32);
    let (two, four) = (small::<T>(2), small::<T>(4));
    let half_k = kk / two;
    let neg = T::zero() - half_k;
    if l < neg {
        Exponent {
            r: p,
            endpoint_eps: false,
        }
    } else if l == neg {
        Exponent {
            r: p,
            endpoint_eps: true,
        }
    } else if l < half_k {
        Exponent {
            r: p + (two * l + kk) / four,
            endpoint_eps: false,
        }
    } else {
        Exponent {
            r: p + l,
            endpoint_eps: false,
        }
    }
}

/// Predicted decay slope of the fractional multiplier along its worst direction
/// (p = −1/2): (2l−1)/6 for the cubic, (2l−1)/4 for the parabola.
pub fn fractional_slope(l: f64, degree: u32) -> f64 {
    match degree {
        3 => exponent_main(-0.5, l).r,
        2 => exponent_graph(-0.5, l, 1).r,
        _ => panic!("curve degree must be 2 or 3"),
    }
}
