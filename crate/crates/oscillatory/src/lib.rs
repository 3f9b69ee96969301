//! Oscillatory integrals along the cubic and parabola: Airy functions, the
//! principal-value Hilbert multiplier and the fractional multipliers.

pub mod airy;
pub mod bump;
pub mod dd;
pub mod error;
pub mod fractional;
pub mod gauss;
pub mod levin;
pub mod pv;
pub mod quad;
pub mod spec;
pub mod table;

pub use airy::airy_ai;
pub use bump::BumpFunction;
pub use error::{OscError, Result};
pub use fractional::fractional_multiplier;
pub use pv::{locate_vanishing_cubic, pv_cubic_multiplier};
pub use quad::{Estimate, Integrand, QuadratureSpec};
pub use spec::{DyadicIndex, MultiplierKind, MultiplierSpec};
pub use table::{multiplier_m, MultiplierTable};
