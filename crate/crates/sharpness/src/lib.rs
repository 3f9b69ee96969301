//! Exponent tables, sharp decay scans and the counterexample showing that the
//! cubic Hilbert transform has no Sobolev-bounded left parametrix.

pub mod counterexample;
pub mod decay;
pub mod error;
pub mod exponents;
pub mod report;

pub use counterexample::{
    f0_l2_partial, f0_sobolev_lower, hf0_sobolev_upper, CoefficientRule, CounterexampleSpec,
};
pub use decay::{decay_scan, dyadic_radii, Curve, DecayConfig, DecayScan, LogFit, RadiusSample};
pub use dyadic::DecayFit;
pub use error::{Result, SharpnessError};
pub use exponents::{exponent_graph, exponent_main, Exponent};
pub use report::{noninvertibility_report, NoninvertibilityReport, SharpnessReport, Verdict};
