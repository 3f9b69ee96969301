//! Two-index dyadic decomposition of the translation-invariant cubic model:
//! cutoffs χ_{jk}, block multipliers M_{jk}, the A₀/A_j/A_∞ grouping,
//! block norms and almost-orthogonality.
//!
//! For translation-invariant operators ‖A_{jk}‖_{L²→L²} = sup_ξ |M_{jk}(ξ)|,
//! so every norm reported here is a multiplier supremum.

pub mod amplitude;
pub mod block;
mod cheb;
pub mod cutoff;
pub mod error;
pub mod fit;
pub mod norms;
pub mod orders;
pub mod scan;

pub use amplitude::{BlockSymbol, SymbolKind};
pub use block::{block_multiplier, default_quad, BlockEngine, Window};
pub use cutoff::CutoffFamily;
pub use error::{DyadicError, Result};
pub use fit::DecayFit;
pub use norms::{
    all_indices, fit_exponents, fit_exponents_in, group_operator, regime_indices, Axis, BlockEntry,
    BlockNormTable, FitReport, Group, Regime,
};
pub use orders::OrderPair;
pub use oscillatory::DyadicIndex;
pub use scan::SupReport;
