//! Fields on a periodic square lattice, Sobolev norms, Fourier multiplier
//! operators and empirical operator-norm probes.

pub mod error;
pub mod field;
pub mod grid;
pub mod io;
pub mod nufft;
pub mod probe;
pub mod symbol;

pub use error::{Result, SpectralError};
pub use field::{make_wave_packet, sobolev_norm, SpectralField};
pub use grid::{GridSpec, SobolevIndex};
pub use probe::{operator_norm_probe, operator_norm_probe_shell, ProbeReport, Shell};
pub use symbol::{
    apply_multiplier, apply_symbol, lattice_multiplier, FnSymbol, SpecSymbol, Symbol,
};
