//! Field container: 32-byte header (magic `FIOF`, version u32, n_per_axis u32,
//! period f64, flags u32, 8 reserved bytes) followed by little-endian f64
//! (re, im) pairs in row-major lattice order, plus a JSON sidecar that mirrors
//! the header.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SpectralError};
use crate::field::SpectralField;
use crate::grid::GridSpec;

pub const MAGIC: &[u8; 4] = b"FIOF";
pub const VERSION: u32 = 1;
pub const HEADER_LEN: usize = 32;
pub const FLAG_REAL: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldHeader {
    pub magic: String,
    pub version: u32,
    pub n_per_axis: u32,
    pub period: f64,
    pub flags: u32,
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut p = path.as_os_str().to_owned();
    p.push(".json");
    PathBuf::from(p)
}

pub fn encode(f: &SpectralField) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + 16 * f.coeffs.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(f.grid.n_per_axis as u32).to_le_bytes());
    out.extend_from_slice(&f.grid.period.to_le_bytes());
    let flags = if f.is_real_valued() { FLAG_REAL } else { 0 };
    out.extend_from_slice(&flags.to_le_bytes());
    out.extend_from_slice(&[0u8; 8]);
    for c in &f.coeffs {
        out.extend_from_slice(&c.re.to_le_bytes());
        out.extend_from_slice(&c.im.to_le_bytes());
    }
    out
}

pub fn decode(bytes: &[u8]) -> Result<SpectralField> {
    if bytes.len() < HEADER_LEN || &bytes[0..4] != MAGIC {
        return Err(SpectralError::Format("missing FIOF header".into()));
    }
    let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap());
    let f64_at = |o: usize| f64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
    let version = u32_at(4);
    if version != VERSION {
        return Err(SpectralError::Format(format!(
            "unsupported version {version}"
        )));
    }
    let n = u32_at(8) as usize;
    let period = f64_at(12);
    let grid = GridSpec::new(n, period)?;
    let body = &bytes[HEADER_LEN..];
    if body.len() != 16 * n * n {
        return Err(SpectralError::Format(format!(
            "expected {} payload bytes, found {}",
            16 * n * n,
            body.len()
        )));
    }
    let coeffs = body
        .chunks_exact(16)
        .map(|c| {
            Complex64::new(
                f64::from_le_bytes(c[0..8].try_into().unwrap()),
                f64::from_le_bytes(c[8..16].try_into().unwrap()),
            )
        })
        .collect();
    SpectralField::new(grid, coeffs)
}

pub fn header_of(f: &SpectralField) -> FieldHeader {
    FieldHeader {
        magic: "FIOF".into(),
        version: VERSION,
        n_per_axis: f.grid.n_per_axis as u32,
        period: f.grid.period,
        flags: if f.is_real_valued() { FLAG_REAL } else { 0 },
    }
}

/// Writes the binary container at `path` and the sidecar at `path.json`.
pub fn write_field(path: &Path, f: &SpectralField) -> Result<()> {
    let mut file = fs::File::create(path)?;
    file.write_all(&encode(f))?;
    let json = serde_json::to_string_pretty(&header_of(f)).expect("header serializes");
    fs::write(sidecar_path(path), json + "\n")?;
    Ok(())
}

pub fn read_field(path: &Path) -> Result<SpectralField> {
    decode(&fs::read(path)?)
}
