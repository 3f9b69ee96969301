use crate::error::{OscError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MultiplierKind {
    HilbertCubic,
    FractionalCubic,
    FractionalParabola,
    LogCubic,
    ModelBlock,
    /// m ≡ 1; used to calibrate norm probes.
    Identity,
}

/// Index (j, k) of a two-index dyadic block, 0 <= k <= j.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DyadicIndex {
    pub j: u32,
    pub k: u32,
}

impl DyadicIndex {
    pub fn new(j: u32, k: u32) -> Result<Self> {
        if k > j {
            return Err(OscError::DomainError(format!(
                "block index needs k <= j, got ({j}, {k})"
            )));
        }
        Ok(DyadicIndex { j, k })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultiplierSpec {
    pub kind: MultiplierKind,
    pub l: f64,
    pub p: f64,
    pub block: Option<DyadicIndex>,
}

impl MultiplierSpec {
    pub fn hilbert_cubic() -> Self {
        Self::of_kind(MultiplierKind::HilbertCubic, 0.0)
    }

    pub fn identity() -> Self {
        Self::of_kind(MultiplierKind::Identity, 0.0)
    }

    pub fn fractional_cubic(l: f64) -> Self {
        Self::of_kind(MultiplierKind::FractionalCubic, l)
    }

    pub fn fractional_parabola(l: f64) -> Self {
        Self::of_kind(MultiplierKind::FractionalParabola, l)
    }

    pub fn log_cubic() -> Self {
        Self::of_kind(MultiplierKind::LogCubic, -0.5)
    }

    pub fn model_block(p: f64, l: f64, block: DyadicIndex) -> Self {
        MultiplierSpec {
            kind: MultiplierKind::ModelBlock,
            l,
            p,
            block: Some(block),
        }
    }

    fn of_kind(kind: MultiplierKind, l: f64) -> Self {
        MultiplierSpec {
            kind,
            l,
            p: -0.5,
            block: None,
        }
    }

    /// Checks the order constraints of the fractional kinds.
    pub fn validate(&self) -> Result<()> {
        match self.kind {
            MultiplierKind::FractionalCubic | MultiplierKind::FractionalParabola => {
                if self.l > -0.5 && self.l < 0.5 {
                    Ok(())
                } else {
                    Err(OscError::DomainError(format!(
                        "fractional order l must lie in (-1/2, 1/2), got {}",
                        self.l
                    )))
                }
            }
            MultiplierKind::ModelBlock if self.block.is_none() => Err(OscError::DomainError(
                "model block needs a dyadic index".into(),
            )),
            _ => Ok(()),
        }
    }
}
