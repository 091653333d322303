// SPDX-FileCopyrightText: Copyright (c) 2026 The hls-forge Authors
// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{OpKind, Sfg};

#[derive(Debug, Error)]
pub enum LibraryError {
    #[error("malformed operator library: {0}")]
    Json(#[from] serde_json::Error),
    #[error("latency of `{0}` must be at least one cycle")]
    ZeroLatency(OpKind),
    #[error("clock frequency must be positive, got {0}")]
    BadClock(f64),
    #[error("no latency entry for operator `{0}`")]
    Missing(OpKind),
}

/// Operator latencies in clock cycles. The clock frequency is informational.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorLibrary {
    pub clock_mhz: f64,
    pub latency: BTreeMap<OpKind, u32>,
}

impl OperatorLibrary {
    pub fn new(clock_mhz: f64, entries: &[(OpKind, u32)]) -> Result<Self, LibraryError> {
        let lib = OperatorLibrary {
            clock_mhz,
            latency: entries.iter().copied().collect(),
        };
        lib.check()?;
        Ok(lib)
    }

    /// Every operator takes one cycle.
    pub fn unit() -> Self {
        Self::new(200.0, &[(OpKind::Add, 1), (OpKind::Sub, 1), (OpKind::Mul, 1)]).unwrap()
    }

    /// 200 MHz library with a two-cycle multiplier.
    pub fn fft_reference() -> Self {
        Self::new(200.0, &[(OpKind::Add, 1), (OpKind::Sub, 1), (OpKind::Mul, 2)]).unwrap()
    }

    pub fn from_json(text: &str) -> Result<Self, LibraryError> {
        let lib: OperatorLibrary = serde_json::from_str(text)?;
        lib.check()?;
        Ok(lib)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("library serializes")
    }

    fn check(&self) -> Result<(), LibraryError> {
        if !self.clock_mhz.is_finite() || self.clock_mhz <= 0.0 {
            return Err(LibraryError::BadClock(self.clock_mhz));
        }
        if let Some((&k, _)) = self.latency.iter().find(|(_, &l)| l == 0) {
            return Err(LibraryError::ZeroLatency(k));
        }
        Ok(())
    }

    pub fn latency(&self, kind: OpKind) -> Result<u32, LibraryError> {
        self.latency.get(&kind).copied().ok_or(LibraryError::Missing(kind))
    }

    /// Fails on the first operator kind used by `sfg` that has no entry.
    pub fn covers(&self, sfg: &Sfg) -> Result<(), LibraryError> {
        for (_, k) in sfg.ops() {
            self.latency(k)?;
        }
        Ok(())
    }
}
