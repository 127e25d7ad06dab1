// Copyright 2026 The csqpt Authors
// SPDX-License-Identifier: Apache-2.0

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MleConfig {
    pub max_iter: usize,
    /// Stop once the relative log-likelihood gain of an iteration drops below this.
    pub rel_tol: f64,
    /// Mixing weight of each update, `rho <- (1-d) rho + d update`.
    pub dilution: f64,
    /// Reconstruction dimension.
    pub dim: usize,
}

impl MleConfig {
    pub const DEFAULT_DIM: usize = 7;

    pub fn state_default() -> Self {
        MleConfig { max_iter: 2000, rel_tol: 1e-9, dilution: 1.0, dim: Self::DEFAULT_DIM }
    }

    pub fn process_default() -> Self {
        MleConfig { dilution: 0.5, ..Self::state_default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_iter == 0 {
            return Err(Error::InvalidArgument("max_iter must be at least 1".into()));
        }
        if !(self.rel_tol > 0.0) {
            return Err(Error::InvalidArgument("rel_tol must be positive".into()));
        }
        if !(self.dilution > 0.0 && self.dilution <= 1.0) {
            return Err(Error::InvalidArgument("dilution must lie in (0, 1]".into()));
        }
        if self.dim == 0 {
            return Err(Error::InvalidArgument("dim must be positive".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        MleConfig::state_default().validate().unwrap();
        assert_eq!(MleConfig::process_default().dilution, 0.5);
        let bad = MleConfig { dilution: 0.0, ..MleConfig::state_default() };
        assert!(bad.validate().is_err());
        let bad = MleConfig { rel_tol: 0.0, ..MleConfig::state_default() };
        assert!(bad.validate().is_err());
        let bad = MleConfig { max_iter: 0, ..MleConfig::state_default() };
        assert!(bad.validate().is_err());
    }
}
