use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Shared model parameters: area size `n`, cap size `k`, edge probability
/// `p` and plasticity rate `beta`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub n: usize,
    pub k: usize,
    pub p: f64,
    pub beta: f64,
}

impl ModelParams {
    pub fn new(n: usize, k: usize, p: f64, beta: f64) -> Result<Self> {
        let params = Self { n, k, p, beta };
        params.validate()?;
        Ok(params)
    }

    /// `k = round(sqrt(n))`, the scaling used by the size sweeps.
    pub fn sqrt_k(n: usize, p: f64, beta: f64) -> Result<Self> {
        Self::new(n, ((n as f64).sqrt().round() as usize).max(1), p, beta)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParams("n must be positive".into()));
        }
        if self.k == 0 || self.k > self.n {
            return Err(Error::InvalidParams(format!(
                "k must lie in 1..={}, got {}",
                self.n, self.k
            )));
        }
        // p = 1 is allowed so the complete-graph cases can be expressed.
        if !(self.p > 0.0 && self.p <= 1.0) {
            return Err(Error::InvalidParams(format!(
                "p must lie in (0, 1], got {}",
                self.p
            )));
        }
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "beta must be finite and nonnegative, got {}",
                self.beta
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_values() {
        assert!(ModelParams::new(0, 1, 0.1, 0.1).is_err());
        assert!(ModelParams::new(10, 11, 0.1, 0.1).is_err());
        assert!(ModelParams::new(10, 0, 0.1, 0.1).is_err());
        assert!(ModelParams::new(10, 3, 0.0, 0.1).is_err());
        assert!(ModelParams::new(10, 3, 1.5, 0.1).is_err());
        assert!(ModelParams::new(10, 3, 0.5, -0.1).is_err());
        assert!(ModelParams::new(10, 3, f64::NAN, 0.1).is_err());
    }

    #[test]
    fn accepts_complete_graph() {
        assert!(ModelParams::new(10, 3, 1.0, 0.0).is_ok());
    }

    #[test]
    fn sqrt_k_rounds() {
        assert_eq!(ModelParams::sqrt_k(1000, 0.5, 0.1).unwrap().k, 32);
        assert_eq!(ModelParams::sqrt_k(100, 0.5, 0.1).unwrap().k, 10);
    }
}
