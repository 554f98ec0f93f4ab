use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// (N, r, s, ν_1..ν_r, μ_1..μ_s): the product ensemble.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EnsembleParams {
    #[serde(rename = "N")]
    pub n: usize,
    pub r: usize,
    pub s: usize,
    pub nu: Vec<u32>,
    pub mu: Vec<u32>,
}

impl EnsembleParams {
    pub fn new(n: usize, nu: Vec<u32>, mu: Vec<u32>) -> Result<Self> {
        let p = Self { n, r: nu.len(), s: mu.len(), nu, mu };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParams("N must be positive".into()));
        }
        if self.nu.len() != self.r || self.mu.len() != self.s {
            return Err(Error::InvalidParams(format!(
                "need len(nu) = r and len(mu) = s, got {} vs {} and {} vs {}",
                self.nu.len(),
                self.r,
                self.mu.len(),
                self.s
            )));
        }
        if self.r + self.s == 0 {
            return Err(Error::InvalidParams("need r + s ≥ 1".into()));
        }
        Ok(())
    }

    /// ν_j as reals with ν_0 = 0 prepended.
    pub fn nu_with_zero(&self) -> Vec<f64> {
        std::iter::once(0.0).chain(self.nu.iter().map(|v| *v as f64)).collect()
    }

    pub fn nu_f64(&self) -> Vec<f64> {
        self.nu.iter().map(|v| *v as f64).collect()
    }

    pub fn mu_f64(&self) -> Vec<f64> {
        self.mu.iter().map(|v| *v as f64).collect()
    }

    /// The mirrored ensemble (r ↔ s, ν ↔ μ) describing the inverse matrix.
    pub fn swapped(&self) -> Self {
        Self { n: self.n, r: self.s, s: self.r, nu: self.mu.clone(), mu: self.nu.clone() }
    }
}
