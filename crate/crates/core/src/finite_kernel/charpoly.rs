//! The averaged generalized characteristic polynomial ⟨det(λÃ†Ã − A†A)⟩.

use crate::error::Result;
use crate::params::EnsembleParams;
use crate::specfun::hyper::{pfq, HypSeriesParams};

fn series(params: &EnsembleParams, lambda: f64) -> Result<f64> {
    let n = params.n as f64;
    let upper = std::iter::once(-n).chain(params.mu_f64().iter().map(|mu| -mu - n)).collect();
    let lower = params.nu_f64().iter().map(|nu| nu + 1.0).collect();
    let z = if params.s % 2 == 0 { lambda } else { -lambda };
    pfq(&HypSeriesParams::new(upper, lower), z)
}

/// (−1)^N ∏_l (ν_l+1)_N · s+1F_r(−N, −μ_1−N, …; ν_1+1, …; (−1)^s λ).
pub fn charpoly_exact(params: &EnsembleParams, lambda: f64) -> Result<f64> {
    params.validate()?;
    let n = params.n;
    let mut pref = if n % 2 == 0 { 1.0 } else { -1.0 };
    for nu in params.nu_f64() {
        for k in 0..n {
            pref *= nu + 1.0 + k as f64;
        }
    }
    Ok(pref * series(params, lambda)?)
}

/// charpoly_exact(λ) / charpoly_exact(0): the hypergeometric factor alone.
pub fn charpoly_normalized(params: &EnsembleParams, lambda: f64) -> Result<f64> {
    params.validate()?;
    series(params, lambda)
}
