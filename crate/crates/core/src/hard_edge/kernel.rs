//! K_hard^r(x, y) = ∫_0^1 G^{1,0}_{0,r+1}(ux | −ν_0, …, −ν_r) G^{r,0}_{0,r+1}(uy | ν_1, …, ν_r, ν_0) du
//! and its Christoffel–Darboux form for ν = 0.
//!
//! The first factor is 0F_r(; 1+ν; −z)/∏Γ(1+ν_j) and is summed as a series.
//! The second is a Mellin–Barnes integral for r ≥ 2; for r = 1 it is
//! z^ν 0F1(; 1+ν; −z)/Γ(1+ν), again a series, and both factors switch to
//! J_ν(2√z) for z > 1.
//!
//! For r ≥ 2 the default evaluation swaps the two integrals: with
//! f(ux) = Σ_k t_k(x) u^k,
//!
//! ```text
//! K(x, y) = 1/(2πi) ∫ F(s) y^s Σ_k t_k(x)/(s + k + 1) ds,
//! ```
//!
//! one Mellin–Barnes sum per kernel value. The u-integral is kept as a
//! cross-check and is the only route for r = 1, where the vertical contour
//! does not converge.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::EnsembleParams;
use crate::quad::GaussLegendre;
use crate::specfun::gamma::rgamma;
use crate::specfun::hyper::{hyp0f, pfq, pfq_delta, HypSeriesParams};
use crate::specfun::meijer::{ContourSpec, MeijerSpec, MellinBarnes};
use crate::specfun::bessel_j;

/// Hard-edge parameters (r, ν_1..ν_r); ν_0 = 0 is implicit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HardEdgeParams {
    pub r: usize,
    pub nu: Vec<u32>,
}

impl HardEdgeParams {
    pub fn new(nu: Vec<u32>) -> Result<Self> {
        let p = Self { r: nu.len(), nu };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.r == 0 || self.nu.len() != self.r {
            return Err(Error::InvalidParams(format!(
                "need r ≥ 1 and len(nu) = r, got r = {}, len = {}",
                self.r,
                self.nu.len()
            )));
        }
        Ok(())
    }

    pub fn nu_f64(&self) -> Vec<f64> {
        self.nu.iter().map(|&v| v as f64).collect()
    }

    fn all_zero(&self) -> bool {
        self.nu.iter().all(|&v| v == 0)
    }
}

impl From<&EnsembleParams> for HardEdgeParams {
    /// The limit keeps r and ν only; s and μ drop out.
    fn from(p: &EnsembleParams) -> Self {
        Self { r: p.r, nu: p.nu.clone() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HardKernelMethod {
    Integral,
    ChristoffelDarboux,
}

impl HardKernelMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Integral => "integral",
            Self::ChristoffelDarboux => "christoffel_darboux",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HardKernelEval {
    pub x: f64,
    pub y: f64,
    pub value: f64,
    pub method: HardKernelMethod,
}

const MB_TOL: f64 = 1e-13;
// below this argument the near-edge contour is used for G^{r,0}
const NEAR_SWITCH: f64 = 1.0;
// above this argument r = 1 factors use J_ν directly
const BESSEL_SWITCH: f64 = 1.0;
const T_SPLIT: f64 = 12.0;
const T_MAX: f64 = 60.0;
const REL_TOL: f64 = 1e-12;
// distance of the moment contour from Γ(ν − s)'s first pole
const MOMENT_GAP: f64 = 0.5;

enum SecondFactor {
    /// r = 1: z^ν 0F1(; 1+ν; −z)/Γ(1+ν).
    Series { nu: f64, lower: HypSeriesParams, scale: f64 },
    /// r ≥ 2: Mellin–Barnes, with a contour hugging the pole gap edge for small z.
    Meijer { near: MellinBarnes, far: MellinBarnes, moments: MellinBarnes },
}

/// Cached evaluator of K_hard^r for one parameter set.
pub struct HardKernel {
    params: HardEdgeParams,
    lower: HypSeriesParams,
    f_scale: f64,
    second: SecondFactor,
}

impl std::fmt::Debug for HardKernel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HardKernel").field("params", &self.params).finish()
    }
}

impl HardKernel {
    pub fn new(params: &HardEdgeParams) -> Result<Self> {
        params.validate()?;
        let nu = params.nu_f64();
        let lower = HypSeriesParams::new(vec![], nu.iter().map(|v| v + 1.0).collect());
        let f_scale: f64 = nu.iter().map(|v| rgamma(v + 1.0)).product();
        let second = if params.r == 1 {
            SecondFactor::Series {
                nu: nu[0],
                lower: HypSeriesParams::new(vec![], vec![nu[0] + 1.0]),
                scale: rgamma(nu[0] + 1.0),
            }
        } else {
            let mut b = nu.clone();
            b.push(0.0);
            let spec = MeijerSpec::new(params.r, 0, vec![], b)?;
            let (_, hi) = spec.pole_gap();
            let near_contour = ContourSpec::auto_at(&spec, hi - 0.05, 1e-30, NEAR_SWITCH, MB_TOL, 4)?;
            // left of Γ(ν − s)'s first pole, right of every 1/(s + k + 1)
            let moment_contour = ContourSpec::auto_at(&spec, hi - MOMENT_GAP, 1e-30, 1e4, MB_TOL, 0)?;
            SecondFactor::Meijer {
                near: MellinBarnes::with_contour(spec.clone(), &near_contour)?,
                far: MellinBarnes::adaptive(spec.clone(), MB_TOL, NEAR_SWITCH, 1e5)?,
                moments: MellinBarnes::with_contour(spec.clone(), &moment_contour)?,
            }
        };
        Ok(Self { params: params.clone(), lower, f_scale, second })
    }

    pub fn params(&self) -> &HardEdgeParams {
        &self.params
    }

    /// G^{1,0}_{0,r+1}(z | −ν_0, …, −ν_r).
    pub fn f(&self, z: f64) -> Result<f64> {
        if let SecondFactor::Series { nu, .. } = &self.second {
            if z > BESSEL_SWITCH {
                // z^{−ν/2} J_ν(2√z); the series cancels badly here
                return Ok(z.powf(-0.5 * nu) * bessel_j(*nu, 2.0 * z.sqrt())?);
            }
        }
        Ok(self.f_scale * pfq(&self.lower, -z)?)
    }

    /// (z d/dz)^j of [`Self::f`].
    pub fn f_delta(&self, z: f64, j: u32) -> Result<f64> {
        Ok(self.f_scale * pfq_delta(&self.lower, -z, j, f64::EPSILON * 0.5)?)
    }

    /// G^{r,0}_{0,r+1}(z | ν_1, …, ν_r, ν_0).
    pub fn g(&self, z: f64) -> Result<f64> {
        if let SecondFactor::Series { nu, .. } = &self.second {
            if z > BESSEL_SWITCH {
                return Ok(z.powf(0.5 * nu) * bessel_j(*nu, 2.0 * z.sqrt())?);
            }
        }
        self.g_delta(z, 0)
    }

    /// (z d/dz)^k of [`Self::g`].
    pub fn g_delta(&self, z: f64, k: u32) -> Result<f64> {
        match &self.second {
            SecondFactor::Series { nu, lower, scale } => {
                // Δ^k z^{ν+m} = (ν+m)^k z^{ν+m}, expanded binomially in m
                let mut acc = 0.0;
                let mut binom = 1.0;
                for j in 0..=k {
                    let d = pfq_delta(lower, -z, j, f64::EPSILON * 0.5)?;
                    acc += binom * nu.powi((k - j) as i32) * d;
                    binom *= (k - j) as f64 / (j + 1) as f64;
                }
                Ok(scale * z.powf(*nu) * acc)
            }
            SecondFactor::Meijer { near, far, .. } => {
                if z < NEAR_SWITCH {
                    near.eval_delta(z, k)
                } else {
                    far.eval_delta(z, k)
                }
            }
        }
    }

    /// Series coefficients t_k of f(ux) = f_scale Σ_k t_k u^k, cut where
    /// the terms have fallen below machine precision of the largest.
    fn f_terms(&self, x: f64) -> Vec<f64> {
        let mut out = vec![1.0];
        let mut t = 1.0_f64;
        let mut peak = 1.0_f64;
        for k in 1..10_000 {
            let kf = k as f64;
            t *= -x / kf;
            for b in &self.lower.lower {
                t /= b + kf - 1.0;
            }
            peak = peak.max(t.abs());
            out.push(t);
            if t.abs() < 1e-18 * peak && kf > x.abs() {
                break;
            }
        }
        out
    }

    /// Integral form of K_hard(x, y).
    pub fn kernel(&self, x: f64, y: f64) -> Result<f64> {
        if !(x > 0.0 && y > 0.0) {
            return Err(Error::Domain(format!("k_hard needs x, y > 0, got ({x}, {y})")));
        }
        match &self.second {
            SecondFactor::Meijer { moments, .. } => {
                let terms = self.f_terms(x);
                let v = moments.eval_weighted(y, |s| {
                    terms.iter().enumerate().map(|(k, t)| t / (s + (k + 1) as f64)).sum()
                })?;
                Ok(self.f_scale * v)
            }
            SecondFactor::Series { .. } => self.kernel_quadrature(x, y),
        }
    }

    /// The u-integral itself, with u = e^{−t} and Gauss–Legendre panels on t ∈ [0, 60].
    pub fn kernel_quadrature(&self, x: f64, y: f64) -> Result<f64> {
        if !(x > 0.0 && y > 0.0) {
            return Err(Error::Domain(format!("k_hard needs x, y > 0, got ({x}, {y})")));
        }
        let h = |t: f64| -> Result<f64> {
            let u = (-t).exp();
            Ok(u * self.f(u * x)? * self.g(u * y)?)
        };
        let rule = GaussLegendre::get(20);
        let sum = |refine: usize| -> Result<(f64, f64)> {
            let mut acc = 0.0;
            let mut mass = 0.0;
            let near = ((2.0 * T_SPLIT) as usize) * refine;
            let far = (((T_MAX - T_SPLIT) / 3.0) as usize) * refine;
            for (a, b, panels) in [(0.0, T_SPLIT, near), (T_SPLIT, T_MAX, far)] {
                for (t, w) in rule.composite(a, b, panels) {
                    let v = w * h(t)?;
                    acc += v;
                    mass += v.abs();
                }
            }
            Ok((acc, mass))
        };
        let (mut prev, _) = sum(1)?;
        let mut refine = 1;
        for _ in 0..5 {
            refine *= 2;
            let (next, mass) = sum(refine)?;
            if (next - prev).abs() <= REL_TOL * mass {
                return Ok(next);
            }
            prev = next;
        }
        Err(Error::NonConvergent(format!("k_hard quadrature at ({x}, {y})")))
    }

    /// 𝓑(f, g)(x, y) = (−1)^{r+1} Σ_j (−1)^j Δ^j f(x) Δ^{r−j} g(y).
    pub fn cd_numerator(&self, x: f64, y: f64) -> Result<f64> {
        if !self.params.all_zero() {
            return Err(Error::InvalidParams("Christoffel–Darboux form needs all ν = 0".into()));
        }
        let r = self.params.r as u32;
        if r > 4 {
            return Err(Error::UnsupportedR(self.params.r));
        }
        let mut acc = 0.0;
        for j in 0..=r {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            acc += sign * self.f_delta(x, j)? * self.g_delta(y, r - j)?;
        }
        Ok(if r % 2 == 0 { -acc } else { acc })
    }

    /// Christoffel–Darboux form 𝓑(f, g)/(x − y).
    pub fn kernel_cd(&self, x: f64, y: f64) -> Result<f64> {
        if !(x > 0.0 && y > 0.0) {
            return Err(Error::Domain(format!("k_hard needs x, y > 0, got ({x}, {y})")));
        }
        if (x - y).abs() < 1e-8 * x.max(y) {
            return Err(Error::CoincidentPoints { x, y });
        }
        Ok(self.cd_numerator(x, y)? / (x - y))
    }

    /// ρ_1(x) = K_hard(x, x).
    pub fn density(&self, x: f64) -> Result<f64> {
        self.kernel(x, x)
    }
}

/// K_hard^r(x, y) from its integral representation.
pub fn k_hard(params: &HardEdgeParams, x: f64, y: f64) -> Result<HardKernelEval> {
    let value = HardKernel::new(params)?.kernel(x, y)?;
    Ok(HardKernelEval { x, y, value, method: HardKernelMethod::Integral })
}

/// K_hard^r(x, y) by the Christoffel–Darboux form (all ν = 0, x ≠ y).
pub fn k_hard_cd(params: &HardEdgeParams, x: f64, y: f64) -> Result<HardKernelEval> {
    let value = HardKernel::new(params)?.kernel_cd(x, y)?;
    Ok(HardKernelEval { x, y, value, method: HardKernelMethod::ChristoffelDarboux })
}

/// J_a(2√x)² − J_{a+1}(2√x) J_{a−1}(2√x): the r = 1 hard-edge density.
pub fn bessel_density(a: u32, x: f64) -> Result<f64> {
    let z = 2.0 * x.sqrt();
    let a = a as f64;
    Ok(bessel_j(a, z)?.powi(2) - bessel_j(a + 1.0, z)? * bessel_j(a - 1.0, z)?)
}

/// Limit of the constant-term-normalized characteristic polynomial at
/// argument λ/N^{s+1}: 0F_r(; ν_1+1, …, ν_r+1; −λ).
pub fn charpoly_hard_limit(params: &HardEdgeParams, lambda: f64) -> Result<f64> {
    params.validate()?;
    let lower: Vec<f64> = params.nu_f64().iter().map(|v| v + 1.0).collect();
    hyp0f(&lower, -lambda)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_params() {
        assert!(HardEdgeParams::new(vec![]).is_err());
        let p = HardEdgeParams { r: 2, nu: vec![0] };
        assert!(HardKernel::new(&p).is_err());
    }

    #[test]
    fn charpoly_limit_values() {
        let p = HardEdgeParams::new(vec![0]).unwrap();
        assert_eq!(charpoly_hard_limit(&p, 0.0).unwrap(), 1.0);
        // 0F1(; 1; 1) = I_0(2), by its own series Σ 1/(k!)²
        let mut i0 = 0.0;
        let mut t = 1.0;
        for k in 0..30 {
            if k > 0 {
                t /= (k * k) as f64;
            }
            i0 += t;
        }
        assert!((charpoly_hard_limit(&p, -1.0).unwrap() - i0).abs() < 1e-14);
        assert!((i0 - 2.279_585_302_3).abs() < 1e-10);
    }

    #[test]
    fn coincident_points_rejected() {
        let k = HardKernel::new(&HardEdgeParams::new(vec![0, 0]).unwrap()).unwrap();
        assert!(matches!(k.kernel_cd(2.0, 2.0 + 1e-10), Err(Error::CoincidentPoints { .. })));
    }

    #[test]
    fn cd_needs_zero_nu() {
        let k = HardKernel::new(&HardEdgeParams::new(vec![1, 0]).unwrap()).unwrap();
        assert!(k.kernel_cd(1.0, 2.0).is_err());
    }

    #[test]
    fn g_matches_series_for_r1() {
        // G^{1,0}_{0,2}(z | 2, 0) = z J_2(2√z)
        let k = HardKernel::new(&HardEdgeParams::new(vec![2]).unwrap()).unwrap();
        for z in [0.3, 2.0, 7.5] {
            let j = bessel_j(2.0, 2.0 * f64::sqrt(z)).unwrap();
            assert!((k.g(z).unwrap() - z * j).abs() < 1e-13);
        }
    }
}
