//! Correlation functions and the joint eigenvalue density.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finite_kernel::biorth::{ln_abs_c_l, BiorthSystem, MB_TOL, X_MAX, X_MIN};
use crate::params::EnsembleParams;
use crate::specfun::gamma::ln_gamma_signed;
use crate::specfun::meijer::{MeijerSpec, MellinBarnes};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationResult {
    pub points: Vec<f64>,
    pub rho_k: f64,
}

fn check_points(points: &[f64], n: usize) -> Result<()> {
    if points.is_empty() || points.len() > n {
        return Err(Error::InvalidParams(format!("need 1 ≤ k ≤ N points, got {}", points.len())));
    }
    if points.iter().any(|x| !(*x > 0.0)) {
        return Err(Error::Domain("correlation points must be positive".into()));
    }
    Ok(())
}

impl BiorthSystem {
    /// det[K_N(x_i, x_j)].
    pub fn rho_k(&self, points: &[f64]) -> Result<CorrelationResult> {
        check_points(points, self.params().n)?;
        let k = points.len();
        let mut m = DMatrix::<f64>::zeros(k, k);
        for (j, y) in points.iter().enumerate() {
            let q = self.q_all(*y)?;
            for (i, x) in points.iter().enumerate() {
                m[(i, j)] = q.iter().enumerate().map(|(l, ql)| self.p(l, *x) * ql).sum();
            }
        }
        Ok(CorrelationResult { points: points.to_vec(), rho_k: m.determinant() })
    }
}

pub fn rho_k(params: &EnsembleParams, points: &[f64]) -> Result<CorrelationResult> {
    BiorthSystem::new(params)?.rho_k(points)
}

/// ln of 1/(N! ∏_l |C_l|), the factor that normalizes the Box form.
pub fn normalization_constant(params: &EnsembleParams) -> Result<f64> {
    params.validate()?;
    let (ln_fact, _) = ln_gamma_signed(params.n as f64 + 1.0)?;
    let mut acc = -ln_fact;
    for l in 0..params.n {
        acc -= ln_abs_c_l(params, l)?.0;
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoxForm {
    /// Row shift in the first upper parameter, −(μ_1 + j − 1 + N); needs s ≥ 1.
    UpperShift,
    /// Row shift in the first lower parameter, ν_1 + j − 1; needs r ≥ 1.
    LowerShift,
}

/// Row j (0-based) of the determinant: G^{r,s}_{s,r} with the shifted parameter.
pub fn box_entry_spec(params: &EnsembleParams, form: BoxForm, j: usize) -> Result<MeijerSpec> {
    let n = params.n as f64;
    let mut a: Vec<f64> = params.mu_f64().iter().map(|mu| -(mu + n)).collect();
    let mut b = params.nu_f64();
    match form {
        BoxForm::UpperShift => {
            if params.s == 0 {
                return Err(Error::InvalidParams("upper-shift form needs s ≥ 1".into()));
            }
            a[0] -= j as f64;
        }
        BoxForm::LowerShift => {
            if params.r == 0 {
                return Err(Error::InvalidParams("lower-shift form needs r ≥ 1".into()));
            }
            b[0] += j as f64;
        }
    }
    MeijerSpec::new(params.r, params.s, a, b)
}

/// Evaluators for the N rows of the Box determinant.
#[derive(Debug)]
pub struct BoxDensity {
    params: EnsembleParams,
    rows: Vec<MellinBarnes>,
}

impl BoxDensity {
    pub fn new(params: &EnsembleParams, form: BoxForm) -> Result<Self> {
        params.validate()?;
        let rows = (0..params.n)
            .map(|j| MellinBarnes::adaptive(box_entry_spec(params, form, j)?, MB_TOL, X_MIN, X_MAX))
            .collect::<Result<_>>()?;
        Ok(Self { params: params.clone(), rows })
    }

    pub fn entry(&self, j: usize, x: f64) -> Result<f64> {
        self.rows[j].eval(x)
    }

    /// ln |∏_{j<k}(x_k − x_j) det[G_j(x_k)]|, unnormalized.
    pub fn ln_abs(&self, points: &[f64]) -> Result<f64> {
        let n = self.params.n;
        if points.len() != n {
            return Err(Error::InvalidParams(format!("need N = {n} points, got {}", points.len())));
        }
        check_points(points, n)?;
        let mut vander = 0.0;
        for k in 0..n {
            for j in 0..k {
                vander += (points[k] - points[j]).abs().ln();
            }
        }
        let mut m = DMatrix::<f64>::zeros(n, n);
        for (k, x) in points.iter().enumerate() {
            for j in 0..n {
                m[(j, k)] = self.entry(j, *x)?;
            }
        }
        Ok(vander + m.determinant().abs().ln())
    }
}

/// ln of the joint density at `points`: Box form scaled by the normalization
/// constant for [`BoxForm::UpperShift`], unnormalized for [`BoxForm::LowerShift`].
pub fn pdf_box(params: &EnsembleParams, points: &[f64], form: BoxForm) -> Result<f64> {
    let v = BoxDensity::new(params, form)?.ln_abs(points)?;
    Ok(match form {
        BoxForm::UpperShift => v + normalization_constant(params)?,
        BoxForm::LowerShift => v,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_level_laguerre() {
        let p = EnsembleParams::new(1, vec![0], vec![]).unwrap();
        for x in [0.2, 1.0, 3.0] {
            let r = rho_k(&p, &[x]).unwrap();
            assert!((r.rho_k - (-x).exp()).abs() < 1e-13);
        }
        assert!(normalization_constant(&p).unwrap().abs() < 1e-14);
    }

    #[test]
    fn repulsion_at_coincidence() {
        let p = EnsembleParams::new(4, vec![0, 1], vec![1]).unwrap();
        let sys = BiorthSystem::new(&p).unwrap();
        let x = 0.8;
        let r1 = sys.rho_k(&[x]).unwrap().rho_k;
        let r2 = sys.rho_k(&[x, x + 1e-4]).unwrap().rho_k;
        assert!(r2.abs() < 1e-6 * r1 * r1, "{r2}");
        assert!(r2 > -1e-12);
    }

    #[test]
    fn two_point_symmetric_under_swap() {
        let p = EnsembleParams::new(3, vec![0], vec![0]).unwrap();
        let sys = BiorthSystem::new(&p).unwrap();
        let k12 = sys.kernel(0.4, 2.0).unwrap();
        let k21 = sys.kernel(2.0, 0.4).unwrap();
        assert!((k12 - k21).abs() > 1e-3 * k12.abs());
        let a = sys.rho_k(&[0.4, 2.0]).unwrap().rho_k;
        let b = sys.rho_k(&[2.0, 0.4]).unwrap().rho_k;
        assert!((a - b).abs() < 1e-10 * a.abs());
    }

    #[test]
    fn form_requirements() {
        let p = EnsembleParams::new(2, vec![0], vec![]).unwrap();
        assert!(box_entry_spec(&p, BoxForm::UpperShift, 0).is_err());
        let p = EnsembleParams::new(2, vec![], vec![0]).unwrap();
        assert!(box_entry_spec(&p, BoxForm::LowerShift, 0).is_err());
    }
}
