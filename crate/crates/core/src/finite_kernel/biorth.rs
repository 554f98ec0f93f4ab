//! The biorthogonal pair (P_n, Q_l) and the kernel as a finite sum.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::EnsembleParams;
use crate::quad::GaussLegendre;
use crate::specfun::gamma::ln_gamma_signed;
use crate::specfun::meijer::{MeijerSpec, MellinBarnes};

pub(crate) const MB_TOL: f64 = 1e-13;
/// Argument range over which the Mellin–Barnes panels are validated.
pub(crate) const X_MIN: f64 = 1e-30;
pub(crate) const X_MAX: f64 = 1e20;

/// ln|C_l| and the sign of C_l = (−1)^l ∏_{j=0}^r Γ(ν_j+l+1) ∏_p Γ(μ_p+N−l).
pub fn ln_abs_c_l(params: &EnsembleParams, l: usize) -> Result<(f64, f64)> {
    if l >= params.n {
        return Err(Error::InvalidParams(format!("need l < N, got l={l}, N={}", params.n)));
    }
    let mut ln = 0.0;
    let mut sign = if l % 2 == 0 { 1.0 } else { -1.0 };
    for nu in params.nu_with_zero() {
        let (v, s) = ln_gamma_signed(nu + l as f64 + 1.0)?;
        ln += v;
        sign *= s;
    }
    for mu in params.mu_f64() {
        let (v, s) = ln_gamma_signed(mu + (params.n - l) as f64)?;
        ln += v;
        sign *= s;
    }
    Ok((ln, sign))
}

pub fn c_l(params: &EnsembleParams, l: usize) -> Result<f64> {
    let (ln, sign) = ln_abs_c_l(params, l)?;
    Ok(sign * ln.exp())
}

/// Ascending coefficients of P_n: the terminating s+1F_r at (−1)^s x with its prefactor.
pub fn p_coefficients(params: &EnsembleParams, n: usize) -> Result<Vec<f64>> {
    let big_n = params.n as f64;
    let nf = n as f64;
    let mut ln_pref = 0.0;
    let mut sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    for nu in params.nu_f64() {
        let (a, sa) = ln_gamma_signed(nu + nf + 1.0)?;
        let (b, sb) = ln_gamma_signed(nu + 1.0)?;
        ln_pref += a - b;
        sign *= sa * sb;
    }
    for mu in params.mu_f64() {
        let (a, sa) = ln_gamma_signed(mu + big_n - nf)?;
        let (b, sb) = ln_gamma_signed(mu + big_n)?;
        ln_pref += a - b;
        sign *= sa * sb;
    }
    let upper: Vec<f64> =
        std::iter::once(-nf).chain(params.mu_f64().iter().map(|mu| 1.0 - mu - big_n)).collect();
    let lower: Vec<f64> = params.nu_f64().iter().map(|nu| 1.0 + nu).collect();
    let z = if params.s % 2 == 0 { 1.0 } else { -1.0 };
    let mut coeffs = Vec::with_capacity(n + 1);
    let mut t = sign * ln_pref.exp();
    coeffs.push(t);
    for k in 1..=n {
        let km1 = (k - 1) as f64;
        let mut ratio = z / k as f64;
        for a in &upper {
            ratio *= a + km1;
        }
        for b in &lower {
            ratio /= b + km1;
        }
        t *= ratio;
        coeffs.push(t);
    }
    Ok(coeffs)
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// Monic P_n(x).
pub fn p_n(params: &EnsembleParams, n: usize, x: f64) -> Result<f64> {
    params.validate()?;
    if n > params.n {
        return Err(Error::InvalidParams(format!("need n ≤ N, got n={n}, N={}", params.n)));
    }
    Ok(horner(&p_coefficients(params, n)?, x))
}

/// G^{r+1,s}_{s+1,r+1}(−(μ_1+N), …, −(μ_s+N), −l; ν_0, …, ν_r | ·).
pub fn q_meijer_spec(params: &EnsembleParams, l: usize) -> Result<MeijerSpec> {
    let big_n = params.n as f64;
    let a: Vec<f64> = params
        .mu_f64()
        .iter()
        .map(|mu| -(mu + big_n))
        .chain(std::iter::once(-(l as f64)))
        .collect();
    MeijerSpec::new(params.r + 1, params.s, a, params.nu_with_zero())
}

fn q_evaluator(params: &EnsembleParams, l: usize) -> Result<MellinBarnes> {
    MellinBarnes::adaptive(q_meijer_spec(params, l)?, MB_TOL, X_MIN, X_MAX)
}

/// Q_l(x) = ((−1)^l / C_l) G^{r+1,s}_{s+1,r+1}(x).
pub fn q_l(params: &EnsembleParams, l: usize, x: f64) -> Result<f64> {
    params.validate()?;
    let (ln_c, sign) = ln_abs_c_l(params, l)?;
    let g = q_evaluator(params, l)?.eval(x)?;
    let parity = if l % 2 == 0 { 1.0 } else { -1.0 };
    Ok(parity * sign * g * (-ln_c).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelMethod {
    BiorthSum,
    DoubleContour,
}

impl KernelMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            KernelMethod::BiorthSum => "biorth_sum",
            KernelMethod::DoubleContour => "double_contour",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelEval {
    pub x: f64,
    pub y: f64,
    pub value: f64,
    pub method: KernelMethod,
}

/// Gram matrix ∫P_n Q_l and the matching ∫|P_n Q_l|.
#[derive(Debug, Clone)]
pub struct Gram {
    pub matrix: DMatrix<f64>,
    pub abs_mass: DMatrix<f64>,
}

impl Gram {
    /// Largest |G - I| entry.
    pub fn max_deviation(&self) -> f64 {
        let n = self.matrix.nrows();
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                let e = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((self.matrix[(i, j)] - e).abs());
            }
        }
        worst
    }
}

/// Relative roundoff of a summed f64 integrand, in units of its absolute mass.
pub const ROUNDOFF: f64 = 16.0 * f64::EPSILON;

/// Precomputed P_n coefficients and Q_l evaluators for one parameter set.
#[derive(Debug)]
pub struct BiorthSystem {
    params: EnsembleParams,
    c: Vec<f64>,
    ln_abs_c: Vec<f64>,
    p: Vec<Vec<f64>>,
    q: Vec<MellinBarnes>,
}

impl BiorthSystem {
    pub fn new(params: &EnsembleParams) -> Result<Self> {
        params.validate()?;
        let n = params.n;
        let mut c = Vec::with_capacity(n);
        let mut ln_abs_c = Vec::with_capacity(n);
        let mut p = Vec::with_capacity(n);
        let mut q = Vec::with_capacity(n);
        for l in 0..n {
            let (ln, sign) = ln_abs_c_l(params, l)?;
            if sign != if l % 2 == 0 { 1.0 } else { -1.0 } {
                return Err(Error::InvalidParams(format!("C_{l} has sign {sign}")));
            }
            c.push(sign * ln.exp());
            ln_abs_c.push(ln);
            p.push(p_coefficients(params, l)?);
            q.push(q_evaluator(params, l)?);
        }
        Ok(Self { params: params.clone(), c, ln_abs_c, p, q })
    }

    pub fn params(&self) -> &EnsembleParams {
        &self.params
    }

    pub fn c(&self) -> &[f64] {
        &self.c
    }

    pub fn p(&self, n: usize, x: f64) -> f64 {
        horner(&self.p[n], x)
    }

    pub fn q(&self, l: usize, x: f64) -> Result<f64> {
        // (−1)^l / C_l = 1/|C_l| since sign C_l = (−1)^l
        Ok(self.q[l].eval(x)? * (-self.ln_abs_c[l]).exp())
    }

    pub fn q_all(&self, x: f64) -> Result<Vec<f64>> {
        (0..self.params.n).map(|l| self.q(l, x)).collect()
    }

    pub fn p_all(&self, x: f64) -> Vec<f64> {
        (0..self.params.n).map(|n| self.p(n, x)).collect()
    }

    /// Σ_l P_l(x) Q_l(y).
    pub fn kernel(&self, x: f64, y: f64) -> Result<f64> {
        let q = self.q_all(y)?;
        Ok(q.iter().enumerate().map(|(l, ql)| self.p(l, x) * ql).sum())
    }

    /// ∫_0^∞ P_n Q_l dx for all n, l, computed in t = ln x on a range grown
    /// until the integrand at both ends is below `tol`/10 (both tails decay at
    /// least like e^{-|t|}, so the neglected mass is of that order).
    pub fn gram_matrix(&self, tol: f64) -> Result<DMatrix<f64>> {
        Ok(self.gram(tol)?.matrix)
    }

    /// Gram matrix together with ∫|P_n Q_l| dx, the scale that bounds the
    /// roundoff of each entry.
    pub fn gram(&self, tol: f64) -> Result<Gram> {
        let n = self.params.n;
        let integrand = |t: f64| -> Result<Vec<f64>> {
            let x = t.exp();
            let p = self.p_all(x);
            let q = self.q_all(x)?;
            let mut out = Vec::with_capacity(n * n);
            for pn in &p {
                for ql in &q {
                    out.push(x * pn * ql);
                }
            }
            Ok(out)
        };
        let edge = |t: f64| -> Result<f64> {
            Ok(integrand(t)?.iter().fold(0.0_f64, |m, v| m.max(v.abs())))
        };
        let (t_min, t_max) = (X_MIN.ln(), X_MAX.ln());
        let (mut lo, mut hi) = (-20.0_f64, 20.0_f64);
        while edge(lo)? > tol * 0.1 {
            if lo <= t_min {
                return Err(Error::NonConvergent("biorthogonality integrand does not decay at 0".into()));
            }
            lo = (lo - 5.0).max(t_min);
        }
        while edge(hi)? > tol * 0.1 {
            if hi >= t_max {
                return Err(Error::NonConvergent("biorthogonality integrand does not decay at ∞".into()));
            }
            hi = (hi + 5.0).min(t_max);
        }
        // the integrand is analytic in t, so composite Gauss–Legendre converges
        // fast; panel halving stops once two levels agree to `tol` or to the
        // roundoff floor set by the absolute mass
        let rule = GaussLegendre::get(20);
        let sum = |panels: usize| -> Result<(Vec<f64>, Vec<f64>)> {
            let mut acc = vec![0.0; n * n];
            let mut mass = vec![0.0; n * n];
            for (t, w) in rule.composite(lo, hi, panels) {
                for ((a, m), v) in acc.iter_mut().zip(mass.iter_mut()).zip(integrand(t)?) {
                    *a += w * v;
                    *m += w * v.abs();
                }
            }
            Ok((acc, mass))
        };
        let mut panels = (hi - lo).ceil() as usize;
        let (mut prev, _) = sum(panels)?;
        for _ in 0..4 {
            panels *= 2;
            let (next, mass) = sum(panels)?;
            let settled = prev
                .iter()
                .zip(&next)
                .zip(&mass)
                .all(|((a, b), m)| (a - b).abs() < tol.max(ROUNDOFF * m));
            if settled {
                return Ok(Gram {
                    matrix: DMatrix::from_row_slice(n, n, &next),
                    abs_mass: DMatrix::from_row_slice(n, n, &mass),
                });
            }
            prev = next;
        }
        Err(Error::NonConvergent("biorthogonality quadrature did not converge".into()))
    }
}

/// K_N(x, y) = Σ_{l<N} P_l(x) Q_l(y).
pub fn kernel_n(params: &EnsembleParams, x: f64, y: f64) -> Result<KernelEval> {
    if !(x > 0.0 && y > 0.0) {
        return Err(Error::Domain(format!("kernel needs x, y > 0, got ({x}, {y})")));
    }
    let value = BiorthSystem::new(params)?.kernel(x, y)?;
    Ok(KernelEval { x, y, value, method: KernelMethod::BiorthSum })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad;
    use crate::specfun::gamma::ln_gamma_unchecked;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    fn params(n: usize, nu: &[u32], mu: &[u32]) -> EnsembleParams {
        EnsembleParams::new(n, nu.to_vec(), mu.to_vec()).unwrap()
    }

    #[test]
    fn c_l_examples() {
        let p = params(2, &[0], &[0]);
        assert!((c_l(&p, 0).unwrap() - 1.0).abs() < 1e-14);
        assert!((c_l(&p, 1).unwrap() + 1.0).abs() < 1e-14);
        let p = params(3, &[0, 1], &[2]);
        assert!((c_l(&p, 1).unwrap() + 12.0).abs() < 1e-12);
    }

    #[test]
    fn p_n_examples() {
        let p = params(4, &[0], &[]);
        assert_eq!(p_n(&p, 0, 3.3).unwrap(), 1.0);
        for x in [0.0, 0.5, 2.0, 7.0] {
            assert!((p_n(&p, 1, x).unwrap() - (x - 1.0)).abs() < 1e-14);
        }
        let p = params(4, &[0], &[0]);
        let c = p_coefficients(&p, 2).unwrap();
        assert!((c[2] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn monic_for_mixed_parameters() {
        let p = params(7, &[2, 0, 1], &[3, 0]);
        for n in 0..7 {
            let c = p_coefficients(&p, n).unwrap();
            assert!((c[n] - 1.0).abs() < 1e-12, "n={n}: {}", c[n]);
        }
    }

    #[test]
    fn q0_is_exponential_for_laguerre() {
        let p = params(3, &[0], &[]);
        for x in [0.1, 1.0, 5.0, 30.0] {
            let v = q_l(&p, 0, x).unwrap();
            assert!((v - (-x).exp()).abs() < 1e-12 * (-x).exp().max(1e-300), "{x}: {v}");
        }
    }

    // Residues at u = k of Γ(ν_j − u)… x^u, each from a small circle integral.
    fn residue_sum(spec: &MeijerSpec, x: f64) -> f64 {
        let m = 64;
        let mut total = 0.0;
        for k in 0..200 {
            let centre = k as f64;
            let mut res = Complex64::new(0.0, 0.0);
            for i in 0..m {
                let th = 2.0 * PI * i as f64 / m as f64;
                let e = Complex64::from_polar(0.5, th);
                let u = centre + e;
                let f = (spec_ln(spec, u) + u * x.ln()).exp();
                res += f * e / m as f64;
            }
            total -= res.re;
            if k > 10 && res.norm() < 1e-18 * total.abs() {
                break;
            }
        }
        total
    }

    fn spec_ln(spec: &MeijerSpec, u: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, b) in spec.b.iter().enumerate() {
            if j < spec.m {
                acc += ln_gamma_unchecked(b - u);
            } else {
                acc -= ln_gamma_unchecked(1.0 - b + u);
            }
        }
        for (j, a) in spec.a.iter().enumerate() {
            if j < spec.n {
                acc += ln_gamma_unchecked(1.0 - a + u);
            } else {
                acc -= ln_gamma_unchecked(a - u);
            }
        }
        acc
    }

    #[test]
    fn q_l_matches_residue_sum() {
        let p = params(5, &[0, 1], &[0]);
        let l = 2;
        let spec = q_meijer_spec(&p, l).unwrap();
        let g = residue_sum(&spec, 1.0);
        let c = c_l(&p, l).unwrap();
        let expect = g / c.abs();
        let v = q_l(&p, l, 1.0).unwrap();
        assert!((v - expect).abs() < 1e-9 * expect.abs(), "{v} vs {expect}");
    }

    #[test]
    fn moment_conditions() {
        // ∫ x^k Q_l dx = δ_{lk} for k ≤ l
        let p = params(4, &[0], &[0]);
        let sys = BiorthSystem::new(&p).unwrap();
        for l in 0..4 {
            for k in 0..=l {
                let f = |t: f64| Ok(t.exp().powi(k as i32 + 1) * sys.q(l, t.exp())?);
                let v = quad::integrate(f, -40.0, 40.0, 1e-12, 1e-12).unwrap();
                let e = if k == l { 1.0 } else { 0.0 };
                assert!((v - e).abs() < 1e-8, "l={l} k={k}: {v}");
            }
        }
    }

    fn laguerre(n: usize, x: f64) -> f64 {
        let (mut a, mut b) = (1.0, 1.0 - x);
        if n == 0 {
            return a;
        }
        for k in 1..n {
            let kf = k as f64;
            let c = ((2.0 * kf + 1.0 - x) * b - kf * a) / (kf + 1.0);
            a = b;
            b = c;
        }
        b
    }

    #[test]
    fn laguerre_kernel_closed_form() {
        let p = params(3, &[0], &[]);
        let sys = BiorthSystem::new(&p).unwrap();
        for (x, y) in [(0.5, 1.5), (2.0, 0.3), (4.0, 6.0)] {
            // Christoffel–Darboux: Σ_{k<n} L_k(x)L_k(y) = n (L_{n-1}(x)L_n(y) − L_n(x)L_{n-1}(y))/(x − y)
            let n = 3;
            let cd = n as f64 * (laguerre(n - 1, x) * laguerre(n, y) - laguerre(n, x) * laguerre(n - 1, y))
                / (x - y);
            let e = cd * (-y).exp();
            let v = sys.kernel(x, y).unwrap();
            assert!((v - e).abs() < 1e-10, "({x},{y}): {v} vs {e}");
        }
    }
}
