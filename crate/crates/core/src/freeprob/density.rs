//! Global densities: Stieltjes inversion and the closed forms available
//! for s = 0 (parametric) and r = s.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::freeprob::stieltjes::solve_stieltjes;
use crate::quad;

/// ρ(x) = Im G(x + i0)/π, Richardson-extrapolated from offsets ε ∈ {1, 1/2, 1/4}·1e-6·x.
pub fn global_density(r: usize, s: usize, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("density needs x > 0, got {x}")));
    }
    let base = 1e-6 * x;
    let mut vals = [0.0; 3];
    for (k, v) in vals.iter_mut().enumerate() {
        let eps = base / (1u32 << k) as f64;
        *v = solve_stieltjes(r, s, Complex64::new(x, eps))?.g.im / PI;
    }
    let rho = (vals[0] - 6.0 * vals[1] + 8.0 * vals[2]) / 3.0;
    Ok(if rho < 0.0 && rho > -1e-9 { 0.0 } else { rho })
}

/// Closed form for r = s: xρ(x) = x^{1/(r+1)} sin(π/(r+1)) / (π(1 + 2x^{1/(r+1)}cos(π/(r+1)) + x^{2/(r+1)})).
pub fn density_rr_closed(r: usize, x: f64) -> f64 {
    let a = 1.0 / (r as f64 + 1.0);
    let t = x.powf(a);
    let (sn, cs) = (PI * a).sin_cos();
    t * sn / (PI * x * (1.0 + 2.0 * t * cs + t * t))
}

/// A point of the s = 0 density in the angle parametrization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParametricPoint {
    pub phi: f64,
    pub x: f64,
    pub rho: f64,
}

/// x(φ) = sin((r+1)φ)^{r+1} / (sin φ sin(rφ)^r), ρ(φ) = sin²φ sin(rφ)^{r-1} / (π sin((r+1)φ)^r).
pub fn density_s0_parametric(r: usize, phi: f64) -> Result<ParametricPoint> {
    let top = PI / (r as f64 + 1.0);
    if r == 0 || !(phi > 0.0 && phi < top) {
        return Err(Error::Domain(format!("need r ≥ 1 and 0 < φ < π/(r+1), got r={r}, φ={phi}")));
    }
    let rf = r as f64;
    let s1 = phi.sin();
    let sr = (rf * phi).sin();
    let sr1 = ((rf + 1.0) * phi).sin();
    let x = sr1.powi(r as i32 + 1) / (s1 * sr.powi(r as i32));
    let rho = s1 * s1 * sr.powi(r as i32 - 1) / (PI * sr1.powi(r as i32));
    Ok(ParametricPoint { phi, x, rho })
}

/// Right edge (r+1)^{r+1}/r^r of the s = 0 support.
pub fn support_edge_s0(r: usize) -> f64 {
    let rf = r as f64;
    (rf + 1.0).powf(rf + 1.0) / rf.powf(rf)
}

/// Small-x form sin(π/(r+1)) / (π x^{r/(r+1)}).
pub fn tail_small_x(r: usize, x: f64) -> f64 {
    let a = 1.0 / (r as f64 + 1.0);
    (PI * a).sin() / (PI * x.powf(r as f64 * a))
}

/// ∫_0^X ρ(x) dx with the substitution x = u^{r+1} near the origin.
pub fn mass_below(density: &dyn Fn(f64) -> Result<f64>, r: usize, x_max: f64, tol: f64) -> Result<f64> {
    let k = r as f64 + 1.0;
    let u_max = x_max.min(1.0).powf(1.0 / k);
    let head = quad::integrate(|u| Ok(density(u.powf(k))? * k * u.powf(k - 1.0)), 0.0, u_max, tol, tol)?;
    if x_max <= 1.0 {
        return Ok(head);
    }
    // log variable on [1, X]
    let body = quad::integrate(|t| { let x = t.exp(); Ok(density(x)? * x) }, 0.0, x_max.ln(), tol, tol)?;
    Ok(head + body)
}

/// Total mass of the (r, s) density, with the x^{-1-1/(s+1)} tail beyond X added analytically.
pub fn total_mass(r: usize, s: usize, tol: f64) -> Result<f64> {
    let f = |x: f64| global_density(r, s, x);
    if s == 0 {
        return mass_below(&f, r, support_edge_s0(r), tol);
    }
    let x_max = 1e10;
    let body = mass_below(&f, r, x_max, tol)?;
    let b = 1.0 / (s as f64 + 1.0);
    let tail = (PI * b).sin() / PI / b * x_max.powf(-b);
    Ok(body + tail)
}
