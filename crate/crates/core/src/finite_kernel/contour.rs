//! The kernel as a double contour integral.
//!
//! K_N(x,y) = (2πi)^{-2} ∫_{Re u = −1/2} du ∮_Σ dt
//!   ∏_{j=0}^r Γ(ν_j+u+1)/Γ(ν_j+t+1) ∏_l Γ(μ_l+N−u)/Γ(μ_l+N−t)
//!   × Γ(t−N+1)/Γ(u−N+1) · x^t y^{−(u+1)} / (u − t),
//!
//! with Σ a circle around t = 0, …, N−1. The u-line uses Gauss–Legendre
//! panels, the circle the trapezoid rule.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::finite_kernel::biorth::{KernelEval, KernelMethod};
use crate::params::EnsembleParams;
use crate::quad::GaussLegendre;
use crate::specfun::gamma::ln_gamma_unchecked;

const U_ABSCISSA: f64 = -0.5;
const PANEL_ORDER: usize = 20;
const PANEL_WIDTH: f64 = 0.5;
const COLLISION: f64 = 1e-3;

fn ln_u_factor(p: &EnsembleParams, u: Complex64) -> Complex64 {
    let n = p.n as f64;
    let mut acc = -ln_gamma_unchecked(u - n + 1.0);
    for nu in p.nu_with_zero() {
        acc += ln_gamma_unchecked(u + nu + 1.0);
    }
    for mu in p.mu_f64() {
        acc += ln_gamma_unchecked(mu + n - u);
    }
    acc
}

fn ln_t_factor(p: &EnsembleParams, t: Complex64) -> Complex64 {
    let n = p.n as f64;
    let mut acc = ln_gamma_unchecked(t - n + 1.0);
    for nu in p.nu_with_zero() {
        acc -= ln_gamma_unchecked(t + nu + 1.0);
    }
    for mu in p.mu_f64() {
        acc -= ln_gamma_unchecked(mu + n - t);
    }
    acc
}

/// Half-height of the u-line beyond which |integrand| < tol relative to its peak.
fn u_truncation(p: &EnsembleParams, tol: f64) -> Result<f64> {
    let mag = |tau: f64| ln_u_factor(p, Complex64::new(U_ABSCISSA, tau)).re - (1.0 + tau.abs()).ln();
    let peak = (0..=40).map(|i| mag(i as f64 * 0.5)).fold(f64::NEG_INFINITY, f64::max);
    let mut tau = 2.0;
    while tau < 2000.0 {
        if mag(tau) - peak < tol.ln() {
            return Ok(tau);
        }
        tau += 1.0;
    }
    Err(Error::NonConvergent("u-line integrand does not decay".into()))
}

struct Nodes {
    points: Vec<Complex64>,
    /// ln of the weighted factor (quadrature weight and dt or du absorbed).
    ln_weighted: Vec<Complex64>,
}

fn u_nodes(p: &EnsembleParams, y: f64, tol: f64) -> Result<Nodes> {
    let half = u_truncation(p, tol)?;
    let panels = (2.0 * half / PANEL_WIDTH).ceil() as usize;
    let gl = GaussLegendre::get(PANEL_ORDER);
    let ly = y.ln();
    let mut points = Vec::new();
    let mut ln_weighted = Vec::new();
    for (tau, w) in gl.composite(-half, half, panels) {
        let u = Complex64::new(U_ABSCISSA, tau);
        points.push(u);
        // du = i dτ
        ln_weighted.push(ln_u_factor(p, u) - (u + 1.0) * ly + (Complex64::i() * w).ln());
    }
    Ok(Nodes { points, ln_weighted })
}

fn t_nodes(p: &EnsembleParams, x: f64, radius: f64, m: usize) -> Nodes {
    let centre = 0.5 * (p.n as f64 - 1.0);
    let lx = x.ln();
    let mut points = Vec::with_capacity(m);
    let mut ln_weighted = Vec::with_capacity(m);
    for k in 0..m {
        // half-step offset keeps nodes off the real axis
        let th = 2.0 * std::f64::consts::PI * (k as f64 + 0.5) / m as f64;
        let e = Complex64::from_polar(radius, th);
        let t = centre + e;
        points.push(t);
        let dt = Complex64::i() * e * (2.0 * std::f64::consts::PI / m as f64);
        ln_weighted.push(ln_t_factor(p, t) + t * lx + dt.ln());
    }
    Nodes { points, ln_weighted }
}

/// Value and Σ|terms| of the discretized double integral.
fn double_sum(u: &Nodes, t: &Nodes) -> Result<(f64, f64)> {
    let su = u.ln_weighted.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    let st = t.ln_weighted.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    let eu: Vec<Complex64> = u.ln_weighted.iter().map(|z| (z - su).exp()).collect();
    let et: Vec<Complex64> = t.ln_weighted.iter().map(|z| (z - st).exp()).collect();
    let mut min_gap = f64::INFINITY;
    let mut acc = Complex64::new(0.0, 0.0);
    let mut mass = 0.0;
    for (ui, wu) in u.points.iter().zip(&eu) {
        let mut inner = Complex64::new(0.0, 0.0);
        let mut inner_mass = 0.0;
        for (ti, wt) in t.points.iter().zip(&et) {
            let d = ui - ti;
            min_gap = min_gap.min(d.norm());
            inner += wt / d;
            inner_mass += wt.norm() / d.norm();
        }
        acc += wu * inner;
        mass += wu.norm() * inner_mass;
    }
    if min_gap < COLLISION {
        return Err(Error::ContourCollision(min_gap));
    }
    // (2πi)^{-2} = −1/(4π²)
    let scale = (su + st).exp() / (4.0 * std::f64::consts::PI.powi(2));
    Ok((-(acc.re) * scale, mass * scale))
}

/// Radius (N−1)/2 + 1/4: the circle crosses the real axis at −1/4 and N − 3/4.
fn default_radius(p: &EnsembleParams) -> f64 {
    0.5 * (p.n as f64 - 1.0) + 0.25
}

/// Double-contour evaluation of K_N(x, y).
pub fn kernel_n_contour(params: &EnsembleParams, x: f64, y: f64) -> Result<KernelEval> {
    params.validate()?;
    if !(x > 0.0 && y > 0.0) {
        return Err(Error::Domain(format!("kernel needs x, y > 0, got ({x}, {y})")));
    }
    let tol = 1e-15;
    let u = u_nodes(params, y, tol)?;
    let radius = default_radius(params);
    let value = match circle_sum(params, x, &u, radius) {
        Err(Error::ContourCollision(_)) => circle_sum(params, x, &u, radius - 0.125)?,
        other => other?,
    };
    Ok(KernelEval { x, y, value, method: KernelMethod::DoubleContour })
}

fn circle_sum(params: &EnsembleParams, x: f64, u: &Nodes, radius: f64) -> Result<f64> {
    let mut m = 32;
    let (mut prev, _) = double_sum(u, &t_nodes(params, x, radius, m))?;
    // x^t is sharply peaked on the circle when x is small, so large m may be
    // needed; the floor is set by roundoff in the summed terms
    while m < 16384 {
        m *= 2;
        let (next, mass) = double_sum(u, &t_nodes(params, x, radius, m))?;
        if (next - prev).abs() <= 1e-14 * mass {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::NonConvergent("trapezoid rule on the t-circle did not converge".into()))
}
