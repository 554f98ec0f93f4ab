//! Large-argument experiments on K_hard: the density tail, the truncated
//! two-point tail and the bulk scaling. These report diagnostics; none of
//! them is an identity.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finite_kernel::{charpoly_normalized, kernel_n_contour};
use crate::hard_edge::kernel::{HardEdgeParams, HardKernel};
use crate::params::EnsembleParams;
use crate::quad::GaussLegendre;

/// sin(π/(r+1)) / (π x^{r/(r+1)}), the predicted large-x density.
pub fn tail_diagonal(params: &HardEdgeParams, x: f64) -> f64 {
    let r = params.r as f64;
    (PI / (r + 1.0)).sin() / (PI * x.powf(r / (r + 1.0)))
}

/// Oscillation phase φ(x) = (r+1) x^{1/(r+1)} sin(π/(r+1)).
pub fn phase(r: usize, x: f64) -> f64 {
    let q = (r + 1) as f64;
    q * x.powf(1.0 / q) * (PI / q).sin()
}

fn phase_inverse(r: usize, phi: f64) -> f64 {
    let q = (r + 1) as f64;
    (phi / (q * (PI / q).sin())).powf(q)
}

/// Phase-window average of `h` over φ ∈ [φ_0 − π/2, φ_0 + π/2], with nodes and values.
fn window_average<F>(r: usize, center: f64, order: usize, h: F) -> Result<(f64, Vec<f64>)>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let phi = phase(r, center);
    let rule = GaussLegendre::get(order);
    let nodes = rule.composite(phi - 0.5 * PI, phi + 0.5 * PI, 1);
    let vals: Vec<f64> = nodes.par_iter().map(|&(p, _)| h(phase_inverse(r, p))).collect::<Result<_>>()?;
    let mean = nodes.iter().zip(&vals).map(|((_, w), v)| w * v).sum::<f64>() / PI;
    Ok((mean, vals))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailWindow {
    pub center: f64,
    pub mean_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailReport {
    pub windows: Vec<TailWindow>,
    /// Mean of the window means.
    pub mean_ratio: f64,
    /// Largest |window mean − 1|.
    pub max_deviation: f64,
    /// Half the spread of the pointwise ratio K(x,x)/tail(x) over all nodes.
    pub oscillation_amplitude: f64,
}

/// K_hard(x, x)/tail_diagonal(x) averaged over one density oscillation
/// (π in φ) around `windows` centres spread evenly in φ over [x_lo, x_hi].
pub fn tail_experiment(kernel: &HardKernel, x_lo: f64, x_hi: f64, windows: usize) -> Result<TailReport> {
    if !(x_lo > 0.0 && x_hi > x_lo) || windows == 0 {
        return Err(Error::Domain(format!("tail window needs 0 < x_lo < x_hi, got [{x_lo}, {x_hi}]")));
    }
    let p = kernel.params();
    let r = p.r;
    let (a, b) = (phase(r, x_lo), phase(r, x_hi));
    let mut out = Vec::with_capacity(windows);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..windows {
        let phi = if windows == 1 { 0.5 * (a + b) } else { a + (b - a) * i as f64 / (windows - 1) as f64 };
        let center = phase_inverse(r, phi);
        let (mean, vals) = window_average(r, center, 24, |x| Ok(kernel.density(x)? / tail_diagonal(p, x)))?;
        for v in vals {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        out.push(TailWindow { center, mean_ratio: mean });
    }
    let mean_ratio = out.iter().map(|w| w.mean_ratio).sum::<f64>() / out.len() as f64;
    let max_deviation = out.iter().map(|w| (w.mean_ratio - 1.0).abs()).fold(0.0, f64::max);
    Ok(TailReport { windows: out, mean_ratio, max_deviation, oscillation_amplitude: 0.5 * (hi - lo) })
}

/// Leading non-oscillatory large-(x, y) form of the truncated two-point
/// function, known for r = 1 and r = 2 (ν = 0).
pub fn rho2_truncated_tail(r: usize, x: f64, y: f64) -> Result<f64> {
    if !(x > 0.0 && y > 0.0) || x == y {
        return Err(Error::Domain(format!("need distinct x, y > 0, got ({x}, {y})")));
    }
    let d2 = (x - y).powi(2);
    match r {
        1 => Ok(-(x + y) / (4.0 * PI * PI * (x * y).sqrt() * d2)),
        2 => Ok(-(1.0 + (y / x).cbrt() + (x / y).cbrt()) / (6.0 * PI * PI * d2)),
        _ => Err(Error::UnsupportedR(r)),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rho2Comparison {
    pub x: f64,
    pub y: f64,
    pub formula: f64,
    /// Phase-averaged (x−y)²ρ₂ᵀ over phase-averaged (x−y)²·formula.
    pub windowed_ratio: f64,
}

/// Compares −K(x,y)K(y,x) with [`rho2_truncated_tail`] after averaging over
/// one period of each point's phase. Both sides are multiplied by (x − y)²
/// first, which turns −K(x,y)K(y,x) into 𝓑(x,y)𝓑(y,x) and leaves nothing
/// singular on the diagonal of the averaging square.
pub fn rho2_tail_comparison(kernel: &HardKernel, x: f64, y: f64) -> Result<Rho2Comparison> {
    let r = kernel.params().r;
    let formula = rho2_truncated_tail(r, x, y)?;
    let rule = GaussLegendre::get(16);
    let (px, py) = (phase(r, x), phase(r, y));
    let xs = rule.composite(px - 0.5 * PI, px + 0.5 * PI, 1);
    let ys = rule.composite(py - 0.5 * PI, py + 0.5 * PI, 1);
    let pairs: Vec<(f64, f64, f64)> = xs
        .iter()
        .flat_map(|&(a, wa)| ys.iter().map(move |&(b, wb)| (phase_inverse(r, a), phase_inverse(r, b), wa * wb)))
        .collect();
    let terms: Vec<(f64, f64)> = pairs
        .par_iter()
        .map(|&(u, v, w)| {
            let num = kernel.cd_numerator(u, v)? * kernel.cd_numerator(v, u)?;
            let den = match rho2_truncated_tail(r, u, v) {
                Ok(f) => f * (u - v).powi(2),
                Err(_) => 0.0,
            };
            Ok((w * num, w * den))
        })
        .collect::<Result<_>>()?;
    let (num, den) = terms.iter().fold((0.0, 0.0), |(a, b), (u, v)| (a + u, b + v));
    Ok(Rho2Comparison { x, y, formula, windowed_ratio: num / den })
}

/// e^{3x^{1/3}cos(π/3)}: the gauge factor of the r = 2 bulk asymptotics.
pub fn gauge_h(x: f64) -> f64 {
    (3.0 * x.cbrt() * (PI / 3.0).cos()).exp()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BulkPoint {
    pub x: f64,
    pub y: f64,
    /// σ² K(X, Y) K(Y, X) with σ = π c^{r/(r+1)}/sin(π/(r+1)), X = c + σx.
    pub scaled_product: f64,
    /// (sin π(x−y) / π(x−y))².
    pub sine_kernel_sq: f64,
}

/// Gauge-free bulk-scaling product at centre `c`.
pub fn bulk_experiment(kernel: &HardKernel, c: f64, x: f64, y: f64) -> Result<BulkPoint> {
    let p = kernel.params();
    let q = (p.r + 1) as f64;
    let sigma = PI * c.powf(p.r as f64 / q) / (PI / q).sin();
    let (bx, by) = (c + sigma * x, c + sigma * y);
    let k = |a: f64, b: f64| -> Result<f64> {
        match kernel.kernel_cd(a, b) {
            Ok(v) => Ok(v),
            Err(Error::CoincidentPoints { .. }) | Err(Error::InvalidParams(_)) => kernel.kernel(a, b),
            Err(e) => Err(e),
        }
    };
    let scaled_product = sigma * sigma * k(bx, by)? * k(by, bx)?;
    let d = PI * (x - y);
    let sine_kernel_sq = if d.abs() < 1e-12 { 1.0 } else { (d.sin() / d).powi(2) };
    Ok(BulkPoint { x, y, scaled_product, sine_kernel_sq })
}

/// N^{−(s+1)} K_N(x/N^{s+1}, y/N^{s+1}) from the double-contour kernel.
pub fn scaled_finite_kernel(params: &EnsembleParams, x: f64, y: f64) -> Result<f64> {
    let scale = (params.n as f64).powi(params.s as i32 + 1);
    Ok(kernel_n_contour(params, x / scale, y / scale)?.value / scale)
}

/// Normalized characteristic polynomial at λ/N^{s+1} for each N in `ns`.
pub fn charpoly_hard_sequence(params: &EnsembleParams, lambda: f64, ns: &[usize]) -> Result<Vec<f64>> {
    ns.iter()
        .map(|&n| {
            let p = EnsembleParams { n, ..params.clone() };
            charpoly_normalized(&p, lambda / (n as f64).powi(p.s as i32 + 1))
        })
        .collect()
}
