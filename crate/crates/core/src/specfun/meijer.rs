//! Meijer G-functions by numerical Mellin–Barnes integration.
//!
//! Convention (used throughout the crate):
//!
//! ```text
//! G^{m,n}_{p,q}(x | a; b) = 1/(2πi) ∫ Π_{j≤m} Γ(b_j - s) Π_{j≤n} Γ(1 - a_j + s)
//!                           / ( Π_{j>m} Γ(1 - b_j + s) Π_{j>n} Γ(a_j - s) ) · x^s ds
//! ```
//!
//! The poles of Γ(b_j - s) lie to the right of the contour and those of
//! Γ(1 - a_j + s) to the left. Many references write the mirrored form with
//! Γ(b_j + s) x^{-s}; values agree but parameter conventions for derived
//! quantities such as the Mellin power (x d/dx)^k do not.
//!
//! When δ = m + n - (p + q)/2 > 0 the integrand decays like e^{-πδ|t|} on a
//! vertical line. Otherwise (for example G^{1,0}_{0,r+1}) the line integral
//! does not converge and a wedge of two rays opening to the right is used;
//! it is a deformation of the same contour and encloses the same poles.

use std::f64::consts::PI;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad::GaussLegendre;
use crate::specfun::gamma::ln_gamma_unchecked;

/// Parameters (m, n, p, q, a, b) of a Meijer G-function.
#[derive(Debug, Clone, PartialEq)]
pub struct MeijerSpec {
    pub m: usize,
    pub n: usize,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl MeijerSpec {
    pub fn new(m: usize, n: usize, a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if m > b.len() || n > a.len() {
            return Err(Error::InvalidParams(format!(
                "need m ≤ q and n ≤ p, got m={m}, n={n}, p={}, q={}",
                a.len(),
                b.len()
            )));
        }
        let spec = Self { m, n, a, b };
        let (lo, hi) = spec.pole_gap();
        if lo >= hi {
            return Err(Error::ContourViolation(format!(
                "pole sets overlap: left poles reach {lo}, right poles start at {hi}"
            )));
        }
        Ok(spec)
    }

    pub fn p(&self) -> usize {
        self.a.len()
    }

    pub fn q(&self) -> usize {
        self.b.len()
    }

    /// m + n - (p + q)/2; a vertical contour converges iff this is positive.
    pub fn delta(&self) -> f64 {
        (self.m + self.n) as f64 - 0.5 * (self.p() + self.q()) as f64
    }

    /// Open interval of admissible abscissae: (max_{k≤n} a_k - 1, min_{j≤m} b_j).
    pub fn pole_gap(&self) -> (f64, f64) {
        let lo = self.a[..self.n].iter().map(|a| a - 1.0).fold(f64::NEG_INFINITY, f64::max);
        let hi = self.b[..self.m].iter().copied().fold(f64::INFINITY, f64::min);
        (lo, hi)
    }

    /// ln of the gamma ratio in the integrand (without x^s).
    pub fn ln_integrand(&self, s: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, b) in self.b.iter().enumerate() {
            if j < self.m {
                acc += ln_gamma_unchecked(b - s);
            } else {
                acc -= ln_gamma_unchecked(1.0 - b + s);
            }
        }
        for (j, a) in self.a.iter().enumerate() {
            if j < self.n {
                acc += ln_gamma_unchecked(1.0 - a + s);
            } else {
                acc -= ln_gamma_unchecked(a - s);
            }
        }
        acc
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QuadRule {
    GaussLegendrePanels,
    Trapezoid,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ContourPath {
    /// Re s = c, |Im s| ≤ T.
    Vertical,
    /// Rays s = c + ρ e^{±iθ}, 0 ≤ ρ ≤ T, opening to the right.
    Wedge { angle: f64 },
}

/// Discretized Mellin–Barnes contour.
#[derive(Debug, Clone, PartialEq)]
pub struct ContourSpec {
    pub abscissa: f64,
    pub half_height: f64,
    /// Total node count along one branch (the whole line, or one ray).
    pub nodes: usize,
    pub rule: QuadRule,
    pub tol: f64,
    pub path: ContourPath,
}

const PANEL_ORDER: usize = 20;
const DEFAULT_MAX_POWER: u32 = 4;

impl ContourSpec {
    /// Contour for a default argument range: [1e-8, 1e8] on a vertical line,
    /// [1e-6, 1e2] on a wedge (where the rays see x^{Re s} growth).
    pub fn auto(spec: &MeijerSpec, tol: f64) -> Result<Self> {
        match default_path(spec)? {
            ContourPath::Vertical => Self::auto_for_range(spec, 1e-8, 1e8, tol),
            ContourPath::Wedge { .. } => Self::auto_for_range(spec, 1e-6, 1e2, tol),
        }
    }

    /// Adaptive contour: abscissa at the middle of the pole gap, truncation
    /// where the integrand has fallen below tol·1e-2 of its peak, and panel
    /// width halved until successive refinements agree at probe arguments.
    pub fn auto_for_range(spec: &MeijerSpec, x_lo: f64, x_hi: f64, tol: f64) -> Result<Self> {
        let (lo, hi) = spec.pole_gap();
        let c = match (lo.is_finite(), hi.is_finite()) {
            (true, true) => 0.5 * (lo + hi),
            (false, true) => hi - 0.5,
            (true, false) => lo + 0.5,
            (false, false) => 0.0,
        };
        Self::auto_at(spec, c, x_lo, x_hi, tol, DEFAULT_MAX_POWER)
    }

    /// Adaptive contour at a prescribed abscissa.
    pub fn auto_at(
        spec: &MeijerSpec,
        c: f64,
        x_lo: f64,
        x_hi: f64,
        tol: f64,
        max_power: u32,
    ) -> Result<Self> {
        let path = default_path(spec)?;
        let half_height = truncation(spec, c, path, x_hi, tol, max_power)?;
        let mut contour = ContourSpec {
            abscissa: c,
            half_height,
            nodes: 0,
            rule: QuadRule::GaussLegendrePanels,
            tol,
            path,
        };
        let span = match path {
            ContourPath::Vertical => 2.0 * half_height,
            ContourPath::Wedge { .. } => half_height,
        };
        let probes = probe_logs(x_lo, x_hi);
        let mut panels = span.ceil().max(1.0) as usize;
        contour.nodes = panels * PANEL_ORDER;
        let mut coarse = NodeSet::build(spec, &contour)?;
        for _ in 0..8 {
            panels *= 2;
            contour.nodes = panels * PANEL_ORDER;
            let fine = NodeSet::build(spec, &contour)?;
            let agree = probes.iter().all(|&lx| {
                [0, max_power].iter().all(|&k| {
                    let (a, ma) = coarse.sum(lx, k);
                    let (b, _) = fine.sum(lx, k);
                    (a - b).norm() <= tol * ma.max(f64::MIN_POSITIVE)
                })
            });
            if agree {
                // the coarse rule already meets the tolerance
                panels /= 2;
                contour.nodes = panels * PANEL_ORDER;
                return Ok(contour);
            }
            coarse = fine;
        }
        Err(Error::NonConvergent(format!(
            "contour panels did not converge at c = {c} for x in [{x_lo}, {x_hi}]"
        )))
    }

    /// Checks that the contour separates the pole sets of `spec`.
    pub fn validate(&self, spec: &MeijerSpec) -> Result<()> {
        let (lo, hi) = spec.pole_gap();
        let c = self.abscissa;
        if !(c > lo && c < hi) {
            return Err(Error::ContourViolation(format!(
                "abscissa {c} outside the pole gap ({lo}, {hi})"
            )));
        }
        if !(self.half_height > 0.0) || self.nodes == 0 || !(self.tol > 0.0) {
            return Err(Error::ContourViolation(
                "contour needs positive half-height, node count and tolerance".into(),
            ));
        }
        if let ContourPath::Wedge { angle } = self.path {
            if !(angle > 0.0 && angle < PI / 2.0) {
                return Err(Error::ContourViolation(format!("wedge angle {angle} not in (0, π/2)")));
            }
            if spec.q() <= spec.p() {
                return Err(Error::ContourViolation(
                    "wedge contour needs q > p for decay along the rays".into(),
                ));
            }
        }
        Ok(())
    }
}

fn default_path(spec: &MeijerSpec) -> Result<ContourPath> {
    if spec.delta() > 0.0 {
        Ok(ContourPath::Vertical)
    } else if spec.q() > spec.p() {
        Ok(ContourPath::Wedge { angle: PI / 4.0 })
    } else {
        Err(Error::ContourViolation(format!(
            "no convergent contour for δ = {} with p = {} ≥ q = {}",
            spec.delta(),
            spec.p(),
            spec.q()
        )))
    }
}

fn probe_logs(x_lo: f64, x_hi: f64) -> Vec<f64> {
    let (a, b) = (x_lo.ln(), x_hi.ln());
    (0..5).map(|i| a + (b - a) * i as f64 / 4.0).collect()
}

fn point_on(path: ContourPath, c: f64, t: f64) -> Complex64 {
    match path {
        ContourPath::Vertical => Complex64::new(c, t),
        ContourPath::Wedge { angle } => c + t * Complex64::from_polar(1.0, angle),
    }
}

/// Height (or ray length) beyond which the integrand is negligible.
fn truncation(
    spec: &MeijerSpec,
    c: f64,
    path: ContourPath,
    x_hi: f64,
    tol: f64,
    max_power: u32,
) -> Result<f64> {
    let growth = match path {
        ContourPath::Vertical => 0.0,
        ContourPath::Wedge { angle } => angle.cos() * x_hi.ln().max(0.0),
    };
    let ln_mag = |t: f64| {
        let s = point_on(path, c, t);
        spec.ln_integrand(s).re + growth * t + max_power as f64 * (1.0 + s.norm()).ln()
    };
    let threshold = (tol * 1e-2).ln();
    let mut peak = ln_mag(0.0);
    let mut prev = peak;
    let mut t = 0.0;
    let step = 0.5;
    while t < 5000.0 {
        t += step;
        let v = ln_mag(t);
        if v.is_nan() {
            return Err(Error::NonConvergent(format!("integrand undefined at height {t}")));
        }
        peak = peak.max(v);
        if t >= 2.0 && v < prev && v - peak < threshold {
            return Ok(t);
        }
        prev = v;
    }
    Err(Error::NonConvergent(format!(
        "integrand tail above tolerance at truncation height {t} (c = {c})"
    )))
}

/// Quadrature nodes s_i and weights w_i·F(s_i)/(2πi), scaled by e^{-scale}.
#[derive(Debug, Clone)]
pub struct NodeSet {
    c: f64,
    scale: f64,
    s: Vec<Complex64>,
    wf: Vec<Complex64>,
    tol: f64,
    /// ∫|F| on the contour in log form (x-independent part of the error scale).
    ln_mass: f64,
}

impl NodeSet {
    pub fn build(spec: &MeijerSpec, contour: &ContourSpec) -> Result<Self> {
        contour.validate(spec)?;
        let c = contour.abscissa;
        let scale = spec.ln_integrand(Complex64::new(c, 0.0)).re;
        let scale = if scale.is_finite() { scale } else { 0.0 };
        let mut s = Vec::with_capacity(2 * contour.nodes);
        let mut wf = Vec::with_capacity(2 * contour.nodes);
        let mut push = |z: Complex64, w: Complex64| {
            let f = (spec.ln_integrand(z) - scale).exp();
            s.push(z);
            wf.push(w * f);
        };
        let inv2pi = 1.0 / (2.0 * PI);
        let t_max = contour.half_height;
        match contour.path {
            ContourPath::Vertical => {
                for (t, w) in branch_rule(contour, -t_max, t_max) {
                    // ds/(2πi) = dt/(2π)
                    push(Complex64::new(c, t), Complex64::new(w * inv2pi, 0.0));
                }
            }
            ContourPath::Wedge { angle } => {
                let up = Complex64::from_polar(1.0, angle);
                let down = up.conj();
                let i2pi = Complex64::new(0.0, 2.0 * PI);
                for (rho, w) in branch_rule(contour, 0.0, t_max) {
                    push(c + rho * up, w * up / i2pi);
                    push(c + rho * down, -w * down / i2pi);
                }
            }
        }
        let mass: f64 = wf.iter().map(|v| v.norm()).sum();
        Ok(Self { c, scale, s, wf, tol: contour.tol, ln_mass: mass.ln() + scale })
    }

    pub fn abscissa(&self) -> f64 {
        self.c
    }

    /// log of the error scale ∫|F x^s| at argument ln x (vertical paths).
    pub fn ln_magnitude(&self, lnx: f64) -> f64 {
        self.ln_mass + self.c * lnx
    }

    /// Returns (Σ w F s^k x^s, Σ |w F s^k x^s|).
    fn sum(&self, lnx: f64, k: u32) -> (Complex64, f64) {
        self.sum_with(lnx, |s| if k == 0 { Complex64::new(1.0, 0.0) } else { s.powu(k) })
    }

    fn sum_with<W: Fn(Complex64) -> Complex64>(&self, lnx: f64, weight: W) -> (Complex64, f64) {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut mass = 0.0;
        for (s, wf) in self.s.iter().zip(&self.wf) {
            let d = (s - self.c) * lnx;
            let e = Complex64::from_polar(d.re.exp(), d.im);
            let v = wf * e * weight(*s);
            acc += v;
            mass += v.norm();
        }
        let pre = (self.scale + self.c * lnx).exp();
        (acc * pre, mass * pre)
    }

    fn real_result(&self, z: Complex64, mass: f64) -> Result<f64> {
        let guard = 1e3 * self.tol * mass.max(f64::MIN_POSITIVE);
        if z.im.abs() > guard {
            return Err(Error::InternalImaginaryResidue { residue: z.im, guard });
        }
        Ok(z.re)
    }

    pub fn eval(&self, x: f64, k: u32) -> Result<f64> {
        let (z, m) = self.sum(x.ln(), k);
        self.real_result(z, m)
    }

    /// ∫ F(s) W(s) x^s ds/(2πi) with an extra analytic weight W.
    pub fn eval_weighted<W: Fn(Complex64) -> Complex64>(&self, x: f64, weight: W) -> Result<f64> {
        let (z, m) = self.sum_with(x.ln(), weight);
        self.real_result(z, m)
    }
}

fn branch_rule(contour: &ContourSpec, a: f64, b: f64) -> Vec<(f64, f64)> {
    match contour.rule {
        QuadRule::GaussLegendrePanels => {
            let panels = (contour.nodes / PANEL_ORDER).max(1);
            GaussLegendre::get(PANEL_ORDER).composite(a, b, panels)
        }
        QuadRule::Trapezoid => {
            let n = contour.nodes.max(2);
            let h = (b - a) / (n - 1) as f64;
            (0..n)
                .map(|i| {
                    let w = if i == 0 || i == n - 1 { 0.5 * h } else { h };
                    (a + i as f64 * h, w)
                })
                .collect()
        }
    }
}

fn check_x(x: f64) -> Result<()> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Domain(format!("Meijer G needs x > 0, got {x}")));
    }
    Ok(())
}

/// G^{m,n}_{p,q}(x) along the given contour.
pub fn meijer_g(spec: &MeijerSpec, contour: &ContourSpec, x: f64) -> Result<f64> {
    meijer_g_mellin_power(spec, contour, x, 0)
}

/// (x d/dx)^k G(x): the integrand picks up a factor s^k.
pub fn meijer_g_mellin_power(
    spec: &MeijerSpec,
    contour: &ContourSpec,
    x: f64,
    k: u32,
) -> Result<f64> {
    check_x(x)?;
    NodeSet::build(spec, contour)?.eval(x, k)
}

/// Cached evaluator for repeated use of one G-function.
///
/// With `MellinBarnes::adaptive` the abscissa is chosen per argument from a
/// ladder of admissible contours by minimizing ∫|F(s) x^s| |ds|, the scale
/// of the rounding error. This keeps relative accuracy where the function
/// is exponentially small compared with the integrand (large x for
/// functions that decay there).
#[derive(Debug)]
pub struct MellinBarnes {
    spec: MeijerSpec,
    tol: f64,
    max_power: u32,
    x_range: (f64, f64),
    fixed: Option<Arc<NodeSet>>,
    ladder: Mutex<Ladder>,
}

#[derive(Debug, Default)]
struct Ladder {
    rungs: Vec<Arc<NodeSet>>,
    closed: bool,
}

const LADDER_CAP: usize = 400;

impl MellinBarnes {
    /// Single fixed contour.
    pub fn with_contour(spec: MeijerSpec, contour: &ContourSpec) -> Result<Self> {
        let set = Arc::new(NodeSet::build(&spec, contour)?);
        Ok(Self {
            tol: contour.tol,
            spec,
            max_power: DEFAULT_MAX_POWER,
            x_range: (0.0, f64::INFINITY),
            fixed: Some(set),
            ladder: Mutex::new(Ladder::default()),
        })
    }

    /// Abscissa chosen per argument; vertical contours only.
    pub fn adaptive(spec: MeijerSpec, tol: f64, x_lo: f64, x_hi: f64) -> Result<Self> {
        if spec.delta() <= 0.0 {
            return Err(Error::ContourViolation(
                "adaptive abscissa needs a convergent vertical contour".into(),
            ));
        }
        Ok(Self {
            spec,
            tol,
            max_power: DEFAULT_MAX_POWER,
            x_range: (x_lo, x_hi),
            fixed: None,
            ladder: Mutex::new(Ladder::default()),
        })
    }

    pub fn spec(&self) -> &MeijerSpec {
        &self.spec
    }

    fn ladder_point(&self, i: usize) -> Option<f64> {
        let (lo, hi) = self.spec.pole_gap();
        // unit steps near the edge of the gap, then geometric
        let offset = if i < 8 { 0.5 + i as f64 } else { 7.5 * 1.15f64.powi(i as i32 - 7) };
        if !hi.is_finite() {
            return Some(lo + offset);
        }
        if lo.is_finite() && hi - lo <= 1.0 {
            return (i == 0).then_some(0.5 * (lo + hi));
        }
        let c = hi - offset;
        if !lo.is_finite() || c >= lo + 0.5 {
            return Some(c);
        }
        // last rung sits half a unit inside the gap
        let prev = if i == 0 { f64::INFINITY } else { hi - if i - 1 < 8 { 0.5 + (i - 1) as f64 } else { 7.5 * 1.15f64.powi(i as i32 - 8) } };
        (prev > lo + 0.5 + 1e-9).then_some(lo + 0.5)
    }

    fn contour_at(&self, i: usize) -> Result<Option<Arc<NodeSet>>> {
        // built in order under the lock; later callers reuse the cached sets
        let mut ladder = self.ladder.lock().expect("ladder lock");
        while ladder.rungs.len() <= i {
            let j = ladder.rungs.len();
            if ladder.closed || j >= LADDER_CAP {
                return Ok(None);
            }
            let Some(c) = self.ladder_point(j) else {
                ladder.closed = true;
                return Ok(None);
            };
            let contour = match ContourSpec::auto_at(
                &self.spec,
                c,
                self.x_range.0,
                self.x_range.1,
                self.tol,
                self.max_power,
            ) {
                Ok(contour) => contour,
                // a rung that cannot be discretized ends the ladder
                Err(Error::NonConvergent(_)) if j > 0 => {
                    ladder.closed = true;
                    return Ok(None);
                }
                Err(e) => return Err(e),
            };
            ladder.rungs.push(Arc::new(NodeSet::build(&self.spec, &contour)?));
        }
        Ok(Some(ladder.rungs[i].clone()))
    }

    fn select(&self, x: f64) -> Result<Arc<NodeSet>> {
        if let Some(set) = &self.fixed {
            return Ok(set.clone());
        }
        let lnx = x.ln();
        let mut best = self.contour_at(0)?.expect("ladder has a first point");
        let mut best_mag = best.ln_magnitude(lnx);
        let mut i = 1;
        while let Some(set) = self.contour_at(i)? {
            let mag = set.ln_magnitude(lnx);
            if mag < best_mag {
                best = set;
                best_mag = mag;
                i += 1;
            } else {
                break;
            }
        }
        Ok(best)
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        check_x(x)?;
        self.select(x)?.eval(x, 0)
    }

    /// (x d/dx)^k G(x).
    pub fn eval_delta(&self, x: f64, k: u32) -> Result<f64> {
        check_x(x)?;
        self.select(x)?.eval(x, k)
    }

    /// ∫ F(s) W(s) x^s ds/(2πi) on the first (rightmost or fixed) contour.
    pub fn eval_weighted<W: Fn(Complex64) -> Complex64>(&self, x: f64, weight: W) -> Result<f64> {
        check_x(x)?;
        let set = match &self.fixed {
            Some(s) => s.clone(),
            None => self.contour_at(0)?.expect("ladder has a first point"),
        };
        set.eval_weighted(x, weight)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::gamma::gamma;
    use crate::specfun::hyper::{pfq, HypSeriesParams};

    /// Residue series for m = 1 (poles of Γ(b_1 - s) only), the independent oracle.
    fn residue_series_m1(spec: &MeijerSpec, x: f64) -> f64 {
        assert_eq!(spec.m, 1);
        let b1 = spec.b[0];
        let mut pre = x.powf(b1);
        for a in &spec.a[..spec.n] {
            pre *= gamma(1.0 - a + b1).unwrap();
        }
        for b in &spec.b[1..] {
            pre /= gamma(1.0 - b + b1).unwrap();
        }
        for a in &spec.a[spec.n..] {
            pre /= gamma(a - b1).unwrap();
        }
        let upper = spec.a.iter().map(|a| 1.0 + b1 - a).collect();
        let lower = spec.b[1..].iter().map(|b| 1.0 + b1 - b).collect();
        let sign = if (spec.p() as i64 - 1 - spec.n as i64).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        pre * pfq(&HypSeriesParams::new(upper, lower), sign * x).unwrap()
    }

    fn g(m: usize, n: usize, a: &[f64], b: &[f64], x: f64) -> f64 {
        let spec = MeijerSpec::new(m, n, a.to_vec(), b.to_vec()).unwrap();
        let c = ContourSpec::auto(&spec, 1e-13).unwrap();
        meijer_g(&spec, &c, x).unwrap()
    }

    #[test]
    fn exponential_case() {
        let v = g(1, 0, &[], &[0.0], 1.0);
        assert!((v - (-1f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn bessel_case_on_wedge() {
        let spec = MeijerSpec::new(1, 0, vec![], vec![0.0, 0.0]).unwrap();
        assert!(spec.delta() <= 0.0);
        let c = ContourSpec::auto(&spec, 1e-13).unwrap();
        assert!(matches!(c.path, ContourPath::Wedge { .. }));
        let v = meijer_g(&spec, &c, 1.0).unwrap();
        assert!((v - 0.223_890_779_141_235_7).abs() < 1e-12);
    }

    #[test]
    fn g10_03_against_residue_series() {
        let spec = MeijerSpec::new(1, 0, vec![], vec![0.0, 0.0, 0.0]).unwrap();
        for x in [1.0, 5.0] {
            let v = g(1, 0, &[], &[0.0, 0.0, 0.0], x);
            let o = residue_series_m1(&spec, x);
            assert!((v - o).abs() < 1e-11, "x={x}: {v} vs {o}");
        }
    }

    #[test]
    fn cancelling_gamma_pair() {
        // Γ(-s)Γ(-s)/Γ(-s) = Γ(-s), so G^{2,0}_{1,2}(x | 0; 0, 0) = e^{-x}
        let v = g(2, 0, &[0.0], &[0.0, 0.0], 0.7);
        assert!((v - (-0.7f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn residue_oracle_for_general_m1() {
        // G^{1,1}_{1,2}(x | 0.3 ; 0.2, -0.4)
        let spec = MeijerSpec::new(1, 1, vec![0.3], vec![0.2, -0.4]).unwrap();
        for x in [0.2, 0.6] {
            let v = g(1, 1, &[0.3], &[0.2, -0.4], x);
            let o = residue_series_m1(&spec, x);
            assert!((v - o).abs() < 1e-11 * o.abs().max(1.0), "x={x}: {v} vs {o}");
        }
    }

    #[test]
    fn mellin_power_of_exponential() {
        let spec = MeijerSpec::new(1, 0, vec![], vec![0.0]).unwrap();
        let c = ContourSpec::auto(&spec, 1e-13).unwrap();
        let d0 = meijer_g_mellin_power(&spec, &c, 1.0, 0).unwrap();
        assert_eq!(d0, meijer_g(&spec, &c, 1.0).unwrap());
        let d1 = meijer_g_mellin_power(&spec, &c, 1.0, 1).unwrap();
        assert!((d1 + (-1f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn mellin_power_two_against_series() {
        let spec = MeijerSpec::new(1, 0, vec![], vec![0.0, 0.0, 0.0]).unwrap();
        let c = ContourSpec::auto(&spec, 1e-13).unwrap();
        let v = meijer_g_mellin_power(&spec, &c, 3.0, 2).unwrap();
        // term-by-term Δ² of Σ (-x)^k/(k!)^3
        let mut o = 0.0;
        let mut t = 1.0;
        for k in 0..80 {
            if k > 0 {
                t *= -3.0 / (k as f64).powi(3);
            }
            o += (k * k) as f64 * t;
        }
        assert!((v - o).abs() < 1e-11, "{v} vs {o}");
    }

    #[test]
    fn contour_independence() {
        // G^{2,1}_{1,2}: gap (a-1, min b) = (-1.5, 0)
        let spec = MeijerSpec::new(2, 1, vec![-0.5], vec![0.0, 0.5]).unwrap();
        let c1 = ContourSpec::auto(&spec, 1e-12).unwrap();
        let c2 = ContourSpec::auto_at(&spec, -1.2, 1e-3, 1e3, 1e-12, 2).unwrap();
        let mut c3 = c1.clone();
        c3.half_height *= 1.5;
        c3.nodes *= 2;
        for x in [0.05, 0.8, 3.0, 20.0] {
            let a = meijer_g(&spec, &c1, x).unwrap();
            let b = meijer_g(&spec, &c2, x).unwrap();
            let d = meijer_g(&spec, &c3, x).unwrap();
            assert!((a - b).abs() < 1e-11 && (a - d).abs() < 1e-11, "x={x}: {a} {b} {d}");
        }
    }

    #[test]
    fn violations() {
        assert!(matches!(
            MeijerSpec::new(1, 1, vec![1.5], vec![0.0]),
            Err(Error::ContourViolation(_))
        ));
        let spec = MeijerSpec::new(1, 0, vec![], vec![0.0]).unwrap();
        let mut c = ContourSpec::auto(&spec, 1e-12).unwrap();
        c.abscissa = 0.5;
        assert!(matches!(meijer_g(&spec, &c, 1.0), Err(Error::ContourViolation(_))));
        assert!(matches!(meijer_g(&spec, &c, -1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn truncated_contour_trips_imaginary_guard() {
        // an asymmetric node set leaves an imaginary part behind
        let spec = MeijerSpec::new(1, 0, vec![], vec![0.0]).unwrap();
        let c = ContourSpec::auto(&spec, 1e-12).unwrap();
        let mut set = NodeSet::build(&spec, &c).unwrap();
        let half = set.s.len() / 2;
        set.s.truncate(half + 3);
        set.wf.truncate(half + 3);
        assert!(matches!(set.eval(1.0, 0), Err(Error::InternalImaginaryResidue { .. })));
    }

    #[test]
    fn adaptive_abscissa_keeps_relative_accuracy_in_the_tail() {
        // G^{1,0}_{0,1} = e^{-x}; at x = 40 the fixed line loses everything
        let spec = MeijerSpec::new(1, 0, vec![], vec![0.0]).unwrap();
        let mb = MellinBarnes::adaptive(spec, 1e-13, 1e-3, 1e3).unwrap();
        for x in [0.01, 1.0, 10.0, 40.0] {
            let v = mb.eval(x).unwrap();
            let e = (-x).exp();
            assert!(((v - e) / e).abs() < 1e-9, "x={x}: {v} vs {e}");
        }
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(24))]
        #[test]
        fn reduction_to_0fr(r in 1usize..4, nu_seed in 0u64..27, x in 0.05f64..6.0) {
            let nu: Vec<f64> = (0..r).map(|j| ((nu_seed / 3u64.pow(j as u32)) % 3) as f64).collect();
            let mut b = vec![0.0];
            b.extend(nu.iter().map(|v| -v));
            let spec = MeijerSpec::new(1, 0, vec![], b).unwrap();
            let c = ContourSpec::auto(&spec, 1e-13).unwrap();
            let v = meijer_g(&spec, &c, x).unwrap();
            let norm: f64 = nu.iter().map(|v| gamma(1.0 + v).unwrap()).product();
            let lower: Vec<f64> = nu.iter().map(|v| 1.0 + v).collect();
            let o = pfq(&HypSeriesParams::new(vec![], lower), -x).unwrap();
            proptest::prop_assert!((v * norm - o).abs() < 1e-10 * o.abs().max(1.0));
        }

        #[test]
        fn mellin_power_one_is_finite_difference(x in 0.2f64..8.0) {
            let spec = MeijerSpec::new(2, 0, vec![], vec![0.0, 0.5, -0.3]).unwrap();
            let c = ContourSpec::auto(&spec, 1e-13).unwrap();
            let h = 1e-5 * x;
            let gp = meijer_g(&spec, &c, x + h).unwrap();
            let gm = meijer_g(&spec, &c, x - h).unwrap();
            let fd = x * (gp - gm) / (2.0 * h);
            let d = meijer_g_mellin_power(&spec, &c, x, 1).unwrap();
            proptest::prop_assert!((fd - d).abs() <= 1e-6 * d.abs().max(1e-3));
        }
    }
}
