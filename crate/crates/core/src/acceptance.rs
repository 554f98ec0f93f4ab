//! Registry of end-to-end checks.
//!
//! Each check reports one computed figure against a reference and a
//! tolerance, plus the wall time against its budget. A check passes only if
//! both are met. Monte Carlo checks are marked statistical; their tolerance
//! is multiplied by [`CheckContext::tol_scale`].

use std::f64::consts::PI;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::finite_kernel::{charpoly_exact, kernel_n, kernel_n_contour, BiorthSystem};
use crate::freeprob::{density_rr_closed, density_s0_parametric, fuss_catalan_recurrence_check, global_density};
use crate::hard_edge::{
    bessel_density, charpoly_hard_limit, charpoly_hard_sequence, scaled_finite_kernel, tail_experiment,
    HardEdgeParams, HardKernel,
};
use crate::params::EnsembleParams;
use crate::quad::{self, GaussLegendre};
use crate::sampler::{
    empirical_cdf, mc_charpoly, rescale, sample_cauchy_triple, sample_spectra, sup_distance, RngStream, Scaling,
};

pub const DEFAULT_SEED: u64 = 20_251_015;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Gate {
    /// Counts toward the exit status.
    Hard,
    /// Reported only.
    Soft,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CheckContext {
    pub seed: u64,
    /// Multiplier applied to the tolerance of statistical checks.
    pub tol_scale: f64,
}

impl Default for CheckContext {
    fn default() -> Self {
        Self { seed: DEFAULT_SEED, tol_scale: 1.0 }
    }
}

impl CheckContext {
    fn rng(&self, id: u8) -> RngStream {
        RngStream::new(self.seed, id as u64)
    }
}

/// What a check body returns. The headline figure is judged as
/// |computed − reference| ≤ tolerance; `parts_ok` carries any further
/// conditions the check folds in (monotonicity, exact sub-checks).
#[derive(Debug, Clone, PartialEq)]
pub struct CheckValue {
    pub computed: f64,
    pub reference: f64,
    pub tolerance: f64,
    pub parts_ok: bool,
    pub detail: String,
}

impl CheckValue {
    fn within(computed: f64, reference: f64, tolerance: f64, detail: String) -> Self {
        Self { computed, reference, tolerance, parts_ok: true, detail }
    }
}

pub struct Check {
    pub id: u8,
    pub name: &'static str,
    pub runtime_limit_s: f64,
    pub statistical: bool,
    pub gate: Gate,
    run: fn(&CheckContext) -> Result<CheckValue>,
}

impl std::fmt::Debug for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Check").field("id", &self.id).field("name", &self.name).finish()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub id: u8,
    pub name: String,
    pub gate: Gate,
    pub computed: f64,
    pub reference: f64,
    pub tolerance: f64,
    pub value_passed: bool,
    pub elapsed_s: f64,
    pub runtime_limit_s: f64,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    /// One summary line.
    pub fn line(&self) -> String {
        let tag = match (self.passed, self.gate) {
            (true, _) => "PASS",
            (false, Gate::Hard) => "FAIL",
            (false, Gate::Soft) => "SOFT-FAIL",
        };
        format!(
            "[{tag}] {:>2} {:<28} computed={:.4e} reference={:.4e} tol={:.1e} time={:.1}s/{:.0}s  {}",
            self.id,
            self.name,
            self.computed,
            self.reference,
            self.tolerance,
            self.elapsed_s,
            self.runtime_limit_s,
            self.detail
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub context: CheckContext,
    pub wall_time_s: f64,
    pub checks: Vec<CheckOutcome>,
}

impl RunReport {
    /// True when every hard check passed.
    pub fn all_hard_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed || c.gate == Gate::Soft)
    }
}

pub fn registry() -> Vec<Check> {
    vec![
        Check { id: 1, name: "marchenko_pastur", runtime_limit_s: 1.0, statistical: false, gate: Gate::Hard, run: marchenko_pastur },
        Check { id: 2, name: "closed_form_densities", runtime_limit_s: 5.0, statistical: false, gate: Gate::Hard, run: closed_forms },
        Check { id: 3, name: "fuss_catalan", runtime_limit_s: 120.0, statistical: true, gate: Gate::Hard, run: fuss_catalan },
        Check { id: 4, name: "r1s1_arcsine", runtime_limit_s: 60.0, statistical: true, gate: Gate::Hard, run: arcsine },
        Check { id: 5, name: "charpoly_mc", runtime_limit_s: 180.0, statistical: true, gate: Gate::Hard, run: charpoly_mc },
        Check { id: 6, name: "biorthogonality", runtime_limit_s: 120.0, statistical: false, gate: Gate::Hard, run: biorthogonality },
        Check { id: 7, name: "kernel_identity", runtime_limit_s: 60.0, statistical: false, gate: Gate::Hard, run: kernel_identity },
        Check { id: 8, name: "trace_and_projection", runtime_limit_s: 60.0, statistical: false, gate: Gate::Hard, run: trace_projection },
        Check { id: 9, name: "bessel_reduction", runtime_limit_s: 30.0, statistical: false, gate: Gate::Hard, run: bessel_reduction },
        Check { id: 10, name: "cd_equivalence", runtime_limit_s: 60.0, statistical: false, gate: Gate::Hard, run: cd_equivalence },
        Check { id: 11, name: "hard_edge_convergence", runtime_limit_s: 600.0, statistical: false, gate: Gate::Hard, run: hard_edge_convergence },
        Check { id: 12, name: "charpoly_hard_limit", runtime_limit_s: 30.0, statistical: false, gate: Gate::Hard, run: charpoly_limit },
        Check { id: 13, name: "density_tail", runtime_limit_s: 300.0, statistical: false, gate: Gate::Soft, run: density_tail },
        Check { id: 14, name: "cauchy_hard_edge", runtime_limit_s: 600.0, statistical: true, gate: Gate::Hard, run: cauchy_bridge },
    ]
}

/// Runs one check; errors become failures with the message as detail.
pub fn run_check(check: &Check, ctx: &CheckContext) -> CheckOutcome {
    let t0 = Instant::now();
    let value = (check.run)(ctx);
    let elapsed_s = t0.elapsed().as_secs_f64();
    let (computed, reference, mut tolerance, parts_ok, detail) = match value {
        Ok(v) => (v.computed, v.reference, v.tolerance, v.parts_ok, v.detail),
        Err(e) => (f64::NAN, f64::NAN, f64::NAN, false, format!("error: {e}")),
    };
    if check.statistical {
        tolerance *= ctx.tol_scale;
    }
    let value_passed = parts_ok && (computed - reference).abs() <= tolerance;
    CheckOutcome {
        id: check.id,
        name: check.name.to_string(),
        gate: check.gate,
        computed,
        reference,
        tolerance,
        value_passed,
        elapsed_s,
        runtime_limit_s: check.runtime_limit_s,
        passed: value_passed && elapsed_s <= check.runtime_limit_s,
        detail,
    }
}

/// Runs the checks whose names are in `only` (all when empty), in id order.
pub fn run_all(ctx: &CheckContext, only: &[String]) -> RunReport {
    let t0 = Instant::now();
    let checks = registry()
        .iter()
        .filter(|c| only.is_empty() || only.iter().any(|n| n == c.name || n == &c.id.to_string()))
        .map(|c| run_check(c, ctx))
        .collect();
    RunReport { context: *ctx, wall_time_s: t0.elapsed().as_secs_f64(), checks }
}

fn linspace(a: f64, b: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| a + (b - a) * i as f64 / (n - 1) as f64)
}

fn marchenko_pastur(_: &CheckContext) -> Result<CheckValue> {
    let mp = |y: f64| (y * (4.0 - y)).sqrt() / (2.0 * PI * y);
    let mut worst = 0.0_f64;
    for y in linspace(0.1, 3.9, 50) {
        worst = worst.max((global_density(1, 0, y)? - mp(y)).abs());
    }
    Ok(CheckValue::within(worst, 0.0, 1e-8, "max |ρ − ρ_MP| over 50 points".into()))
}

/// |a − b| relative to max(1, |b|).
fn scaled_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

fn closed_forms(_: &CheckContext) -> Result<CheckValue> {
    let mut parts = Vec::new();
    let mut worst = 0.0_f64;
    for r in [2, 3] {
        let top = PI / (r as f64 + 1.0);
        let mut w = 0.0_f64;
        for i in 1..=20 {
            let p = density_s0_parametric(r, top * i as f64 / 21.0)?;
            w = w.max(scaled_gap(global_density(r, 0, p.x)?, p.rho));
        }
        parts.push(format!("s=0 r={r}: {w:.1e}"));
        worst = worst.max(w);
    }
    for r in [1, 2] {
        let mut w = 0.0_f64;
        // λ = 1/(1+x) uniform in (0, 1)
        for lam in linspace(0.02, 0.98, 20) {
            let x = (1.0 - lam) / lam;
            w = w.max(scaled_gap(global_density(r, r, x)?, density_rr_closed(r, x)));
        }
        parts.push(format!("r=s={r}: {w:.1e}"));
        worst = worst.max(w);
    }
    Ok(CheckValue::within(worst, 0.0, 1e-8, parts.join(", ")))
}

fn fuss_catalan(ctx: &CheckContext) -> Result<CheckValue> {
    let exact = (1..=4).all(|r| fuss_catalan_recurrence_check(r, 6));
    let p = EnsembleParams::new(200, vec![0, 0], vec![])?;
    let draws = sample_spectra(&p, &ctx.rng(3), 200)?;
    let mut m = [0.0; 3];
    let mut count = 0.0;
    for d in &draws {
        for x in rescale(d, Scaling::Global)?.eigenvalues {
            m[0] += x;
            m[1] += x * x;
            m[2] += x * x * x;
            count += 1.0;
        }
    }
    let target = [1.0, 3.0, 12.0];
    let rel: Vec<f64> = (0..3).map(|k| (m[k] / count - target[k]).abs() / target[k]).collect();
    let worst = rel.iter().cloned().fold(0.0, f64::max);
    let mut v = CheckValue::within(
        worst,
        0.0,
        0.05,
        format!(
            "m1..m3 = {:.4}, {:.4}, {:.4}; recurrence r≤4 {}",
            m[0] / count,
            m[1] / count,
            m[2] / count,
            if exact { "ok" } else { "FAILED" }
        ),
    );
    v.parts_ok &= exact;
    Ok(v)
}

fn arcsine(ctx: &CheckContext) -> Result<CheckValue> {
    let p = EnsembleParams::new(200, vec![0], vec![0])?;
    let draws = sample_spectra(&p, &ctx.rng(4), 100)?;
    let lam: Vec<f64> = draws.iter().flat_map(|d| d.eigenvalues.iter().map(|x| 1.0 / (1.0 + x))).collect();
    let n = lam.len();
    let d = sup_distance(&empirical_cdf(lam)?, |l| (2.0 / PI) * l.clamp(0.0, 1.0).sqrt().asin());
    Ok(CheckValue::within(d, 0.0, 0.03, format!("sup distance over {n} eigenvalues")))
}

fn charpoly_mc(ctx: &CheckContext) -> Result<CheckValue> {
    let p = EnsembleParams::new(3, vec![0, 1], vec![0])?;
    let root = ctx.rng(5);
    let mut worst = 0.0_f64;
    let mut parts = Vec::new();
    for (i, lam) in [0.5, 1.0, 2.0].into_iter().enumerate() {
        let exact = charpoly_exact(&p, lam)?;
        let (m, se) = mc_charpoly(&p, lam, 100_000, &root.substream(i as u64))?;
        let z = (m - exact).abs() / se;
        parts.push(format!("λ={lam}: {z:.2}σ"));
        worst = worst.max(z);
    }
    // (−1)^N λ^N P^{(r,s)}(1/λ) = P^{(s,r)}(λ) with ν ↔ μ
    let lam: f64 = 0.7;
    let lhs = -lam.powi(3) * charpoly_exact(&p, 1.0 / lam)?;
    let rhs = charpoly_exact(&p.swapped(), lam)?;
    let sym = (lhs - rhs).abs() / rhs.abs().max(1.0);
    let sym_ok = sym <= 1e-12;
    parts.push(format!("symmetry {sym:.1e} {}", if sym_ok { "ok" } else { "FAILED" }));
    let mut v = CheckValue::within(worst, 0.0, 3.0, format!("|mean − exact|/se; {}", parts.join(", ")));
    v.parts_ok &= sym_ok;
    Ok(v)
}

fn biorthogonality(_: &CheckContext) -> Result<CheckValue> {
    let sets = [(vec![0], vec![0]), (vec![0, 0], vec![0]), (vec![0, 0], vec![0, 0]), (vec![0, 0, 0], vec![])];
    let mut worst = 0.0_f64;
    let mut parts = Vec::new();
    for (nu, mu) in sets {
        let p = EnsembleParams::new(6, nu, mu)?;
        let g = BiorthSystem::new(&p)?.gram(1e-10)?;
        let dev = g.max_deviation();
        parts.push(format!("({},{}): {dev:.1e}", p.r, p.s));
        worst = worst.max(dev);
    }
    Ok(CheckValue::within(worst, 0.0, 1e-8, format!("max |G − I| at N=6; {}", parts.join(", "))))
}

fn kernel_identity(ctx: &CheckContext) -> Result<CheckValue> {
    let mut rng = ctx.rng(7);
    let mut worst = 0.0_f64;
    for p in [EnsembleParams::new(5, vec![0, 1], vec![1])?, EnsembleParams::new(5, vec![2], vec![0, 0])?] {
        let sys = BiorthSystem::new(&p)?;
        for _ in 0..10 {
            let x = 10f64.powf(rng.random_range(-1.0..1.0));
            let y = 10f64.powf(rng.random_range(-1.0..1.0));
            let a = sys.kernel(x, y)?;
            let b = kernel_n_contour(&p, x, y)?.value;
            worst = worst.max((a - b).abs() / a.abs());
        }
    }
    Ok(CheckValue::within(worst, 0.0, 1e-8, "max relative gap, 20 pairs".into()))
}

fn trace_projection(_: &CheckContext) -> Result<CheckValue> {
    let p = EnsembleParams::new(4, vec![0, 1], vec![0])?;
    let sys = BiorthSystem::new(&p)?;
    let tr = quad::integrate(|t| Ok(t.exp() * sys.kernel(t.exp(), t.exp())?), -60.0, 60.0, 1e-12, 1e-12)?;
    let mut worst = (tr - 4.0).abs();
    for (x, y) in [(1.0, 2.0), (0.3, 5.0)] {
        let v = quad::integrate(
            |t| {
                let s = t.exp();
                Ok(s * sys.kernel(x, s)? * sys.kernel(s, y)?)
            },
            -60.0,
            60.0,
            1e-12,
            1e-12,
        )?;
        worst = worst.max((v - kernel_n(&p, x, y)?.value).abs());
    }
    Ok(CheckValue::within(worst, 0.0, 1e-6, format!("∫K(x,x) = {tr:.10}")))
}

fn bessel_reduction(_: &CheckContext) -> Result<CheckValue> {
    let mut worst = 0.0_f64;
    for a in 0..3u32 {
        let k = HardKernel::new(&HardEdgeParams::new(vec![a])?)?;
        for x in linspace(0.1, 10.0, 40) {
            worst = worst.max((k.density(x)? - bessel_density(a, x)?).abs());
        }
    }
    Ok(CheckValue::within(worst, 0.0, 1e-6, "max |K(x,x) − Bessel density|, a ∈ {0,1,2}".into()))
}

fn cd_equivalence(ctx: &CheckContext) -> Result<CheckValue> {
    let k = HardKernel::new(&HardEdgeParams::new(vec![0, 0])?)?;
    let mut rng = ctx.rng(10);
    let mut worst = 0.0_f64;
    for _ in 0..20 {
        let x = rng.random_range(0.5..20.0);
        let y = rng.random_range(0.5..20.0);
        let a = k.kernel(x, y)?;
        let b = k.kernel_cd(x, y)?;
        worst = worst.max((a - b).abs() / a.abs());
    }
    Ok(CheckValue::within(worst, 0.0, 1e-6, "max relative gap, 20 pairs".into()))
}

fn hard_edge_convergence(_: &CheckContext) -> Result<CheckValue> {
    let hard = HardKernel::new(&HardEdgeParams::new(vec![0, 0])?)?;
    let axis: Vec<f64> = linspace(0.2, 4.0, 5).collect();
    let grid: Vec<(f64, f64)> = axis.iter().flat_map(|&x| axis.iter().map(move |&y| (x, y))).collect();
    let reference: Vec<f64> = grid.iter().map(|&(x, y)| hard.kernel(x, y)).collect::<Result<_>>()?;
    let scale = reference.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let ns = [10, 20, 40];
    let mut parts = Vec::new();
    let mut monotone = true;
    let mut final_dev = 0.0_f64;
    let mut extrapolated = Vec::new();
    for mu in [0u32, 3] {
        let mut devs = Vec::new();
        let mut last_two = Vec::new();
        for n in ns {
            let p = EnsembleParams::new(n, vec![0, 0], vec![mu])?;
            let vals: Vec<f64> =
                grid.par_iter().map(|&(x, y)| scaled_finite_kernel(&p, x, y)).collect::<Result<_>>()?;
            let dev = vals.iter().zip(&reference).fold(0.0_f64, |m, (a, b)| m.max((a - b).abs())) / scale;
            devs.push(dev);
            if n >= 20 {
                last_two.push(vals);
            }
        }
        monotone &= devs.windows(2).all(|w| w[1] < w[0]);
        final_dev = final_dev.max(*devs.last().unwrap());
        // 2K_40 − K_20 cancels the O(1/N) term
        extrapolated.push(last_two[1].iter().zip(&last_two[0]).map(|(a, b)| 2.0 * a - b).collect::<Vec<f64>>());
        parts.push(format!("μ={mu}: {:.3}, {:.3}, {:.3}", devs[0], devs[1], devs[2]));
    }
    let mu_gap =
        extrapolated[0].iter().zip(&extrapolated[1]).fold(0.0_f64, |m, (a, b)| m.max((a - b).abs())) / scale;
    let mu_ok = mu_gap < 0.01;
    parts.push(format!("monotone {monotone}"));
    parts.push(format!("μ-gap of extrapolated limits {mu_gap:.4}"));
    let mut v = CheckValue::within(final_dev, 0.0, 0.05, format!("sup deviation / sup|K|; {}", parts.join("; ")));
    v.parts_ok &= monotone && mu_ok;
    Ok(v)
}

fn charpoly_limit(_: &CheckContext) -> Result<CheckValue> {
    let p = EnsembleParams::new(20, vec![0, 0], vec![0])?;
    let hp = HardEdgeParams::from(&p);
    let mut worst = 0.0_f64;
    let mut ratios_ok = true;
    let mut parts = Vec::new();
    for lam in [0.5, 1.0, 2.0] {
        let seq = charpoly_hard_sequence(&p, lam, &[20, 40, 80])?;
        let lim = charpoly_hard_limit(&hp, lam)?;
        let ratio = (seq[2] - seq[1]).abs() / (seq[1] - seq[0]).abs();
        let dev = (seq[2] - lim).abs() / lim.abs();
        ratios_ok &= ratio < 0.6;
        worst = worst.max(dev);
        parts.push(format!("λ={lam}: ratio {ratio:.3}, final {dev:.2e}"));
    }
    let mut v = CheckValue::within(worst, 0.0, 0.01, format!("relative deviation at N=80; {}", parts.join(", ")));
    v.parts_ok &= ratios_ok;
    Ok(v)
}

fn density_tail(_: &CheckContext) -> Result<CheckValue> {
    let mut worst = 0.0_f64;
    let mut parts = Vec::new();
    for nu in [vec![0, 0], vec![0, 0, 0]] {
        let r = nu.len();
        let rep = tail_experiment(&HardKernel::new(&HardEdgeParams::new(nu)?)?, 50.0, 200.0, 5)?;
        worst = worst.max(rep.max_deviation);
        parts.push(format!(
            "r={r}: mean {:.4}, worst window {:.4}, oscillation ±{:.3}",
            rep.mean_ratio, rep.max_deviation, rep.oscillation_amplitude
        ));
    }
    Ok(CheckValue::within(worst, 0.0, 0.05, format!("max |window mean − 1|; {}", parts.join("; "))))
}

fn cauchy_bridge(ctx: &CheckContext) -> Result<CheckValue> {
    const CUT: f64 = 5.0;
    let k = HardKernel::new(&HardEdgeParams::new(vec![0, 0])?)?;
    // ∫_0^x ρ tabulated with Gauss–Legendre cells in √x, where ρ ~ x^{−2/3}
    let rule = GaussLegendre::get(10);
    let cells = 24;
    let edges: Vec<f64> = linspace(0.0, CUT.sqrt(), cells + 1).collect();
    let pieces: Vec<f64> = (0..cells)
        .into_par_iter()
        .map(|i| {
            rule.composite(edges[i], edges[i + 1], 1)
                .iter()
                .map(|&(u, w)| Ok(w * 2.0 * u * k.density(u * u)?))
                .sum::<Result<f64>>()
        })
        .collect::<Result<_>>()?;
    let mut cumulative = vec![0.0];
    for piece in &pieces {
        cumulative.push(cumulative.last().unwrap() + piece);
    }
    let total = *cumulative.last().unwrap();
    // within a cell, interpolate ∫ρ linearly in √x
    let cdf = |x: f64| {
        let u = x.clamp(0.0, CUT).sqrt();
        let h = CUT.sqrt() / cells as f64;
        let i = ((u / h) as usize).min(cells - 1);
        let w = (u - edges[i]) / h;
        (cumulative[i] + w * pieces[i]) / total
    };
    let n = 60;
    let root = ctx.rng(14);
    let per_draw: Vec<Vec<f64>> = (0..500)
        .into_par_iter()
        .map(|i| {
            let ev = sample_cauchy_triple(n, 0, 0, &mut root.substream(i))?;
            Ok(ev.into_iter().map(|e| e * (n * n) as f64).filter(|&x| x <= CUT).collect())
        })
        .collect::<Result<_>>()?;
    let pooled: Vec<f64> = per_draw.into_iter().flatten().collect();
    let count = pooled.len();
    let d = sup_distance(&empirical_cdf(pooled)?, cdf);
    Ok(CheckValue::within(
        d,
        0.0,
        0.05,
        format!("N²-scaled eigenvalues in [0,{CUT}]: {count} pooled, {:.3}/draw vs ∫ρ = {total:.3}", count as f64 / 500.0),
    ))
}
