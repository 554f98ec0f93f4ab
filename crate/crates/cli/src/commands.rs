//! One function per experiment. Each returns a [`Table`]; grid points are
//! evaluated in parallel and collected in order, so output does not depend
//! on the worker count.

use num::ToPrimitive;
use rayon::prelude::*;
use wishprod_core::acceptance::{self, CheckContext};
use wishprod_core::finite_kernel::{charpoly_exact, kernel_n, kernel_n_contour};
use wishprod_core::freeprob::{density_rr_closed, fuss_catalan, global_density};
use wishprod_core::hard_edge::{
    bessel_density, bulk_experiment, tail_diagonal, HardEdgeParams, HardKernel,
};
use wishprod_core::sampler::{
    empirical_cdf, mc_charpoly, rescale, sample_cauchy_triple, sample_spectra, sup_distance, RngStream,
    Scaling, TabulatedCdf,
};
use wishprod_core::{Error, Result as CoreResult};

use crate::config::{Experiment, RunConfig};
use crate::error::{CliError, CliResult};
use crate::output::{emit, Table};
use crate::{AcceptanceArgs, Extra, ScalingArg};

const MOMENT_ORDERS: usize = 6;

pub fn run_experiment(cfg: &RunConfig, extra: &Extra) -> CliResult<Table> {
    let mut table = match cfg.experiment.expect("experiment is set before dispatch") {
        Experiment::Sample => sample(cfg, extra.scaling.unwrap_or(ScalingArg::Global))?,
        Experiment::Density => density(cfg)?,
        Experiment::Moments => moments(cfg)?,
        Experiment::Charpoly => charpoly(cfg)?,
        Experiment::Kernel => kernel(cfg, extra.y)?,
        Experiment::Hardedge => hardedge(cfg, extra.y)?,
        Experiment::Cauchy => cauchy(cfg)?,
        Experiment::Bulk => bulk(cfg, extra.c.unwrap_or(95.0))?,
    };
    table.meta("config_sha256", cfg.hash());
    table.meta("seed", cfg.mc.seed);
    table.meta("version", env!("CARGO_PKG_VERSION"));
    Ok(table)
}

fn on_grid<F>(points: &[f64], f: F) -> CoreResult<Vec<Vec<f64>>>
where
    F: Fn(f64) -> CoreResult<Vec<f64>> + Sync,
{
    points.par_iter().map(|&x| f(x)).collect()
}

fn fill(table: &mut Table, rows: Vec<Vec<f64>>) {
    for row in rows {
        table.push(row);
    }
}

fn max_col(rows: &[Vec<f64>], col: usize) -> f64 {
    rows.iter().map(|r| r[col]).fold(0.0, f64::max)
}

fn root_rng(cfg: &RunConfig) -> RngStream {
    RngStream::new(cfg.mc.seed, 0)
}

fn hard_params(cfg: &RunConfig) -> CliResult<HardKernel> {
    Ok(HardKernel::new(&HardEdgeParams::new(cfg.ensemble.nu.clone())?)?)
}

pub fn sample(cfg: &RunConfig, scaling: ScalingArg) -> CliResult<Table> {
    let params = cfg.params()?;
    let target = match scaling {
        ScalingArg::Raw => Scaling::Raw,
        ScalingArg::Global => Scaling::Global,
        ScalingArg::HardEdge => Scaling::HardEdge,
    };
    let draws = sample_spectra(&params, &root_rng(cfg), cfg.mc.samples)?;
    let mut t = Table::new(&["draw", "index", "eigenvalue"]);
    for (d, s) in draws.iter().enumerate() {
        let s = rescale(s, target)?;
        for (i, v) in s.eigenvalues.iter().enumerate() {
            t.push(vec![d as f64, i as f64, *v]);
        }
    }
    t.meta("scaling", target.as_str());
    Ok(t)
}

pub fn density(cfg: &RunConfig) -> CliResult<Table> {
    let p = cfg.params()?;
    let (r, s) = (p.r, p.s);
    let closed = r == s;
    let rows = on_grid(&cfg.grid.points(), |x| {
        let rho = global_density(r, s, x)?;
        Ok(if closed {
            let c = density_rr_closed(r, x);
            vec![x, rho, c, (rho - c).abs()]
        } else {
            vec![x, rho]
        })
    })?;
    let mut t = if closed {
        Table::new(&["x", "rho_solver", "rho_closed", "abs_diff"])
    } else {
        Table::new(&["x", "rho_solver"])
    };
    if closed {
        t.meta("max_abs_diff", max_col(&rows, 3));
    }
    fill(&mut t, rows);
    Ok(t)
}

/// Moments of the globally scaled spectrum, averaged per draw; the limit is
/// the Fuss–Catalan number when s = 0 (the moments diverge otherwise).
pub fn moments(cfg: &RunConfig) -> CliResult<Table> {
    let p = cfg.params()?;
    let draws = sample_spectra(&p, &root_rng(cfg), cfg.mc.samples)?;
    let per_draw: Vec<Vec<f64>> = draws
        .iter()
        .map(|d| {
            let g = rescale(d, Scaling::Global)?;
            let n = g.eigenvalues.len() as f64;
            Ok((1..=MOMENT_ORDERS).map(|k| g.eigenvalues.iter().map(|v| v.powi(k as i32)).sum::<f64>() / n).collect())
        })
        .collect::<CoreResult<_>>()?;
    let m = per_draw.len() as f64;
    let with_limit = p.s == 0;
    let mut t = if with_limit {
        Table::new(&["order", "mc_moment", "std_error", "fuss_catalan"])
    } else {
        Table::new(&["order", "mc_moment", "std_error"])
    };
    for k in 0..MOMENT_ORDERS {
        let mean = per_draw.iter().map(|d| d[k]).sum::<f64>() / m;
        let var = per_draw.iter().map(|d| (d[k] - mean).powi(2)).sum::<f64>() / (m - 1.0).max(1.0);
        let mut row = vec![(k + 1) as f64, mean, (var / m).sqrt()];
        if with_limit {
            row.push(fuss_catalan(p.r, k + 1).to_f64().unwrap_or(f64::INFINITY));
        }
        t.push(row);
    }
    Ok(t)
}

/// Exact averaged characteristic polynomial; the Monte Carlo columns need
/// at least 100 samples.
pub fn charpoly(cfg: &RunConfig) -> CliResult<Table> {
    let p = cfg.params()?;
    let with_mc = cfg.mc.samples >= 100;
    let root = root_rng(cfg);
    let points = cfg.grid.points();
    let rows = points
        .iter()
        .enumerate()
        .map(|(i, &lambda)| {
            let exact = charpoly_exact(&p, lambda)?;
            if with_mc {
                let (mean, se) = mc_charpoly(&p, lambda, cfg.mc.samples, &root.substream(i as u64))?;
                Ok(vec![lambda, exact, mean, se, (mean - exact) / se])
            } else {
                Ok(vec![lambda, exact])
            }
        })
        .collect::<CoreResult<Vec<_>>>()?;
    let mut t = if with_mc {
        Table::new(&["lambda", "exact", "mc_mean", "mc_std_error", "z_score"])
    } else {
        Table::new(&["lambda", "exact"])
    };
    if with_mc {
        t.meta("max_abs_z", rows.iter().map(|r| r[4].abs()).fold(0.0, f64::max));
    }
    fill(&mut t, rows);
    Ok(t)
}

pub fn kernel(cfg: &RunConfig, y: Option<f64>) -> CliResult<Table> {
    let p = cfg.params()?;
    let rows = on_grid(&cfg.grid.points(), |x| {
        let yy = y.unwrap_or(x);
        let a = kernel_n(&p, x, yy)?.value;
        let b = kernel_n_contour(&p, x, yy)?.value;
        Ok(vec![x, yy, a, b, (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)])
    })?;
    let mut t = Table::new(&["x", "y", "biorth_sum", "double_contour", "rel_diff"]);
    t.meta("max_rel_diff", max_col(&rows, 4));
    fill(&mut t, rows);
    Ok(t)
}

/// Diagonal: K_hard, the leading tail term and, for r = 1, the Bessel density.
/// Off the diagonal: K_hard against its Christoffel–Darboux form.
pub fn hardedge(cfg: &RunConfig, y: Option<f64>) -> CliResult<Table> {
    let k = hard_params(cfg)?;
    let nu = cfg.ensemble.nu.clone();
    let points = cfg.grid.points();
    let mut t;
    match y {
        None => {
            let bessel = nu.len() == 1;
            let rows = on_grid(&points, |x| {
                let v = k.density(x)?;
                let mut row = vec![x, v, tail_diagonal(k.params(), x)];
                if bessel {
                    let b = bessel_density(nu[0], x)?;
                    row.extend([b, (v - b).abs()]);
                }
                Ok(row)
            })?;
            t = if bessel {
                Table::new(&["x", "k_hard", "tail_leading", "bessel", "abs_diff"])
            } else {
                Table::new(&["x", "k_hard", "tail_leading"])
            };
            if bessel {
                t.meta("max_abs_diff", max_col(&rows, 4));
            }
            fill(&mut t, rows);
        }
        Some(y) => {
            let rows = on_grid(&points, |x| {
                let v = k.kernel(x, y)?;
                let cd = match k.kernel_cd(x, y) {
                    Ok(c) => c,
                    Err(Error::CoincidentPoints { .. }) | Err(Error::InvalidParams(_)) => f64::NAN,
                    Err(e) => return Err(e),
                };
                Ok(vec![x, y, v, cd])
            })?;
            t = Table::new(&["x", "y", "k_hard", "k_hard_cd"]);
            fill(&mut t, rows);
        }
    }
    Ok(t)
}

/// Pooled N²-scaled eigenvalues of the Cauchy two-matrix product (a = b = 0)
/// below the grid maximum, against ∫_0^x ρ / ∫_0^max ρ for r = 2, ν = (0, 0).
pub fn cauchy(cfg: &RunConfig) -> CliResult<Table> {
    let n = cfg.ensemble.n;
    let cut = cfg.grid.max;
    let k = HardKernel::new(&HardEdgeParams::new(vec![0, 0])?)?;
    let cells = cfg.grid.count.max(16);
    let tab = TabulatedCdf::from_density(|x| k.density(x), 0.0, cut, cells, 2.0, cfg.quad.tol.max(1e-9))?;
    let root = root_rng(cfg);
    let scale = (n * n) as f64;
    let per_draw: Vec<Vec<f64>> = (0..cfg.mc.samples)
        .into_par_iter()
        .map(|i| {
            let ev = sample_cauchy_triple(n, 0, 0, &mut root.substream(i as u64))?;
            Ok(ev.into_iter().map(|e| e * scale).filter(|&x| x <= cut).collect())
        })
        .collect::<CoreResult<_>>()?;
    let pooled: Vec<f64> = per_draw.into_iter().flatten().collect();
    let count = pooled.len();
    if count == 0 {
        return Err(CliError::Numerical(Error::InvalidParams(format!("no scaled eigenvalue fell below {cut}"))));
    }
    let ecdf = empirical_cdf(pooled)?;
    let d = sup_distance(&ecdf, |x| tab.cdf(x));
    let mut t = Table::new(&["x", "empirical_cdf", "k_hard_cdf"]);
    for x in cfg.grid.points() {
        t.push(vec![x, ecdf.eval(x), tab.cdf(x)]);
    }
    t.meta("sup_distance", d);
    t.meta("pooled_count", count);
    t.meta("mean_count_per_draw", count as f64 / cfg.mc.samples as f64);
    t.meta("expected_count", tab.total());
    Ok(t)
}

/// σ²K(X,Y)K(Y,X) at X, Y = c ± σd/2 against the squared sine kernel at d.
pub fn bulk(cfg: &RunConfig, c: f64) -> CliResult<Table> {
    if !(c > 0.0) {
        return Err(CliError::Config(format!("--c must be positive, got {c}")));
    }
    let k = hard_params(cfg)?;
    let rows = on_grid(&cfg.grid.points(), |d| {
        let b = bulk_experiment(&k, c, -d / 2.0, d / 2.0)?;
        Ok(vec![d, b.scaled_product, b.sine_kernel_sq, b.scaled_product - b.sine_kernel_sq])
    })?;
    let mut t = Table::new(&["separation", "scaled_product", "sine_kernel_sq", "diff"]);
    t.meta("centre", c);
    t.meta("max_abs_diff", rows.iter().map(|r| r[3].abs()).fold(0.0, f64::max));
    fill(&mut t, rows);
    Ok(t)
}

pub fn acceptance(args: &AcceptanceArgs, workers: usize) -> CliResult<()> {
    if args.list {
        for c in acceptance::registry() {
            let kind = if c.statistical { "statistical" } else { "deterministic" };
            println!("{:>2} {:<28} budget={:>4.0}s {:?} {kind}", c.id, c.name, c.runtime_limit_s, c.gate);
        }
        return Ok(());
    }
    if !(args.tol_scale > 0.0) {
        return Err(CliError::Config(format!("--tol-scale must be positive, got {}", args.tol_scale)));
    }
    let known: Vec<String> =
        acceptance::registry().iter().flat_map(|c| [c.name.to_string(), c.id.to_string()]).collect();
    if let Some(bad) = args.only.iter().find(|o| !known.contains(o)) {
        return Err(CliError::Config(format!("unknown check '{bad}'; see --list")));
    }
    let ctx = CheckContext { seed: args.seed.unwrap_or(acceptance::DEFAULT_SEED), tol_scale: args.tol_scale };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(crate::worker_count(workers)?)
        .build()
        .map_err(|e| CliError::Config(format!("cannot start worker pool: {e}")))?;
    let report = pool.install(|| acceptance::run_all(&ctx, &args.only));
    for c in &report.checks {
        println!("{}", c.line());
    }
    let passed = report.checks.iter().filter(|c| c.passed).count();
    println!("{passed}/{} passed in {:.1}s", report.checks.len(), report.wall_time_s);
    if let Some(path) = &args.json {
        let text = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
        emit(&text, Some(path))?;
    }
    if report.all_hard_passed() {
        Ok(())
    } else {
        let failed: Vec<&str> = report
            .checks
            .iter()
            .filter(|c| !c.passed && c.gate == acceptance::Gate::Hard)
            .map(|c| c.name.as_str())
            .collect();
        Err(CliError::CheckFailed(format!("failed checks: {}", failed.join(", "))))
    }
}
