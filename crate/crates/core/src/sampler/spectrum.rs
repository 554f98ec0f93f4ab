//! Product-ensemble spectra and the Monte Carlo characteristic polynomial.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::EnsembleParams;
use crate::sampler::matrix::{sample_ginibre, sample_induced_square, ComplexMatrix};
use crate::sampler::rng::RngStream;

/// Normalization applied to a spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scaling {
    Raw,
    /// Eigenvalues × N^{s-r}.
    Global,
    /// Eigenvalues × N^{s+1}.
    HardEdge,
}

impl Scaling {
    pub fn as_str(self) -> &'static str {
        match self {
            Scaling::Raw => "raw",
            Scaling::Global => "global",
            Scaling::HardEdge => "hard_edge",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSample {
    pub params: EnsembleParams,
    /// Ascending, nonnegative.
    pub eigenvalues: Vec<f64>,
    pub scaling: Scaling,
}

const MAX_RESAMPLES: usize = 10;

fn identity(n: usize) -> ComplexMatrix {
    DMatrix::identity(n, n)
}

/// Ascending squared singular values.
fn squared_singular_values(x: &ComplexMatrix) -> Vec<f64> {
    let svd = x.clone().svd(false, false);
    let mut ev: Vec<f64> = svd.singular_values.iter().map(|s| s * s).collect();
    ev.sort_by(f64::total_cmp);
    ev
}

fn draw_once(params: &EnsembleParams, rng: &mut RngStream) -> Result<Vec<f64>> {
    let n = params.n;
    let mut y = identity(n);
    let mut rows = n;
    for nu in &params.nu {
        let next = n + *nu as usize;
        y = sample_ginibre(next, rows, rng) * y;
        rows = next;
    }
    if params.s == 0 {
        return Ok(squared_singular_values(&y));
    }
    let mut b = identity(n);
    for mu in &params.mu {
        b = sample_induced_square(n + *mu as usize, n, rng) * b;
    }
    // X = Y B^{-1}, i.e. X† = B^{-†} Y†
    let lu = b.adjoint().lu();
    let det = lu.determinant();
    if !(det.norm() > f64::MIN_POSITIVE) {
        return Err(Error::NumericalSingularity("inverse factor is singular".into()));
    }
    let xt = lu
        .solve(&y.adjoint())
        .ok_or_else(|| Error::NumericalSingularity("inverse factor is singular".into()))?;
    if xt.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NumericalSingularity("non-finite product".into()));
    }
    Ok(squared_singular_values(&xt.adjoint()))
}

/// Eigenvalues of X†X for X = G_r···G_1 (G̃_s···G̃_1)^{-1}, unscaled.
///
/// The spectrum is taken from the singular values of X so that the
/// inverse factors are not squared before the eigensolve.
pub fn sample_product_spectrum(params: &EnsembleParams, rng: &mut RngStream) -> Result<SpectrumSample> {
    params.validate()?;
    let mut last = None;
    for _ in 0..MAX_RESAMPLES {
        match draw_once(params, rng) {
            Ok(ev) => {
                let eigenvalues = ev.into_iter().map(|v| v.max(0.0)).collect();
                return Ok(SpectrumSample { params: params.clone(), eigenvalues, scaling: Scaling::Raw });
            }
            Err(e @ Error::NumericalSingularity(_)) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.unwrap_or_else(|| Error::NumericalSingularity("resample cap reached".into())))
}

/// `draws` independent spectra; draw i uses `rng.substream(i)`, so the result
/// does not depend on the number of worker threads.
pub fn sample_spectra(params: &EnsembleParams, rng: &RngStream, draws: usize) -> Result<Vec<SpectrumSample>> {
    (0..draws)
        .into_par_iter()
        .map(|i| sample_product_spectrum(params, &mut rng.substream(i as u64)))
        .collect()
}

/// Multiply by N^{s-r} (global) or N^{s+1} (hard edge).
pub fn rescale(sample: &SpectrumSample, target: Scaling) -> Result<SpectrumSample> {
    if sample.scaling != Scaling::Raw {
        return Err(Error::AlreadyScaled);
    }
    let n = sample.params.n as f64;
    let (r, s) = (sample.params.r as i32, sample.params.s as i32);
    let factor = match target {
        Scaling::Raw => 1.0,
        Scaling::Global => n.powi(s - r),
        Scaling::HardEdge => n.powi(s + 1),
    };
    Ok(SpectrumSample {
        params: sample.params.clone(),
        eigenvalues: sample.eigenvalues.iter().map(|v| v * factor).collect(),
        scaling: target,
    })
}

fn det_real(m: ComplexMatrix) -> f64 {
    m.determinant().re
}

fn charpoly_draw(params: &EnsembleParams, lambda: f64, rng: &mut RngStream) -> f64 {
    let n = params.n;
    let mut a = identity(n);
    for nu in &params.nu {
        a = sample_induced_square(n + *nu as usize, n, rng) * a;
    }
    let mut at = identity(n);
    for mu in &params.mu {
        at = sample_induced_square(n + *mu as usize, n, rng) * at;
    }
    let m = (at.adjoint() * &at) * Complex64::new(lambda, 0.0) - a.adjoint() * &a;
    det_real(m)
}

const CHUNKS: usize = 64;

/// Monte Carlo mean and standard error of det(λ Ã†Ã − A†A).
pub fn mc_charpoly(
    params: &EnsembleParams,
    lambda: f64,
    samples: usize,
    rng: &RngStream,
) -> Result<(f64, f64)> {
    params.validate()?;
    if samples < 100 {
        return Err(Error::InvalidParams(format!("need at least 100 samples, got {samples}")));
    }
    let partial: Vec<(f64, f64, usize)> = (0..CHUNKS)
        .into_par_iter()
        .map(|c| {
            let lo = c * samples / CHUNKS;
            let hi = (c + 1) * samples / CHUNKS;
            let mut g = rng.substream(c as u64);
            let (mut s1, mut s2) = (0.0, 0.0);
            for _ in lo..hi {
                let d = charpoly_draw(params, lambda, &mut g);
                s1 += d;
                s2 += d * d;
            }
            (s1, s2, hi - lo)
        })
        .collect();
    let (s1, s2, k) = partial
        .iter()
        .fold((0.0, 0.0, 0usize), |acc, p| (acc.0 + p.0, acc.1 + p.1, acc.2 + p.2));
    let k = k as f64;
    let mean = s1 / k;
    let var = ((s2 - k * mean * mean) / (k - 1.0)).max(0.0);
    Ok((mean, (var / k).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rescale_examples() {
        let p = EnsembleParams::new(100, vec![0], vec![]).unwrap();
        let s = SpectrumSample { params: p, eigenvalues: vec![400.0], scaling: Scaling::Raw };
        assert_eq!(rescale(&s, Scaling::Global).unwrap().eigenvalues, vec![4.0]);
        let g = rescale(&s, Scaling::Global).unwrap();
        assert_eq!(rescale(&g, Scaling::HardEdge), Err(Error::AlreadyScaled));

        let p = EnsembleParams::new(100, vec![0], vec![0]).unwrap();
        let s = SpectrumSample { params: p, eigenvalues: vec![3.5], scaling: Scaling::Raw };
        assert_eq!(rescale(&s, Scaling::Global).unwrap().eigenvalues, vec![3.5]);

        let p = EnsembleParams::new(50, vec![0, 0], vec![]).unwrap();
        let s = SpectrumSample { params: p, eigenvalues: vec![2500.0], scaling: Scaling::Raw };
        assert!((rescale(&s, Scaling::Global).unwrap().eigenvalues[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn deterministic_replay() {
        let p = EnsembleParams::new(5, vec![1, 0], vec![2]).unwrap();
        let a = sample_product_spectrum(&p, &mut RngStream::new(9, 4)).unwrap();
        let b = sample_product_spectrum(&p, &mut RngStream::new(9, 4)).unwrap();
        assert_eq!(a, b);
        assert!(a.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        assert!(a.eigenvalues[0] >= 0.0);
    }

    #[test]
    fn scalar_product_of_exponentials() {
        // N = 1, r = 2: |g2|²|g1|², mean 1 and second moment 4
        let p = EnsembleParams::new(1, vec![0, 0], vec![]).unwrap();
        let root = RngStream::new(1, 0);
        let m = 200_000;
        let xs: Vec<f64> = (0..m)
            .map(|i| sample_product_spectrum(&p, &mut root.substream(i)).unwrap().eigenvalues[0])
            .collect();
        let m1 = xs.iter().sum::<f64>() / m as f64;
        let m2 = xs.iter().map(|x| x * x).sum::<f64>() / m as f64;
        // Var x = 3, Var x² = E x⁴ − 16 = 576 − 16
        let se1 = (3.0 / m as f64).sqrt();
        let se2 = (560.0 / m as f64).sqrt();
        assert!((m1 - 1.0).abs() < 3.0 * se1, "{m1}");
        assert!((m2 - 4.0).abs() < 3.0 * se2, "{m2}");
    }

    #[test]
    fn scalar_charpoly() {
        let root = RngStream::new(2, 0);
        let p = EnsembleParams::new(1, vec![0], vec![]).unwrap();
        let (m, se) = mc_charpoly(&p, 2.0, 20_000, &root).unwrap();
        assert!((m - 1.0).abs() < 3.0 * se, "{m} ± {se}");
        let p = EnsembleParams::new(1, vec![0], vec![0]).unwrap();
        let (m, se) = mc_charpoly(&p, 2.0, 20_000, &root).unwrap();
        assert!((m - 1.0).abs() < 3.0 * se, "{m} ± {se}");
        assert!(mc_charpoly(&p, 2.0, 10, &root).is_err());
    }
}
