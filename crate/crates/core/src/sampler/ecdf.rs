//! Empirical distribution functions and Kolmogorov–Smirnov distances.

use crate::error::{Error, Result};
use crate::quad;

#[derive(Debug, Clone)]
pub struct EmpiricalCdf {
    values: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySample);
        }
        values.sort_by(f64::total_cmp);
        Ok(Self { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.values.partition_point(|v| *v <= x) as f64 / self.values.len() as f64
    }
}

pub fn empirical_cdf(values: Vec<f64>) -> Result<EmpiricalCdf> {
    EmpiricalCdf::new(values)
}

/// sup_x |F_n(x) − F(x)|, attained at a jump of F_n for continuous F.
pub fn sup_distance(ecdf: &EmpiricalCdf, cdf: impl Fn(f64) -> f64) -> f64 {
    let n = ecdf.len() as f64;
    ecdf.values
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let f = cdf(*x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// Kolmogorov survival function P(K > t).
pub fn kolmogorov_survival(t: f64) -> f64 {
    if t < 0.2 {
        return 1.0;
    }
    let mut s = 0.0;
    for k in 1..100 {
        let term = (-2.0 * (k * k) as f64 * t * t).exp();
        s += if k % 2 == 1 { term } else { -term };
        if term < 1e-18 {
            break;
        }
    }
    (2.0 * s).clamp(0.0, 1.0)
}

/// Two-sample KS statistic and its asymptotic p-value.
pub fn ks_two_sample(a: &EmpiricalCdf, b: &EmpiricalCdf) -> (f64, f64) {
    let (x, y) = (a.values(), b.values());
    let (mut i, mut j, mut d) = (0, 0, 0.0_f64);
    while i < x.len() && j < y.len() {
        let t = x[i].min(y[j]);
        while i < x.len() && x[i] <= t {
            i += 1;
        }
        while j < y.len() && y[j] <= t {
            j += 1;
        }
        d = d.max((i as f64 / x.len() as f64 - j as f64 / y.len() as f64).abs());
    }
    let (n, m) = (x.len() as f64, y.len() as f64);
    let en = (n * m / (n + m)).sqrt();
    (d, kolmogorov_survival((en + 0.12 + 0.11 / en) * d))
}

/// CDF of a density on [a, b], integrated cell by cell and linearly interpolated.
#[derive(Debug, Clone)]
pub struct TabulatedCdf {
    grid: Vec<f64>,
    cumulative: Vec<f64>,
}

impl TabulatedCdf {
    /// Cells are uniform in x^{1/k} so that integrable x^{-1+1/k} edges are resolved.
    pub fn from_density(
        density: impl Fn(f64) -> Result<f64>,
        a: f64,
        b: f64,
        cells: usize,
        grading: f64,
        tol: f64,
    ) -> Result<Self> {
        let grid: Vec<f64> = (0..=cells)
            .map(|i| {
                let t = i as f64 / cells as f64;
                a + (b - a) * t.powf(grading)
            })
            .collect();
        let mut cumulative = vec![0.0; cells + 1];
        for i in 0..cells {
            let piece = quad::integrate(&density, grid[i], grid[i + 1], tol, tol)?;
            cumulative[i + 1] = cumulative[i] + piece;
        }
        Ok(Self { grid, cumulative })
    }

    pub fn total(&self) -> f64 {
        *self.cumulative.last().unwrap()
    }

    /// Unnormalized cumulative integral at x, constant outside the grid.
    pub fn integral_to(&self, x: f64) -> f64 {
        if x <= self.grid[0] {
            return 0.0;
        }
        if x >= *self.grid.last().unwrap() {
            return self.total();
        }
        let i = self.grid.partition_point(|g| *g <= x) - 1;
        let w = (x - self.grid[i]) / (self.grid[i + 1] - self.grid[i]);
        self.cumulative[i] + w * (self.cumulative[i + 1] - self.cumulative[i])
    }

    /// Normalized CDF on [a, b].
    pub fn cdf(&self, x: f64) -> f64 {
        self.integral_to(x) / self.total()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampler::rng::RngStream;
    use rand::Rng;
    use std::f64::consts::PI;

    #[test]
    fn ecdf_step() {
        let e = empirical_cdf(vec![3.0, 1.0, 2.0]).unwrap();
        assert!((e.eval(2.5) - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(e.eval(0.0), 0.0);
        assert!(matches!(empirical_cdf(vec![]), Err(Error::EmptySample)));
    }

    #[test]
    fn uniform_sup_distance_is_small() {
        let mut rng = RngStream::new(0, 0);
        let xs: Vec<f64> = (0..100_000).map(|_| rng.random::<f64>()).collect();
        let e = empirical_cdf(xs).unwrap();
        assert!(sup_distance(&e, |x| x.clamp(0.0, 1.0)) < 0.01);
    }

    #[test]
    fn wrong_density_is_detected() {
        // MP samples on [0, 4] by inverse-CDF against the arcsine law mapped to [0, 4]
        let mp = TabulatedCdf::from_density(
            |x| Ok((x * (4.0 - x)).max(0.0).sqrt() / (2.0 * PI * x)),
            0.0,
            4.0,
            400,
            2.0,
            1e-10,
        )
        .unwrap();
        assert!((mp.total() - 1.0).abs() < 1e-8);
        let grid: Vec<f64> = (1..4000).map(|i| 4.0 * (i as f64 / 4000.0).powi(2)).collect();
        let mut sample = Vec::new();
        let mut rng = RngStream::new(1, 0);
        for _ in 0..20_000 {
            let u: f64 = rng.random();
            let k = grid.partition_point(|g| mp.cdf(*g) < u).min(grid.len() - 1);
            sample.push(grid[k]);
        }
        let e = empirical_cdf(sample).unwrap();
        assert!(sup_distance(&e, |x| mp.cdf(x)) < 0.02);
        let arcsine = |x: f64| (2.0 / PI) * (x.clamp(0.0, 4.0) / 4.0).sqrt().asin();
        assert!(sup_distance(&e, arcsine) > 0.2);
    }

    #[test]
    fn two_sample_test() {
        let mut rng = RngStream::new(2, 0);
        let a: Vec<f64> = (0..5000).map(|_| rng.random::<f64>()).collect();
        let b: Vec<f64> = (0..5000).map(|_| rng.random::<f64>()).collect();
        let c: Vec<f64> = (0..5000).map(|_| rng.random::<f64>().powf(1.2)).collect();
        let (ea, eb, ec) = (empirical_cdf(a).unwrap(), empirical_cdf(b).unwrap(), empirical_cdf(c).unwrap());
        assert!(ks_two_sample(&ea, &eb).1 > 0.01);
        assert!(ks_two_sample(&ea, &ec).1 < 1e-4);
    }
}
