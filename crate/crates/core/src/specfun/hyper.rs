//! Generalized hypergeometric series pFq by term-ratio recurrence.

use crate::error::{Error, Result};

/// Parameters of pFq(a_1..a_p; b_1..b_q; x).
#[derive(Debug, Clone, PartialEq)]
pub struct HypSeriesParams {
    pub upper: Vec<f64>,
    pub lower: Vec<f64>,
    /// Degree of the polynomial when some upper parameter is -n.
    pub terminating_at: Option<usize>,
}

impl HypSeriesParams {
    pub fn new(upper: Vec<f64>, lower: Vec<f64>) -> Self {
        let terminating_at = upper
            .iter()
            .filter(|a| **a <= 0.0 && a.fract() == 0.0)
            .map(|a| (-a) as usize)
            .min();
        Self { upper, lower, terminating_at }
    }

    fn check(&self, x: f64) -> Result<()> {
        let (p, q) = (self.upper.len(), self.lower.len());
        if let Some(n) = self.terminating_at {
            for b in &self.lower {
                if *b <= 0.0 && b.fract() == 0.0 && ((-b) as usize) < n {
                    return Err(Error::LowerParamPole(*b));
                }
            }
            return Ok(());
        }
        for b in &self.lower {
            if *b <= 0.0 && b.fract() == 0.0 {
                return Err(Error::LowerParamPole(*b));
            }
        }
        if p > q + 1 {
            return Err(Error::DivergentSeries(format!(
                "{p}F{q} with no terminating parameter"
            )));
        }
        if p == q + 1 && x.abs() >= 1.0 {
            return Err(Error::DivergentSeries(format!(
                "{p}F{q} outside the unit disk at x = {x}"
            )));
        }
        Ok(())
    }
}

const MAX_TERMS: usize = 100_000;

/// pFq(x) with relative truncation tolerance near machine precision.
pub fn pfq(params: &HypSeriesParams, x: f64) -> Result<f64> {
    pfq_delta(params, x, 0, f64::EPSILON * 0.5)
}

/// Σ_k k^j t_k where t_k are the pFq terms: (x d/dx)^j applied to the series.
pub fn pfq_delta(params: &HypSeriesParams, x: f64, j: u32, tol: f64) -> Result<f64> {
    params.check(x)?;
    let mut term = 1.0;
    let mut sum = if j == 0 { 1.0 } else { 0.0 };
    let mut small = 0;
    let limit = params.terminating_at.map_or(MAX_TERMS, |n| n + 1);
    for k in 1..limit {
        let km1 = (k - 1) as f64;
        let mut ratio = x / k as f64;
        for a in &params.upper {
            ratio *= a + km1;
        }
        for b in &params.lower {
            ratio /= b + km1;
        }
        term *= ratio;
        let contrib = term * (k as f64).powi(j as i32);
        sum += contrib;
        if params.terminating_at.is_none() {
            if contrib.abs() <= tol * sum.abs() || contrib == 0.0 && term == 0.0 {
                small += 1;
                if small >= 3 {
                    return Ok(sum);
                }
            } else {
                small = 0;
            }
        }
        if !sum.is_finite() {
            return Err(Error::NonConvergent(format!("pFq overflow at term {k}")));
        }
    }
    if params.terminating_at.is_some() {
        Ok(sum)
    } else {
        Err(Error::NonConvergent(format!("pFq not converged after {MAX_TERMS} terms")))
    }
}

/// 0F_r(; b; x), the hypergeometric limit appearing at the hard edge.
pub fn hyp0f(lower: &[f64], x: f64) -> Result<f64> {
    pfq(&HypSeriesParams::new(vec![], lower.to_vec()), x)
}
