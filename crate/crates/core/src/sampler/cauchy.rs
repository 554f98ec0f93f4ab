//! The Cauchy two-matrix model realized by Wishart factors.

use crate::error::{Error, Result};
use crate::sampler::matrix::{hermitian_sqrt, sample_ginibre};
use crate::sampler::rng::RngStream;

/// Eigenvalues of D(I + C)^{-1} with D = S₃ and I + C = S₂^{-1/2}(S₁+S₂)S₂^{-1/2},
/// i.e. of S₂^{1/2} S₃ S₂^{1/2} (S₁+S₂)^{-1}, computed as the squared singular
/// values of G₃ S₂^{1/2} L^{-†} where S₁ + S₂ = LL†.
pub fn sample_cauchy_triple(n: usize, a: usize, b: usize, rng: &mut RngStream) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::InvalidParams("N must be positive".into()));
    }
    for _ in 0..10 {
        let g1 = sample_ginibre(n, n, rng);
        let g2 = sample_ginibre(n + a + b, n, rng);
        let g3 = sample_ginibre(n + a, n, rng);
        let s2 = g2.adjoint() * &g2;
        let t = g1.adjoint() * &g1 + &s2;
        let Some(chol) = t.cholesky() else {
            continue;
        };
        let root = hermitian_sqrt(&s2);
        // Y = L^{-1} S₂^{1/2}
        let Some(y) = chol.l().solve_lower_triangular(&root) else {
            continue;
        };
        let m = g3 * y.adjoint();
        let svd = m.svd(false, false);
        let mut ev: Vec<f64> = svd.singular_values.iter().map(|s| s * s).collect();
        ev.sort_by(f64::total_cmp);
        return Ok(ev);
    }
    Err(Error::NumericalSingularity("S₁ + S₂ not positive definite after 10 draws".into()))
}
