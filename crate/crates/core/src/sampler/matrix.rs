//! Gaussian matrix factors: Ginibre, Haar unitary and induced square matrices.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::sampler::rng::RngStream;

pub type ComplexMatrix = DMatrix<Complex64>;

/// rows × cols matrix with i.i.d. entries of density e^{-|z|²}/π.
pub fn sample_ginibre(rows: usize, cols: usize, rng: &mut RngStream) -> ComplexMatrix {
    let sd = std::f64::consts::FRAC_1_SQRT_2;
    let mut m = ComplexMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            let re = sd * rng.standard_normal();
            let im = sd * rng.standard_normal();
            m[(i, j)] = Complex64::new(re, im);
        }
    }
    m
}

/// Haar-distributed n × n unitary: QR of a Ginibre draw with the phases of diag R removed.
pub fn sample_haar_unitary(n: usize, rng: &mut RngStream) -> ComplexMatrix {
    let qr = sample_ginibre(n, n, rng).qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Positive square root of a Hermitian positive semidefinite matrix.
pub fn hermitian_sqrt(m: &ComplexMatrix) -> ComplexMatrix {
    let eig = m.clone().symmetric_eigen();
    let v = &eig.eigenvectors;
    let mut scaled = v.clone();
    for (j, lam) in eig.eigenvalues.iter().enumerate() {
        let s = lam.max(0.0).sqrt();
        for i in 0..scaled.nrows() {
            scaled[(i, j)] *= s;
        }
    }
    &scaled * v.adjoint()
}

/// N × N matrix with density ∝ det(M†M)^{n-N} e^{-Tr M†M}, realized as (H†H)^{1/2}U.
pub fn sample_induced_square(n: usize, big_n: usize, rng: &mut RngStream) -> ComplexMatrix {
    assert!(n >= big_n, "induced factor needs n ≥ N");
    let h = sample_ginibre(n, big_n, rng);
    let root = hermitian_sqrt(&(h.adjoint() * &h));
    let u = sample_haar_unitary(big_n, rng);
    root * u
}
