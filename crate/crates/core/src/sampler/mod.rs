//! Monte Carlo sampling of the product ensemble.

mod cauchy;
mod ecdf;
mod matrix;
mod rng;
mod spectrum;

pub use cauchy::sample_cauchy_triple;
pub use ecdf::{empirical_cdf, kolmogorov_survival, ks_two_sample, sup_distance, EmpiricalCdf, TabulatedCdf};
pub use matrix::{hermitian_sqrt, sample_ginibre, sample_haar_unitary, sample_induced_square, ComplexMatrix};
pub use rng::RngStream;
pub use spectrum::{mc_charpoly, rescale, sample_product_spectrum, sample_spectra, Scaling, SpectrumSample};
