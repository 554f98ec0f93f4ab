//! Eigenvalue statistics of products of complex Wishart matrices and their
//! inverses, X = G_r···G_1 (G̃_s···G̃_1)^{-1}.
//!
//! * [`specfun`]: log-gamma, pFq, Meijer G (Mellin–Barnes), Bessel J.
//! * [`freeprob`]: global densities from the Stieltjes functional equation.
//! * [`sampler`]: Monte Carlo draws of the spectrum and of the averaged
//!   generalized characteristic polynomial.
//! * [`finite_kernel`]: the finite-N biorthogonal system and kernel.
//! * [`hard_edge`]: the hard-edge scaled kernel and related experiments.
//! * [`acceptance`]: the registry of end-to-end checks used by the CLI and tests.

pub mod acceptance;
pub mod error;
pub mod finite_kernel;
pub mod freeprob;
pub mod hard_edge;
pub mod params;
pub mod quad;
pub mod sampler;
pub mod specfun;

pub use error::{Error, Result};
pub use params::EnsembleParams;
