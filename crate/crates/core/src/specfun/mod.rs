//! Scalar special functions: complex log-gamma, pFq series, Meijer G by
//! Mellin–Barnes quadrature, Bessel J and two large-argument asymptotic forms.

mod asymptotic;
mod bessel;
pub mod gamma;
pub mod hyper;
pub mod meijer;

use num_complex::Complex64;

pub use asymptotic::{asymp_g10_r2, asymp_g20_r2};
pub use bessel::bessel_j;
pub use gamma::{gamma, ln_gamma, ln_gamma_signed, rgamma};
pub use hyper::{hyp0f, pfq, pfq_delta, HypSeriesParams};
pub use meijer::{
    meijer_g, meijer_g_mellin_power, ContourPath, ContourSpec, MeijerSpec, MellinBarnes, QuadRule,
};

/// Complex values used for contour variables.
pub type ComplexValue = Complex64;
