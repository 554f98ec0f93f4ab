//! Exact finite-N correlations of the product ensemble.

mod biorth;
mod charpoly;
mod contour;
mod pdf;

pub use biorth::{
    c_l, kernel_n, ln_abs_c_l, p_coefficients, p_n, q_l, q_meijer_spec, BiorthSystem, Gram, KernelEval,
    KernelMethod, ROUNDOFF,
};
pub use charpoly::{charpoly_exact, charpoly_normalized};
pub use contour::kernel_n_contour;
pub use pdf::{box_entry_spec, normalization_constant, pdf_box, rho_k, BoxDensity, BoxForm, CorrelationResult};
