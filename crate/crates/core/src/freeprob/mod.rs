//! Global (large-N) spectral densities from free probability.

mod density;
mod moments;
mod stieltjes;

pub use density::{
    density_rr_closed, density_s0_parametric, global_density, mass_below, support_edge_s0,
    tail_small_x, total_mass, ParametricPoint,
};
pub use moments::{fuss_catalan, fuss_catalan_recurrence_check, moments_rr, MomentSequence};
pub use stieltjes::{s_transform, solve_stieltjes, upsilon, StieltjesValue};
