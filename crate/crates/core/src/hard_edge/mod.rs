//! The hard-edge scaled kernel K_hard^r and experiments on its large-argument
//! behaviour. The limit depends on r and ν only.

mod experiments;
mod kernel;

pub use experiments::{
    bulk_experiment, charpoly_hard_sequence, gauge_h, phase, rho2_tail_comparison, rho2_truncated_tail,
    scaled_finite_kernel, tail_diagonal, tail_experiment, BulkPoint, Rho2Comparison, TailReport, TailWindow,
};
pub use kernel::{
    bessel_density, charpoly_hard_limit, k_hard, k_hard_cd, HardEdgeParams, HardKernel, HardKernelEval,
    HardKernelMethod,
};
