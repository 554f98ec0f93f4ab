//! Fixtures shared by the benchmarks.

use wishprod_core::hard_edge::{HardEdgeParams, HardKernel};
use wishprod_core::specfun::{ContourSpec, MeijerSpec};
use wishprod_core::EnsembleParams;

/// G^{2,0}_{0,2}(x | 0, 1) with its automatic contour.
pub fn meijer_fixture() -> (MeijerSpec, ContourSpec) {
    let spec = MeijerSpec::new(2, 0, vec![], vec![0.0, 1.0]).expect("valid spec");
    let contour = ContourSpec::auto(&spec, 1e-12).expect("contour");
    (spec, contour)
}

pub fn hard_kernel(nu: &[u32]) -> HardKernel {
    HardKernel::new(&HardEdgeParams::new(nu.to_vec()).expect("valid ν")).expect("kernel")
}

pub fn ensemble(n: usize, nu: &[u32], mu: &[u32]) -> EnsembleParams {
    EnsembleParams::new(n, nu.to_vec(), mu.to_vec()).expect("valid ensemble")
}
