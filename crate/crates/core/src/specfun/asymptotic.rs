//! Leading large-argument forms of G^{1,0}_{0,3} and G^{2,0}_{0,3} with all
//! lower parameters zero. The second one is a conjectured form and is only
//! compared against exact values at the level of sign and envelope.

use std::f64::consts::PI;

/// G^{1,0}_{0,3}(u | 0,0,0) ~ e^{3u^{1/3}cos(π/3)} cos(3u^{1/3}sin(π/3) - π/3) / (π√3 u^{1/3}).
pub fn asymp_g10_r2(u: f64) -> f64 {
    let w = u.cbrt();
    let sin3 = (PI / 3.0).sin();
    (3.0 * w * (PI / 3.0).cos()).exp() * (3.0 * w * sin3 - PI / 3.0).cos()
        / (PI * 3f64.sqrt() * w)
}

/// G^{2,0}_{0,3}(u | 0,0,0) ~ 2 e^{-3u^{1/3}cos(π/3)} cos(3u^{1/3}sin(π/3) - π/6) / (√3 u^{1/3}).
pub fn asymp_g20_r2(u: f64) -> f64 {
    let w = u.cbrt();
    let sin3 = (PI / 3.0).sin();
    2.0 * (-3.0 * w * (PI / 3.0).cos()).exp() * (3.0 * w * sin3 - PI / 6.0).cos()
        / (3f64.sqrt() * w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::meijer::{meijer_g, ContourSpec, MeijerSpec};

    #[test]
    fn direct_substitution() {
        let e = (30.0 * (PI / 3.0).cos()).exp() * (30.0 * (PI / 3.0).sin() - PI / 3.0).cos()
            / (PI * 3f64.sqrt() * 10.0);
        assert!((asymp_g10_r2(1000.0) - e).abs() < 1e-12 * e.abs());
    }

    #[test]
    fn g10_ratio_near_one() {
        let spec = MeijerSpec::new(1, 0, vec![], vec![0.0; 3]).unwrap();
        let c = ContourSpec::auto_for_range(&spec, 1.0, 1e3, 1e-13).unwrap();
        let ratio = meijer_g(&spec, &c, 500.0).unwrap() / asymp_g10_r2(500.0);
        assert!((ratio - 1.0).abs() < 0.1, "ratio {ratio}");
    }

    #[test]
    fn g20_sign_and_envelope() {
        let spec = MeijerSpec::new(2, 0, vec![], vec![0.0; 3]).unwrap();
        let c = ContourSpec::auto_for_range(&spec, 1.0, 1e3, 1e-13).unwrap();
        let exact = meijer_g(&spec, &c, 500.0).unwrap();
        assert_eq!(exact.signum(), asymp_g20_r2(500.0).signum());
        // envelope: peak |value| over one oscillation period around u = 500
        let period = 2.0 * PI / (3f64.sqrt() * 500f64.powf(-2.0 / 3.0));
        let (mut pe, mut pa) = (0.0f64, 0.0f64);
        for i in 0..60 {
            let u = 500.0 + period * (i as f64 / 60.0 - 0.5);
            let env = (1.5 * u.cbrt()).exp();
            pe = pe.max(meijer_g(&spec, &c, u).unwrap().abs() * env);
            pa = pa.max(asymp_g20_r2(u).abs() * env);
        }
        assert!((pe / pa - 1.0).abs() < 0.15, "{pe} vs {pa}");
    }
}
