//! Bessel J_ν: the 0F1 series for small arguments, Bessel's integral for
//! large ones, where the series cancels.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quad::GaussLegendre;
use crate::specfun::gamma::rgamma;
use crate::specfun::hyper::hyp0f;

const SERIES_MAX: f64 = 8.0;

/// J_ν(x) = (x/2)^ν/Γ(ν+1) · 0F1(; ν+1; -x²/4), with J_{-n} = (-1)^n J_n.
pub fn bessel_j(nu: f64, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::Domain(format!("bessel_j needs x ≥ 0, got {x}")));
    }
    if nu < 0.0 && nu.fract() == 0.0 {
        let n = -nu;
        let sign = if (n as i64) % 2 == 0 { 1.0 } else { -1.0 };
        return Ok(sign * bessel_j(n, x)?);
    }
    if x == 0.0 {
        return Ok(if nu == 0.0 { 1.0 } else if nu > 0.0 { 0.0 } else { f64::INFINITY });
    }
    if x > SERIES_MAX && nu >= 0.0 {
        return Ok(bessel_integral(nu, x));
    }
    let pre = (0.5 * x).powf(nu) * rgamma(nu + 1.0);
    Ok(pre * hyp0f(&[nu + 1.0], -0.25 * x * x)?)
}

/// (1/π)∫_0^π cos(ντ − x sin τ) dτ − (sin νπ/π)∫_0^∞ e^{−x sinh t − νt} dt.
fn bessel_integral(nu: f64, x: f64) -> f64 {
    let h = |tau: f64| (nu * tau - x * tau.sin()).cos();
    if nu.fract() == 0.0 {
        // periodic integrand: the trapezoid rule converges geometrically
        let m = (x + nu) as usize + 40;
        let step = PI / m as f64;
        let inner: f64 = (1..m).map(|k| h(k as f64 * step)).sum();
        return (inner + 0.5 * (h(0.0) + h(PI))) * step / PI;
    }
    let rule = GaussLegendre::get(20);
    let first: f64 = rule.composite(0.0, PI, (x / 4.0) as usize + 2).iter().map(|&(t, w)| w * h(t)).sum();
    // e^{−x sinh t} < 1e-18 beyond this
    let t_max = (42.0 / x).asinh();
    let second: f64 =
        rule.composite(0.0, t_max, 4).iter().map(|&(t, w)| w * (-x * t.sinh() - nu * t).exp()).sum();
    (first - (nu * PI).sin() * second) / PI
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_at_zero() {
        assert_eq!(bessel_j(0.0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(1.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn j0_at_two() {
        assert!((bessel_j(0.0, 2.0).unwrap() - 0.223_890_779_141_235_7).abs() < 1e-15);
    }

    #[test]
    fn integral_matches_series_at_switch() {
        for nu in [0.0, 1.0, 2.0, 0.5, 2.3] {
            let a = bessel_integral(nu, SERIES_MAX);
            let pre = (0.5 * SERIES_MAX).powf(nu) * rgamma(nu + 1.0);
            let b = pre * hyp0f(&[nu + 1.0], -0.25 * SERIES_MAX * SERIES_MAX).unwrap();
            assert!((a - b).abs() < 1e-13, "ν={nu}: {a} vs {b}");
        }
    }

    #[test]
    fn large_argument_values() {
        // J_{1/2}(x) = sqrt(2/(πx)) sin x
        for x in [12.0, 40.0, 300.0] {
            let e = (2.0 / (PI * x)).sqrt() * f64::sin(x);
            assert!((bessel_j(0.5, x).unwrap() - e).abs() < 1e-14, "{x}");
        }
        // J_0 at its 10th zero
        assert!(bessel_j(0.0, 30.634_606_468_431_975).unwrap().abs() < 1e-14);
    }

    #[test]
    fn negative_integer_order() {
        let a = bessel_j(-1.0, 1.3).unwrap();
        let b = bessel_j(1.0, 1.3).unwrap();
        assert!((a + b).abs() < 1e-16);
    }

    #[test]
    fn recurrence_and_half_order() {
        // J_{ν-1} + J_{ν+1} = (2ν/x) J_ν
        let x = 3.7;
        for nu in [0.5, 1.0, 2.3] {
            let l = bessel_j(nu - 1.0, x).unwrap() + bessel_j(nu + 1.0, x).unwrap();
            let r = 2.0 * nu / x * bessel_j(nu, x).unwrap();
            assert!((l - r).abs() < 1e-14);
        }
        // J_{1/2}(x) = sqrt(2/(πx)) sin x
        let e = (2.0 / (std::f64::consts::PI * x)).sqrt() * x.sin();
        assert!((bessel_j(0.5, x).unwrap() - e).abs() < 1e-15);
    }
}
