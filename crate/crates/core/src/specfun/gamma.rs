//! Complex log-gamma on the principal branch.
//!
//! Lanczos approximation (g = 7, nine terms) on Re z ≥ 1/2 and the
//! reflection formula elsewhere. The log-sine in the reflection is written
//! so that it stays continuous in the open upper half-plane, which keeps
//! the result on the principal branch; the lower half-plane follows by
//! conjugation.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const G: f64 = 7.0;
const COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
const LN_PI: f64 = 1.144_729_885_849_400_2;

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

/// Principal-branch ln Γ(z). Fails at the poles z = 0, -1, -2, ...
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 && is_nonpositive_integer(z.re) {
        return Err(Error::Pole(z.re));
    }
    Ok(ln_gamma_unchecked(z))
}

/// ln Γ(z) without the pole check, for contour integrands that never touch a pole.
pub fn ln_gamma_unchecked(z: Complex64) -> Complex64 {
    if z.im < 0.0 {
        return ln_gamma_upper(z.conj()).conj();
    }
    ln_gamma_upper(z)
}

fn ln_gamma_upper(z: Complex64) -> Complex64 {
    if z.re >= 0.5 {
        lanczos(z)
    } else {
        // ln sin(πz) = -iπz + iπ/2 - ln 2 + Log(1 - e^{2πiz}), continuous for Im z ≥ 0
        let i = Complex64::i();
        let e = (2.0 * PI * i * z).exp();
        let ln_sin = -i * PI * z + i * (PI / 2.0) - std::f64::consts::LN_2 + (1.0 - e).ln();
        LN_PI - ln_sin - lanczos(1.0 - z)
    }
}

fn lanczos(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut a = Complex64::new(COEF[0], 0.0);
    for (k, c) in COEF.iter().enumerate().skip(1) {
        a += c / (z + k as f64);
    }
    let t = z + G + 0.5;
    LN_SQRT_2PI + (z + 0.5) * t.ln() - t + a.ln()
}

/// ln |Γ(x)| and the sign of Γ(x) for real x.
pub fn ln_gamma_signed(x: f64) -> Result<(f64, f64)> {
    if is_nonpositive_integer(x) {
        return Err(Error::Pole(x));
    }
    if x >= 0.5 {
        return Ok((lanczos(Complex64::new(x, 0.0)).re, 1.0));
    }
    let s = (PI * x).sin();
    let (lg, sg) = ln_gamma_signed(1.0 - x)?;
    Ok((LN_PI - s.abs().ln() - lg, s.signum() * sg))
}

/// Γ(x) for real x, as a plain value.
pub fn gamma(x: f64) -> Result<f64> {
    let (l, s) = ln_gamma_signed(x)?;
    Ok(s * l.exp())
}

/// 1/Γ(x), zero at the poles.
pub fn rgamma(x: f64) -> f64 {
    match ln_gamma_signed(x) {
        Ok((l, s)) => s * (-l).exp(),
        Err(_) => 0.0,
    }
}
