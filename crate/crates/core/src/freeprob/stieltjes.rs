//! The Stieltjes functional equation and its physical root.
//!
//! With ζ = -1/z and v = 1 + zG(z) the equation for the product ensemble
//! reads v^{s+1} = ζ (1 - v)^{r+1}. All roots are found from a companion
//! matrix; the physical one is followed by continuation from z = -2, where
//! it is the unique root in (0, 1), along a path through the upper
//! half-plane to the target point.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// S-transform (-z)^s / (1+z)^r of the product ensemble.
pub fn s_transform(r: usize, s: usize, z: f64) -> Result<f64> {
    if z == -1.0 {
        return Err(Error::PoleAtMinusOne);
    }
    Ok((-z).powi(s as i32) / (1.0 + z).powi(r as i32))
}

/// One evaluation of the resolvent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StieltjesValue {
    pub z: Complex64,
    pub g: Complex64,
    /// Position of the selected root among the companion-matrix roots.
    pub root_index: usize,
    /// |v^{s+1} - ζ(1-v)^{r+1}| at the returned root.
    pub residual: f64,
}

impl StieltjesValue {
    /// w = -zG(z), the variable of the polynomial form.
    pub fn w(&self) -> Complex64 {
        -self.z * self.g
    }
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Coefficients (ascending) of v^{s+1} - ζ(1-v)^{r+1}.
fn coefficients(r: usize, s: usize, zeta: Complex64) -> Vec<Complex64> {
    let deg = r.max(s) + 1;
    let mut c = vec![Complex64::new(0.0, 0.0); deg + 1];
    c[s + 1] += 1.0;
    for k in 0..=r + 1 {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        c[k] -= zeta * sign * binom(r + 1, k);
    }
    while c.len() > 1 && c.last().map_or(false, |v| v.norm() < 1e-14) {
        c.pop();
    }
    c
}

fn residual(r: usize, s: usize, zeta: Complex64, v: Complex64) -> Complex64 {
    v.powu(s as u32 + 1) - zeta * (1.0 - v).powu(r as u32 + 1)
}

fn derivative(r: usize, s: usize, zeta: Complex64, v: Complex64) -> Complex64 {
    (s as f64 + 1.0) * v.powu(s as u32)
        + zeta * (r as f64 + 1.0) * (1.0 - v).powu(r as u32)
}

/// All roots of the polynomial in v.
pub(crate) fn roots(r: usize, s: usize, zeta: Complex64) -> Vec<Complex64> {
    let c = coefficients(r, s, zeta);
    let d = c.len() - 1;
    if d == 0 {
        return vec![];
    }
    let lead = c[d];
    let mut m = DMatrix::<Complex64>::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..d {
        m[(i, d - 1)] = -c[i] / lead;
    }
    let Some(ev) = m.schur().eigenvalues() else {
        return vec![];
    };
    ev.iter()
        .map(|v| {
            // one Newton step sharpens the eigenvalue
            let f = residual(r, s, zeta, *v);
            let df = derivative(r, s, zeta, *v);
            if df.norm() > 1e-300 && (f / df).norm() < 1e-3 * (1.0 + v.norm()) {
                v - f / df
            } else {
                *v
            }
        })
        .collect()
}

fn polish(r: usize, s: usize, zeta: Complex64, mut v: Complex64) -> Complex64 {
    for _ in 0..8 {
        let f = residual(r, s, zeta, v);
        let df = derivative(r, s, zeta, v);
        if df.norm() == 0.0 {
            break;
        }
        let dv = f / df;
        v -= dv;
        if dv.norm() <= 1e-17 * (1.0 + v.norm()) {
            break;
        }
    }
    v
}

#[derive(Clone, Copy)]
enum Segment {
    Line(Complex64, Complex64),
    /// Re z fixed, Im z geometric from `from` to `to`.
    LogIm { re: f64, from: f64, to: f64 },
}

impl Segment {
    fn at(&self, tau: f64) -> Complex64 {
        match *self {
            Segment::Line(a, b) => a + (b - a) * tau,
            Segment::LogIm { re, from, to } => {
                Complex64::new(re, from * (to / from).powf(tau))
            }
        }
    }
}

fn nearest(candidates: &[Complex64], v: Complex64) -> (usize, f64, f64) {
    let mut best = (usize::MAX, f64::INFINITY, f64::INFINITY);
    for (i, c) in candidates.iter().enumerate() {
        let d = (c - v).norm();
        if d < best.1 {
            best = (i, d, best.1);
        } else if d < best.2 {
            best.2 = d;
        }
    }
    best
}

/// Physical root v and its index at the target z (Im z > 0).
fn track(r: usize, s: usize, target: Complex64) -> Result<(Complex64, usize)> {
    let fail = || Error::NoPhysicalRoot { re: target.re, im: target.im };
    let z0 = Complex64::new(-2.0, 0.0);
    let zeta0 = -1.0 / z0;
    let start = roots(r, s, zeta0);
    let mut v = start
        .iter()
        .copied()
        .filter(|v| v.im.abs() < 1e-9 && v.re > 0.0 && v.re < 1.0)
        .map(|v| Complex64::new(v.re, 0.0))
        .next()
        .ok_or_else(fail)?;
    let y_top = 1f64.max(target.re.abs()).max(target.im);
    let mut segments = vec![
        Segment::Line(z0, Complex64::new(-2.0, y_top)),
        Segment::Line(Complex64::new(-2.0, y_top), Complex64::new(target.re, y_top)),
    ];
    if target.im < y_top {
        segments.push(Segment::LogIm { re: target.re, from: y_top, to: target.im });
    }
    let mut index = 0;
    for seg in segments {
        let mut tau: f64 = 0.0;
        let mut step: f64 = 0.125;
        while tau < 1.0 {
            let next = (tau + step).min(1.0);
            let zeta = -1.0 / seg.at(next);
            let cand = roots(r, s, zeta);
            let (i, d1, d2) = nearest(&cand, v);
            if i != usize::MAX && d1 < 0.25 * d2 {
                v = cand[i];
                index = i;
                tau = next;
                step = (step * 1.5).min(0.25);
            } else {
                step *= 0.5;
                if step < 1e-12 {
                    return Err(fail());
                }
            }
        }
    }
    Ok((v, index))
}

/// Resolvent G(z) of the global density of the (r, s) product.
pub fn solve_stieltjes(r: usize, s: usize, z: Complex64) -> Result<StieltjesValue> {
    if r + s == 0 {
        return Err(Error::InvalidParams("need r + s ≥ 1".into()));
    }
    if z.im < 0.0 {
        let v = solve_stieltjes(r, s, z.conj())?;
        return Ok(StieltjesValue { z, g: v.g.conj(), ..v });
    }
    let (v, index) = if z.im == 0.0 {
        if z.re >= 0.0 {
            return Err(Error::Domain(format!("z = {} lies on the support", z.re)));
        }
        // unique root in (0, 1) for ζ > 0
        let zeta = Complex64::new(-1.0 / z.re, 0.0);
        let cand = roots(r, s, zeta);
        let i = cand
            .iter()
            .position(|v| v.im.abs() < 1e-8 * (1.0 + v.norm()) && v.re > 0.0 && v.re < 1.0)
            .ok_or(Error::NoPhysicalRoot { re: z.re, im: z.im })?;
        (Complex64::new(cand[i].re, 0.0), i)
    } else {
        track(r, s, z)?
    };
    let zeta = -1.0 / z;
    let v = polish(r, s, zeta, v);
    let v = if z.im == 0.0 { Complex64::new(v.re, 0.0) } else { v };
    let g = (v - 1.0) / z;
    let res = residual(r, s, zeta, v).norm();
    if z.im > 0.0 && g.im <= 0.0 {
        return Err(Error::NoPhysicalRoot { re: z.re, im: z.im });
    }
    Ok(StieltjesValue { z, g, root_index: index, residual: res })
}

/// Υ(z) = -1 - G(1/z)/z.
pub fn upsilon(r: usize, s: usize, z: Complex64) -> Result<Complex64> {
    let g = solve_stieltjes(r, s, 1.0 / z)?.g;
    Ok(-1.0 - g / z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mp_resolvent(z: Complex64) -> Complex64 {
        // branch of sqrt chosen so that G ~ -1/z at infinity
        let root = (1.0 - 4.0 / z).sqrt();
        let g = (-1.0 + root) / 2.0;
        if (g * z + 1.0).norm() < 0.5 || z.norm() < 8.0 {
            g
        } else {
            (-1.0 - root) / 2.0
        }
    }

    #[test]
    fn s_transform_values() {
        assert!((s_transform(1, 0, 0.3).unwrap() - 1.0 / 1.3).abs() < 1e-15);
        assert!((s_transform(0, 1, 0.3).unwrap() + 0.3).abs() < 1e-15);
        assert!((s_transform(2, 1, 1.0).unwrap() + 0.25).abs() < 1e-15);
        assert_eq!(s_transform(1, 1, -1.0), Err(Error::PoleAtMinusOne));
    }

    #[test]
    fn marchenko_pastur_closed_form() {
        let g = solve_stieltjes(1, 0, Complex64::new(-1.0, 0.0)).unwrap().g;
        assert!((g.re - (-1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-14);
        for z in [Complex64::new(1.0, 0.5), Complex64::new(3.0, 0.01), Complex64::new(-4.0, 2.0)] {
            let v = solve_stieltjes(1, 0, z).unwrap();
            let e = mp_resolvent(z);
            assert!((v.g - e).norm() < 1e-12, "z={z}: {} vs {e}", v.g);
            assert!(v.residual < 1e-12);
        }
    }

    #[test]
    fn r_equals_s_closed_form() {
        // zG(-z) = 1 - 1/(1 + z^{1/(r+1)}) for z > 0
        for r in 1..4 {
            for z in [0.3, 2.0, 11.0] {
                let g = solve_stieltjes(r, r, Complex64::new(-z, 0.0)).unwrap().g.re;
                let e = (1.0 - 1.0 / (1.0 + z.powf(1.0 / (r as f64 + 1.0)))) / z;
                assert!((g - e).abs() < 1e-13, "r={r} z={z}");
            }
        }
    }

    #[test]
    fn large_negative_argument() {
        let z = Complex64::new(-1e6, 0.0);
        let g = solve_stieltjes(2, 0, z).unwrap().g.re;
        assert!((g * 1e6 - 1.0).abs() < 1e-5);
    }

    #[test]
    fn lower_half_plane_by_conjugation() {
        let a = solve_stieltjes(2, 1, Complex64::new(0.7, 0.3)).unwrap();
        let b = solve_stieltjes(2, 1, Complex64::new(0.7, -0.3)).unwrap();
        assert!((a.g - b.g.conj()).norm() < 1e-15);
    }

    #[test]
    fn support_point_is_rejected() {
        assert!(matches!(solve_stieltjes(1, 0, Complex64::new(1.0, 0.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn upsilon_inverse_for_wishart() {
        // Υ^{-1}(u) = u/(1+u)^2 for the Wishart case
        let ups = upsilon(1, 0, Complex64::new(-0.2, 0.0)).unwrap();
        let back = ups / ((1.0 + ups) * (1.0 + ups));
        assert!((back.re + 0.2).abs() < 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn herglotz_and_residual(r in 0usize..4, s in 0usize..4, re in -10.0f64..10.0, lim in -6.0f64..1.0) {
            prop_assume!(r + s >= 1);
            let z = Complex64::new(re, 10f64.powf(lim));
            let v = solve_stieltjes(r, s, z).unwrap();
            prop_assert!(v.g.im > 0.0);
            prop_assert!(v.residual < 1e-12);
        }

        #[test]
        fn inversion_symmetry(r in 0usize..4, s in 0usize..4, re in -5.0f64..5.0, im in 0.05f64..3.0) {
            prop_assume!(r + s >= 1);
            let z = Complex64::new(re, im);
            let g = solve_stieltjes(r, s, z).unwrap().g;
            let w = 1.0 / z;
            let gi = solve_stieltjes(s, r, w).unwrap().g;
            let mapped = -1.0 / z - gi / (z * z);
            prop_assert!((g - mapped).norm() < 1e-10 * (1.0 + g.norm()));
        }
    }
}
