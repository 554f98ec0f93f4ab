//! Exact moment sequences: Fuss–Catalan numbers and the r = s transformed moments.

use num::{BigInt, BigRational, BigUint, One, Zero};

/// binom((r+1)p, p) / (rp + 1).
pub fn fuss_catalan(r: usize, p: usize) -> BigUint {
    let n = (r + 1) * p;
    let mut b = BigUint::one();
    for i in 0..p {
        b = b * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    b / BigUint::from(r * p + 1)
}

/// Checks m_p = Σ_{q_1+…+q_{r+1} = p-1} m_{q_1}···m_{q_{r+1}} for p ≤ p_max.
pub fn fuss_catalan_recurrence_check(r: usize, p_max: usize) -> bool {
    let m: Vec<BigUint> = (0..=p_max).map(|p| fuss_catalan(r, p)).collect();
    if m[0] != BigUint::one() {
        return false;
    }
    // (r+1)-fold convolution power of the truncated sequence
    let mut power = vec![BigUint::zero(); p_max];
    power[0] = BigUint::one();
    for _ in 0..=r {
        let mut next = vec![BigUint::zero(); p_max];
        for (i, a) in power.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in m.iter().enumerate().take(p_max - i) {
                next[i + j] += a * b;
            }
        }
        power = next;
    }
    (1..=p_max).all(|p| power[p - 1] == m[p])
}

/// Exact sequence m_0..m_{p_max} as a moment sequence value.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSequence {
    pub r: usize,
    pub values: Vec<BigRational>,
}

impl MomentSequence {
    pub fn fuss_catalan(r: usize, p_max: usize) -> Self {
        let values = (0..=p_max)
            .map(|p| BigRational::from_integer(BigInt::from(fuss_catalan(r, p))))
            .collect();
        Self { r, values }
    }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Coefficients of (1 - v)^β for rational β, up to v^len-1.
fn binomial_series(beta: &BigRational, len: usize) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(len);
    let mut c = BigRational::one();
    for k in 0..len {
        out.push(c.clone());
        // c_{k+1} = c_k · (β - k)/(k + 1) · (-1)
        c = -c * (beta - BigRational::from_integer(BigInt::from(k))) / rat(k as i64 + 1, 1);
    }
    out
}

fn series_mul(a: &[BigRational], b: &[BigRational], len: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

fn series_inv(a: &[BigRational], len: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); len];
    out[0] = a[0].recip();
    for k in 1..len {
        let mut acc = BigRational::zero();
        for j in 1..=k.min(a.len() - 1) {
            acc += &a[j] * &out[k - j];
        }
        out[k] = -acc * &out[0];
    }
    out
}

/// Coefficient of (1-z)^{p-1} in z^{α-1}/(1 + z^α), α = 1/(r+1): the p-th moment
/// of the r = s density after λ = 1/(1+x).
pub fn moments_rr(r: usize, p: usize) -> BigRational {
    assert!(p >= 1, "moments start at p = 1");
    let len = p;
    let alpha = rat(1, r as i64 + 1);
    let num = binomial_series(&(alpha.clone() - BigRational::one()), len);
    let mut den = binomial_series(&alpha, len);
    den[0] += BigRational::one();
    let q = series_mul(&num, &series_inv(&den, len), len);
    q[p - 1].clone()
}
