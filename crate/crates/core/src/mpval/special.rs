//! Bernoulli numbers, Hurwitz zeta and digamma at rational arguments.

use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::elementary::ln;
use super::{BigFloat, MpError, GUARD_BITS};

fn tangent_cache() -> &'static Mutex<Vec<BigInt>> {
    static CACHE: OnceLock<Mutex<Vec<BigInt>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(Vec::new()))
}

/// Tangent numbers `T_1..=T_n` (Brent-Harvey in-place recurrence).
fn tangent_numbers(n: usize) -> Vec<BigInt> {
    let mut t = vec![BigInt::zero(); n + 1];
    if n == 0 {
        return t;
    }
    t[1] = BigInt::one();
    for k in 2..=n {
        t[k] = &t[k - 1] * (k - 1);
    }
    for k in 2..=n {
        for j in k..=n {
            t[j] = &t[j - 1] * (j - k) + &t[j] * (j - k + 2);
        }
    }
    t
}

/// `B_n` with the convention `B_1 = -1/2`.
pub fn bernoulli(n: usize) -> BigRational {
    match n {
        0 => return BigRational::one(),
        1 => return BigRational::new(BigInt::from(-1), BigInt::from(2)),
        _ if n % 2 == 1 => return BigRational::zero(),
        _ => {}
    }
    let k = n / 2;
    let tk = {
        let mut cache = tangent_cache().lock().expect("bernoulli cache poisoned");
        if cache.len() <= k {
            let want = (2 * k).max(32);
            *cache = tangent_numbers(want);
        }
        cache[k].clone()
    };
    let four_k = BigInt::one() << (2 * k);
    let num = tk * BigInt::from(2 * k);
    let den = &four_k * (&four_k - 1u32);
    let r = BigRational::new(num, den);
    if k % 2 == 1 {
        r
    } else {
        -r
    }
}

/// Coefficient `c` with `zeta(k) = c * pi^k` for even `k >= 2`.
pub fn zeta_even_rational(k: u32) -> BigRational {
    assert!(k >= 2 && k % 2 == 0);
    let b = bernoulli(k as usize);
    let mut fact = BigInt::one();
    for i in 2..=k {
        fact *= i;
    }
    let r = b * BigRational::new(BigInt::one() << (k as usize - 1), fact);
    if (k / 2) % 2 == 0 {
        -r
    } else {
        r
    }
}

/// Direct-sum cutoff `N` and correction count `M` for Euler-Maclaurin
/// summation of `sum (a+j)^{-s}` to `wp` bits.
pub fn em_params(wp: u32, s: u32) -> (u64, u64) {
    let target = -(wp as f64) * std::f64::consts::LN_2 - 8.0;
    let two_pi = 2.0 * std::f64::consts::PI;
    let s = s as f64;
    let mut n = ((wp as f64) * 0.12).ceil().max(8.0);
    loop {
        // log of |B_2m/(2m)! (s)_{2m-1} N^{1-s-2m}|, tracked by term ratios
        let mut log_t = (2.0f64).ln() - 2.0 * two_pi.ln() + s.ln() - (s + 1.0) * n.ln();
        let mut m = 1.0f64;
        while m < 4.0 * n {
            if log_t < target {
                return (n as u64, m as u64);
            }
            let ratio = ((s + 2.0 * m - 1.0) * (s + 2.0 * m)) / (two_pi * two_pi * n * n);
            if ratio >= 1.0 {
                break;
            }
            log_t += ratio.ln();
            m += 1.0;
        }
        n = (n * 1.5).ceil();
    }
}

fn check_shift(a: &BigRational) -> Result<(), MpError> {
    if !a.is_positive() {
        return Err(MpError::Domain(format!("shift must be positive, got {a}")));
    }
    Ok(())
}

/// `zeta(s, a) = sum_{j>=0} (a+j)^{-s}` for integer `s >= 2` and rational `a > 0`.
pub fn hurwitz_zeta(s: u32, a: &BigRational, prec: u32) -> Result<BigFloat, MpError> {
    if s < 2 {
        return Err(MpError::Domain(format!("hurwitz zeta needs s >= 2, got {s}")));
    }
    check_shift(a)?;
    Ok(hurwitz_zeta_em(s, a, prec))
}

pub(crate) fn hurwitz_zeta_em(s: u32, a: &BigRational, prec: u32) -> BigFloat {
    let wp = prec + GUARD_BITS + 16;
    let (n, m) = em_params(wp, s);
    let p = a.numer();
    let q = a.denom();
    let qs = q.pow(s);
    let mut sum = BigFloat::zero(wp);
    for j in 0..n {
        let d: BigInt = p + q * BigInt::from(j);
        sum = sum.add(&BigFloat::div_ints(&qs, &d.pow(s), wp));
    }
    let x = BigFloat::from_ratio(&(a + BigRational::from_integer(BigInt::from(n))), wp);
    let inv = BigFloat::one(wp).div_prec(&x, wp);
    let inv2 = inv.mul(&inv);
    let x_neg_s = inv.powi(s as u64);
    // (a+N)^{1-s}/(s-1) + (a+N)^{-s}/2
    sum = sum.add(&x_neg_s.mul(&x).div_int(s as i64 - 1));
    sum = sum.add(&x_neg_s.mul_pow2(-1));
    // sum_m B_2m/(2m)! (s)_{2m-1} (a+N)^{-s-2m+1}
    let mut r = BigRational::new(BigInt::from(s), BigInt::from(2));
    let mut pw = x_neg_s.mul(&inv);
    for k in 1..=m {
        let c = bernoulli(2 * k as usize) * &r;
        sum = sum.add(&BigFloat::from_ratio(&c, wp).mul(&pw));
        let s2k = BigInt::from(s as u64 + 2 * k);
        r = r * BigRational::new(
            (&s2k - 1u32) * &s2k,
            BigInt::from((2 * k + 1) * (2 * k + 2)),
        );
        pw = pw.mul(&inv2);
    }
    sum.with_prec(prec)
}

/// Digamma at a positive rational argument.
pub fn digamma(a: &BigRational, prec: u32) -> Result<BigFloat, MpError> {
    check_shift(a)?;
    let wp = prec + GUARD_BITS + 16;
    let (n, m) = em_params(wp, 1);
    let p = a.numer();
    let q = a.denom();
    let mut acc = BigFloat::zero(wp);
    for j in 0..n {
        let d: BigInt = p + q * BigInt::from(j);
        acc = acc.add(&BigFloat::div_ints(q, &d, wp));
    }
    let x = BigFloat::from_ratio(&(a + BigRational::from_integer(BigInt::from(n))), wp);
    let inv = BigFloat::one(wp).div_prec(&x, wp);
    let inv2 = inv.mul(&inv);
    let mut psi = ln(&x, wp)?.sub(&inv.mul_pow2(-1));
    let mut pw = inv2.clone();
    for k in 1..=m {
        let b = bernoulli(2 * k as usize);
        let c = b / BigRational::from_integer(BigInt::from(2 * k));
        psi = psi.sub(&BigFloat::from_ratio(&c, wp).mul(&pw));
        pw = pw.mul(&inv2);
    }
    Ok(psi.sub(&acc).with_prec(prec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpval::constants::{gamma, ln2, pi};

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn bernoulli_small() {
        assert_eq!(bernoulli(2), rat(1, 6));
        assert_eq!(bernoulli(4), rat(-1, 30));
        assert_eq!(bernoulli(6), rat(1, 42));
        assert_eq!(bernoulli(12), rat(-691, 2730));
        assert_eq!(bernoulli(7), rat(0, 1));
    }

    #[test]
    fn zeta_even_coefficients() {
        assert_eq!(zeta_even_rational(2), rat(1, 6));
        assert_eq!(zeta_even_rational(4), rat(1, 90));
        assert_eq!(zeta_even_rational(6), rat(1, 945));
    }

    #[test]
    fn hurwitz_half_matches_zeta() {
        // zeta(2, 1/2) = 3 zeta(2) = pi^2/2
        let h = hurwitz_zeta(2, &rat(1, 2), 200).unwrap();
        let p = pi(200);
        let want = p.mul(&p).mul_pow2(-1);
        assert!(h.sub(&want).abs_lt_pow2(-195));
    }

    #[test]
    fn digamma_known_values() {
        let g = gamma(200);
        let d1 = digamma(&rat(1, 1), 200).unwrap();
        assert!(d1.add(&g).abs_lt_pow2(-195));
        // psi(1/2) = -gamma - 2 ln 2
        let dh = digamma(&rat(1, 2), 200).unwrap();
        let want = g.add(&ln2(200).mul_pow2(1)).neg();
        assert!(dh.sub(&want).abs_lt_pow2(-195));
    }

    #[test]
    fn rejects_bad_shift() {
        assert!(digamma(&rat(0, 1), 64).is_err());
        assert!(hurwitz_zeta(2, &rat(-1, 2), 64).is_err());
        assert!(hurwitz_zeta(1, &rat(1, 1), 64).is_err());
    }
}
