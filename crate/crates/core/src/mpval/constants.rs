//! Fundamental constants, each with a primary and an independent check route.
//!
//! Primary routes feed the rest of the crate and are cached per key at the
//! highest precision computed so far. The `*_alt` routes share no series with
//! their primary counterpart and exist for cross-validation.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::elementary::ln;
use super::special::{bernoulli, em_params, hurwitz_zeta_em};
use super::{BigFloat, GUARD_BITS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum ConstKey {
    Pi,
    Ln2,
    Gamma,
    Catalan,
    Zeta(u32),
    LogInt(u64),
}

fn cache() -> &'static Mutex<HashMap<ConstKey, BigFloat>> {
    static CACHE: OnceLock<Mutex<HashMap<ConstKey, BigFloat>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn cached(key: ConstKey, prec: u32, compute: impl FnOnce(u32) -> BigFloat) -> BigFloat {
    if let Some(v) = cache().lock().expect("constant cache poisoned").get(&key) {
        if v.prec() >= prec + GUARD_BITS {
            return v.with_prec(prec);
        }
    }
    let wp = prec + GUARD_BITS;
    let v = compute(wp);
    let mut map = cache().lock().expect("constant cache poisoned");
    let keep = match map.get(&key) {
        Some(old) => old.prec() < v.prec(),
        None => true,
    };
    if keep {
        map.insert(key, v.clone());
    }
    v.with_prec(prec)
}

/// `atan(1/x) * 2^wp`, truncated.
fn atan_inv_fixed(x: u64, wp: u32) -> BigInt {
    let x = BigInt::from(x);
    let x2 = &x * &x;
    let mut power = (BigInt::one() << wp as usize) / &x;
    let mut sum = power.clone();
    let mut k = 1u64;
    loop {
        power /= &x2;
        if power.is_zero() {
            break;
        }
        let term = &power / (2 * k + 1);
        if k % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        k += 1;
    }
    sum
}

/// Machin's formula `pi = 16 atan(1/5) - 4 atan(1/239)`.
pub fn pi(prec: u32) -> BigFloat {
    cached(ConstKey::Pi, prec, |wp| {
        let fp = wp + 16;
        let v = atan_inv_fixed(5, fp) * 16 - atan_inv_fixed(239, fp) * 4;
        BigFloat::from_parts(v, -(fp as i64), wp)
    })
}

/// Gauss-Legendre AGM iteration.
pub fn pi_alt(prec: u32) -> BigFloat {
    let wp = prec + GUARD_BITS;
    let mut a = BigFloat::one(wp);
    let mut b = BigFloat::one(wp).mul_pow2(-1).sqrt_prec(wp);
    let mut t = BigFloat::one(wp).mul_pow2(-2);
    let mut p = 0i64;
    loop {
        let a_next = a.add(&b).mul_pow2(-1);
        let b_next = a.mul(&b).sqrt_prec(wp);
        let d = a.sub(&a_next);
        t = t.sub(&d.mul(&d).mul_pow2(p));
        p += 1;
        let done = a_next.sub(&b_next).abs_lt_pow2(-(wp as i64) / 2 - 4);
        a = a_next;
        b = b_next;
        if done {
            break;
        }
    }
    let s = a.add(&b);
    s.mul(&s).div_prec(&t.mul_pow2(2), prec)
}

/// `ln 2 = 2 atanh(1/3)` in fixed point.
pub fn ln2(prec: u32) -> BigFloat {
    cached(ConstKey::Ln2, prec, |wp| {
        let fp = wp + 16;
        let mut power: BigInt = (BigInt::one() << fp as usize) / 3;
        let mut sum = power.clone();
        let mut k = 1u64;
        loop {
            power /= 9;
            if power.is_zero() {
                break;
            }
            sum += &power / (2 * k + 1);
            k += 1;
        }
        BigFloat::from_parts(sum * 2, -(fp as i64), wp)
    })
}

/// `ln 2 = sum 1/(k 2^k)`.
pub fn ln2_alt(prec: u32) -> BigFloat {
    let fp = prec + GUARD_BITS + 16;
    let mut sum = BigInt::zero();
    let mut k = 1u64;
    loop {
        let term = (BigInt::one() << fp as usize) / (BigInt::from(k) << k as usize);
        if term.is_zero() {
            break;
        }
        sum += term;
        k += 1;
    }
    BigFloat::from_parts(sum, -(fp as i64), prec)
}

pub fn log_int(k: u64, prec: u32) -> BigFloat {
    assert!(k > 0, "log of zero");
    if k == 1 {
        return BigFloat::zero(prec);
    }
    if k == 2 {
        return ln2(prec);
    }
    cached(ConstKey::LogInt(k), prec, |wp| {
        ln(&BigFloat::from_parts(BigInt::from(k), 0, 64), wp).expect("positive argument")
    })
}

/// Euler's constant by the Brent-McMillan algorithm (B1).
pub fn gamma(prec: u32) -> BigFloat {
    cached(ConstKey::Gamma, prec, |wp| {
        let fp = wp + 32;
        // e^{-4n} < 2^{-fp}
        let n = ((fp as f64) * std::f64::consts::LN_2 / 4.0).ceil() as u64 + 1;
        let terms = (3.5911 * n as f64).ceil() as u64 + 1;
        let ln_n = ln(&BigFloat::from_parts(BigInt::from(n), 0, 64), fp + 16)
            .expect("positive argument");
        let scale = BigInt::one() << fp as usize;
        let ln_n_fixed = (ln_n.mul_pow2(fp as i64)).round_to_int();
        let n2 = BigInt::from(n) * n;
        let mut a = -ln_n_fixed;
        let mut b = scale;
        let mut u = a.clone();
        let mut v = b.clone();
        for k in 1..=terms {
            let k = BigInt::from(k);
            let k2 = &k * &k;
            b = (&b * &n2) / &k2;
            a = ((&a * &n2) / &k + &b) / &k;
            u += &a;
            v += &b;
        }
        BigFloat::div_ints(&u, &v, wp)
    })
}

/// Euler's constant from the Euler-Maclaurin expansion of the harmonic numbers.
pub fn gamma_alt(prec: u32) -> BigFloat {
    let wp = prec + GUARD_BITS;
    let (n, m) = em_params(wp, 1);
    let mut h = BigFloat::zero(wp + 16);
    for k in 1..=n {
        h = h.add(&BigFloat::div_ints(&BigInt::one(), &BigInt::from(k), wp + 16));
    }
    let nf = BigFloat::from_parts(BigInt::from(n), 0, 64);
    let mut g = h.sub(&ln(&nf, wp + 16).expect("positive"));
    g = g.sub(&BigFloat::div_ints(&BigInt::one(), &BigInt::from(2 * n), wp + 16));
    let inv_n2 = BigFloat::div_ints(&BigInt::one(), &(BigInt::from(n) * n), wp + 16);
    let mut pow = BigFloat::one(wp + 16);
    for j in 1..=m {
        pow = pow.mul(&inv_n2);
        let b = bernoulli(2 * j as usize);
        let coef = BigFloat::div_ints(b.numer(), &(b.denom() * BigInt::from(2 * j)), wp + 16);
        g = g.add(&coef.mul(&pow));
    }
    g.with_prec(prec)
}

/// Sum of an alternating series `sum_k (-1)^k a_k` with completely monotone
/// `a_k`, accelerated with Chebyshev weights (Borwein). `term(k)` returns
/// `a_k` as a numerator/denominator pair. Result is fixed point at `fp` bits.
pub(crate) fn borwein_alternating(fp: u32, term: impl Fn(u64) -> (BigInt, BigInt)) -> BigInt {
    // error <= 3 / (3 + sqrt 8)^n
    let n = ((fp as f64 + 3.0) / (3.0 + 8f64.sqrt()).log2()).ceil() as u64 + 1;
    let mut e = BigInt::one();
    let mut d = Vec::with_capacity(n as usize + 1);
    let mut acc = e.clone();
    d.push(acc.clone());
    for i in 0..n {
        let num = &e * 4u32 * (n + i) * (n - i);
        let den = BigInt::from((2 * i + 1) * (2 * i + 2));
        let (q, r) = num.div_rem(&den);
        debug_assert!(r.is_zero(), "Chebyshev weights are integral");
        e = q;
        acc += &e;
        d.push(acc.clone());
    }
    let dn = d[n as usize].clone();
    let mut sum = BigInt::zero();
    for k in 0..n {
        let (a_num, a_den) = term(k);
        let w = (&d[k as usize] - &dn) * a_num;
        let t = (w << fp as usize) / a_den;
        if k % 2 == 0 {
            sum += t;
        } else {
            sum -= t;
        }
    }
    -(sum / dn)
}

/// Catalan's constant via `pi/8 log(2+sqrt 3) + 3/8 sum (k!)^2/((2k)!(2k+1)^2)`.
pub fn catalan(prec: u32) -> BigFloat {
    cached(ConstKey::Catalan, prec, |wp| {
        let fp = wp + 16;
        let mut r = BigInt::one() << fp as usize;
        let mut sum = BigInt::zero();
        let mut k = 0u64;
        while !r.is_zero() {
            let odd = BigInt::from(2 * k + 1);
            sum += &r / (&odd * &odd);
            r = (r * (k + 1)) / (BigInt::from(2) * &odd);
            k += 1;
        }
        let series = BigFloat::from_parts(sum * 3, -(fp as i64) - 3, wp + 8);
        let three = BigFloat::from_i64(3, 8);
        let arg = BigFloat::from_i64(2, 8).add_prec(&three.sqrt_prec(wp + 8), wp + 8);
        let log_term = ln(&arg, wp + 8).expect("positive").mul(&pi(wp + 8)).mul_pow2(-3);
        log_term.add_prec(&series, wp)
    })
}

/// Catalan's constant as the accelerated alternating series `sum (-1)^k/(2k+1)^2`.
pub fn catalan_alt(prec: u32) -> BigFloat {
    let fp = prec + GUARD_BITS + 16;
    let v = borwein_alternating(fp, |k| {
        let o = BigInt::from(2 * k + 1);
        (BigInt::one(), &o * &o)
    });
    BigFloat::from_parts(v, -(fp as i64), prec)
}

/// `zeta(k)` for integer `k >= 2`.
///
/// Even arguments use the exact Bernoulli multiple of `pi^k`; odd arguments use
/// the accelerated alternating eta series.
pub fn zeta_int(k: u32, prec: u32) -> BigFloat {
    assert!(k >= 2, "zeta_int requires k >= 2");
    cached(ConstKey::Zeta(k), prec, |wp| {
        if k % 2 == 0 {
            let r = super::special::zeta_even_rational(k);
            let pik = pi(wp + 16).powi(k as u64);
            BigFloat::from_ratio(&r, wp + 16).mul_prec(&pik, wp)
        } else {
            zeta_eta(k, wp)
        }
    })
}

fn zeta_eta(k: u32, wp: u32) -> BigFloat {
    let fp = wp + 16;
    let eta = borwein_alternating(fp, |j| (BigInt::one(), BigInt::from(j + 1).pow(k)));
    // zeta = eta / (1 - 2^{1-k})
    let eta = BigFloat::from_parts(eta, -(fp as i64), fp);
    let factor = BigFloat::one(fp).sub(&BigFloat::one(fp).mul_pow2(1 - k as i64));
    eta.div_prec(&factor, wp)
}

/// `zeta(k)` by Euler-Maclaurin summation, independent of the eta route and of
/// the Bernoulli-times-pi route.
pub fn zeta_int_alt(k: u32, prec: u32) -> BigFloat {
    assert!(k >= 2, "zeta_int requires k >= 2");
    hurwitz_zeta_em(k, &num_rational::BigRational::one(), prec)
}

/// Euler's number.
pub fn e(prec: u32) -> BigFloat {
    super::elementary::exp(&BigFloat::one(8), prec).expect("bounded")
}

#[cfg(test)]
pub(crate) fn ln2_series(prec: u32) -> BigFloat {
    super::elementary::atanh_series(&BigFloat::div_ints(&BigInt::one(), &BigInt::from(3), prec + 8), prec + 8)
        .mul_pow2(1)
        .with_prec(prec)
}
