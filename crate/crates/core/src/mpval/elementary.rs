use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

use super::constants;
use super::{BigFloat, MpError, GUARD_BITS};

/// Elementary functions reachable from the expression language.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ElemFn {
    Exp,
    Log,
    Sqrt,
    Tanh,
    Coth,
    Tan,
    Cot,
    Atanh,
}

pub fn elem(func: ElemFn, x: &BigFloat, prec: u32) -> Result<BigFloat, MpError> {
    match func {
        ElemFn::Exp => exp(x, prec),
        ElemFn::Log => ln(x, prec),
        ElemFn::Sqrt => sqrt(x, prec),
        ElemFn::Tanh => Ok(tanh(x, prec)),
        ElemFn::Coth => coth(x, prec),
        ElemFn::Tan => tan(x, prec),
        ElemFn::Cot => cot(x, prec),
        ElemFn::Atanh => atanh(x, prec),
    }
}

fn halvings(wp: u32) -> i64 {
    ((wp as f64).sqrt() / 2.0) as i64 + 4
}

pub fn sqrt(x: &BigFloat, prec: u32) -> Result<BigFloat, MpError> {
    if x.is_negative() {
        return Err(MpError::Domain("sqrt of a negative number".into()));
    }
    Ok(x.sqrt_prec(prec))
}

pub fn exp(x: &BigFloat, prec: u32) -> Result<BigFloat, MpError> {
    if x.is_zero() {
        return Ok(BigFloat::one(prec));
    }
    if x.top_exp() > 40 {
        return Err(MpError::Domain("exp argument too large".into()));
    }
    let mag = x.top_exp().max(0) as u32;
    let wp = prec + GUARD_BITS + mag + 8;
    let ln2 = constants::ln2(wp + mag + 8);
    let k = x.div_prec(&ln2, 64 + mag).round_to_int();
    let kf = BigFloat::from_int(&k, 64 + mag);
    let r = x.sub_prec(&ln2.mul_prec(&kf, wp + mag), wp);
    let s = halvings(wp);
    let wp2 = wp + s as u32;
    let y = r.with_prec(wp2).mul_pow2(-s);
    let mut sum = BigFloat::one(wp2);
    let mut term = BigFloat::one(wp2);
    let mut i = 1i64;
    loop {
        term = term.mul_prec(&y, wp2).div_prec(&BigFloat::from_i64(i, 64), wp2);
        if term.is_zero() || term.top_exp() < -(wp2 as i64) - 2 {
            break;
        }
        sum = sum.add_prec(&term, wp2);
        i += 1;
    }
    for _ in 0..s {
        sum = sum.mul_prec(&sum, wp2);
    }
    let k = k.to_i64().expect("exponent shift fits in i64");
    Ok(sum.mul_pow2(k).with_prec(prec))
}

/// `exp(x) - 1` without cancellation for small `|x|`.
pub fn expm1(x: &BigFloat, prec: u32) -> Result<BigFloat, MpError> {
    if x.is_zero() {
        return Ok(BigFloat::zero(prec));
    }
    let wp = prec + GUARD_BITS;
    if x.top_exp() >= 0 {
        let e = exp(x, wp)?;
        return Ok(e.sub_prec(&BigFloat::one(wp), prec));
    }
    let s = halvings(wp);
    let wp2 = wp + 2 * s as u32;
    let y = x.with_prec(wp2).mul_pow2(-s);
    let mut sum = y.clone();
    let mut term = y.clone();
    let mut i = 2i64;
    loop {
        term = term.mul_prec(&y, wp2).div_prec(&BigFloat::from_i64(i, 64), wp2);
        if term.is_zero() || term.top_exp() < sum.top_exp() - wp2 as i64 - 2 {
            break;
        }
        sum = sum.add_prec(&term, wp2);
        i += 1;
    }
    let two = BigFloat::from_i64(2, 8);
    for _ in 0..s {
        sum = sum.mul_prec(&sum.add_prec(&two, wp2), wp2);
    }
    Ok(sum.with_prec(prec))
}

/// `sum u^(2k+1)/(2k+1)`, used for `|u| <= 1/2`.
pub(crate) fn atanh_series(u: &BigFloat, wp: u32) -> BigFloat {
    if u.is_zero() {
        return BigFloat::zero(wp);
    }
    let u = u.with_prec(wp);
    let u2 = u.mul(&u);
    let mut pow = u.clone();
    let mut sum = u.clone();
    let mut k = 1i64;
    loop {
        pow = pow.mul(&u2);
        let term = pow.div_prec(&BigFloat::from_i64(2 * k + 1, 64), wp);
        if term.is_zero() || term.top_exp() < sum.top_exp() - wp as i64 - 2 {
            break;
        }
        sum = sum.add(&term);
        k += 1;
    }
    sum
}

pub fn ln(x: &BigFloat, prec: u32) -> Result<BigFloat, MpError> {
    if x.signum() <= 0 {
        return Err(MpError::NonPositive);
    }
    let wp = prec + GUARD_BITS;
    let mut t = x.top_exp();
    let mut m = x.mul_pow2(-t);
    let half = BigFloat::from_f64(0.5, 8);
    if m.mul_prec(&m, 64) < half {
        m = m.mul_pow2(1);
        t -= 1;
    }
    let exact = wp.max(x.prec() + 4);
    let one = BigFloat::one(8);
    let u = m.sub_prec(&one, exact).div_prec(&m.add_prec(&one, exact), wp);
    let ln_m = atanh_series(&u, wp).mul_pow2(1);
    if t == 0 {
        return Ok(ln_m.with_prec(prec));
    }
    let tbits = 64 - t.unsigned_abs().leading_zeros();
    let ln2 = constants::ln2(wp + tbits + 4);
    let scaled = ln2.mul_prec(&BigFloat::from_i64(t, 64), wp + tbits);
    Ok(scaled.add_prec(&ln_m, prec))
}

pub fn log_rational(r: &BigRational, prec: u32) -> Result<BigFloat, MpError> {
    if !r.is_positive() {
        return Err(MpError::NonPositive);
    }
    if r.is_integer() {
        if let Some(k) = r.numer().to_u64() {
            return Ok(constants::log_int(k, prec));
        }
    }
    let wp = prec + GUARD_BITS;
    ln(&BigFloat::from_ratio(r, wp), prec)
}

pub fn atanh(x: &BigFloat, prec: u32) -> Result<BigFloat, MpError> {
    if x.is_zero() {
        return Ok(BigFloat::zero(prec));
    }
    let one = BigFloat::one(8);
    if x.cmp_abs(&one) != std::cmp::Ordering::Less {
        return Err(MpError::Domain("atanh requires |x| < 1".into()));
    }
    let wp = prec + GUARD_BITS;
    if x.top_exp() <= -1 {
        return Ok(atanh_series(x, wp).with_prec(prec));
    }
    let exact = wp.max(x.prec() + 4);
    let ratio = one.add_prec(x, exact).div_prec(&one.sub_prec(x, exact), wp);
    Ok(ln(&ratio, wp)?.mul_pow2(-1).with_prec(prec))
}

/// Simultaneous sine and cosine.
pub fn sin_cos(x: &BigFloat, prec: u32) -> (BigFloat, BigFloat) {
    if x.is_zero() {
        return (BigFloat::zero(prec), BigFloat::one(prec));
    }
    let mag = x.top_exp().max(0) as u32;
    let wp = prec + GUARD_BITS + mag;
    let half_pi = constants::pi(wp + mag + 8).mul_pow2(-1);
    let k = x.div_prec(&half_pi, 64 + mag).round_to_int();
    let r = x.sub_prec(&half_pi.mul_prec(&BigFloat::from_int(&k, 64 + mag), wp + mag), wp);
    let s = halvings(wp);
    let wp2 = wp + 2 * s as u32;
    let y = r.with_prec(wp2).mul_pow2(-s);
    let y2 = y.mul(&y);
    let mut sn = y.clone();
    let mut cs = BigFloat::one(wp2);
    let mut term_s = y.clone();
    let mut term_c = BigFloat::one(wp2);
    let mut i = 1i64;
    loop {
        term_c = term_c.mul(&y2).div_prec(&BigFloat::from_i64(-(2 * i - 1) * (2 * i), 64), wp2);
        term_s = term_s.mul(&y2).div_prec(&BigFloat::from_i64(-(2 * i) * (2 * i + 1), 64), wp2);
        cs = cs.add(&term_c);
        sn = sn.add(&term_s);
        let small_c = term_c.is_zero() || term_c.top_exp() < -(wp2 as i64) - 2;
        let small_s = term_s.is_zero() || term_s.top_exp() < sn.top_exp() - wp2 as i64 - 2;
        if small_c && small_s {
            break;
        }
        i += 1;
    }
    let one = BigFloat::one(8);
    for _ in 0..s {
        let new_s = sn.mul(&cs).mul_pow2(1);
        let new_c = one.sub_prec(&sn.mul(&sn).mul_pow2(1), wp2);
        sn = new_s;
        cs = new_c;
    }
    let quadrant = k.mod_floor_4();
    let (sn, cs) = match quadrant {
        0 => (sn, cs),
        1 => (cs, sn.neg()),
        2 => (sn.neg(), cs.neg()),
        _ => (cs.neg(), sn),
    };
    (sn.with_prec(prec), cs.with_prec(prec))
}

trait ModFloor4 {
    fn mod_floor_4(&self) -> u8;
}

impl ModFloor4 for BigInt {
    fn mod_floor_4(&self) -> u8 {
        let r: BigInt = self.mod_floor(&BigInt::from(4));
        r.to_u8().unwrap_or(0)
    }
}

pub fn tan(x: &BigFloat, prec: u32) -> Result<BigFloat, MpError> {
    let (s, c) = sin_cos(x, prec + GUARD_BITS);
    if c.is_zero() {
        return Err(MpError::Domain("pole of tan".into()));
    }
    Ok(s.div_prec(&c, prec))
}

pub fn cot(x: &BigFloat, prec: u32) -> Result<BigFloat, MpError> {
    let (s, c) = sin_cos(x, prec + GUARD_BITS);
    if s.is_zero() {
        return Err(MpError::Domain("pole of cot".into()));
    }
    Ok(c.div_prec(&s, prec))
}

pub fn tanh(x: &BigFloat, prec: u32) -> BigFloat {
    if x.is_zero() {
        return BigFloat::zero(prec);
    }
    if x.is_negative() {
        return tanh(&x.neg(), prec).neg();
    }
    let wp = prec + GUARD_BITS;
    // 1 - tanh(x) ~ 2 exp(-2x) drops below the last place
    if x.to_f64() > (wp as f64) * 0.35 + 2.0 {
        return BigFloat::one(prec);
    }
    let u = expm1(&x.mul_pow2(1), wp).expect("argument is bounded");
    u.div_prec(&u.add_prec(&BigFloat::from_i64(2, 8), wp), prec)
}

pub fn coth(x: &BigFloat, prec: u32) -> Result<BigFloat, MpError> {
    if x.is_zero() {
        return Err(MpError::Domain("pole of coth".into()));
    }
    let t = tanh(x, prec + GUARD_BITS);
    Ok(BigFloat::one(8).div_prec(&t, prec))
}

/// `x^k` for a signed integer exponent.
pub fn pow_int(x: &BigFloat, k: i64, prec: u32) -> Result<BigFloat, MpError> {
    if k == 0 {
        return Ok(BigFloat::one(prec));
    }
    if x.is_zero() {
        if k < 0 {
            return Err(MpError::DivisionByZero);
        }
        return Ok(BigFloat::zero(prec));
    }
    let kbits = 64 - k.unsigned_abs().leading_zeros();
    let wp = prec + GUARD_BITS + 2 * kbits;
    let p = x.with_prec(wp).powi(k.unsigned_abs());
    if k < 0 {
        Ok(BigFloat::one(8).div_prec(&p, prec))
    } else {
        Ok(p.with_prec(prec))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &BigFloat, b: &BigFloat, bits: i64) -> bool {
        a.sub(b).abs_lt_pow2(-bits)
    }

    #[test]
    fn log_of_one_is_zero() {
        assert!(ln(&BigFloat::one(128), 128).unwrap().is_zero());
        assert_eq!(ln(&BigFloat::zero(64), 64), Err(MpError::NonPositive));
        assert_eq!(
            log_rational(&BigRational::from_integer(BigInt::from(-3)), 64),
            Err(MpError::NonPositive)
        );
    }

    #[test]
    fn exp_matches_f64() {
        for &v in &[-20.5, -1.0, -1e-5, 0.3, 1.0, 9.0, 50.25] {
            let x = BigFloat::from_f64(v, 200);
            let e = exp(&x, 200).unwrap().to_f64();
            assert!((e / v.exp() - 1.0).abs() < 1e-14, "exp({v})");
        }
    }

    #[test]
    fn trig_matches_f64() {
        for &v in &[-7.0, -0.5, 1e-8, 0.7, 1.5, 3.0, 100.0] {
            let x = BigFloat::from_f64(v, 160);
            let (s, c) = sin_cos(&x, 160);
            assert!((s.to_f64() - v.sin()).abs() < 1e-14 * v.sin().abs().max(1e-300) + 1e-300);
            assert!((c.to_f64() - v.cos()).abs() < 1e-14);
            let t = tan(&x, 160).unwrap().to_f64();
            assert!((t / v.tan() - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn hyperbolic_matches_f64() {
        for &v in &[-3.0, -1e-6, 0.25, 2.0, 400.0] {
            let x = BigFloat::from_f64(v, 128);
            let t = tanh(&x, 128).to_f64();
            assert!((t / v.tanh() - 1.0).abs() < 1e-14);
        }
        let third = BigFloat::div_ints(&BigInt::from(1), &BigInt::from(3), 300);
        let back = tanh(&atanh(&third, 300).unwrap(), 300);
        assert!(close(&back, &third, 296));
        let big = BigFloat::from_f64(0.9, 300);
        let back = tanh(&atanh(&big, 300).unwrap(), 300);
        assert!(close(&back, &big, 294));
        assert!(atanh(&BigFloat::one(64), 64).is_err());
        assert!(coth(&BigFloat::zero(64), 64).is_err());
    }

    #[test]
    fn expm1_small_argument_is_relative() {
        let x = BigFloat::from_f64(1e-30, 200);
        let v = expm1(&x, 200).unwrap();
        // 1e-30 + 5e-61
        let expect = x.add(&x.mul(&x).mul_pow2(-1));
        assert!(v.sub(&expect).abs().top_exp() < x.top_exp() - 190);
    }

    #[test]
    fn log_exponent_law() {
        let l256 = log_rational(&BigRational::from_integer(BigInt::from(256)), 256).unwrap();
        let l2 = log_rational(&BigRational::from_integer(BigInt::from(2)), 256).unwrap();
        assert!(close(&l256, &l2.mul_int(8), 250));
        let l6 = log_rational(&BigRational::from_integer(BigInt::from(6)), 256).unwrap();
        let l3 = log_rational(&BigRational::from_integer(BigInt::from(3)), 256).unwrap();
        assert!(close(&l6, &l2.add(&l3), 250));
        let q = BigRational::new(BigInt::from(7), BigInt::from(5));
        let lq = log_rational(&q, 256).unwrap();
        let l7 = log_rational(&BigRational::from_integer(BigInt::from(7)), 256).unwrap();
        let l5 = log_rational(&BigRational::from_integer(BigInt::from(5)), 256).unwrap();
        assert!(close(&lq, &l7.sub(&l5), 250));
    }

    #[test]
    fn pow_int_negative_and_zero() {
        let two = BigFloat::from_i64(2, 64);
        assert_eq!(pow_int(&two, -3, 64).unwrap().to_f64(), 0.125);
        assert_eq!(pow_int(&BigFloat::zero(64), -1, 64), Err(MpError::DivisionByZero));
    }
}
