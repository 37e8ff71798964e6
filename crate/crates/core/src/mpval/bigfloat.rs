//! Binary floating point with an explicit per-value precision.
//!
//! A value is `mant * 2^exp` where `|mant| < 2^prec` after rounding. Exactly
//! representable inputs (small integers, dyadic rationals) keep fewer bits and
//! are never padded, so arithmetic on them stays exact until the result
//! outgrows the precision.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Debug)]
pub struct BigFloat {
    mant: BigInt,
    exp: i64,
    prec: u32,
}

fn round_shift(mag: &BigUint, shift: u64) -> BigUint {
    if shift == 0 {
        return mag.clone();
    }
    let mut q = mag >> shift;
    if mag.bit(shift - 1) {
        q += 1u32;
    }
    q
}

impl BigFloat {
    pub fn zero(prec: u32) -> Self {
        BigFloat { mant: BigInt::zero(), exp: 0, prec }
    }

    pub fn one(prec: u32) -> Self {
        Self::from_i64(1, prec)
    }

    /// Rounds `mant * 2^exp` to `prec` bits (round half away from zero).
    pub fn from_parts(mant: BigInt, exp: i64, prec: u32) -> Self {
        assert!(prec >= 2, "precision must be at least 2 bits");
        if mant.is_zero() {
            return Self::zero(prec);
        }
        let bits = mant.bits();
        if bits <= prec as u64 {
            return BigFloat { mant, exp, prec };
        }
        let sign = mant.sign();
        let mag = mant.magnitude();
        let shift = bits - prec as u64;
        let mut q = round_shift(mag, shift);
        let mut exp = exp + shift as i64;
        if q.bits() > prec as u64 {
            q >>= 1u32;
            exp += 1;
        }
        BigFloat { mant: BigInt::from_biguint(sign, q), exp, prec }
    }

    pub fn from_int(n: &BigInt, prec: u32) -> Self {
        Self::from_parts(n.clone(), 0, prec)
    }

    pub fn from_i64(n: i64, prec: u32) -> Self {
        Self::from_parts(BigInt::from(n), 0, prec)
    }

    pub fn from_ratio(r: &BigRational, prec: u32) -> Self {
        Self::div_ints(r.numer(), r.denom(), prec)
    }

    /// Correctly sized quotient of two integers.
    pub fn div_ints(num: &BigInt, den: &BigInt, prec: u32) -> Self {
        assert!(!den.is_zero(), "division by zero");
        if num.is_zero() {
            return Self::zero(prec);
        }
        let shift = (prec as i64 + 2 + den.bits() as i64 - num.bits() as i64).max(0);
        let q = (num << shift as usize) / den;
        Self::from_parts(q, -shift, prec)
    }

    /// Nearest double; saturates to infinity or zero outside the f64 range.
    pub fn from_f64(x: f64, prec: u32) -> Self {
        if x == 0.0 || !x.is_finite() {
            return Self::zero(prec);
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let e = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if e == 0 { (frac, -1074) } else { (frac | (1u64 << 52), e - 1075) };
        Self::from_parts(BigInt::from(m) * sign, e, prec)
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Self::from_parts(self.mant.clone(), self.exp, prec)
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> Self {
        BigFloat { mant: self.mant.abs(), exp: self.exp, prec: self.prec }
    }

    pub fn neg(&self) -> Self {
        BigFloat { mant: -&self.mant, exp: self.exp, prec: self.prec }
    }

    /// Exponent `t` with `2^(t-1) <= |x| < 2^t`; `i64::MIN` for zero.
    pub fn top_exp(&self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else {
            self.exp + self.mant.bits() as i64
        }
    }

    /// `x * 2^k`, exact.
    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        BigFloat { mant: self.mant.clone(), exp: self.exp + k, prec: self.prec }
    }

    pub fn add_prec(&self, other: &Self, prec: u32) -> Self {
        if other.is_zero() {
            return self.with_prec(prec);
        }
        if self.is_zero() {
            return other.with_prec(prec);
        }
        let top = self.top_exp().max(other.top_exp());
        let bottom_top = self.top_exp().min(other.top_exp());
        let mut lo = self.exp.min(other.exp);
        // When one operand lies entirely below the result's last place there
        // is no cancellation, and its low bits only matter for ties.
        let floor = top - prec as i64 - 64;
        if bottom_top < floor - 2 && lo < floor {
            lo = floor;
        }
        let align = |x: &BigFloat| -> BigInt {
            if x.exp >= lo {
                &x.mant << (x.exp - lo) as usize
            } else {
                let sh = (lo - x.exp) as usize;
                if x.mant.is_negative() {
                    -(x.mant.magnitude() >> sh).to_bigint_signed()
                } else {
                    (x.mant.magnitude() >> sh).to_bigint_signed()
                }
            }
        };
        Self::from_parts(align(self) + align(other), lo, prec)
    }

    pub fn sub_prec(&self, other: &Self, prec: u32) -> Self {
        self.add_prec(&other.neg(), prec)
    }

    pub fn mul_prec(&self, other: &Self, prec: u32) -> Self {
        Self::from_parts(&self.mant * &other.mant, self.exp + other.exp, prec)
    }

    /// Panics on division by zero; callers check first.
    pub fn div_prec(&self, other: &Self, prec: u32) -> Self {
        assert!(!other.is_zero(), "BigFloat division by zero");
        if self.is_zero() {
            return Self::zero(prec);
        }
        let shift =
            (prec as i64 + 2 + other.mant.bits() as i64 - self.mant.bits() as i64).max(0);
        let q = (&self.mant << shift as usize) / &other.mant;
        Self::from_parts(q, self.exp - other.exp - shift, prec)
    }

    /// Square root of a non-negative value; panics on negative input.
    pub fn sqrt_prec(&self, prec: u32) -> Self {
        assert!(!self.is_negative(), "sqrt of negative BigFloat");
        if self.is_zero() {
            return Self::zero(prec);
        }
        let mut shift = 2 * prec as i64 + 4 - self.mant.bits() as i64;
        if (self.exp - shift).rem_euclid(2) != 0 {
            shift += 1;
        }
        let m = if shift >= 0 {
            self.mant.magnitude() << shift as usize
        } else {
            self.mant.magnitude() >> (-shift) as usize
        };
        let r = m.sqrt();
        Self::from_parts(BigInt::from(r), (self.exp - shift) / 2, prec)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.add_prec(other, self.prec.max(other.prec))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.sub_prec(other, self.prec.max(other.prec))
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.mul_prec(other, self.prec.max(other.prec))
    }

    pub fn div(&self, other: &Self) -> Self {
        self.div_prec(other, self.prec.max(other.prec))
    }

    pub fn sqrt(&self) -> Self {
        self.sqrt_prec(self.prec)
    }

    pub fn mul_int(&self, k: i64) -> Self {
        Self::from_parts(&self.mant * k, self.exp, self.prec)
    }

    pub fn div_int(&self, k: i64) -> Self {
        self.div_prec(&BigFloat::from_i64(k, 64), self.prec)
    }

    /// Integer power by repeated squaring at the value's own precision.
    pub fn powi(&self, k: u64) -> Self {
        let mut result = BigFloat::one(self.prec);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Nearest integer, ties away from zero.
    pub fn round_to_int(&self) -> BigInt {
        if self.exp >= 0 {
            return &self.mant << self.exp as usize;
        }
        let sh = (-self.exp) as u64;
        let q = round_shift(self.mant.magnitude(), sh);
        BigInt::from_biguint(self.mant.sign(), q).normalize_sign()
    }

    pub fn floor_to_int(&self) -> BigInt {
        if self.exp >= 0 {
            return &self.mant << self.exp as usize;
        }
        self.mant.div_floor(&(BigInt::one() << (-self.exp) as usize))
    }

    /// The exact dyadic rational this value represents.
    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as usize)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as usize)
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits();
        let (m, e) = if bits > 64 {
            let sh = bits - 64;
            (&self.mant >> sh as usize, self.exp + sh as i64)
        } else {
            (self.mant.clone(), self.exp)
        };
        let m = m.to_f64().unwrap_or(0.0);
        if e > 2000 {
            return m.signum() * f64::INFINITY;
        }
        if e < -2200 {
            return 0.0;
        }
        m * 2f64.powi(e as i32)
    }

    /// Approximate `log2 |x|`, `-inf` for zero.
    pub fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let bits = self.mant.bits();
        let keep = bits.min(60);
        let top = (self.mant.magnitude() >> (bits - keep) as usize).to_f64().unwrap_or(1.0);
        top.log2() + (self.exp + (bits - keep) as i64) as f64
    }

    pub fn cmp_abs(&self, other: &Self) -> Ordering {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        let (ta, tb) = (self.top_exp(), other.top_exp());
        if ta != tb {
            return ta.cmp(&tb);
        }
        let lo = self.exp.min(other.exp);
        let a = self.mant.magnitude() << (self.exp - lo) as usize;
        let b = other.mant.magnitude() << (other.exp - lo) as usize;
        a.cmp(&b)
    }

    /// `|x| < 2^k`.
    pub fn abs_lt_pow2(&self, k: i64) -> bool {
        self.is_zero() || self.top_exp() <= k
    }

    /// Decimal rendering with `digits` significant digits.
    ///
    /// Fixed notation for magnitudes in `[1e-6, 1e21)`, scientific otherwise.
    /// Rounded significant digits and the decimal exponent of the leading one.
    fn decimal_digits(&self, digits: usize) -> (bool, String, i64) {
        let neg = self.is_negative();
        let r = self.to_rational().abs();
        // First guess for floor(log10 |x|), corrected below.
        let mut e10 = (self.log2_abs() * std::f64::consts::LOG10_2).floor() as i64;
        let ten = BigInt::from(10);
        let scaled = |e10: i64| -> BigInt {
            let k = digits as i64 - 1 - e10;
            let v = if k >= 0 {
                &r * BigRational::from_integer(num_traits::pow(ten.clone(), k as usize))
            } else {
                &r / BigRational::from_integer(num_traits::pow(ten.clone(), (-k) as usize))
            };
            (v + BigRational::new(BigInt::one(), BigInt::from(2))).floor().to_integer()
        };
        let mut s = scaled(e10);
        let limit = num_traits::pow(ten.clone(), digits);
        let low = num_traits::pow(ten.clone(), digits - 1);
        if s >= limit {
            e10 += 1;
            s = scaled(e10);
        } else if s < low {
            e10 -= 1;
            s = scaled(e10);
        }
        if s >= limit {
            // rounding carried into a new digit, e.g. 9.99 -> 10.0
            e10 += 1;
            s = scaled(e10);
        }
        (neg, s.to_string(), e10)
    }

    pub fn to_decimal(&self, digits: usize) -> String {
        let digits = digits.max(1);
        if self.is_zero() {
            return "0".to_string();
        }
        let (neg, ds, e10) = self.decimal_digits(digits);
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        if (-6..21).contains(&e10) {
            if e10 < 0 {
                out.push_str("0.");
                for _ in 0..(-e10 - 1) {
                    out.push('0');
                }
                out.push_str(&ds);
            } else {
                let int_len = (e10 + 1) as usize;
                if int_len >= ds.len() {
                    out.push_str(&ds);
                    for _ in 0..(int_len - ds.len()) {
                        out.push('0');
                    }
                } else {
                    out.push_str(&ds[..int_len]);
                    out.push('.');
                    out.push_str(&ds[int_len..]);
                }
            }
        } else {
            out.push_str(&ds[..1]);
            if ds.len() > 1 {
                out.push('.');
                out.push_str(&ds[1..]);
            }
            out.push_str(&format!("e{}", e10));
        }
        out
    }

    /// Always `d.ddde-k` form with `digits` significant digits.
    pub fn to_scientific(&self, digits: usize) -> String {
        let digits = digits.max(1);
        if self.is_zero() {
            return "0".to_string();
        }
        let (neg, ds, e10) = self.decimal_digits(digits);
        let sign = if neg { "-" } else { "" };
        if ds.len() > 1 {
            format!("{sign}{}.{}e{e10}", &ds[..1], &ds[1..])
        } else {
            format!("{sign}{ds}e{e10}")
        }
    }
}

trait ToBigIntSigned {
    fn to_bigint_signed(self) -> BigInt;
}

impl ToBigIntSigned for BigUint {
    fn to_bigint_signed(self) -> BigInt {
        BigInt::from_biguint(Sign::Plus, self)
    }
}

trait NormalizeSign {
    fn normalize_sign(self) -> BigInt;
}

impl NormalizeSign for BigInt {
    fn normalize_sign(self) -> BigInt {
        if self.magnitude().is_zero() {
            BigInt::zero()
        } else {
            self
        }
    }
}

impl PartialEq for BigFloat {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return Some(sa.cmp(&sb));
        }
        let c = self.cmp_abs(other);
        Some(if sa < 0 { c.reverse() } else { c })
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(((self.prec as f64) * 0.30103).floor() as usize);
        write!(f, "{}", self.to_decimal(digits.max(1)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_precision_difference_keeps_cancelled_bits() {
        let a = BigFloat::one(400).add(&BigFloat::one(400).mul_pow2(-300));
        let b = BigFloat::one(400);
        let d = a.sub_prec(&b, 64);
        assert_eq!(d, BigFloat::one(64).mul_pow2(-300));
    }

    #[test]
    fn rounding_to_precision() {
        let x = BigFloat::from_i64(0b1011_1111, 4);
        // 191 -> 4 bits: 1100 * 2^4 = 192
        assert_eq!(x.to_f64(), 192.0);
        let y = BigFloat::from_i64(-0b1011_0111, 4);
        assert_eq!(y.to_f64(), -176.0);
    }

    #[test]
    fn add_far_apart_keeps_larger() {
        let big = BigFloat::from_i64(1, 64).mul_pow2(1000);
        let tiny = BigFloat::from_i64(1, 64).mul_pow2(-1000);
        let s = big.add(&tiny);
        assert_eq!(s, big);
        let d = big.sub(&big);
        assert!(d.is_zero());
    }

    #[test]
    fn division_and_sqrt() {
        let third = BigFloat::div_ints(&BigInt::from(1), &BigInt::from(3), 100);
        let back = third.mul_int(3);
        assert!(back.sub(&BigFloat::one(100)).abs_lt_pow2(-98));
        let two = BigFloat::from_i64(2, 200);
        let r = two.sqrt();
        let sq = r.mul(&r);
        assert!(sq.sub(&two).abs_lt_pow2(-197));
        assert!((r.to_f64() - std::f64::consts::SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn decimal_rendering() {
        let third = BigFloat::div_ints(&BigInt::from(1), &BigInt::from(3), 200);
        assert_eq!(third.to_decimal(10), "0.3333333333");
        assert_eq!(BigFloat::from_i64(9740, 64).to_decimal(6), "9740.00");
        assert_eq!(BigFloat::from_i64(-12, 64).to_decimal(2), "-12");
        let tiny = BigFloat::from_f64(1.5e-10, 64);
        assert_eq!(tiny.to_decimal(3), "1.50e-10");
        let nine = BigFloat::from_f64(9.9999, 64);
        assert_eq!(nine.to_decimal(2), "10");
    }

    #[test]
    fn ordering_and_rounding_to_int() {
        let a = BigFloat::from_f64(2.5, 64);
        let b = BigFloat::from_f64(-2.5, 64);
        assert!(b < a);
        assert_eq!(a.round_to_int(), BigInt::from(3));
        assert_eq!(b.round_to_int(), BigInt::from(-3));
        assert_eq!(b.floor_to_int(), BigInt::from(-3));
        assert_eq!(BigFloat::from_f64(-2.25, 64).floor_to_int(), BigInt::from(-3));
    }
}
