//! Dense univariate polynomials over Q and reduced rational functions.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Coefficients ascending by degree, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct QPolynomial {
    coeffs: Vec<BigRational>,
}

impl QPolynomial {
    pub fn zero() -> Self {
        QPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The polynomial `n`.
    pub fn var() -> Self {
        Self::from_coeffs(vec![BigRational::zero(), BigRational::one()])
    }

    /// `n + a`.
    pub fn linear(a: BigRational) -> Self {
        Self::from_coeffs(vec![a, BigRational::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPolynomial { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// `p(n + c)`.
    pub fn shift(&self, c: &BigRational) -> Self {
        let mut out = Self::zero();
        let lin = Self::linear(c.clone());
        for coef in self.coeffs.iter().rev() {
            out = &(&out * &lin) + &Self::constant(coef.clone());
        }
        out
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * rat(k as i64))
                .collect(),
        )
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lead().recip())
    }

    /// Euclidean division; panics if `d` is zero.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.coeffs.len() - 1;
        let lead_inv = d.lead().recip();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![BigRational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] * &lead_inv;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] = &r[k + j] - &c * dc;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Self::from_coeffs(q), Self::from_coeffs(r))
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(c, p)` with `self = c * p`, `p` having coprime integer coefficients
    /// and a positive leading coefficient.
    pub fn primitive(&self) -> (BigRational, Vec<BigInt>) {
        if self.is_zero() {
            return (BigRational::zero(), Vec::new());
        }
        let den = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
            .collect();
        let mut g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if ints.last().is_some_and(|c| c.is_negative()) {
            g = -g;
        }
        let prim = ints.iter().map(|c| c / &g).collect();
        (BigRational::new(g, den), prim)
    }

    pub fn primitive_poly(&self) -> Self {
        let (_, p) = self.primitive();
        Self::from_coeffs(p.into_iter().map(BigRational::from_integer).collect())
    }

    /// Number of sign changes of a Sturm sequence at `x`.
    fn sturm_changes(seq: &[QPolynomial], x: &BigRational) -> usize {
        let mut changes = 0;
        let mut last = 0i8;
        for p in seq {
            let v = p.eval(x);
            let s = if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            };
            if s != 0 {
                if last != 0 && s != last {
                    changes += 1;
                }
                last = s;
            }
        }
        changes
    }

    fn sturm_sequence(&self) -> Vec<QPolynomial> {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(-&r);
        }
        seq
    }

    /// Distinct rational roots, ascending.
    pub fn rational_roots(&self) -> Vec<BigRational> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let sf = {
            let g = self.gcd(&self.derivative());
            self.div_rem(&g).0.monic()
        };
        let (_, prim) = sf.primitive();
        let lead = prim.last().cloned().unwrap_or_else(BigInt::one).abs();
        // any two fractions with denominators <= lead are at least 1/lead^2 apart
        let width = BigRational::new(BigInt::one(), &lead * &lead * 2);
        let bound = {
            let l = sf.lead().abs();
            let m = sf.coeffs.iter().map(|c| c.abs()).fold(BigRational::zero(), |a, b| {
                if b > a {
                    b
                } else {
                    a
                }
            });
            m / l + BigRational::one()
        };
        let seq = sf.sturm_sequence();
        let mut out = Vec::new();
        let mut stack = vec![(-bound.clone(), bound)];
        while let Some((lo, hi)) = stack.pop() {
            // roots in (lo, hi]
            let count = Self::sturm_changes(&seq, &lo) - Self::sturm_changes(&seq, &hi);
            if count == 0 {
                continue;
            }
            if count == 1 && &hi - &lo < width {
                if let Some(r) = simplest_in(&lo, &hi) {
                    if sf.eval(&r).is_zero() {
                        out.push(r);
                    }
                }
                if sf.eval(&hi).is_zero() && !out.contains(&hi) {
                    out.push(hi);
                }
                continue;
            }
            let mid = (&lo + &hi) / rat(2);
            stack.push((lo, mid.clone()));
            stack.push((mid, hi));
        }
        out.sort();
        out.dedup();
        out
    }

    /// Renders in the expression grammar, highest degree first.
    pub fn to_expr_string(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push(if neg { '-' } else { '+' });
            }
            let mono = match k {
                0 => String::new(),
                1 => "n".into(),
                _ => format!("n^{k}"),
            };
            if mono.is_empty() {
                s.push_str(&a.to_string());
            } else if a.is_one() {
                s.push_str(&mono);
            } else {
                s.push_str(&format!("{a}*{mono}"));
            }
        }
        s
    }
}

/// Simplest fraction (least denominator, then least |numerator|) in `[lo, hi]`.
fn simplest_in(lo: &BigRational, hi: &BigRational) -> Option<BigRational> {
    if lo > hi {
        return None;
    }
    if lo.is_negative() && hi.is_positive() || lo.is_zero() || hi.is_zero() {
        return Some(BigRational::zero());
    }
    if hi.is_negative() {
        return simplest_in(&-hi, &-lo).map(|r| -r);
    }
    // 0 < lo <= hi
    let fl = lo.floor();
    if fl == *lo {
        return Some(fl);
    }
    if fl.clone() + BigRational::one() <= *hi {
        return Some(fl + BigRational::one());
    }
    // same integer part: recurse on reciprocals of fractional parts
    let lo_f = lo - &fl;
    let hi_f = hi - &fl;
    let inner = simplest_in(&hi_f.recip(), &lo_f.recip())?;
    Some(fl + inner.recip())
}

impl fmt::Display for QPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr_string())
    }
}

impl<'a> Add<&'a QPolynomial> for &'a QPolynomial {
    type Output = QPolynomial;
    fn add(self, rhs: &QPolynomial) -> QPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        QPolynomial::from_coeffs((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<'a> Sub<&'a QPolynomial> for &'a QPolynomial {
    type Output = QPolynomial;
    fn sub(self, rhs: &QPolynomial) -> QPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        QPolynomial::from_coeffs((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<'a> Mul<&'a QPolynomial> for &'a QPolynomial {
    type Output = QPolynomial;
    fn mul(self, rhs: &QPolynomial) -> QPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return QPolynomial::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPolynomial::from_coeffs(out)
    }
}

impl Neg for &QPolynomial {
    type Output = QPolynomial;
    fn neg(self) -> QPolynomial {
        QPolynomial::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

/// `num / den` with `den` monic and coprime to `num`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: QPolynomial,
    den: QPolynomial,
}

impl RationalFunction {
    /// Panics if `den` is zero.
    pub fn new(num: QPolynomial, den: QPolynomial) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return RationalFunction { num, den: QPolynomial::one() };
        }
        let g = num.gcd(&den);
        let num = num.div_rem(&g).0;
        let den = den.div_rem(&g).0;
        let l = den.lead();
        RationalFunction { num: num.scale(&l.recip()), den: den.scale(&l.recip()) }
    }

    pub fn from_poly(p: QPolynomial) -> Self {
        RationalFunction { num: p, den: QPolynomial::one() }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_poly(QPolynomial::constant(c))
    }

    pub fn num(&self) -> &QPolynomial {
        &self.num
    }

    pub fn den(&self) -> &QPolynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn as_polynomial(&self) -> Option<QPolynomial> {
        self.is_polynomial().then(|| self.num.scale(&self.den.lead().recip()))
    }

    /// `None` at a pole.
    pub fn eval(&self, x: &BigRational) -> Option<BigRational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(x) / d)
    }

    pub fn shift(&self, c: &BigRational) -> Self {
        Self::new(self.num.shift(c), self.den.shift(c))
    }

    pub fn recip(&self) -> Option<Self> {
        (!self.num.is_zero()).then(|| Self::new(self.den.clone(), self.num.clone()))
    }

    pub fn pow(&self, k: i64) -> Option<Self> {
        let base = if k < 0 { self.recip()? } else { self.clone() };
        let k = k.unsigned_abs() as u32;
        Some(RationalFunction { num: base.num.pow(k), den: base.den.pow(k) })
    }

    pub fn to_expr_string(&self) -> String {
        if self.den.is_constant() {
            return self.num.to_expr_string();
        }
        format!("({})/({})", self.num.to_expr_string(), self.den.to_expr_string())
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr_string())
    }
}

impl<'a> Add<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl<'a> Sub<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::new(
            &(&self.num * &rhs.den) - &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl<'a> Mul<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }
}

impl RationalFunction {
    /// `None` when dividing by zero.
    pub fn checked_div(&self, rhs: &RationalFunction) -> Option<RationalFunction> {
        Some(self * &rhs.recip()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn arithmetic_and_division() {
        let a = QPolynomial::from_i64s(&[1, 1]); // n+1
        let b = QPolynomial::from_i64s(&[2, 1]); // n+2
        let p = &a * &b;
        assert_eq!(p, QPolynomial::from_i64s(&[2, 3, 1]));
        let (qq, r) = p.div_rem(&a);
        assert_eq!(qq, b);
        assert!(r.is_zero());
        assert_eq!(p.gcd(&a), a);
    }

    #[test]
    fn shift_matches_eval() {
        let p = QPolynomial::from_i64s(&[3, 0, -2, 1]);
        let s = p.shift(&q(3, 2));
        for k in -3..4 {
            let x = rat(k);
            assert_eq!(s.eval(&x), p.eval(&(&x + q(3, 2))));
        }
    }

    #[test]
    fn rational_roots_found() {
        // 4 (n+1/2)(n+3/2)(n+1)^4
        let mut p = QPolynomial::constant(rat(4));
        p = &p * &QPolynomial::linear(q(1, 2));
        p = &p * &QPolynomial::linear(q(3, 2));
        p = &p * &QPolynomial::linear(rat(1)).pow(4);
        assert_eq!(p.rational_roots(), vec![q(-3, 2), rat(-1), q(-1, 2)]);
        assert!(QPolynomial::from_i64s(&[1, 0, 1]).rational_roots().is_empty());
        assert_eq!(QPolynomial::from_i64s(&[0, 0, 1]).rational_roots(), vec![rat(0)]);
        // 6n^2 - n - 2 = (2n+1)(3n-2)
        assert_eq!(QPolynomial::from_i64s(&[-2, -1, 6]).rational_roots(), vec![q(-1, 2), q(2, 3)]);
        // irrational roots of n^2 - 2 rejected, rational 5/7 kept
        let p = &QPolynomial::from_i64s(&[-2, 0, 1]) * &QPolynomial::from_i64s(&[-5, 7]);
        assert_eq!(p.rational_roots(), vec![q(5, 7)]);
    }

    #[test]
    fn primitive_form() {
        let p = QPolynomial::from_coeffs(vec![q(-1, 2), q(-1, 3)]);
        let (c, prim) = p.primitive();
        assert_eq!(prim, vec![BigInt::from(3), BigInt::from(2)]);
        assert_eq!(c, q(-1, 6));
    }

    #[test]
    fn rendering() {
        assert_eq!(QPolynomial::from_i64s(&[1, 2]).to_expr_string(), "2*n+1");
        assert_eq!(QPolynomial::from_i64s(&[0, 0, 0, 0, 1]).to_expr_string(), "n^4");
        assert_eq!(QPolynomial::from_coeffs(vec![q(-1, 2), rat(-1)]).to_expr_string(), "-n-1/2");
    }

    #[test]
    fn rational_function_reduces() {
        let num = &QPolynomial::from_i64s(&[1, 1]) * &QPolynomial::from_i64s(&[0, 2]);
        let den = QPolynomial::from_i64s(&[2, 2]);
        let r = RationalFunction::new(num, den);
        assert!(r.is_polynomial());
        assert_eq!(r.as_polynomial().unwrap(), QPolynomial::from_i64s(&[0, 1]));
    }
}
