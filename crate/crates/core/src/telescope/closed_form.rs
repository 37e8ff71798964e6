use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exprlang::{eval_float, parse, Expr, ExprError};
use crate::mpval::special::{digamma, hurwitz_zeta, zeta_even_rational};
use crate::mpval::{constants, BigFloat, GUARD_BITS};

/// A constant that closed forms are built from.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    One,
    Zeta(u32),
    LogPrime(u64),
    EulerGamma,
    Catalan,
    /// `psi(a)` with `0 < a < 1`.
    Digamma(BigRational),
    /// `zeta(k, a)` with `0 < a < 1`.
    Hurwitz(u32, BigRational),
    /// Any other constant, given by its expression text.
    Constant(String),
}

impl Atom {
    pub fn eval(&self, prec: u32) -> Result<BigFloat, ExprError> {
        Ok(match self {
            Atom::One => BigFloat::one(prec),
            Atom::Zeta(k) => constants::zeta_int(*k, prec),
            Atom::LogPrime(p) => constants::log_int(*p, prec),
            Atom::EulerGamma => constants::gamma(prec),
            Atom::Catalan => constants::catalan(prec),
            Atom::Digamma(a) => digamma(a, prec)?,
            Atom::Hurwitz(k, a) => hurwitz_zeta(*k, a, prec)?,
            Atom::Constant(label) => eval_float(&parse(label)?, &BigFloat::zero(64), prec)?,
        })
    }

    /// Expression text, without coefficient.
    pub fn label(&self) -> String {
        match self {
            Atom::One => "1".into(),
            Atom::Zeta(k) => format!("zeta({k})"),
            Atom::LogPrime(p) => format!("log({p})"),
            Atom::EulerGamma => "gamma".into(),
            Atom::Catalan => "catalan".into(),
            Atom::Digamma(a) => format!("psi({a})"),
            Atom::Hurwitz(k, a) => format!("hurwitz({k},{a})"),
            Atom::Constant(s) => s.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RenderStyle {
    /// Even zeta values stay as `zeta(2k)`.
    Zeta,
    /// Even zeta values become rational multiples of `pi^(2k)`.
    Pi,
}

/// A finite Q-linear combination of atoms. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ClosedForm {
    terms: BTreeMap<Atom, BigRational>,
}

impl ClosedForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn rational(c: BigRational) -> Self {
        Self::term(Atom::One, c)
    }

    pub fn term(atom: Atom, c: BigRational) -> Self {
        let mut cf = Self::zero();
        cf.add_term(atom, c);
        cf
    }

    pub fn add_term(&mut self, atom: Atom, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(atom.clone()).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&atom);
        }
    }

    pub fn add_rational(&mut self, c: BigRational) {
        self.add_term(Atom::One, c);
    }

    /// Adds `c * log(r)` split over primes; falls back to a `Constant` atom
    /// when a factor is too large to split.
    pub fn add_log(&mut self, r: &BigRational, c: &BigRational) {
        assert!(r.is_positive(), "log of non-positive rational");
        for (n, sign) in [(r.numer(), 1i64), (r.denom(), -1i64)] {
            match factor_small(n) {
                Some(fs) => {
                    for (p, e) in fs {
                        self.add_term(Atom::LogPrime(p), c * BigInt::from(sign * e as i64));
                    }
                }
                None => self.add_term(Atom::Constant(format!("log({n})")), c * BigInt::from(sign)),
            }
        }
    }

    pub fn add(&mut self, other: &ClosedForm) {
        for (a, c) in &other.terms {
            self.add_term(a.clone(), c.clone());
        }
    }

    pub fn scaled(&self, s: &BigRational) -> ClosedForm {
        let mut out = ClosedForm::zero();
        for (a, c) in &self.terms {
            out.add_term(a.clone(), c * s);
        }
        out
    }

    pub fn coeff(&self, atom: &Atom) -> BigRational {
        self.terms.get(atom).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Atom, &BigRational)> {
        self.terms.iter()
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.terms.keys()
    }

    pub fn eval(&self, prec: u32) -> Result<BigFloat, ExprError> {
        let wp = prec + GUARD_BITS + 8;
        let mut acc = BigFloat::zero(wp);
        for (a, c) in &self.terms {
            let v = a.eval(wp)?.mul_prec(&BigFloat::from_ratio(c, wp), wp);
            acc = acc.add_prec(&v, wp);
        }
        Ok(acc.with_prec(prec))
    }

    pub fn render(&self, style: RenderStyle) -> String {
        let mut pieces: Vec<(BigRational, String)> = Vec::new();
        for (a, c) in &self.terms {
            match (style, a) {
                (RenderStyle::Pi, Atom::Zeta(k)) if k % 2 == 0 => {
                    pieces.push((c * zeta_even_rational(*k), format!("pi^{k}")));
                }
                (_, Atom::One) => pieces.push((c.clone(), String::new())),
                (_, Atom::Constant(s)) if s.contains(['+', '-']) => {
                    pieces.push((c.clone(), format!("({s})")))
                }
                _ => pieces.push((c.clone(), a.label())),
            }
        }
        let mut out = String::new();
        for (c, label) in pieces {
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if label.is_empty() {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&label);
            } else {
                out.push_str(&format!("{mag}*{label}"));
            }
        }
        out
    }

    /// The closed form as an expression (zero becomes the literal 0).
    pub fn to_expr(&self) -> Expr {
        if self.is_zero() {
            return Expr::int(0);
        }
        parse(&self.render(RenderStyle::Zeta)).expect("closed-form rendering is parseable")
    }
}

impl fmt::Display for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(RenderStyle::Zeta))
    }
}

/// Trial division for values below 2^40.
fn factor_small(n: &BigInt) -> Option<Vec<(u64, u32)>> {
    let mut n = n.to_u64().filter(|&v| v < (1 << 40))?;
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn sample() -> ClosedForm {
        let mut cf = ClosedForm::rational(q(8, 1));
        cf.add_term(Atom::Zeta(2), q(-4, 1));
        cf.add_term(Atom::Zeta(4), q(-1, 1));
        cf
    }

    #[test]
    fn renders_both_styles() {
        let cf = sample();
        assert_eq!(cf.render(RenderStyle::Zeta), "8 - 4*zeta(2) - zeta(4)");
        assert_eq!(cf.render(RenderStyle::Pi), "8 - 2/3*pi^2 - 1/90*pi^4");
        assert_eq!(ClosedForm::zero().render(RenderStyle::Pi), "");
        assert!(ClosedForm::zero().eval(64).unwrap().is_zero());
    }

    #[test]
    fn logs_split_over_primes() {
        let mut cf = ClosedForm::zero();
        cf.add_log(&q(256, 1), &q(1, 1));
        assert_eq!(cf, ClosedForm::term(Atom::LogPrime(2), q(8, 1)));
        cf.add_log(&q(3, 4), &q(1, 1));
        assert_eq!(cf.coeff(&Atom::LogPrime(2)), q(6, 1));
        assert_eq!(cf.coeff(&Atom::LogPrime(3)), q(1, 1));
    }

    #[test]
    fn cancellation_drops_terms() {
        let mut cf = sample();
        cf.add(&sample().scaled(&q(-1, 1)));
        assert!(cf.is_zero());
    }

    #[test]
    fn evaluates() {
        let v = sample().eval(128).unwrap();
        assert!(v.to_decimal(12).starts_with("0.33794049"));
        assert_eq!(sample().to_expr().is_constant(), true);
    }
}
