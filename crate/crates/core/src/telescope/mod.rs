//! Exact closed forms of `sum_{n>=0} R(n)` for rational `R` whose
//! denominator splits into linear factors with rational roots.

mod closed_form;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::cfengine::CFSpec;
use crate::poly::{QPolynomial, RationalFunction};

pub use closed_form::{Atom, ClosedForm, RenderStyle};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TelescopeError {
    #[error("denominator has the non-linear factor {0}")]
    NonLinearRemainder(QPolynomial),
    #[error("numerator degree is not below the denominator degree")]
    DegreeTooHigh,
    #[error("simple-pole coefficients sum to {0}, series diverges")]
    NonConvergent(BigRational),
    #[error("term has a pole at n = {0}")]
    PoleAtIndex(i64),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

/// A factor `(n + shift)^multiplicity`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearFactor {
    pub shift: BigRational,
    pub multiplicity: u32,
}

/// `unit * prod (n + shift)^multiplicity`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: BigRational,
    pub factors: Vec<LinearFactor>,
}

impl Factorization {
    pub fn expand(&self) -> QPolynomial {
        let mut p = QPolynomial::constant(self.unit.clone());
        for f in &self.factors {
            p = &p * &QPolynomial::linear(f.shift.clone()).pow(f.multiplicity);
        }
        p
    }
}

/// Splits `p` into rational linear factors, ordered by shift.
pub fn factor_shifts(p: &QPolynomial) -> Result<Factorization, TelescopeError> {
    assert!(!p.is_zero(), "factor_shifts of the zero polynomial");
    let mut rest = p.clone();
    let mut factors = Vec::new();
    for root in p.rational_roots() {
        let lin = QPolynomial::linear(-&root);
        let mut m = 0;
        loop {
            let (q, r) = rest.div_rem(&lin);
            if !r.is_zero() {
                break;
            }
            rest = q;
            m += 1;
        }
        factors.push(LinearFactor { shift: -root, multiplicity: m });
    }
    if !rest.is_constant() {
        return Err(TelescopeError::NonLinearRemainder(rest.monic()));
    }
    factors.sort_by(|a, b| a.shift.cmp(&b.shift));
    Ok(Factorization { unit: rest.lead(), factors })
}

/// `c / (n + shift)^power`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PfTerm {
    pub coeff: BigRational,
    pub shift: BigRational,
    pub power: u32,
}

/// First `k` coefficients of the power series `num(t) / den(t)`.
fn series_quotient(num: &QPolynomial, den: &QPolynomial, k: usize) -> Vec<BigRational> {
    let d0 = den.coeff(0);
    assert!(!d0.is_zero(), "series division by a multiple of t");
    let mut out: Vec<BigRational> = Vec::with_capacity(k);
    for i in 0..k {
        let mut s = num.coeff(i);
        for j in 1..=i {
            s -= den.coeff(j) * &out[i - j];
        }
        out.push(s / &d0);
    }
    out
}

/// Decomposes `num / fact.expand()` into simple terms.
pub fn partial_fractions(
    num: &QPolynomial,
    fact: &Factorization,
) -> Result<Vec<PfTerm>, TelescopeError> {
    let total: u32 = fact.factors.iter().map(|f| f.multiplicity).sum();
    if num.degree().is_some_and(|d| d >= total as usize) {
        return Err(TelescopeError::DegreeTooHigh);
    }
    let mut out = Vec::new();
    for (j, fj) in fact.factors.iter().enumerate() {
        // expand around n = -a_j with t = n + a_j
        let back = -&fj.shift;
        let n_t = num.shift(&back);
        let mut d_t = QPolynomial::constant(fact.unit.clone());
        for (i, fi) in fact.factors.iter().enumerate() {
            if i != j {
                let lin = QPolynomial::linear(&fi.shift - &fj.shift);
                d_t = &d_t * &lin.pow(fi.multiplicity);
            }
        }
        let m = fj.multiplicity as usize;
        let coeffs = series_quotient(&n_t, &d_t, m);
        for (k, c) in coeffs.into_iter().enumerate() {
            if !c.is_zero() {
                out.push(PfTerm { coeff: c, shift: fj.shift.clone(), power: (m - k) as u32 });
            }
        }
    }
    Ok(out)
}

/// Recombines terms into a single rational function.
pub fn recombine(terms: &[PfTerm]) -> RationalFunction {
    let mut acc = RationalFunction::constant(BigRational::zero());
    for t in terms {
        let den = QPolynomial::linear(t.shift.clone()).pow(t.power);
        acc = &acc + &RationalFunction::new(QPolynomial::constant(t.coeff.clone()), den);
    }
    acc
}

fn q_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn pow_recip(x: &BigRational, m: u32) -> BigRational {
    num_traits::pow(x.recip(), m as usize)
}

/// `sum_{n>=0} 1/(n+a)^m` for `a > 0`, `m >= 2`.
fn hurwitz_closed(m: u32, a: &BigRational) -> ClosedForm {
    let j = (a.ceil() - BigRational::one()).to_integer().to_u64().expect("small shift");
    let frac = a - q_int(j as i64);
    // frac in (0, 1]; peel j leading terms
    let mut cf = if frac.is_one() {
        ClosedForm::term(Atom::Zeta(m), BigRational::one())
    } else if frac == BigRational::new(1.into(), 2.into()) {
        // zeta(m, 1/2) = (2^m - 1) zeta(m)
        ClosedForm::term(Atom::Zeta(m), BigRational::from_integer((BigInt::one() << m as usize) - 1))
    } else {
        ClosedForm::term(Atom::Hurwitz(m, frac.clone()), BigRational::one())
    };
    for i in 0..j {
        cf.add_rational(-pow_recip(&(&frac + q_int(i as i64)), m));
    }
    cf
}

/// `psi(a)` for `a > 0`.
fn digamma_closed(a: &BigRational) -> ClosedForm {
    let j = (a.ceil() - BigRational::one()).to_integer().to_u64().expect("small shift");
    let frac = a - q_int(j as i64);
    let mut cf = if frac.is_one() {
        ClosedForm::term(Atom::EulerGamma, q_int(-1))
    } else if frac == BigRational::new(1.into(), 2.into()) {
        let mut c = ClosedForm::term(Atom::EulerGamma, q_int(-1));
        c.add_term(Atom::LogPrime(2), q_int(-2));
        c
    } else {
        ClosedForm::term(Atom::Digamma(frac.clone()), BigRational::one())
    };
    for i in 0..j {
        cf.add_rational((&frac + q_int(i as i64)).recip());
    }
    cf
}

/// `sum_{n>=0}` of the given terms.
pub fn sum_closed_form(terms: &[PfTerm]) -> Result<ClosedForm, TelescopeError> {
    sum_closed_form_from(terms, 0)
}

/// Largest shift magnitude handled by peeling and finite corrections.
pub const MAX_SHIFT: i64 = 1_000_000;

/// `sum_{n>=start}` of the given terms.
pub fn sum_closed_form_from(terms: &[PfTerm], start: u64) -> Result<ClosedForm, TelescopeError> {
    let simple: BigRational = terms.iter().filter(|t| t.power == 1).map(|t| t.coeff.clone()).sum();
    if !simple.is_zero() {
        return Err(TelescopeError::NonConvergent(simple));
    }
    let start_q = q_int(start as i64);
    let limit = q_int(MAX_SHIFT);
    if terms.iter().any(|t| (&t.shift + &start_q).abs() > limit) {
        return Err(TelescopeError::Unsupported(format!("shift beyond {MAX_SHIFT}")));
    }
    let min_shift = terms.iter().map(|t| &t.shift + &start_q).min();
    let mut out = ClosedForm::zero();
    // peel leading terms until every shift is positive
    let mut peel = 0u64;
    if let Some(ms) = min_shift {
        if !ms.is_positive() {
            peel = (-ms).floor().to_integer().to_u64().expect("small shift") + 1;
        }
    }
    for k in 0..peel {
        let n = &start_q + q_int(k as i64);
        for t in terms {
            let x = &n + &t.shift;
            if x.is_zero() {
                return Err(TelescopeError::PoleAtIndex((start + k) as i64));
            }
            out.add_rational(&t.coeff * pow_recip(&x, t.power));
        }
    }
    let offset = &start_q + q_int(peel as i64);
    for t in terms {
        let a = &t.shift + &offset;
        if t.power >= 2 {
            out.add(&hurwitz_closed(t.power, &a).scaled(&t.coeff));
        } else {
            // sum c_a/(n+a) = -sum c_a psi(a) when sum c_a = 0
            out.add(&digamma_closed(&a).scaled(&-&t.coeff));
        }
    }
    Ok(out)
}

/// The summand `g(0)^2 / (f(n+1) g(n) g(n+1))` as a rational function.
pub fn summand(spec: &CFSpec) -> Result<RationalFunction, TelescopeError> {
    let (f, g) = match (spec.f_rational(), spec.g_rational()) {
        (Some(f), Some(g)) => (f, g),
        _ => return Err(TelescopeError::Unsupported("f or g is not a rational function".into())),
    };
    let one = BigRational::one();
    let g0 = g.eval(&BigRational::zero()).ok_or(TelescopeError::PoleAtIndex(0))?;
    let den = &(&f.shift(&one) * g) * &g.shift(&one);
    let num = RationalFunction::constant(&g0 * &g0);
    num.checked_div(&den).ok_or(TelescopeError::PoleAtIndex(0))
}

/// Partial-fraction terms of the summand.
pub fn summand_terms(spec: &CFSpec) -> Result<Vec<PfTerm>, TelescopeError> {
    let r = summand(spec)?;
    let fact = factor_shifts(r.den())?;
    partial_fractions(r.num(), &fact)
}

/// Closed form of `S = g(0)^2 sum 1/(f(i+1) g(i) g(i+1))`.
pub fn closed_form_for(spec: &CFSpec) -> Result<ClosedForm, TelescopeError> {
    sum_closed_form(&summand_terms(spec)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn factors_expected_shapes() {
        let p = &QPolynomial::linear(q(1, 1)).pow(3) * &QPolynomial::linear(q(2, 1));
        let f = factor_shifts(&p).unwrap();
        assert_eq!(f.unit, q(1, 1));
        assert_eq!(
            f.factors,
            vec![
                LinearFactor { shift: q(1, 1), multiplicity: 3 },
                LinearFactor { shift: q(2, 1), multiplicity: 1 }
            ]
        );
        assert_eq!(f.expand(), p);
        let irr = QPolynomial::from_i64s(&[1, 0, 1]);
        assert_eq!(factor_shifts(&irr), Err(TelescopeError::NonLinearRemainder(irr)));
    }

    #[test]
    fn partial_fraction_examples() {
        let fact = Factorization {
            unit: q(1, 1),
            factors: vec![
                LinearFactor { shift: q(1, 1), multiplicity: 4 },
                LinearFactor { shift: q(2, 1), multiplicity: 1 },
            ],
        };
        let terms = partial_fractions(&QPolynomial::one(), &fact).unwrap();
        let want = [(1, 1, 4), (-1, 1, 3), (1, 1, 2), (-1, 1, 1), (1, 2, 1)];
        assert_eq!(terms.len(), want.len());
        for (t, (c, a, m)) in terms.iter().zip(want) {
            assert_eq!((t.coeff.clone(), t.shift.clone(), t.power), (q(c, 1), q(a, 1), m));
        }
        assert_eq!(recombine(&terms), RationalFunction::new(QPolynomial::one(), fact.expand()));
        let cf = sum_closed_form(&terms).unwrap();
        let mut want = ClosedForm::rational(q(-1, 1));
        want.add_term(Atom::Zeta(2), q(1, 1));
        want.add_term(Atom::Zeta(3), q(-1, 1));
        want.add_term(Atom::Zeta(4), q(1, 1));
        assert_eq!(cf, want);
    }

    #[test]
    fn simple_telescoping() {
        let terms = vec![
            PfTerm { coeff: q(1, 1), shift: q(1, 1), power: 1 },
            PfTerm { coeff: q(-1, 1), shift: q(2, 1), power: 1 },
        ];
        assert_eq!(sum_closed_form(&terms).unwrap(), ClosedForm::rational(q(1, 1)));
        let bad = vec![PfTerm { coeff: q(1, 1), shift: q(1, 1), power: 1 }];
        assert!(matches!(sum_closed_form(&bad), Err(TelescopeError::NonConvergent(_))));
    }

    #[test]
    fn peels_non_positive_shifts() {
        // sum_{n>=0} 1/((n+1)^2) written with shift -1 from start 2
        let terms = vec![PfTerm { coeff: q(1, 1), shift: q(-1, 1), power: 2 }];
        let cf = sum_closed_form_from(&terms, 2).unwrap();
        assert_eq!(cf, ClosedForm::term(Atom::Zeta(2), q(1, 1)));
        let cf0 = sum_closed_form(&[PfTerm { coeff: q(1, 1), shift: q(-1, 2), power: 2 }]).unwrap();
        // 4 + sum 1/(n+1/2)^2 = 4 + 3 zeta(2)
        let mut want = ClosedForm::rational(q(4, 1));
        want.add_term(Atom::Zeta(2), q(3, 1));
        assert_eq!(cf0, want);
        let pole = vec![PfTerm { coeff: q(1, 1), shift: q(-1, 1), power: 2 }];
        assert_eq!(sum_closed_form(&pole), Err(TelescopeError::PoleAtIndex(1)));
    }
}
