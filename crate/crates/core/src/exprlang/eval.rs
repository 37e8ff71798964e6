use num_rational::BigRational;
use num_traits::Zero;

use super::{render, Expr, ExprError, Func, NamedConst};
use crate::mpval::elementary::{elem, pow_int};
use crate::mpval::{constants, special, BigFloat, ElemFn, MpError, GUARD_BITS};
use crate::poly::{QPolynomial, RationalFunction};

/// Exact value at `n`, or `NotExact` when a surd or transcendental atom remains.
pub fn eval_rational(e: &Expr, n: &BigRational) -> Result<BigRational, ExprError> {
    Ok(match e {
        Expr::Int(i) => BigRational::from_integer(i.clone()),
        Expr::Rat(r) => r.clone(),
        Expr::Var => n.clone(),
        Expr::Const(_) | Expr::Zeta(_) | Expr::Psi(_) | Expr::Hurwitz(..) | Expr::Func(..) => {
            return Err(ExprError::NotExact)
        }
        Expr::Neg(a) => -eval_rational(a, n)?,
        Expr::Add(a, b) => eval_rational(a, n)? + eval_rational(b, n)?,
        Expr::Sub(a, b) => eval_rational(a, n)? - eval_rational(b, n)?,
        Expr::Mul(a, b) => eval_rational(a, n)? * eval_rational(b, n)?,
        Expr::Div(a, b) => {
            let x = eval_rational(a, n)?;
            let y = eval_rational(b, n)?;
            if y.is_zero() {
                return Err(ExprError::DivisionByZero(render(e)));
            }
            x / y
        }
        Expr::Pow(a, k) => {
            let x = eval_rational(a, n)?;
            if x.is_zero() && *k < 0 {
                return Err(ExprError::DivisionByZero(render(e)));
            }
            let base = if *k < 0 { x.recip() } else { x };
            num_traits::pow(base, k.unsigned_abs() as usize)
        }
    })
}

fn elem_fn(f: Func) -> ElemFn {
    match f {
        Func::Sqrt => ElemFn::Sqrt,
        Func::Exp => ElemFn::Exp,
        Func::Log => ElemFn::Log,
        Func::Tanh => ElemFn::Tanh,
        Func::Coth => ElemFn::Coth,
        Func::Tan => ElemFn::Tan,
        Func::Cot => ElemFn::Cot,
        Func::Atanh => ElemFn::Atanh,
    }
}

/// Numeric value at `n` to about `precision_bits` bits.
pub fn eval_float(e: &Expr, n: &BigFloat, precision_bits: u32) -> Result<BigFloat, ExprError> {
    let wp = precision_bits.max(64) + GUARD_BITS;
    Ok(eval_wp(e, n, wp)?.with_prec(precision_bits.max(64)))
}

fn eval_wp(e: &Expr, n: &BigFloat, wp: u32) -> Result<BigFloat, ExprError> {
    Ok(match e {
        Expr::Int(i) => BigFloat::from_int(i, wp),
        Expr::Rat(r) => BigFloat::from_ratio(r, wp),
        Expr::Var => n.with_prec(wp),
        Expr::Const(c) => match c {
            NamedConst::Pi => constants::pi(wp),
            NamedConst::Gamma => constants::gamma(wp),
            NamedConst::Catalan => constants::catalan(wp),
            NamedConst::E => constants::e(wp),
        },
        Expr::Zeta(k) => constants::zeta_int(*k, wp),
        Expr::Psi(a) => special::digamma(a, wp)?,
        Expr::Hurwitz(k, a) => special::hurwitz_zeta(*k, a, wp)?,
        Expr::Func(f, a) => {
            let x = eval_wp(a, n, wp)?;
            elem(elem_fn(*f), &x, wp)?
        }
        Expr::Neg(a) => eval_wp(a, n, wp)?.neg(),
        Expr::Add(a, b) => eval_wp(a, n, wp)?.add_prec(&eval_wp(b, n, wp)?, wp),
        Expr::Sub(a, b) => eval_wp(a, n, wp)?.sub_prec(&eval_wp(b, n, wp)?, wp),
        Expr::Mul(a, b) => eval_wp(a, n, wp)?.mul_prec(&eval_wp(b, n, wp)?, wp),
        Expr::Div(a, b) => {
            let x = eval_wp(a, n, wp)?;
            let y = eval_wp(b, n, wp)?;
            if y.is_zero() {
                return Err(ExprError::DivisionByZero(render(e)));
            }
            x.div_prec(&y, wp)
        }
        Expr::Pow(a, k) => {
            let x = eval_wp(a, n, wp)?;
            match pow_int(&x, *k, wp) {
                Err(MpError::DivisionByZero) => return Err(ExprError::DivisionByZero(render(e))),
                other => other?,
            }
        }
    })
}

/// Canonical reduced rational function, or `NotRational`.
pub fn as_rational_function(e: &Expr) -> Result<RationalFunction, ExprError> {
    Ok(match e {
        Expr::Int(_) | Expr::Rat(_) => {
            RationalFunction::constant(e.as_literal().expect("literal"))
        }
        Expr::Var => RationalFunction::from_poly(QPolynomial::var()),
        Expr::Const(_) | Expr::Zeta(_) | Expr::Psi(_) | Expr::Hurwitz(..) | Expr::Func(..) => {
            return Err(ExprError::NotRational)
        }
        Expr::Neg(a) => -&as_rational_function(a)?,
        Expr::Add(a, b) => &as_rational_function(a)? + &as_rational_function(b)?,
        Expr::Sub(a, b) => &as_rational_function(a)? - &as_rational_function(b)?,
        Expr::Mul(a, b) => &as_rational_function(a)? * &as_rational_function(b)?,
        Expr::Div(a, b) => as_rational_function(a)?
            .checked_div(&as_rational_function(b)?)
            .ok_or_else(|| ExprError::DivisionByZero(render(e)))?,
        Expr::Pow(a, k) => as_rational_function(a)?
            .pow(*k)
            .ok_or_else(|| ExprError::DivisionByZero(render(e)))?,
    })
}
