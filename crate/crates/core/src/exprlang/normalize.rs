use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::Expr;

fn lit(r: BigRational) -> Expr {
    if r.is_integer() {
        Expr::Int(r.to_integer())
    } else {
        Expr::Rat(r)
    }
}

fn is_negative_lit(e: &Expr) -> bool {
    e.as_literal().is_some_and(|r| r.is_negative())
}

fn pow_rat(r: &BigRational, k: i64) -> Option<BigRational> {
    if r.is_zero() && k < 0 {
        return None;
    }
    if k.unsigned_abs() > 4096 {
        return None;
    }
    let base = if k < 0 { r.recip() } else { r.clone() };
    let mut out = BigRational::one();
    for _ in 0..k.unsigned_abs() {
        out *= &base;
    }
    Some(out)
}

/// Constant-folds rational arithmetic and tidies signs. Products are never
/// expanded. Idempotent.
pub fn normalize(e: &Expr) -> Expr {
    match e {
        Expr::Int(_) | Expr::Var | Expr::Const(_) | Expr::Zeta(_) | Expr::Psi(_) => e.clone(),
        Expr::Hurwitz(..) => e.clone(),
        Expr::Rat(r) => lit(r.clone()),
        Expr::Func(f, a) => Expr::func(*f, normalize(a)),
        Expr::Neg(a) => {
            let a = normalize(a);
            if let Some(r) = a.as_literal() {
                return lit(-r);
            }
            match a {
                Expr::Neg(inner) => *inner,
                other => Expr::neg(other),
            }
        }
        Expr::Pow(a, k) => {
            let a = normalize(a);
            if let Some(r) = a.as_literal() {
                if let Some(v) = pow_rat(&r, *k) {
                    return lit(v);
                }
            }
            Expr::pow(a, *k)
        }
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
            let a = normalize(a);
            let b = normalize(b);
            if let (Some(x), Some(y)) = (a.as_literal(), b.as_literal()) {
                let v = match e {
                    Expr::Add(..) => Some(x + y),
                    Expr::Sub(..) => Some(x - y),
                    Expr::Mul(..) => Some(x * y),
                    _ => (!y.is_zero()).then(|| x / y),
                };
                if let Some(v) = v {
                    return lit(v);
                }
            }
            match e {
                Expr::Add(..) if is_negative_lit(&b) => {
                    Expr::sub(a, lit(-b.as_literal().expect("literal")))
                }
                Expr::Sub(..) if is_negative_lit(&b) => {
                    Expr::add(a, lit(-b.as_literal().expect("literal")))
                }
                Expr::Add(..) => Expr::add(a, b),
                Expr::Sub(..) => Expr::sub(a, b),
                Expr::Mul(..) => Expr::mul(a, b),
                _ => Expr::div(a, b),
            }
        }
    }
}
