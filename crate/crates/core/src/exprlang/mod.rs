//! The expression language for sequence functions `f(n)`, `g(n)` and for
//! constant closed forms.

mod eval;
mod normalize;
mod parser;
mod render;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::mpval::MpError;

pub use eval::{as_rational_function, eval_float, eval_rational};
pub use normalize::normalize;
pub use parser::{parse, parse_raw};
pub use render::render;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NamedConst {
    Pi,
    Gamma,
    Catalan,
    E,
}

impl NamedConst {
    pub fn name(self) -> &'static str {
        match self {
            NamedConst::Pi => "pi",
            NamedConst::Gamma => "gamma",
            NamedConst::Catalan => "catalan",
            NamedConst::E => "e",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Func {
    Sqrt,
    Exp,
    Log,
    Tanh,
    Coth,
    Tan,
    Cot,
    Atanh,
}

impl Func {
    pub const ALL: [Func; 8] = [
        Func::Sqrt,
        Func::Exp,
        Func::Log,
        Func::Tanh,
        Func::Coth,
        Func::Tan,
        Func::Cot,
        Func::Atanh,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sqrt => "sqrt",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Tanh => "tanh",
            Func::Coth => "coth",
            Func::Tan => "tan",
            Func::Cot => "cot",
            Func::Atanh => "atanh",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Int(BigInt),
    Rat(BigRational),
    Var,
    Const(NamedConst),
    /// `zeta(k)`, `k >= 2`.
    Zeta(u32),
    /// Digamma at a positive rational.
    Psi(BigRational),
    /// Hurwitz zeta `zeta(k, a)` at a positive rational shift.
    Hurwitz(u32, BigRational),
    Func(Func, Box<Expr>),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

impl Expr {
    pub fn int(n: i64) -> Expr {
        Expr::Int(BigInt::from(n))
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        Expr::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::Sub(Box::new(a), Box::new(b))
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        Expr::Mul(Box::new(a), Box::new(b))
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        Expr::Div(Box::new(a), Box::new(b))
    }

    pub fn neg(a: Expr) -> Expr {
        Expr::Neg(Box::new(a))
    }

    pub fn pow(a: Expr, k: i64) -> Expr {
        Expr::Pow(Box::new(a), k)
    }

    pub fn func(f: Func, a: Expr) -> Expr {
        Expr::Func(f, Box::new(a))
    }

    /// True when the tree contains no `n`.
    pub fn is_constant(&self) -> bool {
        match self {
            Expr::Var => false,
            Expr::Int(_)
            | Expr::Rat(_)
            | Expr::Const(_)
            | Expr::Zeta(_)
            | Expr::Psi(_)
            | Expr::Hurwitz(..) => true,
            Expr::Func(_, a) | Expr::Neg(a) | Expr::Pow(a, _) => a.is_constant(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.is_constant() && b.is_constant()
            }
        }
    }

    /// Literal value, if this node is an integer or rational literal.
    pub fn as_literal(&self) -> Option<BigRational> {
        match self {
            Expr::Int(i) => Some(BigRational::from_integer(i.clone())),
            Expr::Rat(r) => Some(r.clone()),
            _ => None,
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self))
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("expression has no exact rational value")]
    NotExact,
    #[error("expression is not a rational function of n")]
    NotRational,
    #[error("division by zero in `{0}`")]
    DivisionByZero(String),
    #[error(transparent)]
    Domain(#[from] MpError),
}
