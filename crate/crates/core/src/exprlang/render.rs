use num_traits::Signed;

use super::Expr;

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => 1,
        Expr::Mul(..) | Expr::Div(..) => 2,
        Expr::Rat(r) if r.is_negative() => 2,
        Expr::Rat(r) if !r.is_integer() => 2,
        Expr::Int(i) if i.is_negative() => 3,
        Expr::Neg(_) => 3,
        Expr::Pow(..) => 4,
        _ => 5,
    }
}

fn is_signed(e: &Expr) -> bool {
    matches!(e, Expr::Neg(_)) || e.as_literal().is_some_and(|r| r.is_negative())
}

fn wrap(out: &mut String, e: &Expr, min: u8, force: bool) {
    if force || prec(e) < min {
        out.push('(');
        write(out, e);
        out.push(')');
    } else {
        write(out, e);
    }
}

fn write(out: &mut String, e: &Expr) {
    match e {
        Expr::Int(i) => out.push_str(&i.to_string()),
        Expr::Rat(r) => out.push_str(&r.to_string()),
        Expr::Var => out.push('n'),
        Expr::Const(c) => out.push_str(c.name()),
        Expr::Zeta(k) => out.push_str(&format!("zeta({k})")),
        Expr::Psi(a) => out.push_str(&format!("psi({a})")),
        Expr::Hurwitz(k, a) => out.push_str(&format!("hurwitz({k},{a})")),
        Expr::Func(f, a) => {
            out.push_str(f.name());
            out.push('(');
            write(out, a);
            out.push(')');
        }
        Expr::Neg(a) => {
            out.push('-');
            wrap(out, a, 4, false);
        }
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            wrap(out, a, 1, false);
            out.push(if matches!(e, Expr::Add(..)) { '+' } else { '-' });
            wrap(out, b, 2, is_signed(b));
        }
        Expr::Mul(a, b) | Expr::Div(a, b) => {
            wrap(out, a, 2, false);
            out.push(if matches!(e, Expr::Mul(..)) { '*' } else { '/' });
            wrap(out, b, 4, false);
        }
        Expr::Pow(a, k) => {
            wrap(out, a, 5, false);
            out.push('^');
            out.push_str(&k.to_string());
        }
    }
}

/// Renders in the input grammar; `parse(render(e)) == normalize(e)`.
pub fn render(e: &Expr) -> String {
    let mut out = String::new();
    write(&mut out, e);
    out
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;

    fn rt(s: &str) -> String {
        render(&parse(s).unwrap())
    }

    #[test]
    fn renders_compactly() {
        assert_eq!(rt("n^4"), "n^4");
        assert_eq!(rt("2*n+1"), "2*n+1");
        assert_eq!(rt("(1+2*3)"), "7");
        assert_eq!(rt("n*(1/2)"), "n*(1/2)");
        assert_eq!(rt("-(n+1)"), "-(n+1)");
        assert_eq!(rt("(-n)^2"), "(-n)^2");
        assert_eq!(rt("n - (1 - n)"), "n-(1-n)");
        assert_eq!(rt("n^-2"), "n^-2");
        assert_eq!(rt("1-pi*coth(sqrt(2)*pi)/(3*sqrt(2))"), "1-pi*coth(sqrt(2)*pi)/(3*sqrt(2))");
    }
}
