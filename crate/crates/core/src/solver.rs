//! Reverse direction: from a conjectured `(a_n, b_n)` back to `(f, g)`.
//!
//! Two shapes are recognized. The direct one has `a_n = -f(n)^2` and
//! `b_n g(n) = f(n+1) g(n+1) + f(n) g(n-1)`. The transformed one arises after
//! multiplying level `n` of the fraction by `g(n)`, which gives
//! `a_n = -f(n)^2 g(n-1) g(n)` and the polynomial
//! `b_n = f(n+1) g(n+1) + f(n) g(n-1)`; its value is `g(0)` times the direct one.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::cfengine::CFSpec;
use crate::exprlang::{as_rational_function, Expr, ExprError};
use crate::poly::{QPolynomial, RationalFunction};
use crate::telescope::{closed_form_for, factor_shifts, ClosedForm};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error("a_n is identically zero")]
    ZeroA,
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| BigRational::new(n, d))
}

/// Square root with positive leading coefficient, if `p` is a perfect square.
pub fn poly_sqrt(p: &QPolynomial) -> Option<QPolynomial> {
    let deg = p.degree()?;
    if deg % 2 == 1 {
        return None;
    }
    let half = deg / 2;
    let lead = rational_sqrt(&p.lead())?;
    // match coefficients from the top: q_{half-k} fixed by p_{deg-k}
    let mut r = vec![BigRational::zero(); half + 1];
    r[half] = lead.clone();
    let two_lead = &lead * q(2);
    for k in 1..=half {
        let mut s = p.coeff(deg - k);
        for i in 1..k {
            s -= &r[half - i] * &r[half - k + i];
        }
        r[half - k] = s / &two_lead;
    }
    let cand = QPolynomial::from_coeffs(r);
    (&cand * &cand == *p).then_some(cand)
}

/// Square root of a rational function, numerator and denominator separately.
pub fn rf_sqrt(r: &RationalFunction) -> Option<RationalFunction> {
    let den = poly_sqrt(r.den())?;
    let num = poly_sqrt(r.num())?;
    Some(RationalFunction::new(num, den))
}

/// `b g - f(n+1) g(n+1) - f g(n-1)`, as a rational function.
pub fn residual(f: &RationalFunction, b: &RationalFunction, g: &QPolynomial) -> RationalFunction {
    let one = BigRational::one();
    let gr = RationalFunction::from_poly(g.clone());
    let up = &f.shift(&one) * &RationalFunction::from_poly(g.shift(&one));
    let down = f * &RationalFunction::from_poly(g.shift(&-one));
    &(&(b * &gr) - &up) - &down
}

/// Column `k` of the linear system: `D (b n^k - f(n+1)(n+1)^k - f(n)(n-1)^k)`.
fn system_columns(f: &RationalFunction, b: &RationalFunction, d: usize) -> Vec<QPolynomial> {
    let one = BigRational::one();
    let f1 = f.shift(&one);
    let denom = &(b.den() * f1.den()) * f.den();
    let scale = |r: &RationalFunction| -> QPolynomial {
        let (quot, rem) = (&denom * r.num()).div_rem(r.den());
        debug_assert!(rem.is_zero());
        quot
    };
    let bb = scale(b);
    let ff1 = scale(&f1);
    let ff = scale(f);
    let up = QPolynomial::linear(one.clone());
    let down = QPolynomial::linear(-one);
    (0..=d)
        .map(|k| {
            let nk = QPolynomial::var().pow(k as u32);
            let t1 = &bb * &nk;
            let t2 = &ff1 * &up.pow(k as u32);
            let t3 = &ff * &down.pow(k as u32);
            &(&t1 - &t2) - &t3
        })
        .collect()
}

/// Basis of the nullspace of the matrix whose columns are `cols`.
fn nullspace(cols: &[QPolynomial]) -> Vec<Vec<BigRational>> {
    let ncols = cols.len();
    let nrows = cols.iter().filter_map(|c| c.degree()).max().map_or(0, |d| d + 1);
    let mut m: Vec<Vec<BigRational>> =
        (0..nrows).map(|r| cols.iter().map(|c| c.coeff(r)).collect()).collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(p) = (row..nrows).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for x in m[row].iter_mut() {
            *x *= &inv;
        }
        for r in 0..nrows {
            if r != row && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in 0..ncols {
                    let v = &m[row][c] * &factor;
                    m[r][c] -= v;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == nrows {
            break;
        }
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![BigRational::zero(); ncols];
            v[fc] = BigRational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -&m[r][fc];
            }
            v
        })
        .collect()
}

/// All `g` with `deg g <= max_degree` solving the functional equation, as a
/// degree-echelon basis of primitive polynomials, lowest degree first.
pub fn solve_g(f: &RationalFunction, b: &RationalFunction, max_degree: usize) -> Vec<QPolynomial> {
    let cols = system_columns(f, b, max_degree);
    let mut basis: Vec<QPolynomial> =
        nullspace(&cols).into_iter().map(QPolynomial::from_coeffs).collect();
    // echelonize by degree
    let mut out: Vec<QPolynomial> = Vec::new();
    basis.sort_by_key(|p| std::cmp::Reverse(p.degree()));
    while let Some(top) = basis.first().cloned() {
        let d = top.degree().expect("nonzero basis vector");
        basis.remove(0);
        for p in basis.iter_mut() {
            if p.degree() == Some(d) {
                let c = p.lead() / top.lead();
                *p = &*p - &top.scale(&c);
            }
        }
        basis.retain(|p| !p.is_zero());
        basis.sort_by_key(|p| std::cmp::Reverse(p.degree()));
        out.push(top);
    }
    let mut out: Vec<QPolynomial> = out.into_iter().map(|p| p.primitive_poly()).collect();
    out.sort_by_key(|p| p.degree());
    out
}

/// Candidate `(f, g)` for `-a = (n+alpha)^2 (n+beta) (n+gamma)` after moving
/// `alpha` to the origin and scaling away `(gamma - beta)^2`.
pub fn normalize_quartic(
    alpha: &BigRational,
    beta: &BigRational,
    gamma: &BigRational,
) -> Option<(QPolynomial, QPolynomial)> {
    let b1 = beta - alpha;
    let g1 = gamma - alpha;
    let d = &g1 - &b1;
    if d.is_zero() {
        return None;
    }
    Some((QPolynomial::var(), QPolynomial::from_coeffs(vec![b1, d])))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProofStatus {
    Proved,
    Candidate,
    Failed,
}

impl ProofStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            ProofStatus::Proved => "proved",
            ProofStatus::Candidate => "candidate",
            ProofStatus::Failed => "failed",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    /// `a = -f^2`, `b g = f(n+1) g(n+1) + f g(n-1)`; the fraction is `1/S`.
    Direct,
    /// `a = -f^2 g(n-1) g`, `b = f(n+1) g(n+1) + f g(n-1)`; the fraction is `g(0)/S`.
    Transformed,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProofChecks {
    pub b0_consistent: bool,
    pub f0_zero: bool,
    /// `Some(deg g)` once the residual has been expanded to the zero polynomial.
    pub functional_identity_verified_degree: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct ProofResult {
    pub status: ProofStatus,
    pub route: Option<Route>,
    pub f: Option<RationalFunction>,
    pub g: Option<QPolynomial>,
    /// Closed form of `S = g(0)^2 sum 1/(f(i+1) g(i) g(i+1))`.
    pub closed_form: Option<ClosedForm>,
    pub checks: ProofChecks,
    pub diagnostics: Vec<String>,
}

impl ProofResult {
    fn failed(diagnostics: Vec<String>) -> Self {
        ProofResult {
            status: ProofStatus::Failed,
            route: None,
            f: None,
            g: None,
            closed_form: None,
            checks: ProofChecks::default(),
            diagnostics,
        }
    }
}

fn is_const_zero(r: &RationalFunction) -> bool {
    r.is_zero()
}

/// Builds the result for a verified `(f, g)` pair.
fn finish(route: Route, f: RationalFunction, g: QPolynomial, b0_consistent: bool) -> ProofResult {
    let zero = BigRational::zero();
    let f0_zero = f.eval(&zero).is_some_and(|v| v.is_zero());
    let checks = ProofChecks {
        b0_consistent,
        f0_zero,
        functional_identity_verified_degree: Some(g.degree().unwrap_or(0)),
    };
    let mut diagnostics = Vec::new();
    let closed_form = if f0_zero && b0_consistent {
        let f_expr = crate::exprlang::parse(&f.to_expr_string()).expect("rendered rational function");
        let g_expr = crate::exprlang::parse(&g.to_expr_string()).expect("rendered polynomial");
        match CFSpec::new(f_expr, g_expr) {
            Ok(spec) => match closed_form_for(&spec) {
                Ok(cf) => Some(cf),
                Err(e) => {
                    diagnostics.push(format!("no symbolic closed form: {e}"));
                    None
                }
            },
            Err(e) => {
                diagnostics.push(format!("recovered pair is not a valid spec: {e}"));
                None
            }
        }
    } else {
        None
    };
    let status = match (&closed_form, f0_zero && b0_consistent) {
        (Some(_), true) => ProofStatus::Proved,
        (None, true) => ProofStatus::Candidate,
        _ => ProofStatus::Failed,
    };
    if !f0_zero {
        diagnostics.push("f(0) != 0".into());
    }
    if !b0_consistent {
        diagnostics.push("b(0) does not match f(1) g(1) / g(0)".into());
    }
    ProofResult { status, route: Some(route), f: Some(f), g: Some(g), closed_form, checks, diagnostics }
}

/// Residual of the degree-1 ansatz `g = eta1 n + eta0`, one linear form per power of `n`.
fn eta_diagnostic(f: &RationalFunction, b: &RationalFunction) -> String {
    let cols = system_columns(f, b, 1);
    let rows = cols.iter().filter_map(|c| c.degree()).max().map_or(0, |d| d + 1);
    let mut parts = Vec::new();
    for r in (0..rows).rev() {
        let c0 = cols[0].coeff(r);
        let c1 = cols[1].coeff(r);
        if c0.is_zero() && c1.is_zero() {
            continue;
        }
        let mut lin = String::new();
        for (c, name) in [(c1, "eta1"), (c0, "eta0")] {
            if c.is_zero() {
                continue;
            }
            if !lin.is_empty() {
                lin.push_str(if c.is_negative() { " - " } else { " + " });
            } else if c.is_negative() {
                lin.push('-');
            }
            let a = c.abs();
            if a.is_one() {
                lin.push_str(name);
            } else {
                lin.push_str(&format!("{a}*{name}"));
            }
        }
        let mono = match r {
            0 => String::new(),
            1 => "*n".into(),
            _ => format!("*n^{r}"),
        };
        parts.push(format!("({lin}){mono}"));
    }
    format!("residual for g = eta1*n + eta0: {} = 0", parts.join(" + "))
}

fn direct_route(
    minus_a: &RationalFunction,
    b: &RationalFunction,
    max_degree: usize,
) -> Option<ProofResult> {
    let f = rf_sqrt(minus_a)?;
    let mut partial: Option<ProofResult> = None;
    for f in [f.clone(), -&f] {
        for g in solve_g(&f, b, max_degree) {
            debug_assert!(is_const_zero(&residual(&f, b, &g)));
            if !is_const_zero(&residual(&f, b, &g)) {
                continue;
            }
            let zero = BigRational::zero();
            let one = BigRational::one();
            let g0 = g.eval(&zero);
            if g0.is_zero() {
                continue;
            }
            let b0 = b.eval(&zero);
            let want = f.eval(&one).map(|f1| f1 * g.eval(&one) / &g0);
            let b0_ok = matches!((b0, want), (Some(x), Some(y)) if x == y);
            let res = finish(Route::Direct, f.clone(), g, b0_ok);
            if res.status == ProofStatus::Proved {
                return Some(res);
            }
            if partial.as_ref().is_none_or(|p| rank(res.status) > rank(p.status)) {
                partial = Some(res);
            }
        }
    }
    partial
}

fn rank(s: ProofStatus) -> u8 {
    match s {
        ProofStatus::Proved => 2,
        ProofStatus::Candidate => 1,
        ProofStatus::Failed => 0,
    }
}

/// Monic `g` candidates built from sub-multisets of the linear factors of `p`.
fn factor_subsets(p: &QPolynomial, max_degree: usize) -> Vec<QPolynomial> {
    let Ok(fact) = factor_shifts(p) else { return Vec::new() };
    let mut out = vec![QPolynomial::one()];
    for lf in &fact.factors {
        let lin = QPolynomial::linear(lf.shift.clone());
        let mut next = Vec::new();
        for base in &out {
            let mut cur = base.clone();
            for _ in 0..=lf.multiplicity {
                if cur.degree().unwrap_or(0) <= max_degree {
                    next.push(cur.clone());
                }
                cur = &cur * &lin;
            }
        }
        out = next;
    }
    out
}

fn transformed_route(
    minus_a: &RationalFunction,
    b: &RationalFunction,
    max_degree: usize,
) -> Option<ProofResult> {
    let a_poly = minus_a.as_polynomial()?;
    let b_poly = b.as_polynomial()?;
    let mut candidates = factor_subsets(&a_poly, max_degree);
    // quartic shape from the normalization steps, accepted only after verification
    if let Ok(fact) = factor_shifts(&a_poly) {
        let shifts: Vec<_> = fact
            .factors
            .iter()
            .flat_map(|f| std::iter::repeat_n(f.shift.clone(), f.multiplicity as usize))
            .collect();
        if shifts.len() == 4 {
            for i in 0..4 {
                for j in 0..4 {
                    if i == j || shifts[i] != shifts[j] {
                        continue;
                    }
                    let rest: Vec<_> = (0..4).filter(|k| *k != i && *k != j).collect();
                    if let Some((_, g)) =
                        normalize_quartic(&shifts[i], &shifts[rest[0]], &shifts[rest[1]])
                    {
                        candidates.push(g.monic());
                    }
                }
            }
        }
    }
    let one = BigRational::one();
    let zero = BigRational::zero();
    let mut partial: Option<ProofResult> = None;
    for g in candidates {
        let gg = &g * &g.shift(&-&one);
        let (quot, rem) = a_poly.div_rem(&gg);
        if !rem.is_zero() {
            continue;
        }
        let Some(f) = poly_sqrt(&quot) else { continue };
        for f in [f.clone(), -&f] {
            let rebuilt = &(&f.shift(&one) * &g.shift(&one)) + &(&f * &g.shift(&-&one));
            if rebuilt != b_poly {
                continue;
            }
            let g0 = g.eval(&zero);
            if g0.is_zero() {
                continue;
            }
            let b0_ok = b_poly.eval(&zero) == f.eval(&one) * g.eval(&one);
            // keep f^2 g(n-1) g(n) and b unchanged when g is made primitive
            let g = g.primitive_poly();
            let f = f.scale(&g.lead().recip());
            let res = finish(Route::Transformed, RationalFunction::from_poly(f), g, b0_ok);
            if res.status == ProofStatus::Proved {
                return Some(res);
            }
            if partial.as_ref().is_none_or(|p| rank(res.status) > rank(p.status)) {
                partial = Some(res);
            }
        }
    }
    partial
}

/// Recovers `(f, g)` from `(a, b)` and proves the identity when possible.
pub fn prove(a: &Expr, b: &Expr, max_degree: usize) -> Result<ProofResult, SolverError> {
    let a = as_rational_function(a)?;
    let b = as_rational_function(b)?;
    if a.is_zero() {
        return Err(SolverError::ZeroA);
    }
    let minus_a = -&a;
    let direct = direct_route(&minus_a, &b, max_degree);
    if let Some(r) = &direct {
        if r.status == ProofStatus::Proved {
            return Ok(r.clone());
        }
    }
    let transformed = transformed_route(&minus_a, &b, max_degree);
    let best = match (direct, transformed) {
        (Some(d), Some(t)) => Some(if rank(t.status) > rank(d.status) { t } else { d }),
        (d, t) => d.or(t),
    };
    if let Some(r) = best {
        return Ok(r);
    }
    let mut diagnostics = Vec::new();
    match rf_sqrt(&minus_a) {
        Some(f) => {
            diagnostics.push(format!("f = {f} from -a_n, but no g of degree <= {max_degree}"));
            diagnostics.push(eta_diagnostic(&f, &b));
        }
        None => diagnostics.push("-a_n is not a perfect square and no factor split matched b_n".into()),
    }
    Ok(ProofResult::failed(diagnostics))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exprlang::parse;

    fn rf(s: &str) -> RationalFunction {
        as_rational_function(&parse(s).unwrap()).unwrap()
    }

    fn poly(s: &str) -> QPolynomial {
        rf(s).as_polynomial().unwrap()
    }

    #[test]
    fn square_roots() {
        assert_eq!(poly_sqrt(&poly("n^8")), Some(poly("n^4")));
        assert_eq!(poly_sqrt(&poly("4*n^6")), Some(poly("2*n^3")));
        assert_eq!(poly_sqrt(&poly("n^8+1")), None);
        assert_eq!(poly_sqrt(&poly("(n^2+n/2)^2")), Some(poly("n^2+n/2")));
        assert_eq!(poly_sqrt(&poly("n^3")), None);
    }

    #[test]
    fn solve_g_quartic_family() {
        let f = rf("n^4");
        let b = rf("2*n^4+4*n^3+10*n^2+8*n+3");
        assert_eq!(solve_g(&f, &b, 3), vec![poly("2*n+1")]);
        assert_eq!(solve_g(&rf("n^2"), &rf("2*n^2+2*n+1"), 2), vec![poly("1")]);
        assert!(solve_g(&rf("n^3"), &rf("2*n^3+3*n^2+6*n+1"), 4).is_empty());
    }

    #[test]
    fn quartic_normalization() {
        let (f, g) = normalize_quartic(&q(0), &q(1), &q(2)).unwrap();
        assert_eq!((f, g), (poly("n"), poly("n+1")));
        let half = BigRational::new(1.into(), 2.into());
        let (_, g) = normalize_quartic(&q(0), &half, &(q(3) * &half)).unwrap();
        assert_eq!(g, poly("n+1/2"));
        assert!(normalize_quartic(&q(0), &q(1), &q(1)).is_none());
    }

    #[test]
    fn proves_quartic_instance() {
        let r = prove(&parse("-n^8").unwrap(), &parse("n^4+(n+1)^4+2*(n^2+(n+1)^2)").unwrap(), 6)
            .unwrap();
        assert_eq!(r.status, ProofStatus::Proved);
        assert_eq!(r.g, Some(poly("2*n+1")));
        assert_eq!(r.f, Some(rf("n^4")));
        assert_eq!(r.checks.functional_identity_verified_degree, Some(1));
    }

    #[test]
    fn perturbed_b_fails_with_residual() {
        let r = prove(&parse("-n^4").unwrap(), &parse("2*n^2+2*n+1+1").unwrap(), 6).unwrap();
        assert_eq!(r.status, ProofStatus::Failed);
        assert!(r.diagnostics.iter().any(|d| d.contains("eta1")));
    }

    #[test]
    fn rational_b_path() {
        let spec = CFSpec::parse("n^3", "n+1").unwrap();
        let b = spec.b_rational().unwrap();
        assert!(!b.is_polynomial());
        let b_expr = parse(&b.to_expr_string()).unwrap();
        let r = prove(&parse("-n^6").unwrap(), &b_expr, 6).unwrap();
        assert_eq!(r.status, ProofStatus::Proved);
        assert_eq!(r.g, Some(poly("n+1")));
    }

    #[test]
    fn transformed_shape() {
        // f = n, g = n+1: a = -n^2 n (n+1), b = (n+1)(n+2) + n^2
        let r = prove(&parse("-n^3*(n+1)").unwrap(), &parse("(n+1)*(n+2)+n^2").unwrap(), 6).unwrap();
        assert_eq!(r.route, Some(Route::Transformed));
        assert_eq!(r.status, ProofStatus::Proved);
        assert_eq!(r.g, Some(poly("n+1")));
        assert_eq!(r.f, Some(rf("n")));
    }
}
