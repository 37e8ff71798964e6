use cf_forge_core::cfengine::{partial_sum, sum_series, CFSpec};
use cf_forge_core::telescope::{
    closed_form_for, recombine, sum_closed_form_from, summand, summand_terms, Atom, ClosedForm,
    RenderStyle,
};
use num_bigint::BigInt;
use num_rational::BigRational;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn form(rational: i64, zetas: &[(u32, i64)], log2: i64) -> ClosedForm {
    let mut cf = ClosedForm::rational(q(rational));
    for &(k, c) in zetas {
        cf.add_term(Atom::Zeta(k), q(c));
    }
    cf.add_term(Atom::LogPrime(2), q(log2));
    cf
}

fn closed(f: &str, g: &str) -> ClosedForm {
    closed_form_for(&CFSpec::parse(f, g).unwrap()).unwrap()
}

#[test]
fn printed_zeta_forms() {
    assert_eq!(closed("n^4", "2*n+1"), form(8, &[(2, -4), (4, -1)], 0));
    assert_eq!(closed("n^2", "n+1"), form(1, &[(2, -1), (3, 1)], 0));
    assert_eq!(closed("n^3", "n+1"), form(-1, &[(2, 1), (3, -1), (4, 1)], 0));
    assert_eq!(
        closed("n^7", "n+1"),
        form(-1, &[(2, 1), (3, -1), (4, 1), (5, -1), (6, 1), (7, -1), (8, 1)], 0)
    );
    assert_eq!(closed("n*(2*n+1)", "n+1"), form(-7, &[(2, 1)], 8));
}

#[test]
fn pi_style_rendering() {
    assert_eq!(closed("n^4", "2*n+1").render(RenderStyle::Pi), "8 - 2/3*pi^2 - 1/90*pi^4");
    assert_eq!(closed("n*(2*n+1)", "n+1").render(RenderStyle::Pi), "-7 + 1/6*pi^2 + 8*log(2)");
}

#[test]
fn summands_recombine() {
    for (f, g) in [("n^4", "2*n+1"), ("n^7", "n+1"), ("n*(2*n+1)", "n+1"), ("n^4/(n+2)", "n+1")] {
        let spec = CFSpec::parse(f, g).unwrap();
        assert_eq!(recombine(&summand_terms(&spec).unwrap()), summand(&spec).unwrap());
    }
}

#[test]
fn closed_forms_match_numeric_sums() {
    let prec = 200;
    for (f, g) in [
        ("n^4", "2*n+1"),
        ("n^5", "n+1"),
        ("n*(3*n+1)", "n+1"),
        ("n^2*(n+1)", "n+2"),
        ("n^4/(n+2)", "n+1"),
        ("n^3", "3*n+1"),
    ] {
        let spec = CFSpec::parse(f, g).unwrap();
        let cf = closed_form_for(&spec).unwrap();
        let s = sum_series(&spec, prec).unwrap();
        let v = cf.eval(prec).unwrap();
        let d = s.value.sub(&v).abs();
        let bound = s.error_estimate.add(&cf_forge_core::mpval::BigFloat::one(64).mul_pow2(-(prec as i64) + 40));
        assert!(d <= bound, "{f}, {g}: {cf} off by 2^{}", d.log2_abs());
    }
}

#[test]
fn prefix_plus_tail_is_whole() {
    for (f, g) in [("n^2", "n+1"), ("n^4", "2*n+1"), ("n*(2*n+1)", "n+1")] {
        let spec = CFSpec::parse(f, g).unwrap();
        let terms = summand_terms(&spec).unwrap();
        let whole = closed_form_for(&spec).unwrap();
        for n in [0u64, 1, 5] {
            let mut cf = sum_closed_form_from(&terms, n + 1).unwrap();
            cf.add_rational(partial_sum(&spec, n).unwrap());
            assert_eq!(cf, whole, "{f}, {g}, N = {n}");
        }
    }
}
