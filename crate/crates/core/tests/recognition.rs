use cf_forge_core::cfengine::{sum_series, CFSpec};
use cf_forge_core::exprlang::{eval_float, parse};
use cf_forge_core::mpval::{constants, BigFloat};
use cf_forge_core::recognizer::{
    default_basis, fixed, pslq, recognize, roundtrip_precision, ConstantBasis, Recognition,
};
use cf_forge_core::telescope::{closed_form_for, ClosedForm};
use num_bigint::BigInt;

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn series(f: &str, g: &str) -> impl Fn(u32) -> Result<BigFloat, cf_forge_core::cfengine::CfError> {
    let spec = CFSpec::parse(f, g).unwrap();
    move |bits| sum_series(&spec, bits + 16).map(|r| r.value.with_prec(bits))
}

#[test]
fn quartic_value_relation() {
    let prec = 256;
    let x = series("n^4", "2*n+1")(prec).unwrap();
    let basis = ConstantBasis::from_labels(0, &["1", "pi^2", "pi^4"]).unwrap();
    let mut values = vec![x];
    values.extend(basis.eval(prec).unwrap());
    let rel = pslq(&values, prec, 64).unwrap().expect("relation");
    assert_eq!(rel.coefficients, ints(&[90, -720, 60, 1]));
    assert!(rel.residual.abs_lt_pow2(-(prec as i64) / 2));
    assert!(rel.confidence_bits > 100);
}

#[test]
fn square_triple_recognized() {
    let basis = ConstantBasis::from_labels(0, &["1", "zeta(2)", "zeta(3)"]).unwrap();
    let r = recognize(series("n^2", "n+1"), &basis, 256, 64).unwrap();
    let cf = r.closed_form().expect("match");
    assert_eq!(cf.to_string(), "1 - zeta(2) + zeta(3)");
}

#[test]
fn level_one_recognizes_quartic_value() {
    let basis = default_basis(1).unwrap();
    let r = recognize(series("n^4", "2*n+1"), &basis, 512, 64).unwrap();
    assert_eq!(r.closed_form().unwrap().to_string(), "8 - 4*zeta(2) - zeta(4)");
}

#[test]
fn perturbed_pi_has_no_small_relation() {
    let basis = ConstantBasis::from_labels(0, &["1", "pi"]).unwrap();
    let x = |bits: u32| eval_float(&parse("pi+1/1000").unwrap(), &BigFloat::zero(64), bits);
    let r = recognize(x, &basis, 300, 8).unwrap();
    assert!(matches!(r, Recognition::NoMatch { .. }));
    // with a wide coefficient budget the perturbation itself is a relation
    let r = recognize(x, &basis, 300, 64).unwrap();
    assert_eq!(r.closed_form().unwrap().to_string(), "1/1000 + pi");
}

#[test]
fn fixed_value_fails_cross_validation() {
    // agrees with pi to 300 bits only, so the relation cannot sharpen
    let prec = 300;
    let p = constants::pi(prec + 64).add(&BigFloat::one(prec + 64).mul_pow2(-(prec as i64) - 8));
    let basis = ConstantBasis::from_labels(0, &["1", "pi"]).unwrap();
    let r = recognize(fixed(&p), &basis, prec, 64).unwrap();
    assert!(matches!(r, Recognition::NoMatch { .. }), "{r:?}");
}

#[test]
fn closed_forms_round_trip() {
    for (f, g) in [
        ("n^2", "n+1"),
        ("n^3", "n+1"),
        ("n^4", "2*n+1"),
        ("n^7", "n+1"),
        ("n*(2*n+1)", "n+1"),
        ("n^2", "1"),
        ("n^3", "2*n+1"),
    ] {
        let spec = CFSpec::parse(f, g).unwrap();
        let cf = closed_form_for(&spec).unwrap();
        let level = if cf.atoms().any(|a| matches!(a, cf_forge_core::telescope::Atom::LogPrime(_))) {
            2
        } else {
            1
        };
        let basis = default_basis(level).unwrap();
        let prec = roundtrip_precision(&cf, basis.len() + 1);
        let cf2 = cf.clone();
        let x = move |bits: u32| cf2.eval(bits);
        let r = recognize(x, &basis, prec, 64).unwrap();
        let got: &ClosedForm = r.closed_form().unwrap_or_else(|| panic!("{f}, {g}: {r:?}"));
        assert_eq!(got, &cf, "{f}, {g}");
    }
}
