use cf_forge_core::cfengine::{sum_series, verify_identity, CFSpec, VerifyStatus};
use cf_forge_core::exprlang::{eval_float, parse};
use cf_forge_core::mpval::BigFloat;

fn check(f: &str, g: &str, closed: &str, prec: u32, tol_bits: i64) {
    let spec = CFSpec::parse(f, g).unwrap();
    let t = std::time::Instant::now();
    let s = sum_series(&spec, prec).unwrap();
    let c = eval_float(&parse(closed).unwrap(), &BigFloat::zero(64), prec).unwrap();
    let d = s.value.sub(&c);
    eprintln!(
        "{f} | {g}: terms {} err_est 2^{:.1} actual 2^{:.1} in {:?}",
        s.n_terms,
        s.error_estimate.log2_abs(),
        d.log2_abs(),
        t.elapsed()
    );
    assert!(d.abs_lt_pow2(-tol_bits), "{f}, {g}: diff 2^{}", d.log2_abs());
    assert!(!s.rigorous);
}

#[test]
fn polynomial_sums_match_printed_values() {
    check("n^2", "n+1", "zeta(3)-pi^2/6+1", 180, 160);
    check("n^4", "2*n+1", "8-2*pi^2/3-pi^4/90", 180, 160);
    check("n^3", "n+1", "-zeta(3)+pi^4/90+pi^2/6-1", 180, 160);
    check("n*(2*n+1)", "n+1", "pi^2/6-7+log(256)", 180, 160);
}

#[test]
fn exponential_family_matches() {
    check("exp(-2*n-8)*n^3", "exp(n)", "exp(9)*zeta(3)", 180, 150);
}

#[test]
fn surd_family_matches() {
    check("n*(n^2+2)", "n+2", "1-pi*coth(sqrt(2)*pi)/(3*sqrt(2))", 180, 150);
}

#[test]
fn verify_detects_perturbation() {
    let spec = CFSpec::parse("n^2", "n+1").unwrap();
    let good = verify_identity(&spec, &parse("zeta(3)-pi^2/6+1").unwrap(), 180, 40).unwrap();
    assert_eq!(good.status, VerifyStatus::Verified);
    assert!(good.cf_agrees);
    let bad = verify_identity(&spec, &parse("zeta(3)-pi^2/6+1+1/10^10").unwrap(), 180, 40).unwrap();
    assert_eq!(bad.status, VerifyStatus::Mismatch);
}
