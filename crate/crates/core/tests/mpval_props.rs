use cf_forge_core::mpval::elementary::{atanh, exp, ln, tanh};
use cf_forge_core::mpval::special::zeta_even_rational;
use cf_forge_core::mpval::{constants, BigFloat, GUARD_BITS};
use proptest::prelude::*;

/// `|a - b| <= k ulps of b` at `prec` bits.
fn within_ulps(a: &BigFloat, b: &BigFloat, prec: u32, k_log2: i64) -> bool {
    let d = a.sub(b);
    d.is_zero() || d.abs_lt_pow2(b.top_exp() - prec as i64 + k_log2)
}

fn constant(which: u8, prec: u32) -> BigFloat {
    match which {
        0 => constants::pi(prec),
        1 => constants::gamma(prec),
        2 => constants::catalan(prec),
        3 => constants::ln2(prec),
        4 => constants::e(prec),
        k => constants::zeta_int(k as u32 - 2, prec),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn exp_inverts_log(x in 1e-3f64..1e3) {
        let prec = 200;
        let x = BigFloat::from_f64(x, prec);
        let wp = prec + GUARD_BITS;
        let y = exp(&ln(&x, wp).unwrap(), wp).unwrap().with_prec(prec);
        prop_assert!(within_ulps(&y, &x, prec, 2));
    }

    #[test]
    fn tanh_inverts_atanh(x in -0.99f64..0.99) {
        let prec = 200;
        let x = BigFloat::from_f64(x, prec);
        let wp = prec + GUARD_BITS;
        let y = tanh(&atanh(&x, wp).unwrap(), wp).with_prec(prec);
        prop_assert!(within_ulps(&y, &x, prec, 2));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn doubling_precision_is_consistent(which in 0u8..11, prec in 64u32..400) {
        let lo = constant(which, prec);
        let hi = constant(which, 2 * prec);
        prop_assert!(within_ulps(&lo, &hi, prec, 0), "constant {which} at {prec} bits");
    }
}

#[test]
fn even_zeta_matches_bernoulli() {
    let prec = 300;
    for k in 1..=6u32 {
        let z = constants::zeta_int(2 * k, prec);
        let c = BigFloat::from_ratio(&zeta_even_rational(2 * k), prec + 32);
        let v = c.mul(&constants::pi(prec + 32).powi(2 * k as u64)).with_prec(prec);
        assert!(within_ulps(&z, &v, prec, 1), "zeta({})", 2 * k);
        // the second route goes through Euler-Maclaurin only
        let alt = constants::zeta_int_alt(2 * k, prec);
        assert!(within_ulps(&alt, &v, prec, 1), "zeta({}) alt", 2 * k);
    }
}
