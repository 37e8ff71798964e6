use cf_forge_core::exprlang::{
    as_rational_function, eval_float, eval_rational, normalize, parse, render, Expr, Func, NamedConst,
};
use cf_forge_core::mpval::BigFloat;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn small_rat() -> impl Strategy<Value = BigRational> {
    (1i64..20, 1i64..12).prop_map(|(a, b)| BigRational::new(a.into(), b.into()))
}

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        (-50i64..50).prop_map(Expr::int),
        small_rat().prop_map(Expr::Rat),
        Just(Expr::Var),
        Just(Expr::Const(NamedConst::Pi)),
        Just(Expr::Const(NamedConst::Gamma)),
        Just(Expr::Const(NamedConst::Catalan)),
        Just(Expr::Const(NamedConst::E)),
        (2u32..9).prop_map(Expr::Zeta),
        small_rat().prop_map(Expr::Psi),
        (2u32..6, small_rat()).prop_map(|(k, a)| Expr::Hurwitz(k, a)),
    ]
}

fn any_expr() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(4, 32, 2, |inner| {
        prop_oneof![
            (0..Func::ALL.len(), inner.clone()).prop_map(|(i, a)| Expr::func(Func::ALL[i], a)),
            inner.clone().prop_map(Expr::neg),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::add(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::sub(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::mul(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::div(a, b)),
            (inner, -4i64..5).prop_map(|(a, k)| Expr::pow(a, k)),
        ]
    })
}

fn rational_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![(-9i64..10).prop_map(Expr::int), small_rat().prop_map(Expr::Rat), Just(Expr::Var)];
    leaf.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Expr::neg),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::add(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::sub(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::mul(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::div(a, b)),
            (inner, -3i64..4).prop_map(|(a, k)| Expr::pow(a, k)),
        ]
    })
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1200))]

    #[test]
    fn render_parse_round_trip(e in any_expr()) {
        let once = parse(&render(&e)).unwrap();
        let twice = parse(&render(&once)).unwrap();
        prop_assert_eq!(&once, &twice);
        prop_assert_eq!(normalize(&once), once);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn rational_and_float_agree(e in rational_expr(), n in 0i64..=100) {
        let prec = 160;
        if let Ok(r) = eval_rational(&e, &q(n)) {
            let f = eval_float(&e, &BigFloat::from_i64(n, 64), prec).unwrap();
            let exact = BigFloat::from_ratio(&r, prec + 64);
            let scale = exact.log2_abs().max(0.0).ceil() as i64;
            prop_assert!(f.sub(&exact).abs_lt_pow2(-(prec as i64) + 32 + scale));
        }
    }

    #[test]
    fn rational_function_matches_pointwise(e in rational_expr()) {
        let Ok(rf) = as_rational_function(&e) else { return Ok(()) };
        for n in 0..=20 {
            let pointwise = eval_rational(&e, &q(n)).ok();
            // cancellation in the reduced form can remove a pole of the tree
            if let Some(v) = pointwise {
                prop_assert_eq!(rf.eval(&q(n)), Some(v));
            }
        }
    }
}
