use cf_forge_core::cfengine::{iterate_cf, partial_sum, sum_series, CFSpec, Mode, Value};
use num_rational::BigRational;
use num_traits::One;

const SPECS: &[(&str, &str)] = &[
    ("n^2", "n+1"),
    ("n^3", "n+1"),
    ("n^4", "2*n+1"),
    ("n^7", "n+1"),
    ("n^4/(n+2)", "n+3"),
    ("n^5*(n+1)", "n+1"),
    ("n^6/(n+2)", "(n+1)/(n^2+1)"),
    ("n*(2*n+1)", "n+1"),
    ("n^5", "4*(n^2+n)+1"),
    ("n*(4*n^2+3*n)", "n+2"),
];

fn exact(v: Value) -> BigRational {
    v.as_exact().cloned().expect("exact value")
}

#[test]
fn exact_convergent_identities() {
    for &(f, g) in SPECS {
        let spec = CFSpec::parse(f, g).unwrap();
        let g0 = exact(spec.g_at(0, 64).unwrap());
        let mut f_prod = BigRational::one();
        let mut prev = iterate_cf(&spec, 0, Mode::Exact, 64).unwrap();
        for n in 0..=50u64 {
            let st = iterate_cf(&spec, n, Mode::Exact, 64).unwrap();
            assert_eq!(st.exact_ratio().unwrap(), partial_sum(&spec, n).unwrap(), "{f}, {g}, n={n}");
            if n >= 1 {
                let det = exact(st.q.clone()) * exact(prev.p.clone())
                    - exact(prev.q.clone()) * exact(st.p.clone());
                assert_eq!(det, &f_prod * &f_prod, "{f}, {g}, n={n}");
            }
            f_prod *= exact(spec.f_at(n as i64 + 1, 64).unwrap());
            let g_next = exact(spec.g_at(n as i64 + 1, 64).unwrap());
            assert_eq!(exact(st.p.clone()) * &g0, &f_prod * g_next, "{f}, {g}, n={n}");
            prev = st;
        }
    }
}

#[test]
fn partial_sums_bracket_the_limit() {
    for &(f, g) in &SPECS[..4] {
        let spec = CFSpec::parse(f, g).unwrap();
        let s = sum_series(&spec, 160).unwrap();
        let bound = s.value.add(&s.error_estimate);
        let mut last = partial_sum(&spec, 0).unwrap();
        for n in 1..40 {
            let cur = partial_sum(&spec, n).unwrap();
            assert!(cur > last, "{f}, {g}: not increasing at {n}");
            let cur_f = cf_forge_core::mpval::BigFloat::from_ratio(&cur, 192);
            assert!(cur_f <= bound, "{f}, {g}: exceeds limit at {n}");
            last = cur;
        }
    }
}
