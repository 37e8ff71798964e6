use cf_forge_core::cfengine::{iterate_cf, sum_series, CFSpec, Mode};
use cf_forge_core::exprlang::parse;
use cf_forge_core::mpval::constants;
use cf_forge_core::recognizer::{pslq, ConstantBasis};
use cf_forge_core::solver::prove;
use cf_forge_core::telescope::closed_form_for;
use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

fn series(c: &mut Criterion) {
    let mut group = c.benchmark_group("sum_series");
    for (f, g) in [("n^4", "2*n+1"), ("n^2", "n+1"), ("exp(-2*n-8)*n^3", "exp(n)")] {
        let spec = CFSpec::parse(f, g).unwrap();
        for bits in [170, 670] {
            group.bench_with_input(BenchmarkId::new(format!("{f}|{g}"), bits), &bits, |b, &bits| {
                b.iter(|| sum_series(black_box(&spec), bits).unwrap())
            });
        }
    }
    group.finish();
}

fn convergents(c: &mut Criterion) {
    let spec = CFSpec::parse("n^7", "n+1").unwrap();
    c.bench_function("exact_convergents_n7_200", |b| {
        b.iter(|| iterate_cf(black_box(&spec), 200, Mode::Exact, 64).unwrap())
    });
    c.bench_function("float_convergents_n7_1000", |b| {
        b.iter(|| iterate_cf(black_box(&spec), 1000, Mode::Float, 170).unwrap())
    });
}

fn symbolic(c: &mut Criterion) {
    let spec = CFSpec::parse("n^7", "n+1").unwrap();
    c.bench_function("telescope_n7", |b| b.iter(|| closed_form_for(black_box(&spec)).unwrap()));
    let a = parse("-n^8").unwrap();
    let bb = parse("n^4+(n+1)^4+2*(n^2+(n+1)^2)").unwrap();
    c.bench_function("prove_quartic", |b| b.iter(|| prove(black_box(&a), black_box(&bb), 6).unwrap()));
}

fn recognition(c: &mut Criterion) {
    let prec = 256;
    let spec = CFSpec::parse("n^4", "2*n+1").unwrap();
    let basis = ConstantBasis::from_labels(0, &["1", "zeta(2)", "zeta(3)", "zeta(4)", "zeta(5)"]).unwrap();
    let mut values = vec![sum_series(&spec, prec).unwrap().value];
    values.extend(basis.eval(prec).unwrap());
    c.bench_function("pslq_dim6_256", |b| b.iter(|| pslq(black_box(&values), prec, 64).unwrap()));
}

fn constant_routes(c: &mut Criterion) {
    // the primary routes are cached, so time the uncached second routes
    let mut group = c.benchmark_group("constants_1000_bits");
    group.bench_function("pi_agm", |b| b.iter(|| constants::pi_alt(black_box(1000))));
    group.bench_function("gamma_em", |b| b.iter(|| constants::gamma_alt(black_box(1000))));
    group.bench_function("catalan_series", |b| b.iter(|| constants::catalan_alt(black_box(1000))));
    group.bench_function("zeta3_em", |b| b.iter(|| constants::zeta_int_alt(3, black_box(1000))));
    group.finish();
}

criterion_group!(benches, series, convergents, symbolic, recognition, constant_routes);
criterion_main!(benches);
