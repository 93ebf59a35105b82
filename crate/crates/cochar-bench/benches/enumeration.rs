use cochar::groth::{gl4_fixture, evaluate_m};
use cochar::kottwitz::enumerate_b;
use cochar::mant_sum::{verify_sum_formula, MantContext};
use cochar::pair_poset::down_set;
use cochar::{build_root_datum, CocharacterPair, GroupSpec};
use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

fn minuscule(n: usize) -> Vec<i64> {
    (0..n).map(|i| (i < n / 2) as i64).collect()
}

fn posets(c: &mut Criterion) {
    let mut g = c.benchmark_group("down_set");
    for n in [4, 5, 6] {
        let rd = build_root_datum(&GroupSpec::gl(n)).unwrap();
        let top = CocharacterPair::top(&rd, &minuscule(n));
        g.bench_with_input(BenchmarkId::new("GL", n), &n, |b, _| b.iter(|| down_set(&rd, black_box(&top))));
    }
    let rd = build_root_datum(&GroupSpec::res(3, 2)).unwrap();
    let top = CocharacterPair::top(&rd, &[1, 0, 1, 0, 0, 0]);
    g.bench_function("Res3GL2", |b| b.iter(|| down_set(&rd, black_box(&top))));
    g.finish();
}

fn kottwitz_sets(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumerate_b");
    for n in [4, 6] {
        let rd = build_root_datum(&GroupSpec::gl(n)).unwrap();
        let mu = minuscule(n);
        g.bench_with_input(BenchmarkId::new("GL", n), &n, |b, _| b.iter(|| enumerate_b(&rd, black_box(&mu)).unwrap()));
    }
    let rd = build_root_datum(&GroupSpec::gl(4)).unwrap();
    g.bench_function("GL4 weights 2", |b| b.iter(|| enumerate_b(&rd, black_box(&[2, 1, 1, 0])).unwrap()));
    g.finish();
}

fn sums(c: &mut Criterion) {
    let mut g = c.benchmark_group("sum_formula");
    for n in [4, 5] {
        let rd = build_root_datum(&GroupSpec::gl(n)).unwrap();
        let mu = minuscule(n);
        g.bench_with_input(BenchmarkId::new("GL", n), &n, |b, _| b.iter(|| verify_sum_formula(&rd, black_box(&mu)).unwrap()));
    }
    g.finish();
}

fn evaluation(c: &mut Criterion) {
    let rd = gl4_fixture::datum();
    let mu = gl4_fixture::mu();
    let rep = gl4_fixture::rep("111").unwrap();
    let ctx = MantContext::new(&rd, &mu).unwrap();
    let basic = ctx.classes.iter().find(|b| b.is_basic(&rd)).unwrap().clone();
    c.bench_function("evaluate_m GL4 basic", |b| b.iter(|| evaluate_m(&rd, black_box(&basic), &mu, &rep).unwrap()));
}

criterion_group!(benches, posets, kottwitz_sets, sums, evaluation);
criterion_main!(benches);
