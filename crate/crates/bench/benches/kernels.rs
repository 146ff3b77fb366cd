use criterion::{black_box, criterion_group, criterion_main, Criterion};

use mincomp_core::construct::{self, ConstructOptions};
use mincomp_core::cyclic::{self, CyclicOptions, CyclicSet};
use mincomp_core::epclass::{self, ClassifyOptions};
use mincomp_core::sumset::minkowski_window;
use mincomp_core::verify;
use mincomp_core::{expr, EpSet, IntegerSet, Window};

fn sums(c: &mut Criterion) {
    let ep = expr::parse("ep:m=5;A=0,1;F=3").unwrap();
    let fin = expr::parse("fin:-7,-3,0,2,11").unwrap();
    let pow2 = expr::parse("gen:pow2").unwrap();
    let win = Window::new(-500, 500).unwrap();
    c.bench_function("minkowski_window ep+fin [-500,500]", |b| {
        b.iter(|| minkowski_window(black_box(&ep), black_box(&fin), win).unwrap())
    });
    c.bench_function("minkowski_window pow2+fin [-500,500]", |b| {
        b.iter(|| minkowski_window(black_box(&pow2), black_box(&fin), win).unwrap())
    });
}

fn cyclic_search(c: &mut Criterion) {
    let opts = CyclicOptions { max_modulus: 24 };
    let set = CyclicSet::new(16, &[0, 1, 2, 5, 9]).unwrap();
    c.bench_function("solve_arises m=16", |b| {
        b.iter(|| cyclic::solve_arises(black_box(&set), &opts).unwrap())
    });
    let w = CyclicSet::new(10, &[0, 1, 3]).unwrap();
    c.bench_function("enumerate_minimal_complements m=10", |b| {
        b.iter(|| cyclic::enumerate_minimal_complements(black_box(&w), &opts).unwrap())
    });
    c.bench_function("cayley_domination n=24", |b| {
        b.iter(|| cyclic::cayley_domination(black_box(24), &opts).unwrap())
    });
}

fn certificates(c: &mut Criterion) {
    let pow2 = expr::parse("gen:pow2").unwrap();
    let win = Window::new(-10, 10).unwrap();
    let mut g = c.benchmark_group("construction");
    g.sample_size(10);
    g.bench_function("build_cominimal pow2 [-10,10]", |b| {
        b.iter(|| construct::build_cominimal(black_box(&pow2), win, &ConstructOptions::default()).unwrap())
    });
    let dense = IntegerSet::Ep(EpSet::canonicalize(4, &[0, 1, 2], &[], &[]).unwrap());
    g.bench_function("refute_mac_bounded 4N+{0,1,2} w<=2 r=40", |b| {
        b.iter(|| verify::refute_mac_bounded(black_box(&dense), 2, 40).unwrap())
    });
    let s = EpSet::canonicalize(5, &[0, 1], &[], &[3]).unwrap();
    g.bench_function("classify m=5 with certificate", |b| {
        b.iter(|| epclass::classify(black_box(&s), &ClassifyOptions::default()).unwrap())
    });
    g.finish();
}

criterion_group!(benches, sums, cyclic_search, certificates);
criterion_main!(benches);
