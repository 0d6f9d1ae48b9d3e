use chebdyn::chebfam::{build_family_map, f_components, FamilyParameter};
use chebdyn::exactpoly::strip_common_factor;
use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

fn composition(c: &mut Criterion) {
    let f = f_components();
    c.bench_function("compose f with f and strip", |b| {
        b.iter(|| {
            let sq: Vec<_> = f.iter().map(|p| p.compose(&f).unwrap()).collect();
            black_box(strip_common_factor(&sq[0], &sq[1], &sq[2]).unwrap())
        })
    });
}

fn degree_sequence(c: &mut Criterion) {
    let m = build_family_map(&FamilyParameter::parse("1/2").unwrap());
    let mut g = c.benchmark_group("degree sequence");
    g.sample_size(10);
    g.bench_function("f_1/2 to depth 2", |b| {
        b.iter(|| black_box(m.degree_sequence(2, 4096).unwrap()))
    });
    g.finish();
}

criterion_group!(benches, composition, degree_sequence);
criterion_main!(benches);
