use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use std::hint::black_box;

use ergodic_bench::{poly, words};
use ergodic_core::gf2ps::{clmul64, clmul64_portable, mul_trunc};
use ergodic_core::Residue;

fn clmul(c: &mut Criterion) {
    let a = words(1, 1024);
    let b = words(2, 1024);
    let mut group = c.benchmark_group("clmul64");
    group.throughput(Throughput::Elements(a.len() as u64));
    group.bench_function("dispatch", |bench| {
        bench.iter(|| {
            a.iter()
                .zip(&b)
                .fold(0, |acc, (&x, &y)| acc ^ clmul64(x, y))
        })
    });
    group.bench_function("portable", |bench| {
        bench.iter(|| {
            a.iter()
                .zip(&b)
                .fold(0, |acc, (&x, &y)| acc ^ clmul64_portable(x, y))
        })
    });
    group.finish();
}

fn residues(c: &mut Criterion) {
    let a = words(3, 1024);
    let mut group = c.benchmark_group("residue");
    for k in [16u32, 64] {
        group.bench_with_input(BenchmarkId::new("mul_trunc", k), &k, |bench, &k| {
            bench.iter(|| {
                a.windows(2)
                    .fold(0, |acc, w| acc ^ mul_trunc(w[0], w[1], k))
            })
        });
        let units: Vec<Residue> = a
            .iter()
            .map(|&x| Residue::reduce(x | 1, k).unwrap())
            .collect();
        group.bench_with_input(
            BenchmarkId::new("invert_unit", k),
            &units,
            |bench, units| {
                bench.iter(|| {
                    units
                        .iter()
                        .map(|u| u.invert_unit().unwrap().bits())
                        .fold(0, |a, b| a ^ b)
                })
            },
        );
    }
    group.finish();
}

fn polys(c: &mut Criterion) {
    let mut group = c.benchmark_group("poly_mul");
    for limbs in [4usize, 16, 64, 256, 1024] {
        let (a, b) = (poly(4, limbs), poly(5, limbs));
        group.bench_with_input(BenchmarkId::from_parameter(limbs), &limbs, |bench, _| {
            bench.iter(|| black_box(&a) * black_box(&b))
        });
    }
    group.finish();
}

criterion_group!(benches, clmul, residues, polys);
criterion_main!(benches);
