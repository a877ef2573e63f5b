use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lacunary_bench::{example_composite, series, squaring_schedule};
use lacunary_core::lnbound::ln_biguint;
use lacunary_core::powercmp::compare;
use lacunary_core::{BigUint, Op, PurePower, Ratio};

fn series_kernels(c: &mut Criterion) {
    let mut group = c.benchmark_group("series");
    let s = series(3);
    for n in [3, 4, 5] {
        group.bench_with_input(BenchmarkId::new("partial_sum", n), &n, |b, &n| {
            b.iter(|| black_box(s.partial_sum(n).unwrap()))
        });
    }
    group.bench_function("enclose/4", |b| b.iter(|| black_box(s.enclose(4).unwrap())));
    group.bench_function("decimal_digits/200", |b| b.iter(|| black_box(s.decimal_digits(200).unwrap())));
    group.bench_function("schedule/fresh", |b| b.iter(|| black_box(squaring_schedule().exponent_u64(5).unwrap())));
    group.finish();
}

fn comparison_kernels(c: &mut Criterion) {
    let mut group = c.benchmark_group("powercmp");
    let x = PurePower::new(2, 65536u32).unwrap();
    let y = PurePower::new(3, 41000u32).unwrap();
    group.bench_function("log_path", |b| b.iter(|| black_box(compare(&x, &y))));
    let near = PurePower::new((1 << 62) + 1, 1000u32).unwrap();
    let far = PurePower::new(2, 62_000u32).unwrap();
    group.bench_function("near_tie", |b| b.iter(|| black_box(compare(&near, &far))));
    let common = (PurePower::new(64, 1u64 << 40).unwrap(), PurePower::new(8, 1u64 << 41).unwrap());
    group.bench_function("common_base", |b| b.iter(|| black_box(compare(&common.0, &common.1))));
    let huge = BigUint::from(7u32).pow(20_000);
    group.bench_function("ln_huge/64", |b| b.iter(|| black_box(ln_biguint(&huge, 64))));
    group.finish();
}

fn witness_kernels(c: &mut Criterion) {
    let mut group = c.benchmark_group("witness");
    group.sample_size(10);
    for op in Op::ALL {
        let composite = example_composite(op);
        group.bench_with_input(BenchmarkId::new("certify", op), &composite, |b, comp| {
            b.iter(|| black_box(comp.certify(Ratio::from_integer(3), 1..=4).unwrap()))
        });
    }
    let sum = example_composite(Op::Sum);
    group.bench_function("roth/n=4", |b| b.iter(|| black_box(sum.verify_roth_instance(4, Ratio::new(5, 2)).unwrap())));
    group.finish();
}

criterion_group!(benches, series_kernels, comparison_kernels, witness_kernels);
criterion_main!(benches);
