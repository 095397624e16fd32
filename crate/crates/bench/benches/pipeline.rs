use criterion::{criterion_group, criterion_main, Criterion};
use e2fact::multiplier::staged_multiply;
use e2fact::pipeline::{example_hasse_scale, example_pair, run_algorithm_a, EXAMPLE_N};
use e2fact::smallroots::lll_reduce;
use e2fact::smoothlab::count_v;
use e2fact::{HasseWindow, IntegerLattice, PipelineConfig, Rational, SemiprimeContext};
use num_bigint::{BigInt, BigUint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;

fn curve_arithmetic(c: &mut Criterion) {
    let pair = example_pair();
    let scalar = BigUint::from(557_256_278_016u64);
    c.bench_function("scalar_mul example point by M_B", |b| {
        b.iter(|| pair.curve.scalar_mul(black_box(&scalar), &pair.point))
    });

    let ctx = SemiprimeContext::new(BigUint::from(EXAMPLE_N)).unwrap().with_hasse_scale(example_hasse_scale()).unwrap();
    let window = HasseWindow::from_context(&ctx).unwrap();
    c.bench_function("staged_multiply B=2000", |b| {
        b.iter(|| staged_multiply(&pair.curve, &pair.point, black_box(2000), &window).unwrap())
    });
}

fn lattice(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let rows: Vec<Vec<BigInt>> = (0..7)
        .map(|i| {
            (0..7).map(|j| if j > i { BigInt::from(0) } else { BigInt::from(rng.gen_range(1i64..1 << 40)) }).collect()
        })
        .collect();
    let lat = IntegerLattice::new(rows).unwrap();
    c.bench_function("lll dimension 7", |b| b.iter(|| lll_reduce(black_box(&lat), Rational::new(3, 4)).unwrap()));
}

fn end_to_end(c: &mut Criterion) {
    let n = BigUint::from(1_048_573u64) * BigUint::from(1_048_583u64);
    let cfg = PipelineConfig { seed: 1, timing: false, ..PipelineConfig::default() };
    let mut group = c.benchmark_group("pipeline");
    group.sample_size(10);
    group.bench_function("run_algorithm_a 40-bit", |b| b.iter(|| run_algorithm_a(black_box(&n), &cfg).unwrap()));
    group.bench_function("count_v x=10^6", |b| {
        b.iter(|| count_v(black_box(1_000_000), 100, Rational::new(3, 4)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, curve_arithmetic, lattice, end_to_end);
criterion_main!(benches);
