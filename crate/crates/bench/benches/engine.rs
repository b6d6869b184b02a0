use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use num_bigint::BigUint;
use superbase_bench::{ordinals, trees};
use superbase_core::{goodstein, to_hereditary, BaseSchedule, Hydra, Ordinal, Strategy};

fn ordinal_ops(c: &mut Criterion) {
    let xs = ordinals(256);
    c.bench_function("ordinal/compare", |b| {
        b.iter(|| {
            xs.windows(2)
                .filter(|w| w[0] < w[1])
                .count()
        })
    });
    c.bench_function("ordinal/add", |b| {
        b.iter(|| xs.windows(2).map(|w| w[0].add(&w[1])).collect::<Vec<_>>())
    });
    c.bench_function("ordinal/natural_sum", |b| {
        b.iter(|| xs.windows(2).map(|w| w[0].natural_sum(&w[1])).collect::<Vec<_>>())
    });
    let texts: Vec<String> = xs.iter().map(Ordinal::to_string).collect();
    c.bench_function("ordinal/parse", |b| {
        b.iter(|| texts.iter().map(|t| t.parse::<Ordinal>().unwrap()).collect::<Vec<_>>())
    });
    let alpha: Ordinal = "w^2+w+1".parse().unwrap();
    let two = BigUint::from(2u32);
    c.bench_function("ordinal/hardy w^2+w+1 at 2", |b| {
        b.iter(|| black_box(&alpha).hardy(&two, 1 << 30).unwrap())
    });
}

fn hereditary(c: &mut Criterion) {
    c.bench_function("hereditary/to_hereditary n<10^4 base 3", |b| {
        let base = BigUint::from(3u32);
        b.iter(|| {
            (0u32..10_000)
                .map(|n| to_hereditary(&BigUint::from(n), &base).unwrap()).collect::<Vec<_>>()
        })
    });
    let big = (BigUint::from(1u32) << 256u32) - 1u32;
    c.bench_function("hereditary/round trip 256-bit", |b| {
        b.iter(|| {
            let rep = to_hereditary(black_box(&big), &BigUint::from(7u32)).unwrap();
            rep.eval()
        })
    });
}

fn goodstein_runs(c: &mut Criterion) {
    c.bench_function("goodstein/seed 100, 50 steps", |b| {
        b.iter(|| goodstein::run(&BigUint::from(100u32), BaseSchedule::Classic, 50).unwrap())
    });
    c.bench_function("goodstein/seed 19, 50 steps through an 8^8 block", |b| {
        b.iter(|| goodstein::run(&BigUint::from(19u32), BaseSchedule::Classic, 50).unwrap())
    });
    c.bench_function("goodstein/const:3 seed 5000 to zero", |b| {
        let schedule = BaseSchedule::constant(BigUint::from(3u32)).unwrap();
        b.iter(|| goodstein::run(&BigUint::from(5000u32), schedule.clone(), 10_000).unwrap())
    });
}

fn hydra_games(c: &mut Criterion) {
    let ts = trees(64);
    c.bench_function("hydra/parse and measure", |b| {
        b.iter(|| {
            ts.iter()
                .map(|t| Hydra::parse(t).unwrap().ord_of()).collect::<Vec<_>>()
        })
    });
    let start = Hydra::parse("((()())(()))").unwrap();
    c.bench_function("hydra/play ((()())(())) leftmost", |b| {
        b.iter_batched(
            || start.clone(),
            |h| superbase_core::play(&h, Strategy::Leftmost, 1_000_000).unwrap(),
            BatchSize::SmallInput,
        )
    });
    let tall = Hydra::parse("(((())))").unwrap();
    c.bench_function("hydra/1000 random moves on a depth-3 path", |b| {
        b.iter(|| superbase_core::play(&tall, Strategy::Random(1), 1000).unwrap())
    });
}

criterion_group!(benches, ordinal_ops, hereditary, goodstein_runs, hydra_games);
criterion_main!(benches);
