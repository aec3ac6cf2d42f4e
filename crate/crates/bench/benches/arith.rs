use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;

use carlitz_core::ring::rewrite;
use carlitz_core::{exact_rank, CarlitzCache, CarlitzRing, Fq, LinFun, PerfectRational};

fn rationals(c: &mut Criterion) {
    let f = Fq::new(2, 1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut g = c.benchmark_group("rational_mul");
    for deg in [16u64, 256, 2048] {
        let a = PerfectRational::random_poly(&f, &mut rng, deg, 0);
        let b = PerfectRational::random_poly(&f, &mut rng, deg, 1);
        g.bench_with_input(BenchmarkId::from_parameter(deg), &deg, |bench, _| bench.iter(|| black_box(a.mul(&b))));
    }
    g.finish();
}

fn binomials(c: &mut Criterion) {
    let f = Fq::new(3, 1).unwrap();
    c.bench_function("binom_k_row_q3_k6", |b| {
        b.iter(|| {
            let cache = CarlitzCache::new(&f);
            (0..=6).map(|m| cache.binom_k(6, m)).collect::<Vec<_>>()
        })
    });
}

fn ring_products(c: &mut Criterion) {
    let f = Fq::new(2, 1).unwrap();
    let ring = CarlitzRing::new(&f, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let a = ring.random_elem(&mut rng, 3, 4, 2);
    let b = ring.random_elem(&mut rng, 3, 4, 2);
    let mut g = c.benchmark_group("ring_mul");
    g.bench_function("closed_form", |bench| bench.iter(|| black_box(ring.mul(&a, &b))));
    g.bench_function("rewriting", |bench| bench.iter(|| black_box(rewrite::mul(&a, &b))));
    g.finish();
}

fn ranks(c: &mut Criterion) {
    let f = Fq::new(2, 1).unwrap();
    let cache = CarlitzCache::new(&f);
    let mut vectors: Vec<LinFun> = (0..8).map(|k| cache.carlitz_f(k)).collect();
    vectors.extend((0..8).map(|k| cache.carlitz_e(k)));
    let mut g = c.benchmark_group("exact_rank");
    g.sample_size(20);
    g.bench_function("carlitz_e_f_16", |b| b.iter(|| exact_rank(&f, black_box(&vectors), None)));
    g.finish();
}

criterion_group!(benches, rationals, binomials, ring_products, ranks);
criterion_main!(benches);
