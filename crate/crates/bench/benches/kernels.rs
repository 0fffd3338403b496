use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use padic_potts::potts::{enumerate_tipgm, PottsParameters};
use padic_potts::roots::{hensel_lift, kth_root_decide, IntPoly};
use padic_potts::tree::{build_volume, check_compatibility, partition_function, BoundaryField};
use padic_potts::{exp_p, log_p, ExactRational, PadicContext};

fn hensel(c: &mut Criterion) {
    let mut g = c.benchmark_group("hensel_lift");
    // x^2 - 2 over Z_7 from x = 3
    let f = IntPoly::from_i64(&[-2, 0, 1]);
    for prec in [20u32, 80, 320] {
        let ctx = PadicContext::new(7, prec).unwrap();
        let start = ctx.embed_int(3);
        g.bench_with_input(BenchmarkId::from_parameter(prec), &prec, |b, _| {
            b.iter(|| hensel_lift(black_box(&f), black_box(&start), 0, &ctx).unwrap())
        });
    }
    g.finish();

    let ctx = PadicContext::new(2, 40).unwrap();
    let a = ctx.embed_int(17);
    c.bench_function("kth_root_decide/p2_k6", |b| {
        b.iter(|| kth_root_decide(black_box(&a), 6, &ctx).unwrap())
    });
}

fn analytic(c: &mut Criterion) {
    let mut g = c.benchmark_group("exp_log");
    for prec in [20u32, 60] {
        let ctx = PadicContext::new(5, prec).unwrap();
        let x = ctx.embed_int(1 + 5 * 17);
        let h = log_p(&x, &ctx).unwrap();
        g.bench_with_input(BenchmarkId::new("log", prec), &prec, |b, _| {
            b.iter(|| log_p(black_box(&x), &ctx).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("exp", prec), &prec, |b, _| {
            b.iter(|| exp_p(black_box(&h), &ctx).unwrap())
        });
    }
    g.finish();
}

fn enumeration(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumerate");
    g.sample_size(20);
    let cases = [
        ("theta_1mq", 2u64, 4u64, 3u64, -3i64),
        ("theta_1pq2", 3, 12, 3, 7),
        ("generic_p5", 5, 10, 3, 26),
        ("quadratic_p3", 3, 6, 2, 4),
    ];
    for (name, p, q, k, theta) in cases {
        let params = PottsParameters::new(p, q, k, ExactRational::from(theta)).unwrap();
        let ctx = PadicContext::new(p, 12).unwrap();
        g.bench_function(name, |b| {
            b.iter(|| enumerate_tipgm(black_box(&params), &ctx).unwrap())
        });
    }
    g.finish();
}

fn tree(c: &mut Criterion) {
    let params = PottsParameters::new(2, 4, 3, ExactRational::from(-3)).unwrap();
    let ctx = PadicContext::new(2, 12).unwrap();
    let field = BoundaryField::from_subset(4, &[1], &ctx.embed_int(-27)).unwrap();
    let mut g = c.benchmark_group("tree");
    for n in [2u32, 4] {
        g.bench_with_input(BenchmarkId::new("partition_function", n), &n, |b, &n| {
            b.iter(|| partition_function(3, n, black_box(&field), &params.theta))
        });
    }
    let vol = build_volume(3, 2).unwrap();
    g.bench_function("check_compatibility/n2", |b| {
        b.iter(|| check_compatibility(&vol, black_box(&field), &params, &ctx).unwrap())
    });
    g.finish();
}

criterion_group!(benches, hensel, analytic, enumeration, tree);
criterion_main!(benches);
