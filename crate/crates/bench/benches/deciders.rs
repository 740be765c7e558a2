use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use linset_core::{b2_binomial, b2_pqq_test, decide, search_l2, FieldCtx, Method};

fn deciders(c: &mut Criterion) {
    let mut group = c.benchmark_group("decide x^q + b x^{q^2}");
    group.sample_size(10);
    for (p, e, n) in [(3, 1, 4), (2, 2, 4), (3, 1, 5)] {
        let ctx = Arc::new(FieldCtx::new(p, e, n).unwrap());
        // g^3 has the norm of the scattered class for q = 4, n = 4; not scattered for the others
        let f = b2_binomial(&ctx, ctx.g_pow(3), 1).unwrap();
        let label = format!("q={}, n={n}", ctx.q());
        for m in [Method::Definition, Method::KernelSweep, Method::MinorCriterion] {
            group.bench_with_input(BenchmarkId::new(m.to_string(), &label), &f, |b, f| {
                b.iter(|| decide(f, m).unwrap())
            });
        }
        group.bench_with_input(BenchmarkId::new("trace_sum", &label), &ctx, |b, ctx| {
            b.iter(|| b2_pqq_test(ctx, ctx.g_pow(3), 1).unwrap())
        });
    }
    group.finish();
}

fn searches(c: &mut Criterion) {
    let mut group = c.benchmark_group("search_l2");
    group.sample_size(10);
    for (p, e, n) in [(5, 1, 4), (2, 2, 5), (2, 1, 7)] {
        let ctx = Arc::new(FieldCtx::new(p, e, n).unwrap());
        group.bench_function(format!("q={}, n={n}", ctx.q()), |b| b.iter(|| search_l2(&ctx, 1).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, deciders, searches);
criterion_main!(benches);
