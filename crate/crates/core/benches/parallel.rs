use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hyperfactor::certificates::make_certificate;
use hyperfactor::combinatorics::LevelSet;
use hyperfactor::exec::Execution;
use hyperfactor::pipeline::construct;
use hyperfactor::sweep::sweep;
use hyperfactor::system::{build_system, verify_certificate_streaming, verify_certificate_with};
use hyperfactor::verifier::verify_factorization_with;

const PATHS: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn certificates(c: &mut Criterion) {
    let (n, k) = (62, 8);
    let levels = LevelSet::up_to(k);
    let sys = build_system(n, &levels).unwrap();
    let cert = make_certificate(n, &levels).unwrap().certificate;
    let mut group = c.benchmark_group("certificate check n=62 k=8");
    for (name, exec) in PATHS {
        group.bench_function(BenchmarkId::new("materialised", name), |b| {
            b.iter(|| assert!(verify_certificate_with(&sys, &cert, exec).unwrap().is_valid()))
        });
        group.bench_function(BenchmarkId::new("streaming", name), |b| {
            b.iter(|| assert!(verify_certificate_streaming(n, &levels, &cert, exec).unwrap().is_valid()))
        });
    }
    group.finish();
}

fn factorizations(c: &mut Criterion) {
    let f = construct(20, 4).unwrap();
    let mut group = c.benchmark_group("verify factorization n=20 k=4");
    for (name, exec) in PATHS {
        group.bench_function(name, |b| {
            b.iter(|| assert!(verify_factorization_with(&f, exec).unwrap().is_empty()))
        });
    }
    group.finish();
}

fn sweeps(c: &mut Criterion) {
    let mut group = c.benchmark_group("sweep n<=12");
    group.sample_size(10);
    for (name, exec) in PATHS {
        group.bench_function(name, |b| b.iter(|| sweep(12, true, exec).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, certificates, factorizations, sweeps);
criterion_main!(benches);
