//! Same workloads on a one-thread pool and on the default pool. Build with
//! `--no-default-features` to time the plain sequential iterators instead.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use kreisslab_core::decomp::{self, DecompConfig, Side};
use kreisslab_core::operators::{make_gallery_operator, OperatorKind, OperatorSpec};
use kreisslab_core::resolvent::{self, SearchConfig};
use kreisslab_core::verify;

/// `exec` runs one iteration, e.g. inside a dedicated pool.
fn workloads(c: &mut Criterion, label: &str, exec: impl Fn(&(dyn Fn() + Sync))) {
    let t = make_gallery_operator(&OperatorSpec::new(OperatorKind::Jordan { re: 0.9, im: 0.0, eps: 1.0 }, 4)).unwrap();
    let search = SearchConfig::default();
    let dcfg = DecompConfig { max_support: 8, trials: 500, refine: 2, seed: 1, ..Default::default() };
    c.bench_function(&format!("{label}/kreiss_jordan4"), |b| {
        b.iter(|| exec(&|| {
            black_box(resolvent::kreiss_constant(black_box(&t), &search).unwrap());
        }))
    });
    c.bench_function(&format!("{label}/decomp_scan"), |b| {
        b.iter(|| exec(&|| {
            black_box(decomp::estimate_constant(4.0, 4.0, 2.0, Side::Lower, 0.0, black_box(&dcfg)).unwrap());
        }))
    });
    c.bench_function(&format!("{label}/verify_sweep_2000"), |b| {
        b.iter(|| exec(&|| {
            black_box(verify::sweep(2, black_box(2000)).unwrap());
        }))
    });
}

#[cfg(feature = "parallel")]
fn bench(c: &mut Criterion) {
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    workloads(c, "rayon_1_thread", |f| one.install(f));
    workloads(c, "rayon_default_pool", |f| f());
}

#[cfg(not(feature = "parallel"))]
fn bench(c: &mut Criterion) {
    workloads(c, "sequential", |f| f());
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = bench
}
criterion_main!(benches);
