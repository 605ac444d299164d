use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ontic_bench::rational_rays;
use ontic_core::ontology::{sphere_mesh, Experiment};
use ontic_core::qstate::BlochVector;
use ontic_core::theorem::{build_moment_system, solve_feasibility, triple_test};
use ontic_core::zoo::{ks_model, ks_prepare, ray_from_direction};
use ontic_core::QuadratureOrder;

fn moment_systems(c: &mut Criterion) {
    c.bench_function("triple_test", |b| b.iter(|| triple_test().unwrap()));
    let mut group = c.benchmark_group("moment_system_solve");
    for n in [3, 4, 5] {
        let system = build_moment_system(&rational_rays(n)).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &system, |b, s| {
            b.iter(|| solve_feasibility(black_box(s)).unwrap())
        });
    }
    group.finish();
}

fn ks_prediction(c: &mut Criterion) {
    let model = ks_model(QuadratureOrder::default()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let g = ray_from_direction(BlochVector::random_unit(&mut rng).as_array()).unwrap();
    let h = ray_from_direction(BlochVector::random_unit(&mut rng).as_array()).unwrap();
    let rho = ks_prepare(model.space(), &g).unwrap();
    let test = Experiment::projective(&h);
    c.bench_function("ks_predict_64x128", |b| {
        b.iter(|| model.predict(black_box(&rho), black_box(&test)).unwrap())
    });
    c.bench_function("ks_prepare_64x128", |b| {
        b.iter(|| ks_prepare(model.space(), black_box(&g)).unwrap())
    });
}

fn mesh(c: &mut Criterion) {
    let mut group = c.benchmark_group("sphere_mesh");
    for order in [QuadratureOrder { theta: 16, phi: 32 }, QuadratureOrder::default()] {
        group.bench_with_input(BenchmarkId::from_parameter(order), &order, |b, &o| {
            b.iter(|| sphere_mesh(o, &[[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, moment_systems, ks_prediction, mesh);
criterion_main!(benches);
