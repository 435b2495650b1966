use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use gw_core::selftest::{check_fano_model, degree_vectors};
use gw_core::{solve_calabi_yau, CIModel, Execution};

const STRATEGIES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn calabi_yau_recursion(c: &mut Criterion) {
    let mut group = c.benchmark_group("calabi_yau");
    group.sample_size(10);
    let models = [
        ("quintic", CIModel::quintic()),
        ("3,3", CIModel::classify(5, &[3, 3]).unwrap()),
    ];
    for (label, model) in &models {
        for max_d in [4u32, 6] {
            for (name, exec) in STRATEGIES {
                group.bench_with_input(
                    BenchmarkId::new(format!("{label}/{name}"), max_d),
                    &max_d,
                    |b, &max_d| b.iter(|| solve_calabi_yau(black_box(model), max_d, exec).unwrap()),
                );
            }
        }
    }
    group.finish();
}

fn fano_sweep(c: &mut Criterion) {
    let models: Vec<CIModel> = (1..=6)
        .flat_map(|n| {
            degree_vectors(n as u32)
                .into_iter()
                .map(move |l| CIModel::classify(n, &l).unwrap())
        })
        .collect();
    let mut group = c.benchmark_group("fano_sweep");
    group.sample_size(10);
    for (name, exec) in STRATEGIES {
        group.bench_function(name, |b| {
            b.iter(|| exec.map(&models, |m| check_fano_model(m, 3).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, calabi_yau_recursion, fano_sweep);
criterion_main!(benches);
