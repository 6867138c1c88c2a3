use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gaudin_core::bethe::{multi_start_solve, BetheProblem, MultiStartOptions, Site};
use gaudin_core::gaudin::{gaudin_hamiltonian, weight_basis, TensorModule};
use gaudin_core::repro::{explore_population, PolyTuple, PopulationOptions};
use gaudin_core::rootdata::{Coweight, GeneralizedCartanMatrix};
use gaudin_core::Execution;
use num_complex::Complex64;
use std::hint::black_box;

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn a2_problem() -> BetheProblem {
    let a = GeneralizedCartanMatrix::parse("A2").unwrap();
    let sites = vec![
        Site::new(Complex64::new(0.0, 0.0), Coweight::from_integers(&[1, 1])),
        Site::new(Complex64::new(2.0, 0.5), Coweight::from_integers(&[2, 0])),
        Site::new(Complex64::new(-1.0, 1.5), Coweight::from_integers(&[0, 1])),
    ];
    BetheProblem::new(a, sites, vec![0, 1, 0, 1]).unwrap()
}

fn multi_start(c: &mut Criterion) {
    let p = a2_problem();
    let mut group = c.benchmark_group("multi_start");
    group.sample_size(10);
    for (name, execution) in MODES {
        let opts = MultiStartOptions {
            num_starts: 64,
            execution,
            ..Default::default()
        };
        group.bench_with_input(BenchmarkId::from_parameter(name), &opts, |b, o| {
            b.iter(|| multi_start_solve(black_box(&p), o))
        });
    }
    group.finish();
}

fn hamiltonian_assembly(c: &mut Criterion) {
    let weights = vec![vec![1, 1], vec![1, 0], vec![2, 0], vec![0, 2]];
    let z: Vec<Complex64> = (0..4)
        .map(|k| Complex64::new(k as f64, 0.3 * k as f64))
        .collect();
    let basis = weight_basis(3, 4, &[2, 2], 8).unwrap();
    let mut group = c.benchmark_group("gaudin_hamiltonian");
    group.sample_size(10);
    for (name, execution) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                // fresh module so the normal-ordering cache starts cold
                let m = TensorModule::new(3, weights.clone()).unwrap();
                gaudin_hamiltonian(&m, black_box(&z), 0, &basis, execution).unwrap()
            })
        });
    }
    group.finish();
}

fn population(c: &mut Criterion) {
    let a = GeneralizedCartanMatrix::parse("A2").unwrap();
    let sites = vec![
        Site::new(Complex64::new(0.0, 0.0), Coweight::from_integers(&[1, 0])),
        Site::new(Complex64::new(2.0, 0.3), Coweight::from_integers(&[0, 1])),
    ];
    let p = BetheProblem::new(a, sites, vec![]).unwrap();
    let mut group = c.benchmark_group("population");
    group.sample_size(10);
    for (name, execution) in MODES {
        let opts = PopulationOptions {
            depth: 2,
            execution,
            ..Default::default()
        };
        group.bench_with_input(BenchmarkId::from_parameter(name), &opts, |b, o| {
            b.iter(|| explore_population(black_box(&p), &PolyTuple::ones(2), o))
        });
    }
    group.finish();
}

criterion_group!(benches, multi_start, hamiltonian_assembly, population);
criterion_main!(benches);
