use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ringwalk::{
    dos_histogram, fit_dos_exponents, full_spectrum, msd, quantum_return_avg, transition_probabilities,
    Gamma, RingSpec, TimeGrid, WalkKind,
};

fn spectrum(c: &mut Criterion) {
    let mut group = c.benchmark_group("full_spectrum");
    for n in [1_000, 10_000] {
        let spec = RingSpec::new(n, 2.5).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &spec, |b, spec| {
            b.iter(|| full_spectrum(black_box(spec)))
        });
    }
    group.finish();
}

fn dynamics(c: &mut Criterion) {
    let spec = RingSpec::new(10_000, Gamma::Finite(3.0)).unwrap();
    let spectrum = full_spectrum(&spec);
    let grid = TimeGrid::linear(5.0, 100.0, 0.1).unwrap();
    c.bench_function("quantum_return_avg/10000x951", |b| {
        b.iter(|| quantum_return_avg(black_box(&spectrum), &grid))
    });
    c.bench_function("profile/10000", |b| {
        b.iter(|| transition_probabilities(black_box(&spec), 50.0, WalkKind::Quantum).unwrap())
    });
    let short = TimeGrid::logarithmic(1.0, 100.0, 10).unwrap();
    c.bench_function("msd/10000x21", |b| b.iter(|| msd(black_box(&spec), &short, WalkKind::Quantum)));
}

fn dos_fit(c: &mut Criterion) {
    let spectrum = full_spectrum(&RingSpec::new(10_000, 4.0).unwrap());
    let dos = dos_histogram(&spectrum, 200).unwrap();
    c.bench_function("fit_dos_exponents/200", |b| {
        b.iter(|| fit_dos_exponents(black_box(&dos), spectrum.max_energy()).unwrap())
    });
}

criterion_group!(benches, spectrum, dynamics, dos_fit);
criterion_main!(benches);
