use std::f64::consts::TAU;
use std::hint::black_box;

use birkhoff_bench::{generic_orbit, hopf_fibers, hopf_link, zeta_framing};
use birkhoff_core::asymptotics::{estimate_helicity, framing_triple};
use birkhoff_core::birkhoff::section_topology;
use birkhoff_core::flows::integrate_orbit;
use birkhoff_core::framing::self_linking;
use birkhoff_core::{linking_matrix, linking_number, FlowField, Integrator, Tolerances};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn linking(c: &mut Criterion) {
    let tol = Tolerances::default();
    let mut g = c.benchmark_group("linking_number");
    for n in [64, 256, 1024] {
        let fibers = hopf_fibers(2, n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &fibers, |b, f| {
            b.iter(|| linking_number(black_box(&f[0]), black_box(&f[1]), &tol).unwrap())
        });
    }
    g.finish();

    let link = hopf_link(8, 128);
    c.bench_function("linking_matrix/8x128", |b| b.iter(|| linking_matrix(black_box(&link), &tol).unwrap()));
}

fn framing(c: &mut Criterion) {
    let tol = Tolerances::default();
    let hopf = FlowField::hopf();
    let zeta = zeta_framing(&hopf);
    let fiber = hopf_fibers(1, 256).remove(0);
    c.bench_function("self_linking/256", |b| {
        b.iter(|| self_linking(black_box(&fiber), &zeta, &tol).unwrap())
    });

    let link = hopf_link(6, 128);
    let framings = vec![zeta; 6];
    c.bench_function("section_topology/6x128", |b| {
        b.iter(|| section_topology(black_box(&link), &framings, &tol).unwrap())
    });
}

fn flows(c: &mut Criterion) {
    let integ = Integrator::default();
    let tol = Tolerances::default();
    let f = FlowField::seifert(2, 3).unwrap();
    let p = FlowField::generic_point();
    c.bench_function("integrate_orbit/2pi", |b| {
        b.iter(|| integrate_orbit(&f, black_box(&p), TAU, &integ).unwrap())
    });
    let orbit = generic_orbit(&f, 320);
    c.bench_function("framing_triple/seifert23", |b| {
        b.iter(|| framing_triple(&f, black_box(&orbit), &integ, &tol).unwrap())
    });
}

fn helicity(c: &mut Criterion) {
    let integ = Integrator::default();
    let tol = Tolerances::default();
    let f = FlowField::seifert(2, 3).unwrap();
    let mut g = c.benchmark_group("helicity");
    g.sample_size(10);
    g.bench_function("seifert23/16_pairs", |b| {
        b.iter(|| estimate_helicity(&f, TAU, 16, black_box(1), &integ, &tol).unwrap())
    });
    g.finish();
}

criterion_group!(benches, linking, framing, flows, helicity);
criterion_main!(benches);
