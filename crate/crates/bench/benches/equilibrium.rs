use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use roegen_bench::default_diagram;
use roegen_core::eos::{self, EosParams};
use roegen_core::equilibrium::{
    build_diagram, find_critical, maxwell_construction, GridSpec, SolidModel, Tolerances,
};
use roegen_core::model::classify_phase;
use roegen_core::simulate::simulate;

fn bench_equilibrium(c: &mut Criterion) {
    let params = EosParams::reduced();

    c.bench_function("find_critical_reduced", |b| {
        b.iter(|| find_critical(black_box(&params)).unwrap())
    });

    c.bench_function("solve_volume_three_roots", |b| {
        b.iter(|| eos::solve_volume(black_box(&params), 0.9, 0.6).unwrap())
    });

    c.bench_function("maxwell_construction_09", |b| {
        b.iter(|| maxwell_construction(black_box(&params), 0.9).unwrap())
    });

    c.bench_function("build_diagram_default", |b| {
        b.iter(|| {
            build_diagram(
                black_box(&params),
                &SolidModel::default(),
                &GridSpec::default(),
                &Tolerances::default(),
            )
            .unwrap()
        })
    });
}

fn bench_simulation(c: &mut Criterion) {
    let diagram = default_diagram();

    c.bench_function("classify_4096_points", |b| {
        b.iter(|| {
            let mut count = 0usize;
            for ki in 0..64 {
                for kp in 0..64 {
                    let i = 0.31 + 0.88 * ki as f64 / 63.0;
                    let p = 0.01 + 7.5 * kp as f64 / 63.0;
                    if classify_phase(black_box(&diagram), i, p).is_ok() {
                        count += 1;
                    }
                }
            }
            count
        })
    });

    let sat = diagram.saturation_price(0.8).unwrap();
    let melt = diagram.melting_price(0.8);
    let path = vec![
        (0.7, 0.1 * sat),
        (0.8, 0.5 * (sat + melt)),
        (0.8, 2.0 * melt),
        (0.45, 2.0 * melt),
        (0.45, 0.01),
    ];
    c.bench_function("simulate_crossing_path", |b| {
        b.iter(|| simulate(black_box(&diagram), black_box(&path)).unwrap())
    });
}

criterion_group!(benches, bench_equilibrium, bench_simulation);
criterion_main!(benches);
