//! Benchmarks for the hot paths: elliptic evaluation, the threshold
//! constants, curve functionals, intersection detection, flow stepping,
//! and mesh redistribution.

use criterion::{black_box, criterion_group, criterion_main, Criterion};
use elastica::elliptic::{complete_ke, compute_constants, jacobi_sn_cn_dn, Modulus};
use elastica::{
    circle_curve, figure_eight_curve, self_intersections, self_intersections_bruteforce,
    stable_dt, step, DiscreteCurve, FlowConfig, FlowMode, FlowState, Parametrization,
    Redistribution, Vec2,
};

fn ellipse(a: f64, b: f64, n: usize) -> DiscreteCurve {
    let points = (0..n)
        .map(|j| {
            let t = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
            Vec2::new(a * t.cos(), b * t.sin())
        })
        .collect();
    DiscreteCurve::new(points).expect("valid ellipse")
}

fn bench_elliptic(c: &mut Criterion) {
    let m = Modulus::new(0.8261).expect("valid modulus");
    c.bench_function("complete_ke", |b| {
        b.iter(|| complete_ke(black_box(m)));
    });
    c.bench_function("jacobi_sn_cn_dn", |b| {
        b.iter(|| jacobi_sn_cn_dn(black_box(2.37), black_box(m)));
    });
    c.bench_function("compute_constants", |b| {
        b.iter(|| compute_constants().expect("bracketed root"));
    });
}

fn bench_functionals(c: &mut Criterion) {
    let curve = figure_eight_curve(4096, Parametrization::ArcLength, 1).expect("samples");
    c.bench_function("energy_length_product_4096", |b| {
        b.iter(|| black_box(&curve).energy_length_product());
    });
    c.bench_function("total_curvature_4096", |b| {
        b.iter(|| black_box(&curve).total_curvature());
    });
    c.bench_function("reparametrize_4096", |b| {
        b.iter(|| black_box(&curve).reparametrize_constant_speed(4096).expect("resample"));
    });
}

fn bench_intersections(c: &mut Criterion) {
    let curve = figure_eight_curve(512, Parametrization::ArcLength, 1).expect("samples");
    c.bench_function("self_intersections_grid_512", |b| {
        b.iter(|| self_intersections(black_box(&curve), 1e-3).expect("report"));
    });
    c.bench_function("self_intersections_brute_512", |b| {
        b.iter(|| self_intersections_bruteforce(black_box(&curve), 1e-3).expect("report"));
    });
    let round = circle_curve(1.0, 512, 1).expect("valid circle");
    c.bench_function("self_intersections_embedded_512", |b| {
        b.iter(|| self_intersections(black_box(&round), 1e-3).expect("report"));
    });
}

fn bench_flow(c: &mut Criterion) {
    let curve = ellipse(2.0, 1.0, 400);
    let uniform = curve
        .reparametrize_constant_speed(400)
        .expect("resample");
    let config = FlowConfig {
        mode: FlowMode::LengthPreserving,
        dt: stable_dt(&uniform),
        max_steps: u64::MAX,
        redistribution: Redistribution::EveryStep,
        stop_tol: 0.0,
        record_every: u64::MAX,
    };
    c.bench_function("flow_step_400", |b| {
        b.iter_batched(
            || FlowState::new(curve.clone(), &config).expect("valid state"),
            |mut state| step(&mut state, &config).expect("step succeeds"),
            criterion::BatchSize::SmallInput,
        );
    });
}

criterion_group!(
    benches,
    bench_elliptic,
    bench_functionals,
    bench_intersections,
    bench_flow
);
criterion_main!(benches);
