//! Parallel vs sequential throughput of the data-parallel inner loops:
//! per-sample conserved-quantity evaluation, functional-equation probe
//! scans, and the exponent-grid verification sweep.
//!
//! With default features the `parallel` variants fan out through rayon;
//! build with `--no-default-features` to measure the all-sequential crate.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use bohlin::*;

fn synthetic_oscillator(n: usize) -> Trajectory {
    // Analytic unit circle samples; large enough that per-sample math
    // dominates over iteration overhead.
    let p = PowerLawPotential::new(0.5, 2.0, 1.0).unwrap();
    let samples: Vec<Sample> = (0..n)
        .map(|i| {
            let t = 20.0 * i as f64 / (n - 1) as f64;
            let z = Complex64::from_polar(1.0, t);
            Sample {
                t,
                s: t,
                z,
                v: Complex64::i() * z,
            }
        })
        .collect();
    Trajectory::from_samples(p, samples, "synthetic").unwrap()
}

fn bench_drift_evaluation(c: &mut Criterion) {
    let traj = synthetic_oscillator(200_000);
    let p = *traj.potential();
    let kappa = p.hooke_stiffness().unwrap();
    let eval = |smp: &Sample| {
        let st = smp.state();
        energy(&p, &st).unwrap() + fjh_complex(&st, kappa, p.mass()).norm()
    };

    let mut group = c.benchmark_group("drift_evaluation");
    group.bench_function("parallel", |b| {
        b.iter(|| black_box(exec::map(black_box(traj.samples()), eval)))
    });
    group.bench_function("sequential", |b| {
        b.iter(|| black_box(exec::map_seq(black_box(traj.samples()), eval)))
    });
    group.finish();
}

fn bench_residual_scan(c: &mut Criterion) {
    let params = dual_parameters(3.0, 1.0, 2.0, 1.0).unwrap();
    let probes: Vec<Complex64> = (0..100_000)
        .map(|i| Complex64::from_polar(0.2 + 0.8 * (i as f64 / 1e5), 6.0 * i as f64 / 1e5))
        .collect();
    let eval = |w: &Complex64| functional_residual(*w, &params).unwrap_or(f64::NAN);

    let mut group = c.benchmark_group("residual_scan");
    group.bench_function("parallel", |b| {
        b.iter(|| black_box(exec::max_of(black_box(&probes), eval)))
    });
    group.bench_function("sequential", |b| {
        b.iter(|| black_box(exec::max_of_seq(black_box(&probes), eval)))
    });
    group.finish();
}

fn bench_grid_sweep(c: &mut Criterion) {
    // Full integrate -> dualize -> identity-battery pipeline per exponent;
    // the sweep itself is the parallel axis.
    let grid: Vec<f64> = vec![-1.5, -1.0, -0.5, 0.5, 1.0, 2.0, 3.0, 4.0, 6.0];
    let run_case = |nu: &f64| {
        let nu = *nu;
        let k = if nu > 0.0 { 1.0 } else { -1.0 };
        let p = PowerLawPotential::new(k, nu, 1.0).unwrap();
        let v = 0.8 * (nu * k).sqrt();
        let s0 = State::from_parts(0.0, 1.0, 0.0, 0.0, v);
        let cfg = IntegratorConfig::rk45(2.0).with_max_dt(5e-3);
        let traj = integrate(&p, &s0, &cfg).unwrap();
        let params = dual_parameters(nu, k, traj.initial_energy(), 1.0).unwrap();
        let dual = dualize_trajectory(&traj, &params).unwrap();
        identity_suite(&traj, &dual, &params, &VerifyConfig::default())
            .unwrap()
            .len()
    };

    let mut group = c.benchmark_group("grid_sweep");
    group.sample_size(10);
    group.bench_function("parallel", |b| {
        b.iter(|| black_box(exec::map(black_box(&grid), run_case)))
    });
    group.bench_function("sequential", |b| {
        b.iter(|| black_box(exec::map_seq(black_box(&grid), run_case)))
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_drift_evaluation,
    bench_residual_scan,
    bench_grid_sweep
);
criterion_main!(benches);
