//! Engine throughput: dynamics stepping at several population sizes, wind
//! field advancement, script compilation, and fully scripted ticks.

use criterion::{criterion_group, criterion_main, BatchSize, BenchmarkId, Criterion};
use std::hint::black_box;

use primworld::dynamics;
use primworld::wind::WindField;
use primworld::{PrimShape, Simulation, Vec3};
use primworld_bench::{bench_config, crowded_world, scripted_simulation, TIMER_SCRIPT};

const DT: f64 = 1.0 / 45.0;

fn dynamics_step(c: &mut Criterion) {
    let mut group = c.benchmark_group("dynamics_step");
    for n in [10usize, 100, 400] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            let mut world = crowded_world(n);
            b.iter(|| black_box(dynamics::step(&mut world, DT)));
        });
    }
    group.finish();
}

fn wind_advance(c: &mut Criterion) {
    c.bench_function("wind_advance", |b| {
        let mut field = WindField::new(7);
        let mut t = 0.0;
        b.iter(|| {
            field.advance(t, DT);
            t += DT;
            black_box(field.sample(Vec3::new(128.0, 128.0, 20.0)))
        });
    });
}

fn script_attach(c: &mut Criterion) {
    c.bench_function("script_attach", |b| {
        b.iter_batched(
            || {
                let mut sim = Simulation::new(bench_config()).unwrap();
                let id = sim
                    .world_mut()
                    .create_object(
                        PrimShape::sphere(1.0).unwrap(),
                        primworld::Material::wood(),
                        Vec3::new(128.0, 128.0, 10.0),
                    )
                    .unwrap();
                sim.world_mut().set_physical(id, true).unwrap();
                (sim, id)
            },
            |(mut sim, id)| sim.attach_script(id, black_box(TIMER_SCRIPT)).unwrap(),
            BatchSize::SmallInput,
        );
    });
}

fn scripted_tick(c: &mut Criterion) {
    let mut group = c.benchmark_group("scripted_tick");
    for n in [10usize, 100] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            let mut sim = scripted_simulation(n);
            b.iter(|| black_box(sim.tick()));
        });
    }
    group.finish();
}

criterion_group!(benches, dynamics_step, wind_advance, script_attach, scripted_tick);
criterion_main!(benches);
