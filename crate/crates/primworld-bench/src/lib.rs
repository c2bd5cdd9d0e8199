//! Benchmark fixtures: deterministic worlds and simulations of tunable size,
//! shared by the criterion benches so every run measures the same workload.

use primworld::dynamics::apply_impulse;
use primworld::{Material, ObjectId, PrimShape, RegionConfig, Simulation, Vec3, World};

/// Region used by every fixture: wind off so the only costs measured are the
/// ones the bench names.
pub fn bench_config() -> RegionConfig {
    RegionConfig { wind_enabled: false, ..RegionConfig::default() }
}

/// Lay out `n` unit spheres on a grid, neutrally buoyant, each drifting in a
/// direction derived from its index. No contacts at t = 0; bodies later
/// collide and bounce off region walls, which is the workload we want.
pub fn crowded_world(n: usize) -> World {
    let mut world = World::new(bench_config()).unwrap();
    for k in 0..n {
        let (i, j) = (k % 40, k / 40);
        let position = Vec3::new(10.0 + 6.0 * i as f64, 10.0 + 6.0 * j as f64, 30.0);
        let id = world
            .create_object(PrimShape::sphere(1.0).unwrap(), Material::wood(), position)
            .unwrap();
        world.set_physical(id, true).unwrap();
        world.set_buoyancy(id, 1.0).unwrap();
        let mass = world.mass_of(id).unwrap();
        let heading = k as f64 * 2.399963; // golden angle: spread headings evenly
        let kick = Vec3::new(heading.cos(), heading.sin(), 0.0) * (2.0 * mass);
        apply_impulse(&mut world, id, kick).unwrap();
    }
    world
}

/// A script that burns a few ops every tick: the timer interval is shorter
/// than the step, so the timer event fires on every simulation tick.
pub const TIMER_SCRIPT: &str = "default {
    state_entry() {
        llSetTimerEvent(0.02);
    }
    timer() {
        vector v = llGetVel();
        llSetForce(<0.0 - v.x, 0.0 - v.y, 0.0>);
    }
}";

/// `n` physical boxes, each running [`TIMER_SCRIPT`].
pub fn scripted_simulation(n: usize) -> Simulation {
    let mut sim = Simulation::new(bench_config()).unwrap();
    for k in 0..n {
        let (i, j) = (k % 40, k / 40);
        let position = Vec3::new(10.0 + 6.0 * i as f64, 10.0 + 6.0 * j as f64, 30.0);
        let id: ObjectId = sim
            .world_mut()
            .create_object(PrimShape::sphere(1.0).unwrap(), Material::wood(), position)
            .unwrap();
        sim.world_mut().set_physical(id, true).unwrap();
        sim.world_mut().set_buoyancy(id, 1.0).unwrap();
        sim.attach_script(id, TIMER_SCRIPT).unwrap();
    }
    sim
}
