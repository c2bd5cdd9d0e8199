//! Randomized cross-module invariants. Whatever shapes, impulses, and loads
//! a scenario throws at the engine: energy stays in its band, bodies stay in
//! the region, dilation stays in (0, 1], Aristotelian motion stops with its
//! motive force, and a fixed seed replays bit-identically.

use primworld::dynamics::{self, apply_force, apply_impulse};
use primworld::{
    laws, LawOfMotion, Material, PrimShape, RegionConfig, ShapeKind, Simulation, Vec3, World,
    ENERGY_CAP, REGION_SIDE,
};
use proptest::prelude::*;

const DT: f64 = 1.0 / 45.0;

fn shape_kind() -> impl Strategy<Value = ShapeKind> {
    prop_oneof![Just(ShapeKind::Box), Just(ShapeKind::Sphere), Just(ShapeKind::Cylinder)]
}

prop_compose! {
    fn arb_shape()(
        kind in shape_kind(),
        sx in 0.05f64..4.0,
        sy in 0.05f64..4.0,
        sz in 0.05f64..4.0,
    ) -> PrimShape {
        PrimShape::new(kind, Vec3::new(sx, sy, sz)).expect("extents in range")
    }
}

prop_compose! {
    fn interior_position()(
        x in 8.0f64..(REGION_SIDE - 8.0),
        y in 8.0f64..(REGION_SIDE - 8.0),
        z in 3.0f64..120.0,
    ) -> Vec3 {
        Vec3::new(x, y, z)
    }
}

prop_compose! {
    fn kick()(
        jx in -3000.0f64..3000.0,
        jy in -3000.0f64..3000.0,
        jz in -3000.0f64..3000.0,
    ) -> Vec3 {
        Vec3::new(jx, jy, jz)
    }
}

/// Quiet world for throughput: wind never affects rigid bodies, so most
/// properties can skip advancing it.
fn quiet_config() -> RegionConfig {
    RegionConfig { wind_enabled: false, ..RegionConfig::default() }
}

fn spawn(w: &mut World, shape: PrimShape, at: Vec3) -> primworld::ObjectId {
    let id = w.create_object(shape, Material::wood(), at).expect("interior spawn");
    w.set_physical(id, true).expect("fresh id");
    id
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    /// Mass is ρ₀·volume — a pure function of shape and size. Material and
    /// motion state never enter.
    #[test]
    fn mass_is_density_times_shape_volume(
        shape in arb_shape(),
        density in 0.5f64..50.0,
        kind in prop_oneof![
            Just(primworld::MaterialKind::Wood),
            Just(primworld::MaterialKind::Metal),
            Just(primworld::MaterialKind::Rubber),
        ],
    ) {
        let cfg = RegionConfig { density, ..quiet_config() };
        let mut w = World::new(cfg).unwrap();
        let id = w
            .create_object(shape, Material::preset(kind), Vec3::new(128.0, 128.0, 60.0))
            .unwrap();
        let block = shape.size.x * shape.size.y * shape.size.z;
        let factor = match shape.kind {
            ShapeKind::Box => 1.0,
            ShapeKind::Sphere => std::f64::consts::FRAC_PI_6,
            ShapeKind::Cylinder => std::f64::consts::FRAC_PI_4,
        };
        let expect = density * factor * block;
        let got = w.mass_of(id).unwrap();
        prop_assert!(
            ((got - expect) / expect).abs() < 1e-12,
            "mass {got} vs ρ·V = {expect}"
        );
    }

    /// Energy can be spent to zero and refilled to the cap, but a step report
    /// never shows a value outside [0, 100].
    #[test]
    fn energy_never_leaves_band(
        objects in prop::collection::vec((arb_shape(), interior_position(), kick()), 1..5),
        force in kick(),
        steps in 1u32..120,
    ) {
        let mut w = World::new(quiet_config()).unwrap();
        let mut ids = Vec::new();
        for (shape, at, impulse) in objects {
            let id = spawn(&mut w, shape, at);
            apply_impulse(&mut w, id, impulse).unwrap();
            ids.push(id);
        }
        apply_force(&mut w, ids[0], force).unwrap();
        for _ in 0..steps {
            let report = dynamics::step(&mut w, DT);
            for (id, e) in &report.energy {
                prop_assert!(
                    (0.0..=ENERGY_CAP).contains(e),
                    "object {id} energy {e} outside [0, {ENERGY_CAP}]"
                );
            }
        }
    }

    /// Walls reflect and the ground clamps: after any kick, every physical
    /// object stays inside the region footprint and above its resting height.
    #[test]
    fn bodies_stay_inside_the_region(
        objects in prop::collection::vec((arb_shape(), interior_position(), kick()), 1..5),
        steps in 1u32..200,
    ) {
        let mut w = World::new(quiet_config()).unwrap();
        let mut spawned = Vec::new();
        for (shape, at, impulse) in objects {
            let id = spawn(&mut w, shape, at);
            apply_impulse(&mut w, id, impulse).unwrap();
            spawned.push((id, shape.ground_clearance()));
        }
        for _ in 0..steps {
            dynamics::step(&mut w, DT);
            for &(id, clearance) in &spawned {
                let p = w.dynamics(id).unwrap().position;
                prop_assert!(p.x.is_finite() && p.y.is_finite() && p.z.is_finite());
                prop_assert!((0.0..REGION_SIDE).contains(&p.x), "x = {} escaped", p.x);
                prop_assert!((0.0..REGION_SIDE).contains(&p.y), "y = {} escaped", p.y);
                prop_assert!(p.z >= clearance - 1e-9, "z = {} sank below rest", p.z);
            }
        }
    }

    /// δ = min(1, budget/load) stays in (0, 1] for any population and script
    /// load, and equals exactly 1 for an empty region.
    #[test]
    fn dilation_stays_in_unit_interval(
        population in 0usize..40,
        ops in 0u64..2_000_000,
        budget in 1.0f64..2000.0,
    ) {
        let cfg = RegionConfig { dilation_budget: budget, ..quiet_config() };
        let mut w = World::new(cfg).unwrap();
        for i in 0..population {
            let at = Vec3::new(16.0 + 5.0 * i as f64 % 224.0, 128.0, 40.0);
            spawn(&mut w, PrimShape::sphere(0.5).unwrap(), at);
        }
        w.set_script_load(ops);
        dynamics::step(&mut w, DT);
        let delta = dynamics::region_time_dilation(&w);
        prop_assert!(delta > 0.0 && delta <= 1.0, "δ = {delta}");

        let mut empty = World::new(quiet_config()).unwrap();
        dynamics::step(&mut empty, DT);
        prop_assert_eq!(dynamics::region_time_dilation(&empty), 1.0);
    }

    /// Aristotelian kinematics: velocity is slaved to the motive force, so
    /// clearing the force stops the object on that very step.
    #[test]
    fn aristotelian_objects_stop_with_their_force(
        mu in 0.01f64..5.0,
        force in kick(),
        push_steps in 1u32..40,
        coast_steps in 1u32..40,
    ) {
        let mut w = World::new(quiet_config()).unwrap();
        let id = spawn(&mut w, PrimShape::sphere(1.0).unwrap(), Vec3::new(128.0, 128.0, 60.0));
        laws::set_law(&mut w, id, LawOfMotion::Aristotelian { mu }).unwrap();
        apply_force(&mut w, id, force).unwrap();
        for _ in 0..push_steps {
            dynamics::step(&mut w, DT);
        }
        apply_force(&mut w, id, Vec3::ZERO).unwrap();
        for _ in 0..coast_steps {
            dynamics::step(&mut w, DT);
            let v = w.dynamics(id).unwrap().velocity;
            prop_assert_eq!(v, Vec3::ZERO, "coasted without motive force");
        }
    }

    /// Replaying the same scenario with the same seed is bit-identical, wind
    /// field included.
    #[test]
    fn fixed_seed_replays_bit_identically(
        seed in any::<u64>(),
        objects in prop::collection::vec((arb_shape(), interior_position(), kick()), 1..4),
        ticks in 1u64..80,
    ) {
        let run = || {
            let cfg = RegionConfig { seed, ..RegionConfig::default() };
            let mut sim = Simulation::new(cfg).unwrap();
            let mut ids = Vec::new();
            for (shape, at, impulse) in &objects {
                let id = spawn(sim.world_mut(), *shape, *at);
                apply_impulse(sim.world_mut(), id, *impulse).unwrap();
                ids.push(id);
            }
            sim.run(ticks);
            let mut bits = Vec::new();
            for id in ids {
                let d = sim.world().dynamics(id).unwrap();
                for q in [d.position, d.velocity] {
                    bits.extend([q.x.to_bits(), q.y.to_bits(), q.z.to_bits()]);
                }
            }
            let gust = sim.world().wind_at(Vec3::new(77.0, 191.0, 10.0)).unwrap();
            bits.extend([gust.x.to_bits(), gust.y.to_bits(), gust.z.to_bits()]);
            bits
        };
        prop_assert_eq!(run(), run());
    }
}
