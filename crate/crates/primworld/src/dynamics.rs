//! Fixed-timestep physics stepper.
//!
//! Per tick, in order: time dilation from the load model, wind advance,
//! integration of every physical object under its law of motion, contact
//! resolution, energy refill, clock advance. Non-physical objects are never
//! touched.
//!
//! Force model (Newtonian regime): gravity −γ·m·g ẑ scaled by buoyancy to a
//! net gravity-like acceleration (b−1)·γ·g ẑ (water level is irrelevant);
//! linear drag on the vertical velocity component only, with coefficient
//! γ·m·g/v_t so free fall tops out exactly at v_t; persistent script forces
//! and torques, energy-gated. Horizontal velocity has no damping of any kind:
//! an impulse off the vertical axis keeps the object moving forever.
//!
//! Positions advance by the trapezoid rule `p += (v_old + v_new)/2 · dt`,
//! which is exact for constant acceleration and keeps v_t an exact fixed
//! point of the drag update. Velocities use explicit first-order updates.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{WorldError, WorldResult};
use crate::laws::LawOfMotion;
use crate::math::Vec3;
use crate::world::{
    ObjectId, RegionConfig, World, ENERGY_CAP, ENERGY_REFILL_NUMERATOR, REGION_SIDE,
};

/// Flat terrain height.
pub const GROUND_Z: f64 = 0.0;

/// Ground bounces slower than this come to rest, so resting contact is stable
/// instead of jittering by one gravity-tick of velocity forever.
const REST_SPEED: f64 = 0.5;

/// Outcome of one `step` call (possibly several fixed ticks).
#[derive(Debug, Clone)]
pub struct StepReport {
    /// Fixed ticks executed.
    pub ticks: u32,
    /// Clock reading after the step.
    pub sim_time: f64,
    /// δ applied on the most recent tick.
    pub dilation: f64,
    /// Contact pairs that did not exist on the previous tick (smaller id
    /// first, deduplicated across the ticks of this step).
    pub new_contacts: Vec<(ObjectId, ObjectId)>,
    /// Impulse resolutions between object pairs.
    pub pair_collisions: u32,
    /// Impulse resolutions against the ground plane.
    pub ground_collisions: u32,
    /// Post-step energy ledger.
    pub energy: BTreeMap<ObjectId, f64>,
}

impl StepReport {
    fn empty(world: &World) -> StepReport {
        StepReport {
            ticks: 0,
            sim_time: world.clock().sim_time,
            dilation: world.clock().dilation,
            new_contacts: Vec::new(),
            pair_collisions: 0,
            ground_collisions: 0,
            energy: BTreeMap::new(),
        }
    }
}

/// Advances the world by `wall_dt` seconds of wall time, consuming it in
/// fixed ticks of `step_size`; the remainder carries over to the next call.
pub fn step(world: &mut World, wall_dt: f64) -> StepReport {
    let mut report = StepReport::empty(world);
    if wall_dt > 0.0 {
        world.accumulator += wall_dt;
    }
    let step_size = world.clock().step_size;
    // Repeated subtraction accumulates rounding, so a remainder within a
    // nanosecond-scale epsilon of a full tick counts as a full tick; wall
    // time divisible by step_size then yields the exact tick count.
    let eps = step_size * 1e-9;
    while world.accumulator + eps >= step_size {
        world.accumulator -= step_size;
        tick(world, &mut report);
    }
    report.sim_time = world.clock().sim_time;
    report.dilation = world.clock().dilation;
    report.energy = world.ids().map(|id| (id, world.dynamics(id).unwrap().energy)).collect();
    report
}

/// Current time dilation δ = min(1, budget / (α·N_physical + β·script_ops)).
pub fn region_time_dilation(world: &World) -> f64 {
    world.clock().dilation
}

fn compute_dilation(world: &World) -> f64 {
    let cfg = world.config();
    let load = cfg.dilation_object_cost * world.physical_count() as f64
        + cfg.dilation_op_cost * world.script_load as f64;
    if load <= cfg.dilation_budget {
        1.0
    } else {
        cfg.dilation_budget / load
    }
}

fn tick(world: &mut World, report: &mut StepReport) {
    let cfg = world.config().clone();
    let delta = compute_dilation(world);
    let dt = delta * cfg.step_size;

    if cfg.wind_enabled {
        let now = world.clock().sim_time;
        world.wind_mut().advance(now, dt);
    }

    integrate_objects(world, &cfg, dt);
    resolve_collisions(world, &cfg, report);
    enforce_region_bounds(world);
    refill_energy(world, &cfg, dt);

    let clock = world.clock_mut();
    clock.dilation = delta;
    clock.sim_time += dt;
    report.ticks += 1;
}

// ---------------------------------------------------------------------------
// Energy accounting
// ---------------------------------------------------------------------------

/// Spends up to `demand` from the budget; returns the delivered fraction.
/// Insufficient energy scales the effect down rather than rejecting it.
fn spend(energy: &mut f64, demand: f64) -> f64 {
    if demand <= 0.0 {
        return 1.0;
    }
    if *energy >= demand {
        *energy -= demand;
        1.0
    } else {
        let scale = *energy / demand;
        *energy = 0.0;
        scale
    }
}

fn refill_energy(world: &mut World, cfg: &RegionConfig, dt: f64) {
    let density = cfg.density;
    for (_, entry) in world.entries_mut() {
        let m = entry.mass(density);
        let e = &mut entry.dynamics.energy;
        *e = (*e + ENERGY_REFILL_NUMERATOR / m * dt).min(ENERGY_CAP);
    }
}

// ---------------------------------------------------------------------------
// Integration
// ---------------------------------------------------------------------------

fn integrate_objects(world: &mut World, cfg: &RegionConfig, dt: f64) {
    if dt <= 0.0 {
        return;
    }
    let default_law = cfg.default_law;
    for (_, entry) in world.entries_mut() {
        if !entry.object.physical {
            continue;
        }
        match entry.law.unwrap_or(default_law) {
            LawOfMotion::Newtonian => newtonian_integrate(entry, cfg, dt),
            LawOfMotion::Impetus { lambda } => {
                if entry.impetus.is_some() {
                    impetus_integrate(entry, cfg, dt, lambda);
                } else {
                    // Unlaunched or exhausted impetus objects coast under
                    // ordinary free fall.
                    newtonian_integrate(entry, cfg, dt);
                }
            }
            LawOfMotion::Aristotelian { mu } => aristotelian_integrate(entry, cfg, dt, mu),
        }
    }
}

fn newtonian_integrate(entry: &mut crate::world::ObjectEntry, cfg: &RegionConfig, dt: f64) {
    let m = entry.mass(cfg.density);
    let gamma = entry.object.gravity_multiplier;
    let b = entry.object.buoyancy;
    let d = &mut entry.dynamics;

    let force_scale = spend(&mut d.energy, cfg.energy_costs.force * d.pending_force.length() * dt / 100.0);
    let torque_scale =
        spend(&mut d.energy, cfg.energy_costs.torque * d.pending_torque.length() * dt / 100.0);

    let mut accel = d.pending_force * (force_scale / m);
    accel.z += (b - 1.0) * gamma * cfg.gravity;
    if cfg.drag_enabled {
        accel.z -= gamma * cfg.gravity / cfg.terminal_velocity * d.velocity.z;
    }

    let v_new = d.velocity + accel * dt;
    d.position += (d.velocity + v_new) * (0.5 * dt);
    d.velocity = v_new;

    let torque = d.pending_torque * torque_scale;
    if torque != Vec3::ZERO {
        let inertia = inertia_diagonal(&entry.object.shape, m);
        d.omega += Vec3::new(torque.x / inertia.x, torque.y / inertia.y, torque.z / inertia.z) * dt;
    }
    if d.omega != Vec3::ZERO {
        d.rotation = d.rotation.integrated(d.omega, dt);
    }
}

fn impetus_integrate(
    entry: &mut crate::world::ObjectEntry,
    cfg: &RegionConfig,
    dt: f64,
    lambda: f64,
) {
    let m = entry.mass(cfg.density);
    let st = entry.impetus.expect("caller checked impetus state");
    let decay = lambda * m; // impetus drain, N·s per second

    // Time the remaining impetus can still carry the object.
    let time_left = if decay > 0.0 { st.remaining / decay } else { f64::INFINITY };

    if time_left >= dt {
        // Carried the whole tick: constant velocity, gravity and drag
        // suspended, external forces ignored.
        entry.dynamics.velocity = st.direction * st.speed;
        entry.dynamics.position += st.direction * (st.speed * dt);
        if decay > 0.0 {
            entry.impetus = Some(crate::laws::ImpetusState {
                remaining: st.remaining - decay * dt,
                ..st
            });
        }
    } else {
        // Impetus exhausts mid-tick: finish the straight segment, then hand
        // off to free fall from rest for the rest of the tick.
        entry.dynamics.position += st.direction * (st.speed * time_left);
        entry.dynamics.velocity = Vec3::ZERO;
        entry.impetus = None;
        let rest = dt - time_left;
        if rest > 0.0 {
            newtonian_integrate(entry, cfg, rest);
        }
    }

    if entry.dynamics.omega != Vec3::ZERO {
        entry.dynamics.rotation = entry.dynamics.rotation.integrated(entry.dynamics.omega, dt);
    }
}

fn aristotelian_integrate(
    entry: &mut crate::world::ObjectEntry,
    cfg: &RegionConfig,
    dt: f64,
    mu: f64,
) {
    let d = &mut entry.dynamics;
    let scale = spend(&mut d.energy, cfg.energy_costs.force * d.pending_force.length() * dt / 100.0);
    // v = μ·F, instantaneously: no inertia, no gravity, no drag. Zero force
    // therefore means zero velocity on this very step.
    d.velocity = d.pending_force * (mu * scale);
    d.position += d.velocity * dt;
    if d.omega != Vec3::ZERO {
        d.rotation = d.rotation.integrated(d.omega, dt);
    }
}

/// Diagonal inertia tensor (world-aligned approximation, solid bodies).
fn inertia_diagonal(shape: &crate::world::PrimShape, m: f64) -> Vec3 {
    use crate::world::ShapeKind;
    let s = shape.size;
    match shape.kind {
        ShapeKind::Box => Vec3::new(
            m / 12.0 * (s.y * s.y + s.z * s.z),
            m / 12.0 * (s.x * s.x + s.z * s.z),
            m / 12.0 * (s.x * s.x + s.y * s.y),
        ),
        ShapeKind::Sphere => {
            // Solid ellipsoid with semi-axes s/2.
            let (a, b, c) = (s.x * 0.5, s.y * 0.5, s.z * 0.5);
            Vec3::new(
                m / 5.0 * (b * b + c * c),
                m / 5.0 * (a * a + c * c),
                m / 5.0 * (a * a + b * b),
            )
        }
        ShapeKind::Cylinder => {
            let (rx, ry, h) = (s.x * 0.5, s.y * 0.5, s.z);
            Vec3::new(
                m / 12.0 * (3.0 * ry * ry + h * h),
                m / 12.0 * (3.0 * rx * rx + h * h),
                m / 4.0 * (rx * rx + ry * ry),
            )
        }
    }
}

// ---------------------------------------------------------------------------
// Contact resolution
// ---------------------------------------------------------------------------

struct Body {
    id: ObjectId,
    position: Vec3,
    velocity: Vec3,
    inv_mass: f64,
    radius: f64,
    clearance: f64,
    restitution: f64,
    is_sphere: bool,
}

/// Impulse-based contacts: sphere–sphere pairs and anything–ground, for
/// objects in the Newtonian regime. Pair restitution is the smaller of the
/// two materials'. Interpenetration is removed by projection split by
/// inverse mass, which leaves momentum untouched.
fn resolve_collisions(world: &mut World, cfg: &RegionConfig, report: &mut StepReport) {
    let default_law = cfg.default_law;
    let mut bodies: Vec<Body> = Vec::new();
    for (id, entry) in world.entries_mut() {
        if !entry.object.physical {
            continue;
        }
        let newtonian_regime = match entry.law.unwrap_or(default_law) {
            LawOfMotion::Newtonian => true,
            LawOfMotion::Impetus { .. } => entry.impetus.is_none(),
            LawOfMotion::Aristotelian { .. } => false,
        };
        if !newtonian_regime {
            continue;
        }
        let m = entry.mass(cfg.density);
        bodies.push(Body {
            id: *id,
            position: entry.dynamics.position,
            velocity: entry.dynamics.velocity,
            inv_mass: 1.0 / m,
            radius: entry.object.shape.collision_radius(),
            clearance: entry.object.shape.ground_clearance(),
            restitution: entry.object.material.restitution,
            is_sphere: entry.object.shape.kind == crate::world::ShapeKind::Sphere,
        });
    }

    let mut contacts: BTreeSet<(ObjectId, ObjectId)> = BTreeSet::new();

    for i in 0..bodies.len() {
        for j in (i + 1)..bodies.len() {
            if !(bodies[i].is_sphere && bodies[j].is_sphere) {
                continue;
            }
            let delta = bodies[i].position - bodies[j].position;
            let reach = bodies[i].radius + bodies[j].radius;
            let dist2 = delta.length2();
            if dist2 >= reach * reach {
                continue;
            }
            let pair = (bodies[i].id.min(bodies[j].id), bodies[i].id.max(bodies[j].id));
            contacts.insert(pair);

            let dist = dist2.sqrt();
            // Coincident centres: push apart along z, deterministically.
            let normal = if dist > 0.0 { delta / dist } else { Vec3::new(0.0, 0.0, 1.0) };
            let (wi, wj) = (bodies[i].inv_mass, bodies[j].inv_mass);
            let w_sum = wi + wj;

            let penetration = reach - dist;
            bodies[i].position += normal * (penetration * wi / w_sum);
            bodies[j].position -= normal * (penetration * wj / w_sum);

            let closing = (bodies[i].velocity - bodies[j].velocity).dot(normal);
            if closing < 0.0 {
                let e = bodies[i].restitution.min(bodies[j].restitution);
                let impulse = -(1.0 + e) * closing / w_sum;
                bodies[i].velocity += normal * (impulse * wi);
                bodies[j].velocity -= normal * (impulse * wj);
                report.pair_collisions += 1;
            }
        }
    }

    for body in &mut bodies {
        let floor = GROUND_Z + body.clearance;
        if body.position.z < floor {
            body.position.z = floor;
            if body.velocity.z < 0.0 {
                // Sub-threshold contact is resting contact, not a bounce:
                // squelch silently so a settled object doesn't log a
                // collision every tick.
                let bounce = -body.restitution * body.velocity.z;
                if bounce < REST_SPEED {
                    body.velocity.z = 0.0;
                } else {
                    body.velocity.z = bounce;
                    report.ground_collisions += 1;
                }
            }
        }
    }

    for body in bodies {
        let entry = world.entry_mut(body.id).expect("body just collected");
        entry.dynamics.position = body.position;
        entry.dynamics.velocity = body.velocity;
    }

    for pair in &contacts {
        if !world.prev_contacts.contains(pair) && !report.new_contacts.contains(pair) {
            report.new_contacts.push(*pair);
        }
    }
    world.prev_contacts = contacts;
}

/// Keeps every physical object's footprint inside [0, side)²: region walls
/// reflect elastically. Impetus directions reflect along with the velocity.
fn enforce_region_bounds(world: &mut World) {
    for (_, entry) in world.entries_mut() {
        if !entry.object.physical {
            continue;
        }
        let d = &mut entry.dynamics;
        for axis in 0..2 {
            let (p, v) = match axis {
                0 => (&mut d.position.x, &mut d.velocity.x),
                _ => (&mut d.position.y, &mut d.velocity.y),
            };
            let mut flipped = false;
            for _ in 0..8 {
                if *p < 0.0 {
                    *p = -*p;
                    flipped = !flipped;
                } else if *p >= REGION_SIDE {
                    *p = 2.0 * REGION_SIDE - *p;
                    flipped = !flipped;
                } else {
                    break;
                }
            }
            if !(0.0..REGION_SIDE).contains(p) {
                *p = p.clamp(0.0, REGION_SIDE - 1e-9);
            }
            if flipped {
                *v = -*v;
                if let Some(st) = &mut entry.impetus {
                    match axis {
                        0 => st.direction.x = -st.direction.x,
                        _ => st.direction.y = -st.direction.y,
                    }
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Script-facing operations
// ---------------------------------------------------------------------------

/// Instantaneous velocity change Δv = scale·J/m, energy demand
/// c_impulse·|J|/100. Kinetic: faults on non-physical objects.
pub fn apply_impulse(world: &mut World, id: ObjectId, impulse: Vec3) -> WorldResult<()> {
    if !impulse.is_finite() {
        return Err(WorldError::NonFinite("impulse"));
    }
    let cost = world.config().energy_costs.impulse;
    let density = world.config().density;
    let entry = world.entry_mut(id)?;
    if !entry.object.physical {
        return Err(WorldError::KineticOnNonPhysical(id));
    }
    let m = entry.mass(density);
    let scale = spend(&mut entry.dynamics.energy, cost * impulse.length() / 100.0);
    entry.dynamics.velocity += impulse * (scale / m);
    Ok(())
}

/// Sets the persistent script force, reapplied every tick until changed.
/// Kinetic: faults on non-physical objects.
pub fn apply_force(world: &mut World, id: ObjectId, force: Vec3) -> WorldResult<()> {
    if !force.is_finite() {
        return Err(WorldError::NonFinite("force"));
    }
    let entry = world.entry_mut(id)?;
    if !entry.object.physical {
        return Err(WorldError::KineticOnNonPhysical(id));
    }
    entry.dynamics.pending_force = force;
    Ok(())
}

/// Sets the persistent script torque. Kinetic: faults on non-physical objects.
pub fn apply_torque(world: &mut World, id: ObjectId, torque: Vec3) -> WorldResult<()> {
    if !torque.is_finite() {
        return Err(WorldError::NonFinite("torque"));
    }
    let entry = world.entry_mut(id)?;
    if !entry.object.physical {
        return Err(WorldError::KineticOnNonPhysical(id));
    }
    entry.dynamics.pending_torque = torque;
    Ok(())
}

/// Kinematic teleport: succeeds only on non-physical objects and generates
/// no motion.
pub fn set_position(world: &mut World, id: ObjectId, position: Vec3) -> WorldResult<()> {
    if !position.is_finite() {
        return Err(WorldError::NonFinite("position"));
    }
    if !(0.0..REGION_SIDE).contains(&position.x) || !(0.0..REGION_SIDE).contains(&position.y) {
        return Err(WorldError::PositionOutOfRegion { x: position.x, y: position.y });
    }
    let entry = world.entry_mut(id)?;
    if entry.object.physical {
        return Err(WorldError::KinematicOnPhysical(id));
    }
    entry.dynamics.position = position;
    Ok(())
}

/// Kinematic rotation: succeeds only on non-physical objects.
pub fn set_rotation(world: &mut World, id: ObjectId, rotation: crate::math::Rotation) -> WorldResult<()> {
    if !rotation.is_finite() {
        return Err(WorldError::NonFinite("rotation"));
    }
    let entry = world.entry_mut(id)?;
    if entry.object.physical {
        return Err(WorldError::KinematicOnPhysical(id));
    }
    entry.dynamics.rotation = rotation.normalized();
    Ok(())
}
