//! Pluggable laws of motion: Newtonian (the default), Buridan-style impetus,
//! and Aristotelian motion. Laws select per object, falling back to the world
//! default, so mixed-law microworlds are possible.
//!
//! Impetus model: a launched projectile carries impetus m·speed and moves at
//! constant velocity along the launch direction while any impetus remains.
//! Impetus decays at λ·m per second (so the regime lasts speed/λ seconds),
//! gravity and drag are suspended meanwhile, and on exhaustion the velocity
//! drops to zero and ordinary free fall takes over from the handoff point.
//!
//! Aristotelian model: v = μ·F instantaneously — no inertia, no gravity.
//! Zero force means zero velocity on the very next step.

use serde::{Deserialize, Serialize};

use crate::dynamics;
use crate::error::{WorldError, WorldResult};
use crate::math::Vec3;
use crate::world::{ObjectId, World};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum LawOfMotion {
    Newtonian,
    /// λ: impetus decay rate, 1/s. λ = 0 keeps impetus (and the straight
    /// line) forever.
    Impetus { lambda: f64 },
    /// μ: mobility, (m/s) per N of motive force.
    Aristotelian { mu: f64 },
}

impl LawOfMotion {
    pub fn validate(&self) -> WorldResult<()> {
        match *self {
            LawOfMotion::Newtonian => Ok(()),
            LawOfMotion::Impetus { lambda } => {
                if lambda.is_finite() && lambda >= 0.0 {
                    Ok(())
                } else {
                    Err(WorldError::InvalidParameter(format!(
                        "impetus decay rate λ = {lambda} must be ≥ 0"
                    )))
                }
            }
            LawOfMotion::Aristotelian { mu } => {
                if mu.is_finite() && mu > 0.0 {
                    Ok(())
                } else {
                    Err(WorldError::InvalidParameter(format!("mobility μ = {mu} must be > 0")))
                }
            }
        }
    }
}

/// Active impetus regime. `remaining` is the impetus magnitude left, in
/// N·s (= m·speed at launch); it only decreases between launches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImpetusState {
    pub direction: Vec3,
    pub speed: f64,
    pub remaining: f64,
}

/// Sets the per-object law override. Position and velocity are preserved
/// across the switch; an active impetus regime is dropped when leaving the
/// impetus law.
pub fn set_law(world: &mut World, id: ObjectId, law: LawOfMotion) -> WorldResult<()> {
    law.validate()?;
    let entry = world.entry_mut(id)?;
    entry.law = Some(law);
    if !matches!(law, LawOfMotion::Impetus { .. }) {
        entry.impetus = None;
    }
    Ok(())
}

/// The law an object integrates under: its override, else the world default.
pub fn law_of(world: &World, id: ObjectId) -> WorldResult<LawOfMotion> {
    Ok(world.entry(id)?.law.unwrap_or(world.config().default_law))
}

/// Fires a projectile at `speed` along `direction` under the object's
/// effective law:
///
/// - Newtonian: an ordinary energy-gated impulse of m·speed.
/// - Impetus: impetus ← m·speed, velocity ← speed·direction.
/// - Aristotelian: motive force ← (speed/μ)·direction, so the prescribed
///   velocity is `speed` while the force is maintained.
pub fn launch(world: &mut World, id: ObjectId, speed: f64, direction: Vec3) -> WorldResult<()> {
    if !speed.is_finite() || speed < 0.0 {
        return Err(WorldError::InvalidParameter(format!("launch speed {speed} must be ≥ 0")));
    }
    let Some(direction) = direction.normalized() else {
        return Err(WorldError::InvalidParameter("launch direction must be nonzero".into()));
    };
    if !world.entry(id)?.object.physical {
        return Err(WorldError::KineticOnNonPhysical(id));
    }
    match law_of(world, id)? {
        LawOfMotion::Newtonian => {
            let m = world.mass_of(id)?;
            dynamics::apply_impulse(world, id, direction * (m * speed))
        }
        LawOfMotion::Impetus { .. } => {
            let m = world.mass_of(id)?;
            let entry = world.entry_mut(id)?;
            if speed == 0.0 {
                entry.impetus = None;
                return Ok(());
            }
            entry.impetus = Some(ImpetusState { direction, speed, remaining: m * speed });
            entry.dynamics.velocity = direction * speed;
            Ok(())
        }
        LawOfMotion::Aristotelian { mu } => {
            let entry = world.entry_mut(id)?;
            entry.dynamics.pending_force = direction * (speed / mu);
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::world::{Material, PrimShape};

    fn world_with_sphere() -> (World, ObjectId) {
        let mut w = World::with_defaults();
        let id = w
            .create_object(PrimShape::sphere(1.0).unwrap(), Material::wood(), Vec3::new(128.0, 128.0, 50.0))
            .unwrap();
        w.set_physical(id, true).unwrap();
        (w, id)
    }

    #[test]
    fn parameter_validation() {
        let (mut w, id) = world_with_sphere();
        assert!(matches!(
            set_law(&mut w, id, LawOfMotion::Impetus { lambda: -1.0 }),
            Err(WorldError::InvalidParameter(_))
        ));
        assert!(matches!(
            set_law(&mut w, id, LawOfMotion::Aristotelian { mu: 0.0 }),
            Err(WorldError::InvalidParameter(_))
        ));
        assert!(set_law(&mut w, id, LawOfMotion::Impetus { lambda: 0.0 }).is_ok());
    }

    #[test]
    fn switching_laws_preserves_state() {
        let (mut w, id) = world_with_sphere();
        dynamics::apply_impulse(&mut w, id, Vec3::new(10.0, 0.0, 0.0)).unwrap();
        let before = w.dynamics(id).unwrap().clone();
        set_law(&mut w, id, LawOfMotion::Aristotelian { mu: 0.5 }).unwrap();
        let after = w.dynamics(id).unwrap();
        assert_eq!(before.position, after.position);
        assert_eq!(before.velocity, after.velocity);
        set_law(&mut w, id, LawOfMotion::Newtonian).unwrap();
        assert_eq!(before.velocity, w.dynamics(id).unwrap().velocity);
    }

    #[test]
    fn launch_requires_physical_and_valid_arguments() {
        let mut w = World::with_defaults();
        let id = w
            .create_object(PrimShape::cube(1.0).unwrap(), Material::wood(), Vec3::new(10.0, 10.0, 5.0))
            .unwrap();
        assert!(matches!(
            launch(&mut w, id, 5.0, Vec3::new(1.0, 0.0, 0.0)),
            Err(WorldError::KineticOnNonPhysical(_))
        ));
        w.set_physical(id, true).unwrap();
        assert!(matches!(
            launch(&mut w, id, 5.0, Vec3::ZERO),
            Err(WorldError::InvalidParameter(_))
        ));
        assert!(launch(&mut w, id, 5.0, Vec3::new(0.0, 1.0, 0.0)).is_ok());
    }

    #[test]
    fn launch_speed_zero_means_no_motion_under_any_law() {
        for law in [
            LawOfMotion::Newtonian,
            LawOfMotion::Impetus { lambda: 5.0 },
            LawOfMotion::Aristotelian { mu: 0.5 },
        ] {
            let (mut w, id) = world_with_sphere();
            set_law(&mut w, id, law).unwrap();
            w.entry_mut(id).unwrap().object.buoyancy = 1.0; // isolate the launch
            launch(&mut w, id, 0.0, Vec3::new(1.0, 0.0, 0.0)).unwrap();
            let start = w.dynamics(id).unwrap().position;
            for _ in 0..45 {
                dynamics::step(&mut w, 1.0 / 45.0);
            }
            let end = w.dynamics(id).unwrap().position;
            assert!((end - start).length() < 1e-12, "moved under {law:?}");
        }
    }

    #[test]
    fn newtonian_launch_is_an_impulse() {
        let (mut w, id) = world_with_sphere();
        let m = w.mass_of(id).unwrap();
        launch(&mut w, id, 2.0, Vec3::new(1.0, 0.0, 0.0)).unwrap();
        let v = w.dynamics(id).unwrap().velocity;
        // Impulse m·2 costs 2·(2m)/100 ≈ 0.21 energy — far below the cap, so
        // the full speed is delivered.
        assert!((v.x - 2.0).abs() < 1e-12);
        assert!(w.dynamics(id).unwrap().energy < 100.0);
        let _ = m;
    }
}
