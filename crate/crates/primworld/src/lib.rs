//! A scriptable rigid-body microworld with deliberately "hyper-real" physics.
//!
//! The engine reproduces the physics semantics of a large commercial virtual
//! world rather than textbook mechanics: mass comes from volume at a fixed
//! density regardless of material, drag acts only vertically (so horizontal
//! impulses persist forever), buoyancy is a gravity dial unrelated to water
//! level, kinetic effects draw on a per-object energy budget, and scripted
//! load slows simulated time itself. Laws of motion are pluggable per object
//! — Newtonian, medieval impetus, or Aristotelian — which makes the world a
//! platform for comparing physical theories inside one scene.
//!
//! Structure:
//!
//! - [`world`]: region state, objects, materials, shapes, clocks.
//! - [`dynamics`]: the fixed-step integrator, collisions, energy and
//!   time-dilation bookkeeping.
//! - [`laws`]: per-object law selection and launches.
//! - [`wind`]: a 2D incompressible wind field, query-only.
//! - [`script`]: the event-driven scripting language and its host.
//! - [`taxonomy`]: executable game-vs-simulator classification rubrics.
//! - [`sim`]: the per-tick orchestration of scripts plus physics.

pub mod dynamics;
pub mod error;
pub mod laws;
pub mod math;
pub mod script;
pub mod sim;
pub mod taxonomy;
pub mod wind;
pub mod world;

pub use error::{WorldError, WorldResult};
pub use laws::{ImpetusState, LawOfMotion};
pub use math::{Rotation, Vec3};
pub use sim::{Simulation, TickReport};
pub use world::{
    Material, MaterialKind, ObjectDynamics, ObjectId, PrimObject, PrimShape, RegionConfig,
    ShapeKind, SimClock, World, ENERGY_CAP, REGION_SIDE,
};
