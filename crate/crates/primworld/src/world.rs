//! Region, object lifecycle, mass model, and the simulation clock.
//!
//! The world is the single source of truth: dynamics, laws, wind, and the
//! script runtime all read and mutate state through it. A world instance is
//! single-writer; snapshots of object state returned by accessors are plain
//! copies safe to hand elsewhere.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{WorldError, WorldResult};
use crate::laws::{ImpetusState, LawOfMotion};
use crate::math::{Rotation, Vec3};
use crate::wind::WindField;

/// Region side length in metres. Fixed: a region is one 256 m square parcel.
pub const REGION_SIDE: f64 = 256.0;

/// Per-object energy ceiling (dimensionless "percent" units).
pub const ENERGY_CAP: f64 = 100.0;

/// Numerator of the energy refill law: refill rate = 200/mass per second.
pub const ENERGY_REFILL_NUMERATOR: f64 = 200.0;

// ---------------------------------------------------------------------------
// Identifiers
// ---------------------------------------------------------------------------

/// Handle to an object in a world. Ids are unique per world and never reused.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ObjectId(pub u64);

impl fmt::Display for ObjectId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

// ---------------------------------------------------------------------------
// Materials
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MaterialKind {
    Wood,
    Stone,
    Metal,
    Glass,
    Rubber,
    Flesh,
}

/// Surface properties only. Material never contributes to mass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Material {
    pub kind: MaterialKind,
    pub restitution: f64,
    pub friction: f64,
}

impl Material {
    /// Stock material table (restitution, friction per kind).
    pub fn preset(kind: MaterialKind) -> Material {
        let (restitution, friction) = match kind {
            MaterialKind::Wood => (0.5, 0.6),
            MaterialKind::Stone => (0.4, 0.8),
            MaterialKind::Metal => (0.4, 0.3),
            MaterialKind::Glass => (0.7, 0.2),
            MaterialKind::Rubber => (0.9, 0.9),
            MaterialKind::Flesh => (0.3, 0.9),
        };
        Material { kind, restitution, friction }
    }

    /// Stock kind with overridden surface constants.
    pub fn custom(kind: MaterialKind, restitution: f64, friction: f64) -> WorldResult<Material> {
        if !(0.0..=1.0).contains(&restitution) || !restitution.is_finite() {
            return Err(WorldError::InvalidParameter(format!(
                "restitution {restitution} outside [0, 1]"
            )));
        }
        if friction < 0.0 || !friction.is_finite() {
            return Err(WorldError::InvalidParameter(format!("friction {friction} negative")));
        }
        Ok(Material { kind, restitution, friction })
    }

    pub fn wood() -> Material {
        Material::preset(MaterialKind::Wood)
    }
    pub fn stone() -> Material {
        Material::preset(MaterialKind::Stone)
    }
    pub fn metal() -> Material {
        Material::preset(MaterialKind::Metal)
    }
    pub fn glass() -> Material {
        Material::preset(MaterialKind::Glass)
    }
    pub fn rubber() -> Material {
        Material::preset(MaterialKind::Rubber)
    }
    pub fn flesh() -> Material {
        Material::preset(MaterialKind::Flesh)
    }
}

// ---------------------------------------------------------------------------
// Shapes
// ---------------------------------------------------------------------------

pub const MIN_PRIM_EXTENT: f64 = 0.01;
pub const MAX_PRIM_EXTENT: f64 = 64.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShapeKind {
    Box,
    Sphere,
    Cylinder,
}

/// Prim geometry. `size` components are full extents (a sphere of `size`
/// (1,1,1) has diameter 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrimShape {
    pub kind: ShapeKind,
    pub size: Vec3,
}

impl PrimShape {
    pub fn new(kind: ShapeKind, size: Vec3) -> WorldResult<PrimShape> {
        for extent in [size.x, size.y, size.z] {
            if !extent.is_finite() || !(MIN_PRIM_EXTENT..=MAX_PRIM_EXTENT).contains(&extent) {
                return Err(WorldError::InvalidParameter(format!(
                    "prim extent {extent} outside [{MIN_PRIM_EXTENT}, {MAX_PRIM_EXTENT}]"
                )));
            }
        }
        Ok(PrimShape { kind, size })
    }

    /// Uniform box with edge `s`.
    pub fn cube(s: f64) -> WorldResult<PrimShape> {
        PrimShape::new(ShapeKind::Box, Vec3::new(s, s, s))
    }

    /// Uniform sphere with diameter `d`.
    pub fn sphere(d: f64) -> WorldResult<PrimShape> {
        PrimShape::new(ShapeKind::Sphere, Vec3::new(d, d, d))
    }

    pub fn volume(&self) -> f64 {
        let block = self.size.x * self.size.y * self.size.z;
        match self.kind {
            ShapeKind::Box => block,
            ShapeKind::Sphere => std::f64::consts::FRAC_PI_6 * block,
            ShapeKind::Cylinder => std::f64::consts::FRAC_PI_4 * block,
        }
    }

    /// Radius used for pairwise contact (spheres are the only pair-colliding
    /// shape; expected uniform, so the x extent is authoritative).
    pub fn collision_radius(&self) -> f64 {
        self.size.x * 0.5
    }

    /// Height of the support point below the object centre when resting on
    /// flat ground: half the vertical extent for every prim kind.
    pub fn ground_clearance(&self) -> f64 {
        self.size.z * 0.5
    }
}

// ---------------------------------------------------------------------------
// Objects
// ---------------------------------------------------------------------------

/// Static per-object attributes; the changing quantities live in
/// [`ObjectDynamics`].
#[derive(Debug, Clone, PartialEq)]
pub struct PrimObject {
    pub id: ObjectId,
    pub shape: PrimShape,
    pub material: Material,
    pub physical: bool,
    /// Buoyancy b: net vertical gravity-like acceleration is (b−1)·γ·g.
    /// Independent of water level.
    pub buoyancy: f64,
    /// γ: scales the gravity force (and drag coefficient), not inertia.
    pub gravity_multiplier: f64,
    /// Client-side decorative spin; no effect on dynamics.
    pub visual_omega: Vec3,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ObjectDynamics {
    pub position: Vec3,
    pub velocity: Vec3,
    pub omega: Vec3,
    pub rotation: Rotation,
    /// Persistent script force, reapplied every step until changed.
    pub pending_force: Vec3,
    pub pending_torque: Vec3,
    /// Energy budget in [0, 100]; gates kinetic effects.
    pub energy: f64,
}

impl ObjectDynamics {
    fn at_rest(position: Vec3) -> ObjectDynamics {
        ObjectDynamics {
            position,
            velocity: Vec3::ZERO,
            omega: Vec3::ZERO,
            rotation: Rotation::IDENTITY,
            pending_force: Vec3::ZERO,
            pending_torque: Vec3::ZERO,
            energy: ENERGY_CAP,
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct ObjectEntry {
    pub object: PrimObject,
    pub dynamics: ObjectDynamics,
    /// Per-object law override; `None` falls back to the world default.
    pub law: Option<LawOfMotion>,
    /// Active impetus regime, if launched under the impetus law.
    pub impetus: Option<ImpetusState>,
}

impl ObjectEntry {
    pub fn mass(&self, density: f64) -> f64 {
        self.object.shape.volume() * density
    }
}

// ---------------------------------------------------------------------------
// Clock
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimClock {
    /// Simulated seconds elapsed; advances by δ·step_size per tick.
    pub sim_time: f64,
    /// Time dilation δ applied on the most recent tick; 1 before any tick.
    pub dilation: f64,
    /// Fixed tick length in wall seconds.
    pub step_size: f64,
}

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EnergyCosts {
    /// Energy per 100 N of sustained force per second.
    pub force: f64,
    /// Energy per 100 N·m of sustained torque per second.
    pub torque: f64,
    /// Energy per 100 N·s of impulse.
    pub impulse: f64,
}

impl Default for EnergyCosts {
    fn default() -> Self {
        EnergyCosts { force: 1.0, torque: 1.0, impulse: 2.0 }
    }
}

/// Region-wide constants. Everything here is fixed for the lifetime of a
/// world; per-object knobs live on the objects.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RegionConfig {
    pub water_level: f64,
    pub gravity: f64,
    /// Sun cycle period in simulated seconds (4 Earth hours).
    pub day_period: f64,
    /// Engine density ρ₀: mass = ρ₀ · volume, material-independent.
    pub density: f64,
    pub terminal_velocity: f64,
    pub drag_enabled: bool,
    pub step_size: f64,
    /// Load units the region sustains at δ = 1.
    pub dilation_budget: f64,
    /// Load per physical object (α).
    pub dilation_object_cost: f64,
    /// Load per script instruction executed in the last step (β).
    pub dilation_op_cost: f64,
    pub energy_costs: EnergyCosts,
    /// Strict: gated builtins fault. Lenient: they no-op like SL.
    pub strict_gating: bool,
    /// Advance the wind field each tick. Wind never pushes objects either way.
    pub wind_enabled: bool,
    pub seed: u64,
    pub default_law: LawOfMotion,
}

impl Default for RegionConfig {
    fn default() -> Self {
        RegionConfig {
            water_level: 20.0,
            gravity: 9.8,
            day_period: 14400.0,
            density: 10.0,
            terminal_velocity: 50.0,
            drag_enabled: true,
            step_size: 1.0 / 45.0,
            dilation_budget: 1000.0,
            dilation_object_cost: 1.0,
            dilation_op_cost: 0.01,
            energy_costs: EnergyCosts::default(),
            strict_gating: true,
            wind_enabled: true,
            seed: 0,
            default_law: LawOfMotion::Newtonian,
        }
    }
}

impl RegionConfig {
    fn validate(&self) -> WorldResult<()> {
        let positive: [(&str, f64); 6] = [
            ("day_period", self.day_period),
            ("density", self.density),
            ("terminal_velocity", self.terminal_velocity),
            ("step_size", self.step_size),
            ("dilation_budget", self.dilation_budget),
            ("water_level + 1", self.water_level + 1.0), // water_level ≥ 0
        ];
        for (name, v) in positive {
            if !v.is_finite() || v <= 0.0 {
                return Err(WorldError::InvalidParameter(format!("{name} must be positive")));
            }
        }
        if self.water_level < 0.0 {
            return Err(WorldError::InvalidParameter("water_level must be ≥ 0".into()));
        }
        if !self.gravity.is_finite() {
            return Err(WorldError::NonFinite("gravity"));
        }
        if self.dilation_object_cost < 0.0 || self.dilation_op_cost < 0.0 {
            return Err(WorldError::InvalidParameter("dilation costs must be ≥ 0".into()));
        }
        self.default_law.validate()?;
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// World
// ---------------------------------------------------------------------------

#[derive(Debug)]
pub struct World {
    config: RegionConfig,
    clock: SimClock,
    objects: BTreeMap<ObjectId, ObjectEntry>,
    next_id: u64,
    wind: WindField,
    /// Wall-time remainder carried between step() calls.
    pub(crate) accumulator: f64,
    /// Script instructions executed in the most recent script phase.
    pub(crate) script_load: u64,
    /// Contact pairs present at the end of the previous tick.
    pub(crate) prev_contacts: std::collections::BTreeSet<(ObjectId, ObjectId)>,
}

impl World {
    pub fn new(config: RegionConfig) -> WorldResult<World> {
        config.validate()?;
        let wind = WindField::new(config.seed);
        Ok(World {
            clock: SimClock { sim_time: 0.0, dilation: 1.0, step_size: config.step_size },
            config,
            objects: BTreeMap::new(),
            next_id: 1,
            wind,
            accumulator: 0.0,
            script_load: 0,
            prev_contacts: std::collections::BTreeSet::new(),
        })
    }

    pub fn with_defaults() -> World {
        World::new(RegionConfig::default()).expect("default config is valid")
    }

    pub fn config(&self) -> &RegionConfig {
        &self.config
    }

    pub fn clock(&self) -> SimClock {
        self.clock
    }

    pub(crate) fn clock_mut(&mut self) -> &mut SimClock {
        &mut self.clock
    }

    pub fn side_length(&self) -> f64 {
        REGION_SIDE
    }

    fn position_in_region(p: Vec3) -> bool {
        (0.0..REGION_SIDE).contains(&p.x) && (0.0..REGION_SIDE).contains(&p.y)
    }

    // ---- Object lifecycle ----

    /// Rezzes an object: non-physical, at rest, full energy, b = 0, γ = 1.
    pub fn create_object(
        &mut self,
        shape: PrimShape,
        material: Material,
        position: Vec3,
    ) -> WorldResult<ObjectId> {
        if !position.is_finite() {
            return Err(WorldError::NonFinite("position"));
        }
        if !Self::position_in_region(position) {
            return Err(WorldError::PositionOutOfRegion { x: position.x, y: position.y });
        }
        let id = ObjectId(self.next_id);
        self.next_id += 1;
        let object = PrimObject {
            id,
            shape,
            material,
            physical: false,
            buoyancy: 0.0,
            gravity_multiplier: 1.0,
            visual_omega: Vec3::ZERO,
        };
        self.objects.insert(
            id,
            ObjectEntry { object, dynamics: ObjectDynamics::at_rest(position), law: None, impetus: None },
        );
        Ok(id)
    }

    pub fn remove_object(&mut self, id: ObjectId) -> WorldResult<()> {
        self.objects.remove(&id).map(|_| ()).ok_or(WorldError::UnknownObject(id))
    }

    pub fn contains(&self, id: ObjectId) -> bool {
        self.objects.contains_key(&id)
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = ObjectId> + '_ {
        self.objects.keys().copied()
    }

    pub fn physical_count(&self) -> usize {
        self.objects.values().filter(|e| e.object.physical).count()
    }

    pub fn object(&self, id: ObjectId) -> WorldResult<&PrimObject> {
        self.objects.get(&id).map(|e| &e.object).ok_or(WorldError::UnknownObject(id))
    }

    pub fn dynamics(&self, id: ObjectId) -> WorldResult<&ObjectDynamics> {
        self.objects.get(&id).map(|e| &e.dynamics).ok_or(WorldError::UnknownObject(id))
    }

    // ---- Attribute setters ----

    /// Enrolls/removes the object in the dynamics step. Turning physics off
    /// freezes the object: velocity, spin, and pending forces are zeroed.
    /// Idempotent in both directions.
    pub fn set_physical(&mut self, id: ObjectId, flag: bool) -> WorldResult<()> {
        let entry = self.entry_mut(id)?;
        if entry.object.physical == flag {
            return Ok(());
        }
        entry.object.physical = flag;
        if !flag {
            entry.dynamics.velocity = Vec3::ZERO;
            entry.dynamics.omega = Vec3::ZERO;
            entry.dynamics.pending_force = Vec3::ZERO;
            entry.dynamics.pending_torque = Vec3::ZERO;
            entry.impetus = None;
        }
        Ok(())
    }

    pub fn set_buoyancy(&mut self, id: ObjectId, b: f64) -> WorldResult<()> {
        if !b.is_finite() {
            return Err(WorldError::NonFinite("buoyancy"));
        }
        self.entry_mut(id)?.object.buoyancy = b;
        Ok(())
    }

    pub fn set_gravity_multiplier(&mut self, id: ObjectId, gamma: f64) -> WorldResult<()> {
        if !gamma.is_finite() {
            return Err(WorldError::NonFinite("gravity multiplier"));
        }
        self.entry_mut(id)?.object.gravity_multiplier = gamma;
        Ok(())
    }

    pub fn set_visual_omega(&mut self, id: ObjectId, omega: Vec3) -> WorldResult<()> {
        if !omega.is_finite() {
            return Err(WorldError::NonFinite("visual omega"));
        }
        self.entry_mut(id)?.object.visual_omega = omega;
        Ok(())
    }

    /// Direct spin setter (server-side rotation of physical objects).
    pub fn set_dynamic_omega(&mut self, id: ObjectId, omega: Vec3) -> WorldResult<()> {
        if !omega.is_finite() {
            return Err(WorldError::NonFinite("omega"));
        }
        self.entry_mut(id)?.dynamics.omega = omega;
        Ok(())
    }

    // ---- Mass model ----

    /// mass = ρ₀ · volume. Material plays no part.
    pub fn compute_mass(&self, shape: &PrimShape) -> f64 {
        shape.volume() * self.config.density
    }

    pub fn mass_of(&self, id: ObjectId) -> WorldResult<f64> {
        Ok(self.compute_mass(&self.object(id)?.shape))
    }

    // ---- Environment queries ----

    /// Unit sun direction: planar path in xz, rising on the east horizon at
    /// t = 0, full cycle every `day_period` seconds of sim time.
    pub fn sun_direction(&self) -> Vec3 {
        let period = self.config.day_period;
        let theta = std::f64::consts::TAU * (self.clock.sim_time.rem_euclid(period)) / period;
        Vec3::new(theta.cos(), 0.0, theta.sin())
    }

    /// The full moon sits directly opposite the sun.
    pub fn moon_direction(&self) -> Vec3 {
        -self.sun_direction()
    }

    pub fn water_level_at(&self, position: Vec3) -> WorldResult<f64> {
        if !Self::position_in_region(position) {
            return Err(WorldError::PositionOutOfRegion { x: position.x, y: position.y });
        }
        Ok(self.config.water_level)
    }

    /// Wind velocity at a point; z component is always 0. Query-only: the
    /// wind never applies forces to rigid bodies.
    pub fn wind_at(&self, position: Vec3) -> WorldResult<Vec3> {
        if !Self::position_in_region(position) {
            return Err(WorldError::PositionOutOfRegion { x: position.x, y: position.y });
        }
        Ok(self.wind.sample(position))
    }

    pub fn wind(&self) -> &WindField {
        &self.wind
    }

    // ---- Crate-internal access for dynamics / laws / script ----

    pub(crate) fn entry(&self, id: ObjectId) -> WorldResult<&ObjectEntry> {
        self.objects.get(&id).ok_or(WorldError::UnknownObject(id))
    }

    pub(crate) fn entry_mut(&mut self, id: ObjectId) -> WorldResult<&mut ObjectEntry> {
        self.objects.get_mut(&id).ok_or(WorldError::UnknownObject(id))
    }

    pub(crate) fn entries_mut(&mut self) -> impl Iterator<Item = (&ObjectId, &mut ObjectEntry)> {
        self.objects.iter_mut()
    }

    pub(crate) fn wind_mut(&mut self) -> &mut WindField {
        &mut self.wind
    }

    /// Feeds the dilation load model; set by the script phase each step.
    pub fn set_script_load(&mut self, ops: u64) {
        self.script_load = ops;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_box() -> PrimShape {
        PrimShape::cube(1.0).unwrap()
    }

    #[test]
    fn create_defaults_match_rez_semantics() {
        let mut w = World::with_defaults();
        let id = w.create_object(unit_box(), Material::wood(), Vec3::new(128.0, 128.0, 30.0)).unwrap();
        let obj = w.object(id).unwrap();
        assert!(!obj.physical);
        assert_eq!(obj.buoyancy, 0.0);
        assert_eq!(obj.gravity_multiplier, 1.0);
        let d = w.dynamics(id).unwrap();
        assert_eq!(d.velocity, Vec3::ZERO);
        assert_eq!(d.energy, ENERGY_CAP);
    }

    #[test]
    fn corner_is_inside_but_far_edge_is_not() {
        let mut w = World::with_defaults();
        assert!(w.create_object(unit_box(), Material::wood(), Vec3::new(0.0, 0.0, 0.5)).is_ok());
        let err = w
            .create_object(unit_box(), Material::wood(), Vec3::new(300.0, 10.0, 5.0))
            .unwrap_err();
        assert!(matches!(err, WorldError::PositionOutOfRegion { .. }));
        // The upper edge itself is exclusive.
        let err = w
            .create_object(unit_box(), Material::wood(), Vec3::new(256.0, 10.0, 5.0))
            .unwrap_err();
        assert!(matches!(err, WorldError::PositionOutOfRegion { .. }));
    }

    #[test]
    fn mass_depends_on_size_and_shape_only() {
        let w = World::with_defaults();
        // Unit volume × ρ₀.
        assert_eq!(w.compute_mass(&unit_box()), 10.0);
        // (π/6)·10, checked against an independent sphere-volume formula:
        // V = 4/3·π·r³ with r = 0.5.
        let sphere = PrimShape::sphere(1.0).unwrap();
        let independent = 4.0 / 3.0 * std::f64::consts::PI * 0.5f64.powi(3) * 10.0;
        assert!((w.compute_mass(&sphere) - independent).abs() < 1e-12);
        assert!((w.compute_mass(&sphere) - 5.235_987_755_982_988).abs() < 1e-12);
        // Material is irrelevant, exactly.
        let mut w = World::with_defaults();
        let a = w.create_object(unit_box(), Material::wood(), Vec3::new(1.0, 1.0, 1.0)).unwrap();
        let b = w.create_object(unit_box(), Material::metal(), Vec3::new(2.0, 1.0, 1.0)).unwrap();
        assert_eq!(w.mass_of(a).unwrap(), w.mass_of(b).unwrap());
    }

    #[test]
    fn doubling_box_size_multiplies_mass_by_eight() {
        let w = World::with_defaults();
        let small = PrimShape::new(ShapeKind::Box, Vec3::new(1.5, 2.0, 0.5)).unwrap();
        let big = PrimShape::new(ShapeKind::Box, Vec3::new(3.0, 4.0, 1.0)).unwrap();
        assert_eq!(w.compute_mass(&big), 8.0 * w.compute_mass(&small));
    }

    #[test]
    fn cylinder_mass_uses_quarter_pi() {
        let w = World::with_defaults();
        let cyl = PrimShape::new(ShapeKind::Cylinder, Vec3::new(1.0, 1.0, 2.0)).unwrap();
        // π·r²·h·ρ₀ with r = 0.5, h = 2.
        let independent = std::f64::consts::PI * 0.25 * 2.0 * 10.0;
        assert!((w.compute_mass(&cyl) - independent).abs() < 1e-12);
    }

    #[test]
    fn sun_phase_and_moon_opposition() {
        let mut w = World::with_defaults();
        let sun = w.sun_direction();
        assert!((sun - Vec3::new(1.0, 0.0, 0.0)).length() < 1e-12);
        // Quarter period → zenith.
        w.clock_mut().sim_time = 3600.0;
        let sun = w.sun_direction();
        assert!((sun - Vec3::new(0.0, 0.0, 1.0)).length() < 1e-12);
        // Full period → back to sunrise, exactly periodic.
        w.clock_mut().sim_time = 3600.0 + 14400.0;
        assert!((w.sun_direction() - sun).length() < 1e-12);
        for k in 0..100 {
            w.clock_mut().sim_time = 137.0 * k as f64;
            let dot = w.sun_direction().dot(w.moon_direction());
            assert!((dot + 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn ids_unique_across_create_delete() {
        let mut w = World::with_defaults();
        let mut seen = std::collections::BTreeSet::new();
        for i in 0..10 {
            let id = w
                .create_object(unit_box(), Material::wood(), Vec3::new(10.0 + i as f64, 10.0, 5.0))
                .unwrap();
            assert!(seen.insert(id), "id {id} reused");
            if i % 2 == 0 {
                w.remove_object(id).unwrap();
            }
        }
    }

    #[test]
    fn freeze_semantics_on_physical_toggle() {
        let mut w = World::with_defaults();
        let id = w.create_object(unit_box(), Material::wood(), Vec3::new(50.0, 50.0, 5.0)).unwrap();
        w.set_physical(id, true).unwrap();
        w.entry_mut(id).unwrap().dynamics.velocity = Vec3::new(5.0, 0.0, 0.0);
        w.set_physical(id, false).unwrap();
        assert_eq!(w.dynamics(id).unwrap().velocity, Vec3::ZERO);
        // Idempotent: repeating the call changes nothing.
        w.set_physical(id, false).unwrap();
        assert_eq!(w.dynamics(id).unwrap().velocity, Vec3::ZERO);
    }

    #[test]
    fn water_level_is_region_constant_and_bounded() {
        let w = World::with_defaults();
        assert_eq!(w.water_level_at(Vec3::new(1.0, 1.0, 0.0)).unwrap(), 20.0);
        assert_eq!(w.water_level_at(Vec3::new(255.0, 200.0, 90.0)).unwrap(), 20.0);
        assert!(w.water_level_at(Vec3::new(-1.0, 1.0, 0.0)).is_err());
    }

    #[test]
    fn shape_bounds_enforced() {
        assert!(PrimShape::cube(0.009).is_err());
        assert!(PrimShape::cube(64.01).is_err());
        assert!(PrimShape::cube(64.0).is_ok());
        assert!(PrimShape::cube(0.01).is_ok());
    }
}
