//! Scenario files: a JSON description of a region, its objects, and a run
//! length, loaded into a ready-to-tick [`Simulation`].
//!
//! Schema (all fields except `objects` and `run` optional):
//!
//! ```json
//! {
//!   "region": { "gravity": 9.8, "seed": 42, "drag_enabled": true },
//!   "objects": [
//!     {
//!       "name": "ball",
//!       "shape": "sphere",
//!       "size": 1.0,
//!       "material": "wood",
//!       "position": [128.0, 128.0, 50.0],
//!       "physical": true,
//!       "buoyancy": 0.0,
//!       "gravity_multiplier": 1.0,
//!       "law": { "kind": "impetus", "lambda": 0.5 },
//!       "impulse": [10.0, 0.0, 0.0],
//!       "launch": { "speed": 10.0, "direction": [1.0, 0.0, 1.0] },
//!       "script": "ball.lsl",
//!       "script_source": "default { state_entry() { } }"
//!     }
//!   ],
//!   "run": { "seconds": 30.0 },
//!   "sample_every": 1,
//!   "touches": [{ "at": 1.0, "object": "ball", "detected": 1 }]
//! }
//! ```
//!
//! `region` takes any subset of the engine's region-configuration fields.
//! `size` is either one uniform extent or `[sx, sy, sz]`; `material` is a
//! preset name or `{ "kind", "restitution", "friction" }`. `impulse` is an
//! instantaneous kick at t = 0; `launch` kicks law-aware (an impetus object
//! gains impetus, an Aristotelian object gains motive force). `script` is a
//! path relative to the scenario file; `script_source` is inline source
//! (mutually exclusive with `script`). Touches reference objects by name.

use std::collections::BTreeMap;
use std::path::Path;

use primworld::laws::{self, LawOfMotion};
use primworld::{
    Material, MaterialKind, ObjectId, PrimShape, RegionConfig, ShapeKind, Simulation, Vec3,
};
use serde::Deserialize;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub region: RegionConfig,
    pub objects: Vec<ObjectSpec>,
    pub run: RunLength,
    /// Emit a trajectory row every N ticks (plus t = 0 and the final tick).
    #[serde(default)]
    pub sample_every: Option<u64>,
    #[serde(default)]
    pub touches: Vec<TouchSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectSpec {
    #[serde(default)]
    pub name: Option<String>,
    pub shape: ShapeKind,
    pub size: SizeSpec,
    #[serde(default = "default_material")]
    pub material: MaterialSpec,
    pub position: [f64; 3],
    #[serde(default)]
    pub physical: bool,
    #[serde(default)]
    pub buoyancy: f64,
    #[serde(default = "one")]
    pub gravity_multiplier: f64,
    #[serde(default)]
    pub law: Option<LawOfMotion>,
    #[serde(default)]
    pub impulse: Option<[f64; 3]>,
    #[serde(default)]
    pub launch: Option<LaunchSpec>,
    #[serde(default)]
    pub script: Option<String>,
    #[serde(default)]
    pub script_source: Option<String>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
pub enum SizeSpec {
    Uniform(f64),
    Extents([f64; 3]),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum MaterialSpec {
    Named(MaterialKind),
    Custom { kind: MaterialKind, restitution: f64, friction: f64 },
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LaunchSpec {
    pub speed: f64,
    pub direction: [f64; 3],
}

#[derive(Debug, Clone, Deserialize)]
pub enum RunLength {
    #[serde(rename = "steps")]
    Steps(u64),
    #[serde(rename = "seconds")]
    Seconds(f64),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TouchSpec {
    /// Simulated time the touch lands.
    pub at: f64,
    /// Name of the touched object.
    pub object: String,
    #[serde(default = "one_touch")]
    pub detected: i64,
}

fn default_material() -> MaterialSpec {
    MaterialSpec::Named(MaterialKind::Wood)
}

fn one() -> f64 {
    1.0
}

fn one_touch() -> i64 {
    1
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Scenario, String> {
        let scenario: Scenario =
            serde_json::from_str(text).map_err(|e| format!("scenario parse error: {e}"))?;
        scenario.validate()?;
        Ok(scenario)
    }

    fn validate(&self) -> Result<(), String> {
        match self.run {
            RunLength::Steps(0) => return Err("run length must be > 0".into()),
            RunLength::Seconds(s) if s <= 0.0 || !s.is_finite() => {
                return Err("run length must be a positive finite number of seconds".into())
            }
            _ => {}
        }
        if self.sample_every == Some(0) {
            return Err("sample_every must be ≥ 1".into());
        }
        if self.objects.is_empty() {
            return Err("scenario has no objects".into());
        }
        for (i, o) in self.objects.iter().enumerate() {
            if o.script.is_some() && o.script_source.is_some() {
                return Err(format!(
                    "object {} gives both script and script_source",
                    o.label(i)
                ));
            }
        }
        for t in &self.touches {
            if !self.objects.iter().any(|o| o.name.as_deref() == Some(t.object.as_str())) {
                return Err(format!("touch references unknown object {:?}", t.object));
            }
        }
        Ok(())
    }

    /// Ticks the run length amounts to under this region's step size.
    pub fn total_ticks(&self) -> u64 {
        match self.run {
            RunLength::Steps(n) => n,
            RunLength::Seconds(s) => (s / self.region.step_size).round().max(1.0) as u64,
        }
    }
}

impl ObjectSpec {
    fn label(&self, index: usize) -> String {
        match &self.name {
            Some(n) => format!("{:?}", n),
            None => format!("#{index}"),
        }
    }

    fn prim_shape(&self) -> Result<PrimShape, String> {
        let size = match self.size {
            SizeSpec::Uniform(s) => Vec3::new(s, s, s),
            SizeSpec::Extents([x, y, z]) => Vec3::new(x, y, z),
        };
        PrimShape::new(self.shape, size).map_err(|e| e.to_string())
    }

    fn material(&self) -> Result<Material, String> {
        match &self.material {
            MaterialSpec::Named(kind) => Ok(Material::preset(*kind)),
            MaterialSpec::Custom { kind, restitution, friction } => {
                Material::custom(*kind, *restitution, *friction).map_err(|e| e.to_string())
            }
        }
    }
}

/// A scenario instantiated into a simulation: the world, plus the name each
/// object was given in the file.
pub struct BuiltScenario {
    pub sim: Simulation,
    pub names: BTreeMap<ObjectId, Option<String>>,
}

/// Instantiates the scenario. `base_dir` resolves relative script paths;
/// `seed` and `law` override the region's seed and default law.
pub fn build(
    scenario: &Scenario,
    base_dir: Option<&Path>,
    seed: Option<u64>,
    law: Option<LawOfMotion>,
) -> Result<BuiltScenario, String> {
    let mut region = scenario.region.clone();
    if let Some(seed) = seed {
        region.seed = seed;
    }
    if let Some(law) = law {
        region.default_law = law;
    }
    let mut sim = Simulation::new(region).map_err(|e| format!("region config: {e}"))?;

    let mut names = BTreeMap::new();
    let mut by_name = BTreeMap::new();
    for (i, spec) in scenario.objects.iter().enumerate() {
        let label = spec.label(i);
        let fail = |stage: &str, msg: String| format!("object {label}, {stage}: {msg}");

        let shape = spec.prim_shape().map_err(|e| fail("shape", e))?;
        let material = spec.material().map_err(|e| fail("material", e))?;
        let [px, py, pz] = spec.position;
        let world = sim.world_mut();
        let id = world
            .create_object(shape, material, Vec3::new(px, py, pz))
            .map_err(|e| fail("position", e.to_string()))?;
        world
            .set_gravity_multiplier(id, spec.gravity_multiplier)
            .map_err(|e| fail("gravity_multiplier", e.to_string()))?;
        world.set_buoyancy(id, spec.buoyancy).map_err(|e| fail("buoyancy", e.to_string()))?;
        if let Some(law) = spec.law {
            laws::set_law(world, id, law).map_err(|e| fail("law", e.to_string()))?;
        }
        world.set_physical(id, spec.physical).expect("object just created");

        if let Some(source) = script_text(spec, base_dir).map_err(|e| fail("script", e))? {
            sim.attach_script(id, &source).map_err(|e| fail("script", e.to_string()))?;
        }
        if let Some([jx, jy, jz]) = spec.impulse {
            primworld::dynamics::apply_impulse(sim.world_mut(), id, Vec3::new(jx, jy, jz))
                .map_err(|e| fail("impulse", e.to_string()))?;
        }
        if let Some(LaunchSpec { speed, direction: [dx, dy, dz] }) = spec.launch {
            laws::launch(sim.world_mut(), id, speed, Vec3::new(dx, dy, dz))
                .map_err(|e| fail("launch", e.to_string()))?;
        }

        names.insert(id, spec.name.clone());
        if let Some(name) = &spec.name {
            by_name.insert(name.clone(), id);
        }
    }

    for touch in &scenario.touches {
        let id = by_name[&touch.object]; // presence checked in validate()
        sim.inject_touch(touch.at, id, touch.detected);
    }

    Ok(BuiltScenario { sim, names })
}

fn script_text(spec: &ObjectSpec, base_dir: Option<&Path>) -> Result<Option<String>, String> {
    if let Some(inline) = &spec.script_source {
        return Ok(Some(inline.clone()));
    }
    let Some(rel) = &spec.script else { return Ok(None) };
    let path = match base_dir {
        Some(dir) => dir.join(rel),
        None => Path::new(rel).to_path_buf(),
    };
    std::fs::read_to_string(&path)
        .map(Some)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))
}
