//! Ties the world, physics stepper, and script host into one simulation.
//!
//! Tick order: due script events run first (their instruction count becomes
//! the region's script load), then the physics step advances the world by one
//! tick at the dilation that load implies. Contacts detected during the step
//! surface as `collision_start` events on the *next* tick, matching the
//! engine's report-after-resolve pipeline.

use crate::dynamics::{self, StepReport};
use crate::error::WorldResult;
use crate::script::{AttachError, PhaseReport, ScriptHost, ScriptInstance};
use crate::world::{ObjectId, RegionConfig, World};

/// One tick's combined outcome.
#[derive(Debug, Clone)]
pub struct TickReport {
    pub step: StepReport,
    pub script: PhaseReport,
}

/// A world plus its scripts, advanced tick by tick.
#[derive(Debug)]
pub struct Simulation {
    world: World,
    host: ScriptHost,
    /// Touches waiting for their due time: (sim time, target, detected count).
    pending_touches: Vec<(f64, ObjectId, i64)>,
    /// Contacts that began during the previous tick's step.
    last_new_contacts: Vec<(ObjectId, ObjectId)>,
}

impl Simulation {
    pub fn new(config: RegionConfig) -> WorldResult<Simulation> {
        Ok(Simulation::from_world(World::new(config)?))
    }

    pub fn with_defaults() -> Simulation {
        Simulation::from_world(World::with_defaults())
    }

    pub fn from_world(world: World) -> Simulation {
        Simulation {
            world,
            host: ScriptHost::new(),
            pending_touches: Vec::new(),
            last_new_contacts: Vec::new(),
        }
    }

    pub fn world(&self) -> &World {
        &self.world
    }

    pub fn world_mut(&mut self) -> &mut World {
        &mut self.world
    }

    pub fn host(&self) -> &ScriptHost {
        &self.host
    }

    pub fn instance(&self, id: ObjectId) -> Option<&ScriptInstance> {
        self.host.instance(id)
    }

    pub fn attach_script(&mut self, id: ObjectId, source: &str) -> Result<(), AttachError> {
        self.host.attach(&mut self.world, id, source)
    }

    /// Queues a `touch_start` for the first tick at or after `at` sim time.
    pub fn inject_touch(&mut self, at: f64, id: ObjectId, detected: i64) {
        self.pending_touches.push((at, id, detected));
    }

    /// Advances one fixed tick: script phase, then physics.
    pub fn tick(&mut self) -> TickReport {
        let now = self.world.clock().sim_time;

        // Stable partition keeps same-time touches in injection order.
        let mut due = Vec::new();
        self.pending_touches.retain(|&(at, id, n)| {
            if at <= now {
                due.push((id, n));
                false
            } else {
                true
            }
        });

        let contacts = std::mem::take(&mut self.last_new_contacts);
        let script = self.host.run_phase(&mut self.world, &contacts, &due);
        self.world.set_script_load(script.ops);

        let step_size = self.world.clock().step_size;
        let step = dynamics::step(&mut self.world, step_size);
        self.last_new_contacts = step.new_contacts.clone();

        TickReport { step, script }
    }

    /// Runs `n` ticks, returning the reports of each.
    pub fn run(&mut self, n: u64) -> Vec<TickReport> {
        (0..n).map(|_| self.tick()).collect()
    }
}
