//! Embedded scripting: a small event-driven language bound to the world.
//!
//! Scripts attach to objects. Each has global variables, optional helper
//! functions, and named states containing event handlers (`state_entry`,
//! `collision_start`, `timer`, `touch_start`). A host owns every instance and
//! runs one script phase per simulation tick, dispatching due events in a
//! deterministic order:
//!
//! 1. `state_entry` for newly attached scripts or fresh state transitions,
//! 2. `collision_start` for contacts that began on the previous tick,
//! 3. `timer` for every timer that has come due,
//! 4. `touch_start` for injected touches,
//!
//! each group ordered by object id. The instruction units spent across the
//! phase feed the region's load model, which is how heavy scripting slows
//! simulated time.

pub mod ast;
pub mod builtins;
mod check;
mod interp;
mod lexer;
mod parser;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::world::{ObjectId, World};

pub use ast::{pretty, Diagnostic, DiagnosticKind, EventKind, Pos, Script, Type};
pub use interp::{EventOutcome, ExecLimits, FaultKind, ScriptFault, TimerState, Value};

/// Full front end: lex, parse, and typecheck.
pub fn parse(source: &str) -> Result<Script, Diagnostic> {
    let tokens = lexer::lex(source)?;
    let script = parser::parse_tokens(tokens)?;
    check::check(&script)?;
    Ok(script)
}

#[derive(Debug)]
pub enum AttachError {
    /// The source failed to lex, parse, or typecheck.
    Parse(Diagnostic),
    /// A global initializer faulted (e.g. division by zero).
    Init(ScriptFault),
    /// The target object does not exist, or already has a script.
    Target(String),
}

impl fmt::Display for AttachError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AttachError::Parse(d) => write!(f, "{d}"),
            AttachError::Init(e) => write!(f, "{e}"),
            AttachError::Target(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for AttachError {}

/// One script bound to one object.
#[derive(Debug, Clone)]
pub struct ScriptInstance {
    pub object: ObjectId,
    pub script: Arc<Script>,
    /// Name of the active state; always one of the script's states.
    pub state: String,
    pub globals: BTreeMap<String, Value>,
    pub timer: TimerState,
    /// Lifetime instruction units, for load inspection.
    pub ops_total: u64,
    /// `state_entry` owed on the next phase (fresh attach or transition).
    entry_pending: bool,
}

/// An event ready to run, in phase order.
#[derive(Debug, Clone, PartialEq)]
pub struct PendingEvent {
    pub object: ObjectId,
    pub event: EventKind,
    /// `collision_start`/`touch_start` detected-count argument.
    pub arg: Option<i64>,
}

/// Everything a script phase produced.
#[derive(Debug, Clone, Default)]
pub struct PhaseReport {
    /// Instruction units spent by all instances this phase.
    pub ops: u64,
    pub events_run: u64,
    pub faults: Vec<ScriptFault>,
}

/// Owns all script instances of a world.
#[derive(Debug, Default)]
pub struct ScriptHost {
    instances: BTreeMap<ObjectId, ScriptInstance>,
    limits: ExecLimits,
}

impl ScriptHost {
    pub fn new() -> ScriptHost {
        ScriptHost::default()
    }

    pub fn with_limits(limits: ExecLimits) -> ScriptHost {
        ScriptHost { instances: BTreeMap::new(), limits }
    }

    pub fn limits(&self) -> ExecLimits {
        self.limits
    }

    pub fn instance(&self, id: ObjectId) -> Option<&ScriptInstance> {
        self.instances.get(&id)
    }

    pub fn instances(&self) -> impl Iterator<Item = &ScriptInstance> {
        self.instances.values()
    }

    pub fn detach(&mut self, id: ObjectId) -> bool {
        self.instances.remove(&id).is_some()
    }

    /// Compiles `source` and binds it to `id`. Globals are initialized
    /// immediately; `state_entry` fires on the next phase.
    pub fn attach(
        &mut self,
        world: &mut World,
        id: ObjectId,
        source: &str,
    ) -> Result<(), AttachError> {
        let script = parse(source).map_err(AttachError::Parse)?;
        self.attach_parsed(world, id, Arc::new(script))
    }

    pub fn attach_parsed(
        &mut self,
        world: &mut World,
        id: ObjectId,
        script: Arc<Script>,
    ) -> Result<(), AttachError> {
        if !world.contains(id) {
            return Err(AttachError::Target(format!("no object with id {id}")));
        }
        if self.instances.contains_key(&id) {
            return Err(AttachError::Target(format!("{id} already has a script")));
        }
        let globals = interp::init_globals(world, &script, self.limits, id)
            .map_err(AttachError::Init)?;
        self.instances.insert(
            id,
            ScriptInstance {
                object: id,
                script,
                state: "default".to_string(),
                globals,
                timer: TimerState::off(),
                ops_total: 0,
                entry_pending: true,
            },
        );
        Ok(())
    }

    /// Computes the events due right now, in dispatch order. Pure: running
    /// them separately keeps the order testable.
    pub fn schedule(
        &self,
        world: &World,
        new_contacts: &[(ObjectId, ObjectId)],
        touches: &[(ObjectId, i64)],
    ) -> Vec<PendingEvent> {
        let now = world.clock().sim_time;
        let mut pending = Vec::new();

        for (id, inst) in &self.instances {
            if inst.entry_pending {
                pending.push(PendingEvent { object: *id, event: EventKind::StateEntry, arg: None });
            }
        }

        // collision_start carries the number of new contact partners.
        let mut counts: BTreeMap<ObjectId, i64> = BTreeMap::new();
        for (a, b) in new_contacts {
            *counts.entry(*a).or_insert(0) += 1;
            *counts.entry(*b).or_insert(0) += 1;
        }
        for (id, n) in counts {
            if self.instances.contains_key(&id) {
                pending.push(PendingEvent { object: id, event: EventKind::CollisionStart, arg: Some(n) });
            }
        }

        for (id, inst) in &self.instances {
            if inst.timer.interval > 0.0 && inst.timer.due <= now {
                pending.push(PendingEvent { object: *id, event: EventKind::Timer, arg: None });
            }
        }

        let mut touches_sorted = touches.to_vec();
        touches_sorted.sort_by_key(|(id, _)| *id); // stable: same-id touches keep order
        for (id, n) in touches_sorted {
            if self.instances.contains_key(&id) {
                pending.push(PendingEvent { object: id, event: EventKind::TouchStart, arg: Some(n) });
            }
        }

        pending
    }

    /// Runs one script phase: every due event, faults collected, load summed.
    pub fn run_phase(
        &mut self,
        world: &mut World,
        new_contacts: &[(ObjectId, ObjectId)],
        touches: &[(ObjectId, i64)],
    ) -> PhaseReport {
        let pending = self.schedule(world, new_contacts, touches);
        let mut report = PhaseReport::default();

        for ev in pending {
            // The instance may have vanished mid-phase (object removal is
            // not scripted today, but stay defensive).
            if !self.instances.contains_key(&ev.object) {
                continue;
            }
            // A timer observed due at schedule time may have been cancelled
            // by an earlier event in this same phase.
            if ev.event == EventKind::Timer {
                let t = self.instances[&ev.object].timer;
                if !(t.interval > 0.0 && t.due <= world.clock().sim_time) {
                    continue;
                }
            }
            let args: Vec<Value> = ev.arg.into_iter().map(Value::Integer).collect();
            self.dispatch(world, ev.object, ev.event, &args, &mut report);
        }
        report
    }

    /// Runs one event on one instance, following state transitions through
    /// their `state_entry` chain.
    fn dispatch(
        &mut self,
        world: &mut World,
        id: ObjectId,
        event: EventKind,
        args: &[Value],
        report: &mut PhaseReport,
    ) {
        let limits = self.limits;
        let mut event = event;
        let mut args = args.to_vec();
        let mut hops = 0u32;

        loop {
            let inst = self.instances.get_mut(&id).expect("dispatch target exists");
            if event == EventKind::StateEntry {
                inst.entry_pending = false;
            }
            if event == EventKind::Timer {
                // Rearm before running so a handler can re-program freely.
                inst.timer.due = world.clock().sim_time + inst.timer.interval;
            }
            let script = Arc::clone(&inst.script);
            let state = inst.state.clone();
            let outcome = interp::run_event(
                world,
                &script,
                limits,
                id,
                &mut inst.globals,
                &mut inst.timer,
                &state,
                event,
                &args,
            );
            report.events_run += 1;
            match outcome {
                Ok(out) => {
                    inst.ops_total += out.ops;
                    report.ops += out.ops;
                    match out.state_change {
                        None => return,
                        Some(target) => {
                            hops += 1;
                            if hops > limits.max_state_changes {
                                report.faults.push(ScriptFault {
                                    object: id,
                                    event: Some(event),
                                    pos: Pos::default(),
                                    kind: FaultKind::TransitionLoop,
                                    ops: 0,
                                });
                                return;
                            }
                            inst.state = target;
                            // Transition aborts the handler; the new state's
                            // entry runs immediately with a fresh budget.
                            event = EventKind::StateEntry;
                            args = Vec::new();
                        }
                    }
                }
                Err(fault) => {
                    inst.ops_total += fault.ops;
                    report.ops += fault.ops;
                    report.faults.push(fault);
                    return;
                }
            }
        }
    }
}
