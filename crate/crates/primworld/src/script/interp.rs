//! Tree-walking interpreter.
//!
//! Each event handler runs under an instruction budget (one unit per
//! evaluated expression node or executed statement) and a call-depth cap, so
//! a runaway script degrades into a reported fault instead of hanging the
//! region. Builtin calls that violate mode gating (kinetic on non-physical,
//! kinematic on physical, bad arguments) fault in strict worlds and become
//! silent no-ops in lenient ones.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::WorldError;
use crate::math::{Rotation, Vec3};
use crate::world::{ObjectId, World};

use super::ast::*;
use super::builtins::{self, ConstVal};

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Integer(i64),
    Float(f64),
    Vector(Vec3),
    Rotation(Rotation),
    Str(String),
}

impl Value {
    pub fn type_of(&self) -> Type {
        match self {
            Value::Integer(_) => Type::Integer,
            Value::Float(_) => Type::Float,
            Value::Vector(_) => Type::Vector,
            Value::Rotation(_) => Type::Rotation,
            Value::Str(_) => Type::String,
        }
    }

    pub fn default_of(ty: Type) -> Value {
        match ty {
            Type::Integer => Value::Integer(0),
            Type::Float => Value::Float(0.0),
            Type::Vector => Value::Vector(Vec3::ZERO),
            Type::Rotation => Value::Rotation(Rotation::IDENTITY),
            Type::String => Value::Str(String::new()),
        }
    }

    fn from_const(c: ConstVal) -> Value {
        match c {
            ConstVal::Int(i) => Value::Integer(i),
            ConstVal::Float(f) => Value::Float(f),
            ConstVal::Vector(v) => Value::Vector(v),
            ConstVal::Rotation(r) => Value::Rotation(r),
        }
    }

    /// Integer→float promotion; everything else passes through unchanged.
    fn coerce_to(self, ty: Type) -> Value {
        match (ty, self) {
            (Type::Float, Value::Integer(i)) => Value::Float(i as f64),
            (_, v) => v,
        }
    }

    fn as_f64(&self) -> f64 {
        match self {
            Value::Integer(i) => *i as f64,
            Value::Float(f) => *f,
            other => unreachable!("numeric value expected, got {other:?}"),
        }
    }

    fn truthy(&self) -> bool {
        matches!(self, Value::Integer(i) if *i != 0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExecLimits {
    /// Instruction units one event handler may spend.
    pub instruction_budget: u64,
    pub max_call_depth: u32,
    /// Chained state transitions one event may trigger before faulting.
    pub max_state_changes: u32,
}

impl Default for ExecLimits {
    fn default() -> Self {
        ExecLimits { instruction_budget: 100_000, max_call_depth: 128, max_state_changes: 32 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FaultKind {
    BudgetExceeded,
    CallDepthExceeded,
    /// One event triggered more chained state transitions than allowed.
    TransitionLoop,
    /// A gated or invalid builtin call, surfaced in strict mode.
    Runtime(WorldError),
    /// Arithmetic the language rejects, e.g. integer division by zero.
    Math(String),
}

impl fmt::Display for FaultKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FaultKind::BudgetExceeded => write!(f, "instruction budget exceeded"),
            FaultKind::CallDepthExceeded => write!(f, "call depth exceeded"),
            FaultKind::TransitionLoop => write!(f, "state transition loop"),
            FaultKind::Runtime(e) => write!(f, "runtime fault: {e}"),
            FaultKind::Math(m) => write!(f, "math fault: {m}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScriptFault {
    pub object: ObjectId,
    /// Event that was running; `None` during global initialization.
    pub event: Option<EventKind>,
    pub pos: Pos,
    pub kind: FaultKind,
    /// Instruction units spent before the fault (still billed as load).
    pub ops: u64,
}

impl fmt::Display for ScriptFault {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let context = self.event.map(|e| e.name()).unwrap_or("globals");
        write!(f, "{} {context} at {}: {}", self.object, self.pos, self.kind)
    }
}

impl std::error::Error for ScriptFault {}

/// Timer control block, one per script instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimerState {
    /// Seconds between firings; 0 means off.
    pub interval: f64,
    /// Sim time of the next firing; +inf when off.
    pub due: f64,
}

impl TimerState {
    pub fn off() -> TimerState {
        TimerState { interval: 0.0, due: f64::INFINITY }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EventOutcome {
    /// Instruction units spent; feeds the region load model.
    pub ops: u64,
    /// Set when the handler executed `state target;`.
    pub state_change: Option<String>,
}

enum Flow {
    Normal,
    Return(Option<Value>),
    State(String),
}

/// Runs one event handler. Missing handlers are a successful no-op.
#[allow(clippy::too_many_arguments)]
pub(super) fn run_event(
    world: &mut World,
    script: &Script,
    limits: ExecLimits,
    me: ObjectId,
    globals: &mut BTreeMap<String, Value>,
    timer: &mut TimerState,
    state: &str,
    event: EventKind,
    args: &[Value],
) -> Result<EventOutcome, ScriptFault> {
    let Some(state_def) = script.states.iter().find(|s| s.name == state) else {
        unreachable!("instance in undeclared state `{state}`");
    };
    let Some(handler) = state_def.handlers.iter().find(|h| h.event == event) else {
        return Ok(EventOutcome { ops: 0, state_change: None });
    };
    debug_assert_eq!(handler.params.len(), args.len());

    let mut frame = BTreeMap::new();
    for (p, a) in handler.params.iter().zip(args) {
        frame.insert(p.name.clone(), a.clone().coerce_to(p.ty));
    }
    let mut interp = Interp {
        world,
        script,
        limits,
        me,
        globals,
        timer,
        locals: vec![frame],
        ops: 0,
        depth: 0,
        event: Some(event),
    };
    match interp.exec_block_frameless(&handler.body) {
        Ok(Flow::State(target)) => {
            Ok(EventOutcome { ops: interp.ops, state_change: Some(target) })
        }
        Ok(_) => Ok(EventOutcome { ops: interp.ops, state_change: None }),
        Err(fault) => Err(fault),
    }
}

/// Evaluates global initializers top to bottom. Uninitialized globals get
/// their type's default.
pub(super) fn init_globals(
    world: &mut World,
    script: &Script,
    limits: ExecLimits,
    me: ObjectId,
) -> Result<BTreeMap<String, Value>, ScriptFault> {
    let mut globals = BTreeMap::new();
    let mut timer = TimerState::off();
    for g in &script.globals {
        let value = match &g.init {
            None => Value::default_of(g.ty),
            Some(init) => {
                let mut interp = Interp {
                    world,
                    script,
                    limits,
                    me,
                    globals: &mut globals,
                    timer: &mut timer,
                    locals: vec![BTreeMap::new()],
                    ops: 0,
                    depth: 0,
                    event: None,
                };
                interp.eval(init)?.coerce_to(g.ty)
            }
        };
        globals.insert(g.name.clone(), value);
    }
    Ok(globals)
}

struct Interp<'w, 's> {
    world: &'w mut World,
    script: &'s Script,
    limits: ExecLimits,
    me: ObjectId,
    globals: &'w mut BTreeMap<String, Value>,
    timer: &'w mut TimerState,
    /// Scope stack of the current frame; calls swap in a fresh stack.
    locals: Vec<BTreeMap<String, Value>>,
    ops: u64,
    depth: u32,
    event: Option<EventKind>,
}

impl Interp<'_, '_> {
    fn fault(&self, pos: Pos, kind: FaultKind) -> ScriptFault {
        ScriptFault { object: self.me, event: self.event, pos, kind, ops: self.ops }
    }

    fn charge(&mut self, pos: Pos) -> Result<(), ScriptFault> {
        self.ops += 1;
        if self.ops > self.limits.instruction_budget {
            return Err(self.fault(pos, FaultKind::BudgetExceeded));
        }
        Ok(())
    }

    fn lookup_mut(&mut self, name: &str) -> &mut Value {
        for frame in self.locals.iter_mut().rev() {
            if frame.contains_key(name) {
                return frame.get_mut(name).unwrap();
            }
        }
        self.globals
            .get_mut(name)
            .unwrap_or_else(|| unreachable!("assignment to unresolved `{name}` past the checker"))
    }

    fn lookup(&self, name: &str) -> Value {
        for frame in self.locals.iter().rev() {
            if let Some(v) = frame.get(name) {
                return v.clone();
            }
        }
        if let Some(v) = self.globals.get(name) {
            return v.clone();
        }
        if let Some(c) = builtins::constant(name) {
            return Value::from_const(c);
        }
        unreachable!("read of unresolved `{name}` past the checker")
    }

    // -- statements ---------------------------------------------------------

    /// Runs a block's statements in the current scope (parameters already
    /// form the root scope of a handler/function frame).
    fn exec_block_frameless(&mut self, block: &Block) -> Result<Flow, ScriptFault> {
        for stmt in &block.stmts {
            match self.exec_stmt(stmt)? {
                Flow::Normal => {}
                other => return Ok(other),
            }
        }
        Ok(Flow::Normal)
    }

    fn exec_block(&mut self, block: &Block) -> Result<Flow, ScriptFault> {
        self.locals.push(BTreeMap::new());
        let flow = self.exec_block_frameless(block);
        self.locals.pop();
        flow
    }

    fn exec_stmt(&mut self, stmt: &Stmt) -> Result<Flow, ScriptFault> {
        match stmt {
            Stmt::Decl { ty, name, init, pos } => {
                self.charge(*pos)?;
                let value = match init {
                    Some(e) => self.eval(e)?.coerce_to(*ty),
                    None => Value::default_of(*ty),
                };
                self.locals
                    .last_mut()
                    .expect("locals stack never empty")
                    .insert(name.clone(), value);
                Ok(Flow::Normal)
            }
            Stmt::Assign { name, member, value, pos } => {
                self.charge(*pos)?;
                let rhs = self.eval(value)?;
                let slot = self.lookup_mut(name);
                match member {
                    None => {
                        let ty = slot.type_of();
                        *slot = rhs.coerce_to(ty);
                    }
                    Some(m) => {
                        let x = rhs.as_f64();
                        match (slot, m) {
                            (Value::Vector(v), Member::X) => v.x = x,
                            (Value::Vector(v), Member::Y) => v.y = x,
                            (Value::Vector(v), Member::Z) => v.z = x,
                            (Value::Rotation(r), Member::X) => r.x = x,
                            (Value::Rotation(r), Member::Y) => r.y = x,
                            (Value::Rotation(r), Member::Z) => r.z = x,
                            (Value::Rotation(r), Member::S) => r.s = x,
                            (slot, m) => {
                                unreachable!("member write .{} on {:?}", m.name(), slot.type_of())
                            }
                        }
                    }
                }
                Ok(Flow::Normal)
            }
            Stmt::If { cond, then_branch, else_branch, pos } => {
                self.charge(*pos)?;
                if self.eval(cond)?.truthy() {
                    self.exec_stmt(then_branch)
                } else if let Some(e) = else_branch {
                    self.exec_stmt(e)
                } else {
                    Ok(Flow::Normal)
                }
            }
            Stmt::While { cond, body, pos } => {
                loop {
                    self.charge(*pos)?;
                    if !self.eval(cond)?.truthy() {
                        return Ok(Flow::Normal);
                    }
                    match self.exec_stmt(body)? {
                        Flow::Normal => {}
                        other => return Ok(other),
                    }
                }
            }
            Stmt::Return { value, pos } => {
                self.charge(*pos)?;
                let v = match value {
                    Some(e) => Some(self.eval(e)?),
                    None => None,
                };
                Ok(Flow::Return(v))
            }
            Stmt::StateChange { target, pos } => {
                self.charge(*pos)?;
                Ok(Flow::State(target.clone()))
            }
            Stmt::Expr { expr } => {
                // Void calls are legal here; discard any value.
                self.eval_maybe_void(expr)?;
                Ok(Flow::Normal)
            }
            Stmt::Block(b) => self.exec_block(b),
        }
    }

    // -- expressions --------------------------------------------------------

    fn eval(&mut self, expr: &Expr) -> Result<Value, ScriptFault> {
        match self.eval_maybe_void(expr)? {
            Some(v) => Ok(v),
            None => unreachable!("void call in value position past the checker"),
        }
    }

    fn eval_maybe_void(&mut self, expr: &Expr) -> Result<Option<Value>, ScriptFault> {
        self.charge(expr.pos())?;
        match expr {
            Expr::Int { value, .. } => Ok(Some(Value::Integer(*value))),
            Expr::Float { value, .. } => Ok(Some(Value::Float(*value))),
            Expr::Str { value, .. } => Ok(Some(Value::Str(value.clone()))),
            Expr::VectorLit { components, .. } => {
                let x = self.eval(&components[0])?.as_f64();
                let y = self.eval(&components[1])?.as_f64();
                let z = self.eval(&components[2])?.as_f64();
                Ok(Some(Value::Vector(Vec3::new(x, y, z))))
            }
            Expr::RotationLit { components, .. } => {
                let x = self.eval(&components[0])?.as_f64();
                let y = self.eval(&components[1])?.as_f64();
                let z = self.eval(&components[2])?.as_f64();
                let s = self.eval(&components[3])?.as_f64();
                Ok(Some(Value::Rotation(Rotation::new(x, y, z, s))))
            }
            Expr::Var { name, .. } => Ok(Some(self.lookup(name))),
            Expr::Member { base, member, .. } => {
                let base = self.eval(base)?;
                let v = match (&base, member) {
                    (Value::Vector(v), Member::X) => v.x,
                    (Value::Vector(v), Member::Y) => v.y,
                    (Value::Vector(v), Member::Z) => v.z,
                    (Value::Rotation(r), Member::X) => r.x,
                    (Value::Rotation(r), Member::Y) => r.y,
                    (Value::Rotation(r), Member::Z) => r.z,
                    (Value::Rotation(r), Member::S) => r.s,
                    (b, m) => unreachable!("member read .{} on {:?}", m.name(), b.type_of()),
                };
                Ok(Some(Value::Float(v)))
            }
            Expr::Call { name, args, pos } => self.eval_call(name, args, *pos),
            Expr::Unary { op, operand, .. } => {
                let v = self.eval(operand)?;
                let out = match (op, v) {
                    (UnaryOp::Neg, Value::Integer(i)) => Value::Integer(i.wrapping_neg()),
                    (UnaryOp::Neg, Value::Float(f)) => Value::Float(-f),
                    (UnaryOp::Neg, Value::Vector(v)) => Value::Vector(-v),
                    (UnaryOp::Not, Value::Integer(i)) => Value::Integer(i64::from(i == 0)),
                    (op, v) => unreachable!("unary {op:?} on {:?}", v.type_of()),
                };
                Ok(Some(out))
            }
            Expr::Binary { op, left, right, pos } => {
                let l = self.eval(left)?;
                let r = self.eval(right)?;
                self.binary(*op, l, r, *pos).map(Some)
            }
        }
    }

    fn binary(&self, op: BinaryOp, l: Value, r: Value, pos: Pos) -> Result<Value, ScriptFault> {
        use BinaryOp::*;
        use Value::*;
        let v = match (op, &l, &r) {
            (Add, Integer(a), Integer(b)) => Integer(a.wrapping_add(*b)),
            (Add, Vector(a), Vector(b)) => Vector(*a + *b),
            (Add, a, b) => Float(a.as_f64() + b.as_f64()),

            (Sub, Integer(a), Integer(b)) => Integer(a.wrapping_sub(*b)),
            (Sub, Vector(a), Vector(b)) => Vector(*a - *b),
            (Sub, a, b) => Float(a.as_f64() - b.as_f64()),

            (Mul, Integer(a), Integer(b)) => Integer(a.wrapping_mul(*b)),
            (Mul, Vector(a), Vector(b)) => Float(a.dot(*b)),
            (Mul, Vector(a), b) => Vector(*a * b.as_f64()),
            (Mul, a, Vector(b)) => Vector(*b * a.as_f64()),
            (Mul, a, b) => Float(a.as_f64() * b.as_f64()),

            (Div, Integer(a), Integer(b)) => {
                if *b == 0 {
                    return Err(self.fault(pos, FaultKind::Math("integer division by zero".into())));
                }
                Integer(a.wrapping_div(*b))
            }
            (Div, Vector(a), b) => Vector(*a * (1.0 / b.as_f64())),
            (Div, a, b) => Float(a.as_f64() / b.as_f64()),

            (Mod, Integer(a), Integer(b)) => {
                if *b == 0 {
                    return Err(self.fault(pos, FaultKind::Math("integer modulo by zero".into())));
                }
                Integer(a.wrapping_rem(*b))
            }
            (Mod, Vector(a), Vector(b)) => Vector(a.cross(*b)),
            (Mod, a, b) => unreachable!("% on {:?} and {:?}", a.type_of(), b.type_of()),

            (Eq, a, b) => Integer(i64::from(value_eq(a, b))),
            (Ne, a, b) => Integer(i64::from(!value_eq(a, b))),

            (Lt, Integer(a), Integer(b)) => Integer(i64::from(a < b)),
            (Lt, a, b) => Integer(i64::from(a.as_f64() < b.as_f64())),
            (Gt, Integer(a), Integer(b)) => Integer(i64::from(a > b)),
            (Gt, a, b) => Integer(i64::from(a.as_f64() > b.as_f64())),
            (Le, Integer(a), Integer(b)) => Integer(i64::from(a <= b)),
            (Le, a, b) => Integer(i64::from(a.as_f64() <= b.as_f64())),
            (Ge, Integer(a), Integer(b)) => Integer(i64::from(a >= b)),
            (Ge, a, b) => Integer(i64::from(a.as_f64() >= b.as_f64())),

            // Both operands are always evaluated; there is no short circuit.
            (And, a, b) => Integer(i64::from(a.truthy() && b.truthy())),
            (Or, a, b) => Integer(i64::from(a.truthy() || b.truthy())),
        };
        Ok(v)
    }

    fn eval_call(
        &mut self,
        name: &str,
        args: &[Expr],
        pos: Pos,
    ) -> Result<Option<Value>, ScriptFault> {
        let mut values = Vec::with_capacity(args.len());
        for a in args {
            values.push(self.eval(a)?);
        }

        // User functions shadow nothing: the checker rejects collisions.
        if let Some(f) = self.script.functions.iter().find(|f| f.name == name) {
            return self.call_function(f, values, pos);
        }

        let sig = builtins::lookup(name)
            .unwrap_or_else(|| unreachable!("unknown call `{name}` past the checker"));
        for (v, ty) in values.iter_mut().zip(sig.params) {
            let owned = std::mem::replace(v, Value::Integer(0));
            *v = owned.coerce_to(*ty);
        }

        // The timer lives on the instance, not in the world, so it is
        // intercepted before world dispatch.
        if name == "llSetTimerEvent" {
            let seconds = values[0].as_f64().max(0.0);
            self.timer.interval = seconds;
            self.timer.due = if seconds > 0.0 {
                self.world.clock().sim_time + seconds
            } else {
                f64::INFINITY
            };
            return Ok(None);
        }

        match builtins::call(self.world, self.me, name, &values) {
            Ok(v) => Ok(v),
            Err(err) => {
                if self.world.config().strict_gating || !builtins::is_gating_error(&err) {
                    Err(self.fault(pos, FaultKind::Runtime(err)))
                } else {
                    // Lenient mode: misapplied calls vanish silently; queries
                    // yield their type's default.
                    Ok(sig.ret.map(Value::default_of))
                }
            }
        }
    }

    fn call_function(
        &mut self,
        f: &Function,
        args: Vec<Value>,
        pos: Pos,
    ) -> Result<Option<Value>, ScriptFault> {
        if self.depth + 1 > self.limits.max_call_depth {
            return Err(self.fault(pos, FaultKind::CallDepthExceeded));
        }
        let mut frame = BTreeMap::new();
        for (p, a) in f.params.iter().zip(args) {
            frame.insert(p.name.clone(), a.coerce_to(p.ty));
        }
        let saved = std::mem::replace(&mut self.locals, vec![frame]);
        self.depth += 1;
        let flow = self.exec_block_frameless(&f.body);
        self.depth -= 1;
        self.locals = saved;
        match flow? {
            Flow::Return(Some(v)) => match f.ret {
                Some(ty) => Ok(Some(v.coerce_to(ty))),
                None => unreachable!("value return from void function past the checker"),
            },
            // Falling off the end (or a bare return) yields the default.
            Flow::Return(None) | Flow::Normal => Ok(f.ret.map(Value::default_of)),
            Flow::State(_) => unreachable!("state change inside a function past the checker"),
        }
    }
}

fn value_eq(a: &Value, b: &Value) -> bool {
    match (a, b) {
        (Value::Integer(x), Value::Integer(y)) => x == y,
        (Value::Vector(x), Value::Vector(y)) => x == y,
        (Value::Rotation(x), Value::Rotation(y)) => x == y,
        (Value::Str(x), Value::Str(y)) => x == y,
        (a, b) => a.as_f64() == b.as_f64(),
    }
}
