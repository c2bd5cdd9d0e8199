//! Builtin function table and their bindings into the world.
//!
//! Builtins fall into four categories. Query builtins read state and always
//! succeed inside the region. Kinetic builtins (forces, impulses, torque)
//! require a physical object; kinematic builtins (teleport, orient) require a
//! non-physical one. Violations surface as `WorldError`s which the
//! interpreter turns into faults (strict) or no-ops (lenient). World builtins
//! are not gated by the physical flag.
//!
//! There is deliberately no velocity-setter builtin: constant velocity has to
//! be engineered from impulses and forces.

use crate::dynamics;
use crate::error::{WorldError, WorldResult};
use crate::math::{Rotation, Vec3};
use crate::world::{Material, ObjectId, PrimShape, ShapeKind, World};

use super::ast::Type;
use super::interp::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Category {
    Query,
    Kinetic,
    Kinematic,
    World,
}

#[derive(Debug, Clone, Copy)]
pub struct BuiltinSig {
    pub name: &'static str,
    pub params: &'static [Type],
    pub ret: Option<Type>,
    pub category: Category,
}

use Category::*;
use Type::{Float as F, Integer as I, Rotation as R, String as S, Vector as V};

pub const BUILTINS: &[BuiltinSig] = &[
    BuiltinSig { name: "llApplyImpulse", params: &[V], ret: None, category: Kinetic },
    BuiltinSig { name: "llGetMass", params: &[], ret: Some(F), category: Query },
    BuiltinSig { name: "llGetOmega", params: &[], ret: Some(V), category: Query },
    BuiltinSig { name: "llGetPos", params: &[], ret: Some(V), category: Query },
    BuiltinSig { name: "llGetRegionTimeDilation", params: &[], ret: Some(F), category: Query },
    BuiltinSig { name: "llGetSunDirection", params: &[], ret: Some(V), category: Query },
    BuiltinSig { name: "llGetVel", params: &[], ret: Some(V), category: Query },
    BuiltinSig { name: "llRezObject", params: &[S, V], ret: None, category: World },
    BuiltinSig { name: "llSetBuoyancy", params: &[F], ret: None, category: World },
    BuiltinSig { name: "llSetForce", params: &[V], ret: None, category: Kinetic },
    BuiltinSig { name: "llSetPos", params: &[V], ret: None, category: Kinematic },
    BuiltinSig { name: "llSetRot", params: &[R], ret: None, category: Kinematic },
    BuiltinSig { name: "llSetStatus", params: &[I, I], ret: None, category: World },
    BuiltinSig { name: "llSetTimerEvent", params: &[F], ret: None, category: World },
    BuiltinSig { name: "llSetTorque", params: &[V], ret: None, category: Kinetic },
    BuiltinSig { name: "llTargetOmega", params: &[V], ret: None, category: World },
    BuiltinSig { name: "llWind", params: &[V], ret: Some(V), category: Query },
];

pub fn lookup(name: &str) -> Option<&'static BuiltinSig> {
    BUILTINS.iter().find(|b| b.name == name)
}

/// Predefined script constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConstVal {
    Int(i64),
    Float(f64),
    Vector(Vec3),
    Rotation(Rotation),
}

impl ConstVal {
    pub fn type_of(self) -> Type {
        match self {
            ConstVal::Int(_) => Type::Integer,
            ConstVal::Float(_) => Type::Float,
            ConstVal::Vector(_) => Type::Vector,
            ConstVal::Rotation(_) => Type::Rotation,
        }
    }
}

pub const CONSTANTS: &[(&str, ConstVal)] = &[
    ("TRUE", ConstVal::Int(1)),
    ("FALSE", ConstVal::Int(0)),
    ("STATUS_PHYSICS", ConstVal::Int(1)),
    ("PI", ConstVal::Float(std::f64::consts::PI)),
    ("TWO_PI", ConstVal::Float(std::f64::consts::TAU)),
    ("PI_BY_TWO", ConstVal::Float(std::f64::consts::FRAC_PI_2)),
    ("DEG_TO_RAD", ConstVal::Float(std::f64::consts::PI / 180.0)),
    ("ZERO_VECTOR", ConstVal::Vector(Vec3::ZERO)),
    ("ZERO_ROTATION", ConstVal::Rotation(Rotation::IDENTITY)),
];

pub fn constant(name: &str) -> Option<ConstVal> {
    CONSTANTS.iter().find(|(n, _)| *n == name).map(|(_, v)| *v)
}

fn as_float(v: &Value) -> f64 {
    match v {
        Value::Integer(i) => *i as f64,
        Value::Float(f) => *f,
        other => unreachable!("typechecked float argument, got {other:?}"),
    }
}

fn as_int(v: &Value) -> i64 {
    match v {
        Value::Integer(i) => *i,
        other => unreachable!("typechecked integer argument, got {other:?}"),
    }
}

fn as_vec(v: &Value) -> Vec3 {
    match v {
        Value::Vector(v) => *v,
        other => unreachable!("typechecked vector argument, got {other:?}"),
    }
}

fn as_rot(v: &Value) -> Rotation {
    match v {
        Value::Rotation(r) => *r,
        other => unreachable!("typechecked rotation argument, got {other:?}"),
    }
}

fn as_str(v: &Value) -> &str {
    match v {
        Value::Str(s) => s,
        other => unreachable!("typechecked string argument, got {other:?}"),
    }
}

/// Executes a builtin for object `me`. `llSetTimerEvent` never reaches here;
/// the interpreter owns the timer and intercepts it.
pub fn call(
    world: &mut World,
    me: ObjectId,
    name: &str,
    args: &[Value],
) -> WorldResult<Option<Value>> {
    match name {
        "llGetPos" => Ok(Some(Value::Vector(world.dynamics(me)?.position))),
        "llGetVel" => Ok(Some(Value::Vector(world.dynamics(me)?.velocity))),
        "llGetOmega" => Ok(Some(Value::Vector(world.dynamics(me)?.omega))),
        "llGetMass" => Ok(Some(Value::Float(world.mass_of(me)?))),
        "llGetSunDirection" => Ok(Some(Value::Vector(world.sun_direction()))),
        "llGetRegionTimeDilation" => Ok(Some(Value::Float(world.clock().dilation))),
        "llWind" => {
            let at = world.dynamics(me)?.position + as_vec(&args[0]);
            Ok(Some(Value::Vector(world.wind_at(at)?)))
        }
        "llSetForce" => {
            dynamics::apply_force(world, me, as_vec(&args[0]))?;
            Ok(None)
        }
        "llApplyImpulse" => {
            dynamics::apply_impulse(world, me, as_vec(&args[0]))?;
            Ok(None)
        }
        "llSetTorque" => {
            dynamics::apply_torque(world, me, as_vec(&args[0]))?;
            Ok(None)
        }
        "llSetPos" => {
            dynamics::set_position(world, me, as_vec(&args[0]))?;
            Ok(None)
        }
        "llSetRot" => {
            dynamics::set_rotation(world, me, as_rot(&args[0]))?;
            Ok(None)
        }
        "llSetBuoyancy" => {
            world.set_buoyancy(me, as_float(&args[0]))?;
            Ok(None)
        }
        "llSetStatus" => {
            let status = as_int(&args[0]);
            let flag = as_int(&args[1]) != 0;
            if status & 1 != 0 {
                world.set_physical(me, flag)?;
            }
            if status & !1 != 0 {
                return Err(WorldError::InvalidParameter(format!(
                    "unsupported status bits {:#x}",
                    status & !1
                )));
            }
            Ok(None)
        }
        "llRezObject" => {
            let shape = rez_shape(as_str(&args[0]))?;
            let position = world.dynamics(me)?.position + as_vec(&args[1]);
            // Rezzed objects start non-physical and stationary.
            world.create_object(shape, Material::wood(), position)?;
            Ok(None)
        }
        "llTargetOmega" => {
            let omega = as_vec(&args[0]);
            if world.object(me)?.physical {
                world.set_dynamic_omega(me, omega)?;
            } else {
                world.set_visual_omega(me, omega)?;
            }
            Ok(None)
        }
        other => unreachable!("unknown builtin `{other}` past the typechecker"),
    }
}

fn rez_shape(name: &str) -> WorldResult<PrimShape> {
    let kind = match name {
        "box" | "cube" => ShapeKind::Box,
        "sphere" | "ball" => ShapeKind::Sphere,
        "cylinder" => ShapeKind::Cylinder,
        other => {
            return Err(WorldError::InvalidParameter(format!(
                "unknown rez shape `{other}` (box, sphere, cylinder)"
            )))
        }
    };
    PrimShape::new(kind, Vec3::new(0.5, 0.5, 0.5))
}

/// True for errors that gate builtins on object mode or argument validity:
/// lenient worlds swallow these into no-ops the way SL silently ignores a
/// misapplied call. Unknown-object errors are never swallowed.
pub fn is_gating_error(err: &WorldError) -> bool {
    !matches!(err, WorldError::UnknownObject(_))
}
