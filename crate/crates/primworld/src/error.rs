//! Error type shared by the world, dynamics, and laws modules.
//!
//! Script-language diagnostics and taxonomy errors live in their own modules;
//! everything that can go wrong while poking the physical world is here.

use thiserror::Error;

use crate::world::ObjectId;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WorldError {
    /// The (x, y) footprint left the region column. z is unbounded.
    #[error("position ({x:.3}, {y:.3}) is outside the region")]
    PositionOutOfRegion { x: f64, y: f64 },

    #[error("no object with id {0}")]
    UnknownObject(ObjectId),

    /// Kinetic operation (force/impulse/torque) on a non-physical object.
    #[error("kinetic operation on non-physical object {0}")]
    KineticOnNonPhysical(ObjectId),

    /// Kinematic teleport (set position/rotation) on a physical object.
    #[error("kinematic operation on physical object {0}")]
    KinematicOnPhysical(ObjectId),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// NaN or infinity where a finite value is required.
    #[error("non-finite value for {0}")]
    NonFinite(&'static str),
}

pub type WorldResult<T> = Result<T, WorldError>;
