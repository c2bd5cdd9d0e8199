//! Small fixed-size linear algebra: 3-vectors and quaternion rotations.
//!
//! Components are always finite `f64`; constructors and world entry points
//! reject NaN/infinity so downstream arithmetic never has to re-check.

use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

/// 3-component vector in region coordinates (metres, metres/second, ...).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

pub const ZERO: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 0.0 };

impl Vec3 {
    pub const ZERO: Vec3 = ZERO;

    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn dot(self, rhs: Vec3) -> f64 {
        self.x * rhs.x + self.y * rhs.y + self.z * rhs.z
    }

    pub fn cross(self, rhs: Vec3) -> Vec3 {
        Vec3 {
            x: self.y * rhs.z - self.z * rhs.y,
            y: self.z * rhs.x - self.x * rhs.z,
            z: self.x * rhs.y - self.y * rhs.x,
        }
    }

    pub fn length2(self) -> f64 {
        self.dot(self)
    }

    pub fn length(self) -> f64 {
        self.length2().sqrt()
    }

    /// Unit vector in the same direction, or `None` for the zero vector.
    pub fn normalized(self) -> Option<Vec3> {
        let len = self.length();
        if len > 0.0 {
            Some(self / len)
        } else {
            None
        }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Component-wise product; handy for scaling box extents.
    pub fn component_mul(self, rhs: Vec3) -> Vec3 {
        Vec3::new(self.x * rhs.x, self.y * rhs.y, self.z * rhs.z)
    }
}

impl From<[f64; 3]> for Vec3 {
    fn from(a: [f64; 3]) -> Self {
        Vec3::new(a[0], a[1], a[2])
    }
}

impl From<Vec3> for [f64; 3] {
    fn from(v: Vec3) -> Self {
        [v.x, v.y, v.z]
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, rhs: Vec3) -> Vec3 {
        Vec3::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, rhs: Vec3) -> Vec3 {
        Vec3::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

impl Div<f64> for Vec3 {
    type Output = Vec3;
    fn div(self, s: f64) -> Vec3 {
        Vec3::new(self.x / s, self.y / s, self.z / s)
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, rhs: Vec3) {
        *self = *self + rhs;
    }
}

impl SubAssign for Vec3 {
    fn sub_assign(&mut self, rhs: Vec3) {
        *self = *self - rhs;
    }
}

impl MulAssign<f64> for Vec3 {
    fn mul_assign(&mut self, s: f64) {
        *self = *self * s;
    }
}

/// Unit quaternion stored as `(x, y, z, s)` with the scalar part last.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct Rotation {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub s: f64,
}

impl Rotation {
    pub const IDENTITY: Rotation = Rotation { x: 0.0, y: 0.0, z: 0.0, s: 1.0 };

    pub fn new(x: f64, y: f64, z: f64, s: f64) -> Self {
        Rotation { x, y, z, s }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite() && self.s.is_finite()
    }

    pub fn norm(self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z + self.s * self.s).sqrt()
    }

    /// Rescales to unit norm; identity if the quaternion is degenerate.
    pub fn normalized(self) -> Rotation {
        let n = self.norm();
        if n > 0.0 && n.is_finite() {
            Rotation::new(self.x / n, self.y / n, self.z / n, self.s / n)
        } else {
            Rotation::IDENTITY
        }
    }

    /// Advances the orientation under world-frame angular velocity `omega`
    /// for `dt` seconds: `q += dt/2 * (omega,0) * q`, then renormalize.
    pub fn integrated(self, omega: Vec3, dt: f64) -> Rotation {
        let w = Rotation::new(omega.x, omega.y, omega.z, 0.0);
        let dq = w * self;
        Rotation::new(
            self.x + 0.5 * dt * dq.x,
            self.y + 0.5 * dt * dq.y,
            self.z + 0.5 * dt * dq.z,
            self.s + 0.5 * dt * dq.s,
        )
        .normalized()
    }
}

/// Hamilton product `self * rhs`.
impl Mul for Rotation {
    type Output = Rotation;

    fn mul(self, r: Rotation) -> Rotation {
        Rotation::new(
            self.s * r.x + self.x * r.s + self.y * r.z - self.z * r.y,
            self.s * r.y - self.x * r.z + self.y * r.s + self.z * r.x,
            self.s * r.z + self.x * r.y - self.y * r.x + self.z * r.s,
            self.s * r.s - self.x * r.x - self.y * r.y - self.z * r.z,
        )
    }
}

impl Default for Rotation {
    fn default() -> Self {
        Rotation::IDENTITY
    }
}

impl From<[f64; 4]> for Rotation {
    fn from(a: [f64; 4]) -> Self {
        Rotation::new(a[0], a[1], a[2], a[3])
    }
}

impl From<Rotation> for [f64; 4] {
    fn from(q: Rotation) -> Self {
        [q.x, q.y, q.z, q.s]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cross_follows_right_hand_rule() {
        let x = Vec3::new(1.0, 0.0, 0.0);
        let y = Vec3::new(0.0, 1.0, 0.0);
        assert_eq!(x.cross(y), Vec3::new(0.0, 0.0, 1.0));
        assert_eq!(y.cross(x), Vec3::new(0.0, 0.0, -1.0));
    }

    #[test]
    fn normalized_zero_is_none() {
        assert_eq!(Vec3::ZERO.normalized(), None);
        let v = Vec3::new(3.0, 0.0, 4.0).normalized().unwrap();
        assert!((v.length() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn quaternion_integration_stays_unit() {
        let mut q = Rotation::IDENTITY;
        let omega = Vec3::new(0.3, -1.2, 0.7);
        for _ in 0..1000 {
            q = q.integrated(omega, 1.0 / 45.0);
        }
        assert!((q.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn quarter_turn_about_z() {
        // Integrating omega = (0,0,pi/2) for one second with small steps
        // approaches the closed-form quarter-turn quaternion.
        let mut q = Rotation::IDENTITY;
        let steps = 100_000;
        let dt = 1.0 / steps as f64;
        for _ in 0..steps {
            q = q.integrated(Vec3::new(0.0, 0.0, std::f64::consts::FRAC_PI_2), dt);
        }
        let half = std::f64::consts::FRAC_PI_4;
        assert!((q.s - half.cos()).abs() < 1e-4);
        assert!((q.z - half.sin()).abs() < 1e-4);
    }
}
